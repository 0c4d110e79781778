#pragma once

// Builtin families and the line-oriented `.sdf` family file format.
//
//   sdf 1
//   kind plain|rotational
//   mod <m>
//   k <k>
//   subgroup <g>            (optional, rotational only)
//   multiplier <g> <t>      (optional)
//   block <p1> <p2> ...     (one per seed block; `inf` allowed in rotational kind)
//   meta id <id>            (optional metadata, in this order)
//   meta aut-order <n>
//   meta fingerprint <v1>=<c1>,<v2>=<c2>,...
//   meta source <free text>
//
// `#` starts a comment. Serialization emits exactly this order.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "steiner/catalog_data.hpp"
#include "steiner/design.hpp"
#include "steiner/diffam.hpp"
#include "steiner/error.hpp"

namespace steiner {

using FingerprintTable = std::vector<std::pair<std::uint32_t, std::uint64_t>>;

struct CatalogEntry {
  std::string id;
  DifferenceFamily family;
  std::optional<std::uint64_t> claimed_aut_order;
  FingerprintTable claimed_fingerprint;
  std::string source;

  std::uint64_t fingerprint_sum() const {
    std::uint64_t s = 0;
    for (const auto& [value, count] : claimed_fingerprint) s += count;
    return s;
  }

  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(FamilyReport report)
      : Error(ErrorCode::ValidationError, describe(report)), report_(std::move(report)) {}

  const FamilyReport& report() const noexcept { return report_; }

 private:
  static std::string describe(const FamilyReport& r) {
    std::string s = "family invalid:";
    for (const auto& v : r.violations) s += " " + v.to_string();
    return s;
  }
  FamilyReport report_;
};

inline const std::vector<CatalogEntry>& builtin_entries() {
  static const std::vector<CatalogEntry> entries = [] {
    std::vector<CatalogEntry> out;
    for (const auto& raw : data::raw_entries()) {
      const GroupContext ctx(raw.modulus);
      std::vector<BaseBlock> seeds;
      std::optional<Residue> subgroup;
      std::optional<MultiplierSpec> multiplier;
      if (raw.rotational) {
        subgroup = data::kRotationalSubgroupGenerator;
        multiplier = MultiplierSpec{data::kRotationalMultiplier, data::kRotationalMultiplierCount};
        seeds.push_back(BaseBlock::of(additive_subgroup(*subgroup, ctx), true));
      }
      for (const auto& b : raw.blocks) seeds.push_back(BaseBlock::of(b));
      out.push_back(CatalogEntry{
          std::string(raw.id),
          DifferenceFamily(ctx, raw.k, raw.rotational ? FamilyKind::Rotational : FamilyKind::Plain,
                           std::move(seeds), subgroup, multiplier),
          raw.claimed_order,
          FingerprintTable(raw.fingerprint.begin(), raw.fingerprint.end()),
          std::string(data::kSource),
      });
    }
    return out;
  }();
  return entries;
}

inline const CatalogEntry* find_builtin(std::string_view id) {
  for (const auto& e : builtin_entries())
    if (e.id == id) return &e;
  return nullptr;
}

inline std::string fingerprint_to_string(const FingerprintTable& table, std::string_view sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(table[i].first) + "=" + std::to_string(table[i].second);
  }
  return s;
}

inline std::string serialize(const CatalogEntry& entry) {
  const auto& f = entry.family;
  std::ostringstream os;
  os << "sdf 1\n";
  os << "kind " << to_string(f.kind()) << "\n";
  os << "mod " << f.modulus() << "\n";
  os << "k " << f.k() << "\n";
  if (f.subgroup_generator()) os << "subgroup " << *f.subgroup_generator() << "\n";
  if (f.multiplier()) os << "multiplier " << f.multiplier()->generator << " " << f.multiplier()->count << "\n";
  for (const auto& b : f.seeds()) {
    os << "block";
    for (Point p : b.points()) os << " " << p.to_string();
    os << "\n";
  }
  if (!entry.id.empty()) os << "meta id " << entry.id << "\n";
  if (entry.claimed_aut_order) os << "meta aut-order " << *entry.claimed_aut_order << "\n";
  if (!entry.claimed_fingerprint.empty())
    os << "meta fingerprint " << fingerprint_to_string(entry.claimed_fingerprint) << "\n";
  if (!entry.source.empty()) os << "meta source " << entry.source << "\n";
  return os.str();
}

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

inline std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

inline std::uint64_t parse_uint(const Token& t, std::size_t line) {
  std::uint64_t value = 0;
  const auto* first = t.text.data();
  const auto* last = first + t.text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || t.text.empty()) {
    throw ParseError(line, t.column, "expected a non-negative integer, got '" + std::string(t.text) + "'");
  }
  return value;
}

}  // namespace detail

/// Parses `.sdf` text without validating the difference property.
inline CatalogEntry parse_family_text(std::string_view text) {
  using detail::parse_uint;
  using detail::Token;

  enum class Stage { Header, Kind, Mod, K, Options, Blocks, Meta };
  Stage stage = Stage::Header;
  std::optional<FamilyKind> kind;
  std::optional<GroupContext> ctx;
  std::uint32_t k = 0;
  std::optional<Residue> subgroup;
  std::optional<MultiplierSpec> multiplier;
  std::vector<BaseBlock> seeds;
  CatalogEntry entry{"", DifferenceFamily::plain(2, 2, {BaseBlock::of({0, 1})}), std::nullopt, {}, ""};
  int meta_rank = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto toks = detail::tokenize(line);
    if (toks.empty()) {
      if (eol == text.size()) break;
      continue;
    }
    const std::string_view key = toks[0].text;
    auto expect_args = [&](std::size_t n) {
      if (toks.size() != n + 1) {
        const std::size_t col = toks.size() > n + 1 ? toks[n + 1].column : line.size() + 1;
        throw ParseError(line_no, col, "'" + std::string(key) + "' takes " + std::to_string(n) + " argument(s)");
      }
    };
    auto out_of_order = [&]() -> ParseError {
      return ParseError(line_no, toks[0].column, "unexpected '" + std::string(key) + "' here");
    };

    if (stage == Stage::Header) {
      if (key != "sdf") throw ParseError(line_no, toks[0].column, "missing 'sdf' header");
      expect_args(1);
      if (parse_uint(toks[1], line_no) != 1) throw ParseError(line_no, toks[1].column, "unsupported version");
      stage = Stage::Kind;
    } else if (key == "kind") {
      if (stage != Stage::Kind) throw out_of_order();
      expect_args(1);
      if (toks[1].text == "plain") {
        kind = FamilyKind::Plain;
      } else if (toks[1].text == "rotational") {
        kind = FamilyKind::Rotational;
      } else {
        throw ParseError(line_no, toks[1].column, "kind must be 'plain' or 'rotational'");
      }
      stage = Stage::Mod;
    } else if (key == "mod") {
      if (stage != Stage::Mod) throw out_of_order();
      expect_args(1);
      const auto m = parse_uint(toks[1], line_no);
      if (m < 2 || m > kMaxModulus) throw ParseError(line_no, toks[1].column, "modulus outside [2, 2^20]");
      ctx.emplace(static_cast<std::uint32_t>(m));
      stage = Stage::K;
    } else if (key == "k") {
      if (stage != Stage::K) throw out_of_order();
      expect_args(1);
      const auto kk = parse_uint(toks[1], line_no);
      if (kk < 2 || kk > ctx->modulus() + 1) throw ParseError(line_no, toks[1].column, "block size out of range");
      k = static_cast<std::uint32_t>(kk);
      stage = Stage::Options;
    } else if (key == "subgroup") {
      if (stage != Stage::Options || subgroup || multiplier) throw out_of_order();
      if (kind != FamilyKind::Rotational) throw ParseError(line_no, toks[0].column, "subgroup requires rotational kind");
      expect_args(1);
      const auto g = parse_uint(toks[1], line_no);
      if (g >= ctx->modulus()) throw ParseError(line_no, toks[1].column, "unreduced residue");
      subgroup = static_cast<Residue>(g);
    } else if (key == "multiplier") {
      if (stage != Stage::Options || multiplier) throw out_of_order();
      expect_args(2);
      const auto g = parse_uint(toks[1], line_no);
      const auto t = parse_uint(toks[2], line_no);
      if (g >= ctx->modulus()) throw ParseError(line_no, toks[1].column, "unreduced residue");
      if (!ctx->is_unit(static_cast<Residue>(g))) throw ParseError(line_no, toks[1].column, "multiplier is not a unit");
      if (t == 0 || t > ctx->modulus()) throw ParseError(line_no, toks[2].column, "multiplier count out of range");
      multiplier = MultiplierSpec{static_cast<Residue>(g), static_cast<std::uint32_t>(t)};
    } else if (key == "block") {
      if (stage != Stage::Options && stage != Stage::Blocks) throw out_of_order();
      if (toks.size() < 2) throw ParseError(line_no, line.size() + 1, "empty block");
      std::vector<Point> pts;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        if (toks[i].text == "inf") {
          if (kind != FamilyKind::Rotational) throw ParseError(line_no, toks[i].column, "'inf' only allowed in rotational kind");
          pts.push_back(Point::infinity());
          continue;
        }
        const auto r = parse_uint(toks[i], line_no);
        if (r >= ctx->modulus()) {
          throw ParseError(line_no, toks[i].column,
                           "unreduced residue " + std::string(toks[i].text) + " for modulus " +
                               std::to_string(ctx->modulus()));
        }
        const Point p = Point::finite(static_cast<Residue>(r));
        if (std::find(pts.begin(), pts.end(), p) != pts.end())
          throw ParseError(line_no, toks[i].column, "repeated point in block");
        pts.push_back(p);
      }
      if (std::count(pts.begin(), pts.end(), Point::infinity()) > 1)
        throw ParseError(line_no, toks[0].column, "'inf' repeated in block");
      seeds.emplace_back(std::move(pts));
      stage = Stage::Blocks;
    } else if (key == "meta") {
      if (stage != Stage::Blocks && stage != Stage::Meta) throw out_of_order();
      if (toks.size() < 3) throw ParseError(line_no, toks[0].column, "meta needs a key and a value");
      const std::string_view mkey = toks[1].text;
      const int rank = mkey == "id" ? 1 : mkey == "aut-order" ? 2 : mkey == "fingerprint" ? 3 : mkey == "source" ? 4 : 0;
      if (rank == 0) throw ParseError(line_no, toks[1].column, "unknown meta key '" + std::string(mkey) + "'");
      if (rank <= meta_rank) throw ParseError(line_no, toks[1].column, "meta key out of order or repeated");
      meta_rank = rank;
      if (rank == 1) {
        expect_args(2);
        entry.id = std::string(toks[2].text);
      } else if (rank == 2) {
        expect_args(2);
        entry.claimed_aut_order = parse_uint(toks[2], line_no);
      } else if (rank == 3) {
        expect_args(2);
        const std::string_view body = toks[2].text;
        std::size_t p = 0;
        while (p < body.size()) {
          const std::size_t comma = std::min(body.find(',', p), body.size());
          const std::string_view item = body.substr(p, comma - p);
          const std::size_t eq = item.find('=');
          const std::size_t col = toks[2].column + p;
          if (eq == std::string_view::npos) throw ParseError(line_no, col, "fingerprint items are value=count");
          const auto value = parse_uint(Token{item.substr(0, eq), col}, line_no);
          const auto count = parse_uint(Token{item.substr(eq + 1), col + eq + 1}, line_no);
          entry.claimed_fingerprint.emplace_back(static_cast<std::uint32_t>(value), count);
          p = comma + 1;
        }
      } else {
        const std::size_t start = toks[2].column - 1;
        std::string_view rest = line.substr(start);
        while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r' || rest.back() == '\t')) rest.remove_suffix(1);
        entry.source = std::string(rest);
      }
      stage = Stage::Meta;
    } else {
      throw ParseError(line_no, toks[0].column, "unknown field '" + std::string(key) + "'");
    }
    if (eol == text.size()) break;
  }
  if (stage != Stage::Blocks && stage != Stage::Meta) {
    throw ParseError(line_no, 1, "incomplete family file (no blocks)");
  }
  try {
    entry.family = DifferenceFamily(*ctx, k, *kind, std::move(seeds), subgroup, multiplier);
  } catch (const Error& e) {
    throw ParseError(line_no, 1, e.what());
  }
  return entry;
}

/// Parses and validates; an invalid family raises ValidationError.
inline CatalogEntry parse_and_validate(std::string_view text) {
  CatalogEntry entry = parse_family_text(text);
  auto report = verify_family(entry.family);
  if (!report.valid()) throw ValidationError(std::move(report));
  return entry;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline CatalogEntry load(const std::string& path) { return parse_and_validate(read_text_file(path)); }

inline void save(const CatalogEntry& entry, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << serialize(entry);
}

// Explicit designs, one block per line over points 0..v-1:
//
//   sdd 1
//   v <v>
//   k <k>
//   block <p1> ... <pk>

inline std::string serialize_design(const SteinerDesign& d) {
  std::ostringstream os;
  os << "sdd 1\nv " << d.v() << "\nk " << d.k() << "\n";
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    os << "block";
    for (PointIndex p : d.block(static_cast<BlockId>(i))) os << " " << p;
    os << "\n";
  }
  return os.str();
}

/// Structural parse only; the Steiner property is checked by the caller.
inline SteinerDesign parse_design_text(std::string_view text) {
  std::uint32_t v = 0;
  std::uint32_t k = 0;
  int stage = 0;  // 0 header, 1 v, 2 k, 3 blocks
  std::vector<std::vector<PointIndex>> blocks;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    const auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    const std::string_view key = toks[0].text;
    auto single = [&]() {
      if (toks.size() != 2) throw ParseError(line_no, toks[0].column, "expected one value after '" + std::string(key) + "'");
      return detail::parse_uint(toks[1], line_no);
    };
    if (stage == 0) {
      if (key != "sdd" || single() != 1) throw ParseError(line_no, toks[0].column, "expected header 'sdd 1'");
      stage = 1;
    } else if (stage == 1) {
      if (key != "v") throw ParseError(line_no, toks[0].column, "expected 'v'");
      const auto value = single();
      if (value < 2 || value > kMaxModulus) throw ParseError(line_no, toks[1].column, "v out of range");
      v = static_cast<std::uint32_t>(value);
      stage = 2;
    } else if (stage == 2) {
      if (key != "k") throw ParseError(line_no, toks[0].column, "expected 'k'");
      const auto value = single();
      if (value < 2 || value > v) throw ParseError(line_no, toks[1].column, "k out of range");
      k = static_cast<std::uint32_t>(value);
      stage = 3;
    } else {
      if (key != "block") throw ParseError(line_no, toks[0].column, "unknown field '" + std::string(key) + "'");
      if (toks.size() != k + 1) throw ParseError(line_no, toks[0].column, "block must have " + std::to_string(k) + " points");
      std::vector<PointIndex> b;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto p = detail::parse_uint(toks[i], line_no);
        if (p >= v) throw ParseError(line_no, toks[i].column, "point " + std::to_string(p) + " out of range");
        b.push_back(static_cast<PointIndex>(p));
      }
      blocks.push_back(std::move(b));
    }
  }
  if (stage != 3 || blocks.empty()) throw ParseError(line_no + 1, 1, "incomplete design file (no blocks)");
  return SteinerDesign(v, k, std::move(blocks));
}

inline SteinerDesign load_design(const std::string& path) { return parse_design_text(read_text_file(path)); }

inline nlohmann::json design_to_json(const SteinerDesign& d) {
  nlohmann::json blocks = nlohmann::json::array();
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    auto b = d.block(static_cast<BlockId>(i));
    blocks.push_back(std::vector<PointIndex>(b.begin(), b.end()));
  }
  return {{"v", d.v()}, {"k", d.k()}, {"blocks", std::move(blocks)}};
}

inline nlohmann::json to_json(const CatalogEntry& entry) {
  const auto& f = entry.family;
  nlohmann::json j;
  j["id"] = entry.id;
  j["kind"] = std::string(to_string(f.kind()));
  j["modulus"] = f.modulus();
  j["k"] = f.k();
  j["points"] = f.point_count();
  if (f.subgroup_generator()) j["subgroup"] = *f.subgroup_generator();
  if (f.multiplier()) j["multiplier"] = {{"generator", f.multiplier()->generator}, {"count", f.multiplier()->count}};
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : f.seeds()) {
    nlohmann::json pts = nlohmann::json::array();
    for (Point p : b.points()) {
      if (p.is_infinity()) {
        pts.push_back("inf");
      } else {
        pts.push_back(p.residue());
      }
    }
    blocks.push_back(pts);
  }
  j["blocks"] = blocks;
  if (entry.claimed_aut_order) j["claimed_aut_order"] = *entry.claimed_aut_order;
  if (!entry.claimed_fingerprint.empty()) {
    nlohmann::json fp = nlohmann::json::array();
    for (const auto& [value, count] : entry.claimed_fingerprint) fp.push_back({value, count});
    j["claimed_fingerprint"] = fp;
  }
  if (!entry.source.empty()) j["source"] = entry.source;
  return j;
}

}  // namespace steiner
