// steiner: command-line front end.
//
// Exit codes: 0 ok, 1 input error, 2 invalid object, 3 claim mismatch,
// 4 budget exhausted, 5 proven non-isomorphic.

#include <chrono>
#include <cstdint>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "steiner/catalog.hpp"
#include "steiner/classify.hpp"
#include "steiner/design.hpp"
#include "steiner/diffam.hpp"
#include "steiner/invar.hpp"
#include "steiner/isomorph.hpp"
#include "steiner/mirrors.hpp"

namespace {

using namespace steiner;
using nlohmann::json;

enum Exit : int { kOk = 0, kInput = 1, kInvalid = 2, kMismatch = 3, kBudget = 4, kNonIso = 5 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidObject : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A command argument: a builtin id ("builtin:ID" or bare ID), an `.sdf`
/// family file, or an `.sdd` design file.
struct Input {
  std::string name;
  std::optional<CatalogEntry> entry;
  std::optional<SteinerDesign> design;  // set for design files

  SteinerDesign develop_design() const {
    if (design) return *design;
    const auto report = verify_family(entry->family);
    if (!report.valid()) throw InvalidObject(name + ": not a difference family");
    return develop(entry->family);
  }
};

Input resolve(const std::string& arg) {
  Input in{arg, std::nullopt, std::nullopt};
  std::string id = arg;
  const bool forced = arg.rfind("builtin:", 0) == 0;
  if (forced) id = arg.substr(8);
  if (forced || !std::filesystem::exists(arg)) {
    if (const CatalogEntry* e = find_builtin(id)) {
      in.entry = *e;
      return in;
    }
    throw InputError(forced ? "unknown builtin id '" + id + "'" : "no such file or builtin id: " + arg);
  }
  std::string text;
  try {
    text = read_text_file(arg);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  try {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 3, "sdd") == 0) {
      in.design = parse_design_text(text);
    } else {
      in.entry = parse_family_text(text);
    }
  } catch (const ParseError& e) {
    throw InputError(arg + ": " + e.what());
  }
  return in;
}

VerifiedDesign verified(const Input& in) {
  auto d = in.develop_design();
  const auto report = verify_steiner(d);
  if (!report.valid) throw InvalidObject(in.name + ": not a Steiner system");
  return VerifiedDesign(std::move(d));
}

std::string params(const VerifiedDesign& d) {
  return "S(2," + std::to_string(d.k()) + "," + std::to_string(d.v()) + ")";
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int cmd_verify(const std::string& path, bool as_json) {
  const Input in = resolve(path);
  json j;
  j["input"] = in.name;
  if (in.entry) {
    const auto report = verify_family(in.entry->family);
    j["family_valid"] = report.valid();
    std::vector<std::string> v;
    for (const auto& x : report.violations) v.push_back(x.to_string());
    j["violations"] = v;
    j["violation_count"] = report.violation_count;
    if (!as_json) {
      std::cout << in.name << ": difference family " << (report.valid() ? "valid" : "INVALID") << "\n";
      for (const auto& s : v) std::cout << "  " << s << "\n";
      if (report.violation_count > v.size())
        std::cout << "  ... " << report.violation_count - v.size() << " more\n";
    }
    if (!report.valid()) {
      if (as_json) print(j);
      return kInvalid;
    }
  }
  const SteinerDesign d = in.develop_design();
  const auto sr = verify_steiner(d);
  j["v"] = d.v();
  j["k"] = d.k();
  j["blocks"] = d.block_count();
  j["pairs_covered"] = sr.covered_pairs;
  j["pairs_missing"] = sr.missing_count;
  j["pairs_repeated"] = sr.repeated_count;
  j["malformed_blocks"] = sr.malformed_blocks.size();
  j["steiner"] = sr.valid;
  if (as_json) {
    print(j);
  } else {
    std::cout << "S(2," << d.k() << "," << d.v() << ") development: " << d.block_count() << " blocks, "
              << sr.covered_pairs << " pairs covered";
    if (!sr.valid) {
      std::cout << ", " << sr.missing_count << " missing, " << sr.repeated_count << " repeated, "
                << sr.malformed_blocks.size() << " malformed blocks";
    }
    std::cout << "\n" << (sr.valid ? "Steiner system: yes" : "Steiner system: NO") << "\n";
  }
  return sr.valid ? kOk : kInvalid;
}

int cmd_fingerprint(const std::string& path, unsigned threads, bool as_json) {
  const Input in = resolve(path);
  const VerifiedDesign d = verified(in);
  const GridProfile g = grid_profile(d, threads);
  const auto expected = expected_profile_mass(d.v(), d.k());
  json j;
  j["input"] = in.name;
  j["profile"] = g.serialize();
  j["mass"] = g.mass();
  j["expected_mass"] = expected;
  j["digest"] = profile_digest(g);
  int code = g.mass() == expected ? kOk : kInvalid;
  std::optional<bool> agrees;
  if (in.entry && !in.entry->claimed_fingerprint.empty()) {
    const GridProfile published(std::map<std::uint32_t, std::uint64_t>(in.entry->claimed_fingerprint.begin(),
                                                                        in.entry->claimed_fingerprint.end()));
    agrees = reflected(g, d.k()) == published;
    j["published"] = fingerprint_to_string(in.entry->claimed_fingerprint);
    j["published_agrees"] = *agrees;
    if (!*agrees && code == kOk) code = kMismatch;
  }
  if (as_json) {
    print(j);
  } else {
    std::cout << g.to_string() << "\n";
    std::cout << "total " << g.mass() << (g.mass() == expected ? "" : " (expected " + std::to_string(expected) + ")")
              << "\n";
    std::cout << "digest " << profile_digest(g) << "\n";
    if (agrees) {
      std::cout << "published table {" << fingerprint_to_string(in.entry->claimed_fingerprint, ", ") << "} "
                << (*agrees ? "agrees" : "DISAGREES") << " (values read as k-1-n)\n";
    }
  }
  return code;
}

int cmd_aut(const std::string& path, bool affine_only, std::uint64_t budget, bool as_json) {
  const Input in = resolve(path);
  const VerifiedDesign d = verified(in);
  const auto affine = affine_automorphisms(d);
  json j;
  j["input"] = in.name;
  j["affine_count"] = affine.size();
  int code = kOk;
  if (!as_json) std::cout << params(d) << " affine automorphisms: " << affine.size() << "\n";
  if (!affine_only) {
    const auto r = automorphism_group_order(d, SearchBudget{budget});
    j["order"] = r.order;
    j["complete"] = r.complete;
    j["nodes"] = r.nodes;
    j["orbit_lengths"] = r.orbit_lengths;
    j["non_affine"] = r.has_non_affine();
    if (!as_json) {
      std::cout << "automorphism group order: " << r.order << (r.complete ? "" : " (lower bound, budget exhausted)")
                << "\n";
      std::cout << "basic orbit lengths:";
      for (auto l : r.orbit_lengths) std::cout << " " << l;
      std::cout << "\nsearch nodes: " << r.nodes << "\n";
      if (r.has_non_affine()) {
        std::cout << "WARNING: " << r.order / std::max<std::uint64_t>(1, r.affine_count)
                  << "x more automorphisms than the affine harvest accounts for\n";
      }
    }
    if (!r.complete) code = kBudget;
    if (r.complete && in.entry && in.entry->claimed_aut_order) {
      const bool match = *in.entry->claimed_aut_order == r.order;
      j["claimed_order"] = *in.entry->claimed_aut_order;
      j["matches_claim"] = match;
      if (!as_json) {
        std::cout << "claimed order " << *in.entry->claimed_aut_order << ": " << (match ? "matches" : "MISMATCH")
                  << "\n";
      }
      if (!match) code = kMismatch;
    }
  }
  if (as_json) print(j);
  return code;
}

int cmd_iso(const std::string& a, const std::string& b, std::uint64_t budget, bool as_json) {
  const Input ia = resolve(a);
  const Input ib = resolve(b);
  const SteinerDesign da = ia.develop_design();
  const SteinerDesign db = ib.develop_design();
  if (da.v() != db.v() || da.k() != db.k()) throw InputError("inputs have different (v, k)");
  const VerifiedDesign va = verified(ia);
  const VerifiedDesign vb = verified(ib);
  const IsoCandidate ca(va);
  const IsoCandidate cb(vb);
  const auto r = isomorphism_search(ca, cb, SearchBudget{budget});
  json j;
  j["a"] = ia.name;
  j["b"] = ib.name;
  j["nodes"] = r.nodes;
  int code = kOk;
  switch (r.verdict) {
    case IsoVerdict::Isomorphic:
      if (!maps_blocks(va, vb, *r.map)) throw std::logic_error("witness failed verification");
      j["verdict"] = "isomorphic";
      j["witness"] = r.map->image;
      if (!as_json) {
        std::cout << "isomorphic (witness verified)\nwitness:";
        for (auto p : r.map->image) std::cout << " " << p;
        std::cout << "\n";
      }
      break;
    case IsoVerdict::NonIsomorphic:
      j["verdict"] = "non-isomorphic";
      if (!as_json) std::cout << "not isomorphic\n";
      code = kNonIso;
      break;
    case IsoVerdict::Unresolved:
      j["verdict"] = "unresolved";
      if (!as_json) std::cout << "unresolved: node budget exhausted\n";
      code = kBudget;
      break;
  }
  if (as_json) print(j);
  return code;
}

int cmd_mirrors(const std::vector<std::string>& paths, bool do_classify, unsigned threads, const std::string& tier,
                bool all_vectors, const std::string& progress, std::uint64_t budget, bool as_json) {
  std::vector<CatalogEntry> entries;
  for (const auto& p : paths) {
    Input in = resolve(p);
    if (!in.entry) throw InputError(p + ": mirrors need difference families, not designs");
    const auto report = verify_family(in.entry->family);
    if (!report.valid()) throw InvalidObject(p + ": not a difference family");
    if (in.entry->id.empty()) in.entry->id = std::filesystem::path(p).stem().string();
    entries.push_back(std::move(*in.entry));
  }
  MirrorJob job(std::move(entries), !all_vectors, tier == "full" ? Tier::Full : Tier::Quick);

  if (!do_classify) {
    std::vector<std::string> hashes(job.origins.size());
    parallel_for(job.origins.size(), threads, [&](std::size_t i, unsigned) {
      hashes[i] = canonical_hash(job.design(i));
    });
    std::sort(hashes.begin(), hashes.end());
    const auto distinct = static_cast<std::size_t>(std::unique(hashes.begin(), hashes.end()) - hashes.begin());
    if (as_json) {
      print({{"candidates", job.origins.size()}, {"distinct_designs", distinct}, {"tier", tier}});
    } else {
      std::cout << "candidates: " << job.origins.size() << (job.reduce_negation ? " (negation-reduced)" : "")
                << "\ndistinct designs: " << distinct << "\n";
    }
    return kOk;
  }

  ClassifyOptions opt;
  opt.threads = threads;
  opt.budget = SearchBudget{budget};
  std::optional<ProgressLog> log;
  if (!progress.empty()) {
    log.emplace(progress, job.key());
    opt.progress = &*log;
  }
  const auto report = run_mirrors(job, opt);
  if (as_json) {
    print(to_json(report));
  } else {
    std::cout << to_text(report);
  }
  return report.classes.complete() ? kOk : kBudget;
}

int cmd_catalog_list(bool as_json) {
  json rows = json::array();
  for (const auto& e : builtin_entries()) {
    const auto& f = e.family;
    rows.push_back({{"id", e.id},
                    {"kind", std::string(to_string(f.kind()))},
                    {"v", f.point_count()},
                    {"k", f.k()},
                    {"seed_blocks", f.seeds().size()},
                    {"claimed_aut_order", *e.claimed_aut_order},
                    {"fingerprint", fingerprint_to_string(e.claimed_fingerprint)}});
    if (!as_json) {
      std::cout << e.id << "  " << to_string(f.kind()) << "  v=" << f.point_count() << " k=" << f.k()
                << "  blocks=" << f.seeds().size() << "  aut=" << *e.claimed_aut_order << "  {"
                << fingerprint_to_string(e.claimed_fingerprint, ", ") << "}\n";
    }
  }
  if (as_json) print(rows);
  return kOk;
}

int cmd_catalog_export(const std::string& id, const std::string& out, bool as_json) {
  const CatalogEntry* e = find_builtin(id.rfind("builtin:", 0) == 0 ? id.substr(8) : id);
  if (!e) throw InputError("unknown builtin id '" + id + "'");
  const std::string text = as_json ? to_json(*e).dump(2) + "\n" : serialize(*e);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write " + out);
    f << text;
  }
  return kOk;
}

int cmd_develop(const std::string& path, const std::string& out, std::optional<std::uint64_t> shuffle,
                bool as_json) {
  const Input in = resolve(path);
  SteinerDesign d = in.develop_design();
  if (shuffle) {
    PointMap pi = PointMap::identity(d.v());
    std::mt19937_64 rng(*shuffle);
    std::shuffle(pi.image.begin(), pi.image.end(), rng);
    d = relabel(d, pi);
  }
  const std::string text = as_json ? design_to_json(d).dump() + "\n" : serialize_design(d);
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw InputError("cannot write " + out);
    f << text;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steiner systems from difference families: verify, fingerprint, automorphisms, isomorphism"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  unsigned threads = default_thread_count();
  std::uint64_t budget = kDefaultNodeBudget;

  std::string in_a, in_b;
  auto* verify = app.add_subcommand("verify", "Check the difference property and the developed Steiner system");
  verify->add_option("input", in_a, "sdf/sdd file or builtin id")->required();

  auto* fingerprint = app.add_subcommand("fingerprint", "Grid profile of the developed design");
  fingerprint->add_option("input", in_a)->required();
  fingerprint->add_option("--threads", threads)->check(CLI::PositiveNumber);

  bool affine_only = false;
  auto* aut = app.add_subcommand("aut", "Automorphism group order");
  aut->add_option("input", in_a)->required();
  aut->add_flag("--affine-only", affine_only, "Only count affine maps x -> ux + c");
  aut->add_option("--budget", budget, "Search node budget");

  auto* iso = app.add_subcommand("iso", "Isomorphism test with a verified witness");
  iso->add_option("a", in_a)->required();
  iso->add_option("b", in_b)->required();
  iso->add_option("--budget", budget, "Search node budget per test");

  std::vector<std::string> mirror_inputs;
  bool classify_flag = false;
  bool all_vectors = false;
  std::string tier = "quick";
  std::string progress;
  auto* mirrors = app.add_subcommand("mirrors", "Enumerate mirror developments of families jointly");
  mirrors->add_option("inputs", mirror_inputs)->required();
  mirrors->add_flag("--classify", classify_flag, "Classify up to isomorphism");
  mirrors->add_option("--threads", threads)->check(CLI::PositiveNumber);
  mirrors->add_option("--tier", tier, "quick: first vectors of each family; full: all")
      ->check(CLI::IsMember({"quick", "full"}));
  mirrors->add_flag("--all-vectors", all_vectors, "Do not pair mirror vectors with their complements");
  mirrors->add_option("--progress", progress, "Append-only progress file; reruns resume from it");
  mirrors->add_option("--budget", budget, "Search node budget per test");

  auto* catalog = app.add_subcommand("catalog", "Builtin families");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "List builtin entries");
  std::string export_id, out_path;
  auto* exp = catalog->add_subcommand("export", "Write a builtin entry as .sdf");
  exp->add_option("id", export_id)->required();
  exp->add_option("-o,--output", out_path);

  std::optional<std::uint64_t> shuffle;
  auto* dev = app.add_subcommand("develop", "Write the developed design as .sdd");
  dev->add_option("input", in_a)->required();
  dev->add_option("-o,--output", out_path);
  dev->add_option("--shuffle", shuffle, "Relabel points by a random permutation with this seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  const bool as_json = format == "json";

  try {
    if (*verify) return cmd_verify(in_a, as_json);
    if (*fingerprint) return cmd_fingerprint(in_a, threads, as_json);
    if (*aut) return cmd_aut(in_a, affine_only, budget, as_json);
    if (*iso) return cmd_iso(in_a, in_b, budget, as_json);
    if (*mirrors) return cmd_mirrors(mirror_inputs, classify_flag, threads, tier, all_vectors, progress, budget, as_json);
    if (*catalog) {
      if (*exp) return cmd_catalog_export(export_id, out_path, as_json);
      return cmd_catalog_list(as_json);
    }
    if (*dev) return cmd_develop(in_a, out_path, shuffle, as_json);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const InvalidObject& e) {
    std::cerr << "invalid: " << e.what() << "\n";
    return kInvalid;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::BudgetExceeded:
        return kBudget;
      case ErrorCode::InvalidDesign:
      case ErrorCode::InvalidFamily:
      case ErrorCode::ValidationError:
        return kInvalid;
      default:
        return kInput;
    }
  }
  return kOk;
}
