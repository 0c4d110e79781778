#pragma once

// Difference families over Z_m (plain) and Z_m ∪ {∞} (1-rotational):
// verification, multiplier expansion, development, mirroring, and a tiny
// exhaustive searcher used as a test oracle.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <ranges>
#include <string>
#include <vector>

#include "steiner/design.hpp"
#include "steiner/error.hpp"
#include "steiner/modarith.hpp"

namespace steiner {

/// Sorted list of distinct points; at most one ∞ by construction.
class BaseBlock {
 public:
  BaseBlock() = default;
  explicit BaseBlock(std::vector<Point> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    if (std::adjacent_find(points_.begin(), points_.end()) != points_.end()) {
      throw Error(ErrorCode::Structural, "base block repeats a point");
    }
  }

  static BaseBlock of(std::initializer_list<Residue> residues, bool with_infinity = false) {
    std::vector<Point> pts;
    for (Residue r : residues) pts.push_back(Point::finite(r));
    if (with_infinity) pts.push_back(Point::infinity());
    return BaseBlock(std::move(pts));
  }

  static BaseBlock of(const std::vector<Residue>& residues, bool with_infinity = false) {
    std::vector<Point> pts;
    for (Residue r : residues) pts.push_back(Point::finite(r));
    if (with_infinity) pts.push_back(Point::infinity());
    return BaseBlock(std::move(pts));
  }

  const std::vector<Point>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool has_infinity() const noexcept { return !points_.empty() && points_.back().is_infinity(); }

  std::vector<Residue> finite_residues() const {
    std::vector<Residue> out;
    for (Point p : points_)
      if (p.is_finite()) out.push_back(p.residue());
    return out;
  }

  BaseBlock negated(const GroupContext& ctx) const {
    std::vector<Point> pts;
    for (Point p : points_) pts.push_back(p.is_finite() ? Point::finite(ctx.neg(p.residue())) : p);
    return BaseBlock(std::move(pts));
  }

  BaseBlock scaled(Residue u, const GroupContext& ctx) const {
    std::vector<Point> pts;
    for (Point p : points_) pts.push_back(affine_image(p, u, 0, ctx));
    return BaseBlock(std::move(pts));
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (i) s += ",";
      s += points_[i].to_string();
    }
    return s + "}";
  }

  friend bool operator==(const BaseBlock&, const BaseBlock&) = default;
  friend auto operator<=>(const BaseBlock&, const BaseBlock&) = default;

 private:
  std::vector<Point> points_;
};

/// Replace one seed block B by B, gB, ..., g^(t-1)B.
struct MultiplierSpec {
  Residue generator = 1;
  std::uint32_t count = 1;

  friend bool operator==(const MultiplierSpec&, const MultiplierSpec&) = default;
};

enum class FamilyKind { Plain, Rotational };

inline std::string_view to_string(FamilyKind kind) {
  return kind == FamilyKind::Plain ? "plain" : "rotational";
}

class DifferenceFamily {
 public:
  DifferenceFamily(GroupContext ctx, std::uint32_t k, FamilyKind kind, std::vector<BaseBlock> seeds,
                   std::optional<Residue> subgroup_generator = std::nullopt,
                   std::optional<MultiplierSpec> multiplier = std::nullopt)
      : ctx_(ctx),
        k_(k),
        kind_(kind),
        seeds_(std::move(seeds)),
        subgroup_generator_(subgroup_generator),
        multiplier_(multiplier) {
    const std::uint32_t m = ctx_.modulus();
    if (k_ < 2 || k_ > point_count()) {
      throw Error(ErrorCode::Structural, "block size " + std::to_string(k_) + " invalid for " +
                                             std::to_string(point_count()) + " points");
    }
    if (seeds_.empty()) throw Error(ErrorCode::Structural, "family has no base blocks");
    for (const auto& b : seeds_) {
      for (Point p : b.points()) {
        if (p.is_infinity() && kind_ == FamilyKind::Plain) {
          throw Error(ErrorCode::Structural, "plain family block contains inf");
        }
        if (p.is_finite() && p.residue() >= m) {
          throw Error(ErrorCode::Structural,
                      "residue " + std::to_string(p.residue()) + " not reduced mod " + std::to_string(m));
        }
      }
    }
    if (subgroup_generator_ && (kind_ != FamilyKind::Rotational || *subgroup_generator_ >= m)) {
      throw Error(ErrorCode::Structural, "subgroup generator only valid for rotational families");
    }
    if (multiplier_) {
      require_unit(multiplier_->generator, ctx_);
      if (multiplier_->count == 0) throw Error(ErrorCode::Structural, "multiplier count must be positive");
      if (!expansion_target()) throw Error(ErrorCode::Structural, "multiplier needs an all-finite block");
    }
  }

  static DifferenceFamily plain(std::uint32_t m, std::uint32_t k, std::vector<BaseBlock> seeds) {
    return DifferenceFamily(GroupContext(m), k, FamilyKind::Plain, std::move(seeds));
  }

  const GroupContext& ctx() const noexcept { return ctx_; }
  std::uint32_t modulus() const noexcept { return ctx_.modulus(); }
  std::uint32_t k() const noexcept { return k_; }
  FamilyKind kind() const noexcept { return kind_; }
  const std::vector<BaseBlock>& seeds() const noexcept { return seeds_; }
  const std::optional<Residue>& subgroup_generator() const noexcept { return subgroup_generator_; }
  const std::optional<MultiplierSpec>& multiplier() const noexcept { return multiplier_; }

  std::uint32_t point_count() const noexcept {
    return ctx_.modulus() + (kind_ == FamilyKind::Rotational ? 1u : 0u);
  }

  /// The seed block the multiplier acts on: the first all-finite one.
  std::optional<std::size_t> expansion_target() const {
    for (std::size_t i = 0; i < seeds_.size(); ++i)
      if (!seeds_[i].has_infinity()) return i;
    return std::nullopt;
  }

  /// Indices of the finite seed blocks, i.e. the ones a mirror vector addresses.
  std::vector<std::size_t> mirrorable_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < seeds_.size(); ++i)
      if (!seeds_[i].has_infinity()) out.push_back(i);
    return out;
  }

  friend bool operator==(const DifferenceFamily&, const DifferenceFamily&) = default;

 private:
  GroupContext ctx_;
  std::uint32_t k_;
  FamilyKind kind_;
  std::vector<BaseBlock> seeds_;
  std::optional<Residue> subgroup_generator_;
  std::optional<MultiplierSpec> multiplier_;
};

/// Differences a - c over ordered pairs of distinct finite members, sorted.
inline std::vector<Residue> delta(const BaseBlock& b, const GroupContext& ctx) {
  const auto fin = b.finite_residues();
  std::vector<Residue> out;
  out.reserve(fin.size() * (fin.size() - (fin.empty() ? 0 : 1)));
  for (Residue a : fin)
    for (Residue c : fin)
      if (a != c) out.push_back(ctx.sub(a, c));
  std::sort(out.begin(), out.end());
  return out;
}

inline DifferenceFamily expand(const DifferenceFamily& family) {
  if (!family.multiplier()) {
    return DifferenceFamily(family.ctx(), family.k(), family.kind(), family.seeds(),
                            family.subgroup_generator());
  }
  const auto spec = *family.multiplier();
  const auto target = *family.expansion_target();
  const auto& ctx = family.ctx();
  const BaseBlock& base = family.seeds()[target];

  std::vector<BaseBlock> images;
  Residue power = 1 % ctx.modulus();
  for (std::uint32_t i = 0; i < spec.count; ++i) {
    BaseBlock img = base.scaled(power, ctx);
    if (std::find(images.begin(), images.end(), img) != images.end()) {
      throw Error(ErrorCode::MultiplierOrderTooSmall,
                  "multiplier " + std::to_string(spec.generator) + "^" + std::to_string(i) +
                      " repeats an earlier image of " + base.to_string());
    }
    images.push_back(std::move(img));
    power = ctx.mul(power, spec.generator);
  }
  std::vector<BaseBlock> seeds;
  for (std::size_t i = 0; i < family.seeds().size(); ++i) {
    if (i == target) {
      seeds.insert(seeds.end(), images.begin(), images.end());
    } else {
      seeds.push_back(family.seeds()[i]);
    }
  }
  return DifferenceFamily(ctx, family.k(), family.kind(), std::move(seeds), family.subgroup_generator());
}

enum class ViolationCode {
  WrongBlockSize,
  RepeatedDifference,
  UncoveredDifference,
  SubgroupInvalid,
  InfinityMisplaced,
};

inline std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::WrongBlockSize: return "WrongBlockSize";
    case ViolationCode::RepeatedDifference: return "RepeatedDifference";
    case ViolationCode::UncoveredDifference: return "UncoveredDifference";
    case ViolationCode::SubgroupInvalid: return "SubgroupInvalid";
    case ViolationCode::InfinityMisplaced: return "InfinityMisplaced";
  }
  return "?";
}

/// `witness` is a difference for the *Difference codes, a seed index otherwise.
struct Violation {
  ViolationCode code;
  std::uint64_t witness;

  std::string to_string() const {
    return std::string(steiner::to_string(code)) + "(" + std::to_string(witness) + ")";
  }
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct FamilyReport {
  static constexpr std::size_t kMaxViolations = 64;

  std::vector<Violation> violations;
  std::uint64_t violation_count = 0;

  bool valid() const noexcept { return violation_count == 0; }

  void add(ViolationCode code, std::uint64_t witness) {
    ++violation_count;
    if (violations.size() < kMaxViolations) violations.push_back({code, witness});
  }

  bool has(ViolationCode code) const {
    return std::any_of(violations.begin(), violations.end(),
                       [code](const Violation& v) { return v.code == code; });
  }
};

/// Counting-array check: every nonzero residue must be covered exactly once,
/// by block differences plus (rotational) the nonzero elements of H.
inline FamilyReport verify_family(const DifferenceFamily& input) {
  const DifferenceFamily family = input.multiplier() ? expand(input) : input;
  const auto& ctx = family.ctx();
  const std::uint32_t m = ctx.modulus();
  const std::uint32_t k = family.k();
  FamilyReport report;

  for (std::size_t i = 0; i < family.seeds().size(); ++i)
    if (family.seeds()[i].size() != k) report.add(ViolationCode::WrongBlockSize, i);

  std::vector<std::uint32_t> count(m, 0);
  if (family.kind() == FamilyKind::Rotational) {
    std::optional<std::size_t> inf_block;
    for (std::size_t i = 0; i < family.seeds().size(); ++i) {
      if (!family.seeds()[i].has_infinity()) continue;
      if (inf_block) {
        report.add(ViolationCode::InfinityMisplaced, i);
      } else {
        inf_block = i;
      }
    }
    if (!inf_block) {
      report.add(ViolationCode::InfinityMisplaced, family.seeds().size());
    } else {
      const auto h = family.seeds()[*inf_block].finite_residues();
      const bool order_ok = (k - 1) > 0 && m % (k - 1) == 0;
      const bool subgroup_ok = order_ok && h == additive_subgroup(m / (k - 1), ctx) &&
                               (!family.subgroup_generator() ||
                                additive_subgroup(*family.subgroup_generator(), ctx) == h);
      if (!subgroup_ok) {
        report.add(ViolationCode::SubgroupInvalid, *inf_block);
      } else {
        for (Residue x : h)
          if (x != 0) ++count[x];
      }
    }
  }
  if (!report.valid()) return report;

  for (const auto& b : family.seeds()) {
    if (b.has_infinity()) continue;
    for (Residue d : delta(b, ctx)) ++count[d];
  }
  for (Residue d = 1; d < m; ++d) {
    if (count[d] == 0) report.add(ViolationCode::UncoveredDifference, d);
    if (count[d] > 1) report.add(ViolationCode::RepeatedDifference, d);
  }
  return report;
}

/// All translates of every seed block, deduplicated; ∞ becomes point m.
inline SteinerDesign develop(const DifferenceFamily& input) {
  const DifferenceFamily family = input.multiplier() ? expand(input) : input;
  const auto report = verify_family(family);
  if (!report.valid()) {
    throw Error(ErrorCode::InvalidFamily, "cannot develop: " + report.violations.front().to_string());
  }
  const std::uint32_t m = family.modulus();
  const std::uint32_t k = family.k();
  const std::uint32_t v = family.point_count();

  std::vector<PointIndex> flat;
  std::vector<PointIndex> block(k);
  for (const auto& seed : family.seeds()) {
    for (std::uint32_t s = 0; s < m; ++s) {
      for (std::uint32_t i = 0; i < k; ++i) {
        const Point p = seed.points()[i];
        block[i] = p.is_infinity() ? m : family.ctx().add(p.residue(), s);
      }
      std::sort(block.begin(), block.end());
      flat.insert(flat.end(), block.begin(), block.end());
    }
  }
  const std::size_t n = flat.size() / k;
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  auto less = [&](std::uint32_t a, std::uint32_t b) {
    return std::lexicographical_compare(flat.begin() + a * k, flat.begin() + (a + 1) * k,
                                        flat.begin() + b * k, flat.begin() + (b + 1) * k);
  };
  auto equal = [&](std::uint32_t a, std::uint32_t b) {
    return std::equal(flat.begin() + a * k, flat.begin() + (a + 1) * k, flat.begin() + b * k);
  };
  std::sort(order.begin(), order.end(), less);
  order.erase(std::unique(order.begin(), order.end(), equal), order.end());

  std::vector<PointIndex> out;
  out.reserve(order.size() * k);
  for (std::uint32_t b : order) out.insert(out.end(), flat.begin() + b * k, flat.begin() + (b + 1) * k);
  return SteinerDesign::from_flat(v, k, std::move(out),
                                  CyclicStructure{m, family.kind() == FamilyKind::Rotational});
}

/// One bit per mirrorable block; bit i is the i-th element of the vector.
class MirrorVector {
 public:
  MirrorVector() = default;
  MirrorVector(std::uint32_t mask, std::uint32_t length) : mask_(mask), length_(length) {}

  static MirrorVector from_bits(const std::vector<bool>& bits) {
    std::uint32_t mask = 0;
    for (bool b : bits) mask = (mask << 1) | (b ? 1u : 0u);
    return MirrorVector(mask, static_cast<std::uint32_t>(bits.size()));
  }

  std::uint32_t length() const noexcept { return length_; }
  std::uint32_t mask() const noexcept { return mask_; }
  bool operator[](std::uint32_t i) const noexcept { return (mask_ >> (length_ - 1 - i)) & 1u; }

  MirrorVector complement() const noexcept {
    const std::uint32_t all = length_ == 32 ? ~0u : ((1u << length_) - 1u);
    return MirrorVector(~mask_ & all, length_);
  }

  /// "0" / "1" per position, e.g. "0110".
  std::string to_string() const {
    std::string s;
    for (std::uint32_t i = 0; i < length_; ++i) s += (*this)[i] ? '1' : '0';
    return s;
  }

  friend bool operator==(const MirrorVector&, const MirrorVector&) = default;

 private:
  std::uint32_t mask_ = 0;
  std::uint32_t length_ = 0;
};

inline constexpr std::uint32_t kMaxMirrorLength = 24;

/// Lexicographic stream of mirror vectors. With reduce_negation only vectors
/// starting with `false` are produced: one per {μ, complement(μ)} pair.
inline auto mirror_vectors(std::uint32_t n, bool reduce_negation) {
  if (n > kMaxMirrorLength) {
    throw Error(ErrorCode::ParameterInfeasible, "at most 24 mirrorable blocks supported");
  }
  const std::uint32_t count = (reduce_negation && n > 0) ? (1u << (n - 1)) : (1u << n);
  return std::views::iota(0u, count) |
         std::views::transform([n](std::uint32_t mask) { return MirrorVector(mask, n); });
}

/// Replace flagged finite blocks by their negatives; the H ∪ {∞} block is
/// never touched. Multiplier expansion is applied first.
inline DifferenceFamily mirror(const DifferenceFamily& input, const MirrorVector& mu) {
  const DifferenceFamily family = input.multiplier() ? expand(input) : input;
  const auto idx = family.mirrorable_indices();
  if (mu.length() != idx.size()) {
    throw Error(ErrorCode::LengthMismatch, "mirror vector has length " + std::to_string(mu.length()) +
                                               ", family has " + std::to_string(idx.size()) +
                                               " mirrorable blocks");
  }
  auto seeds = family.seeds();
  for (std::uint32_t i = 0; i < mu.length(); ++i)
    if (mu[i]) seeds[idx[i]] = seeds[idx[i]].negated(family.ctx());
  return DifferenceFamily(family.ctx(), family.k(), family.kind(), std::move(seeds),
                          family.subgroup_generator());
}

/// Every plain family on Z_v whose blocks all contain 0 (test oracle; v <= 16).
inline std::vector<DifferenceFamily> brute_force_families(std::uint32_t v, std::uint32_t k) {
  if (v > 16 || k < 2 || k >= v) throw Error(ErrorCode::ParameterInfeasible, "need 2 <= k < v <= 16");
  const std::uint32_t per_block = k * (k - 1);
  if ((v - 1) % per_block != 0) {
    throw Error(ErrorCode::ParameterInfeasible,
                std::to_string(k * (k - 1)) + " does not divide " + std::to_string(v - 1));
  }
  const std::uint32_t n = (v - 1) / per_block;
  const GroupContext ctx(v);

  std::vector<std::vector<Residue>> candidates;
  std::vector<Residue> cur{0};
  std::function<void(Residue)> subsets = [&](Residue next) {
    if (cur.size() == k) {
      candidates.push_back(cur);
      return;
    }
    for (Residue x = next; x < v; ++x) {
      cur.push_back(x);
      subsets(x + 1);
      cur.pop_back();
    }
  };
  subsets(1);

  std::vector<DifferenceFamily> out;
  std::vector<std::size_t> chosen;
  std::vector<std::uint32_t> used(v, 0);
  std::function<void(std::size_t)> search = [&](std::size_t start) {
    if (chosen.size() == n) {
      std::vector<BaseBlock> blocks;
      for (std::size_t c : chosen) blocks.push_back(BaseBlock::of(candidates[c]));
      auto fam = DifferenceFamily::plain(v, k, std::move(blocks));
      if (verify_family(fam).valid()) out.push_back(std::move(fam));
      return;
    }
    for (std::size_t c = start; c < candidates.size(); ++c) {
      const auto d = delta(BaseBlock::of(candidates[c]), ctx);
      bool clash = std::adjacent_find(d.begin(), d.end()) != d.end();
      for (Residue x : d) clash = clash || used[x] != 0;
      if (clash) continue;
      for (Residue x : d) ++used[x];
      chosen.push_back(c);
      search(c + 1);
      chosen.pop_back();
      for (Residue x : d) --used[x];
    }
  };
  search(0);
  return out;
}

}  // namespace steiner
