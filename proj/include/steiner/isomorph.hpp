#pragma once

// Automorphism groups and isomorphism tests for S(2,k,v) designs by
// individualization and refinement.
//
// A partition of the points into ordered cells is refined by three steps,
// each a pure function of the design and the current cell order:
//   - local-profile digests seed the root coloring;
//   - after individualizing a point c, every other point z is keyed by the
//     multiset of grid values n(z) it receives from grids centred at c,
//     together with the cells of the grid corners that produced them;
//   - a point/block colour exchange runs until the cell count is stable.
// Leaves are discrete partitions; two leaves with equal traces give a
// candidate map, which is accepted only after checking every block.
//
// The group order is the product of basic orbit lengths along the first
// path; each orbit is closed under the generators found so far, and every
// cell member outside the orbit is ruled in or out by an exhaustive search.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steiner/design.hpp"
#include "steiner/error.hpp"
#include "steiner/hash.hpp"
#include "steiner/invar.hpp"
#include "steiner/modarith.hpp"
#include "steiner/parallel.hpp"

namespace steiner {

inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

struct SearchBudget {
  std::uint64_t node_limit = kDefaultNodeBudget;
};

/// True iff the image of every block is a block. Throws NotABijection.
inline bool verify_automorphism(const VerifiedDesign& d, const PointMap& pi) {
  if (pi.size() != d.v() || !pi.is_bijection()) {
    throw Error(ErrorCode::NotABijection, "map is not a bijection on the point set");
  }
  return d.preserves_blocks(pi);
}

/// True iff pi maps every block of `from` onto a block of `to`.
inline bool maps_blocks(const VerifiedDesign& from, const VerifiedDesign& to, const PointMap& pi) {
  if (from.v() != to.v() || from.k() != to.k() || from.block_count() != to.block_count()) return false;
  for (std::size_t i = 0; i < from.block_count(); ++i) {
    auto b = from.block(static_cast<BlockId>(i));
    const BlockId target = to.line_row(pi(b[0]))[pi(b[1])];
    auto t = to.block(target);
    for (std::uint32_t j = 2; j < from.k(); ++j)
      if (std::find(t.begin(), t.end(), pi(b[j])) == t.end()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Affine automorphisms x -> ux + c of developments over Z_m.

struct AffineMap {
  Residue u = 1;
  Residue c = 0;
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
  friend auto operator<=>(const AffineMap&, const AffineMap&) = default;
};

inline PointMap affine_point_map(const AffineMap& a, const GroupContext& ctx, bool rotational) {
  const std::uint32_t m = ctx.modulus();
  PointMap map;
  map.image.resize(m + (rotational ? 1 : 0));
  for (Residue x = 0; x < m; ++x) map.image[x] = ctx.add(ctx.mul(a.u, x), a.c);
  if (rotational) map.image[m] = m;
  return map;
}

/// Every (u, c) with x -> ux + c (∞ fixed) an automorphism, sorted by (u, c).
inline std::vector<AffineMap> affine_automorphisms(const VerifiedDesign& d, const GroupContext& ctx,
                                                   bool rotational) {
  const std::uint32_t m = ctx.modulus();
  if (d.v() != m + (rotational ? 1u : 0u)) {
    throw Error(ErrorCode::ParameterMismatch, "design is not on Z_m" + std::string(rotational ? " + inf" : ""));
  }
  std::vector<AffineMap> out;
  const bool translations = d.preserves_blocks(affine_point_map({1, 1 % m}, ctx, rotational));
  for (Residue u = 1; u < m; ++u) {
    if (!ctx.is_unit(u)) continue;
    if (translations) {
      if (!d.preserves_blocks(affine_point_map({u, 0}, ctx, rotational))) continue;
      for (Residue c = 0; c < m; ++c) out.push_back({u, c});
    } else {
      for (Residue c = 0; c < m; ++c)
        if (d.preserves_blocks(affine_point_map({u, c}, ctx, rotational))) out.push_back({u, c});
    }
  }
  return out;
}

/// Affine automorphisms of a design carrying its cyclic structure.
inline std::vector<AffineMap> affine_automorphisms(const VerifiedDesign& d) {
  const auto& cyc = d.design().cyclic();
  if (!cyc) return {};
  return affine_automorphisms(d, GroupContext(cyc->modulus), cyc->has_infinity);
}

/// A small generating set for the affine harvest: one translation plus the
/// multipliers, all as point maps.
inline std::vector<PointMap> affine_generators(const VerifiedDesign& d) {
  const auto& cyc = d.design().cyclic();
  if (!cyc) return {};
  const GroupContext ctx(cyc->modulus);
  std::vector<PointMap> gens;
  for (const auto& a : affine_automorphisms(d)) {
    if (a.u == 1 && a.c == 1 % cyc->modulus) gens.push_back(affine_point_map(a, ctx, cyc->has_infinity));
    if (a.u != 1 && a.c == 0) gens.push_back(affine_point_map(a, ctx, cyc->has_infinity));
  }
  return gens;
}

// ---------------------------------------------------------------------------
// Ordered partitions and refinement.

struct Partition {
  std::vector<std::uint32_t> color;  // cell index of each point, 0..cells-1
  std::uint32_t cells = 0;

  bool discrete() const noexcept { return cells == color.size(); }

  std::vector<std::uint32_t> cell_sizes() const {
    std::vector<std::uint32_t> sizes(cells, 0);
    for (auto c : color) ++sizes[c];
    return sizes;
  }

  /// First smallest non-singleton cell.
  std::uint32_t target_cell() const {
    const auto sizes = cell_sizes();
    std::uint32_t best = cells;
    for (std::uint32_t c = 0; c < cells; ++c)
      if (sizes[c] > 1 && (best == cells || sizes[c] < sizes[best])) best = c;
    return best;
  }

  std::vector<PointIndex> members(std::uint32_t cell) const {
    std::vector<PointIndex> out;
    for (PointIndex p = 0; p < color.size(); ++p)
      if (color[p] == cell) out.push_back(p);
    return out;
  }

  /// For a discrete partition: the point in each cell.
  std::vector<PointIndex> labeling() const {
    std::vector<PointIndex> out(color.size());
    for (PointIndex p = 0; p < color.size(); ++p) out[color[p]] = p;
    return out;
  }
};

class Refiner {
 public:
  Refiner(const VerifiedDesign& d, std::vector<std::uint64_t> root_keys)
      : d_(&d), root_keys_(std::move(root_keys)), grid_(d.v()) {
    keys_.resize(d.v());
    block_keys_.resize(d.block_count());
    order_.resize(d.v());
  }

  const VerifiedDesign& design() const noexcept { return *d_; }
  std::uint64_t nodes() const noexcept { return nodes_; }

  /// Root partition and its trace.
  std::uint64_t root(Partition& part) {
    part.color.assign(d_->v(), 0);
    part.cells = d_->v() == 0 ? 0 : 1;
    std::uint64_t trace = split(part, root_keys_);
    trace = hash_combine(trace, exchange(part));
    return hash_combine(trace, part.cells);
  }

  /// Individualizes x in place and refines; returns the trace.
  std::uint64_t individualize(Partition& part, PointIndex x) {
    ++nodes_;
    for (PointIndex p = 0; p < d_->v(); ++p) keys_[p] = p == x ? 0 : 1;
    std::uint64_t trace = split(part, keys_);
    trace = hash_combine(trace, centre(part, x));
    trace = hash_combine(trace, exchange(part));
    return hash_combine(trace, part.cells);
  }

 private:
  /// Refines part by (old cell, key); new cells ordered by that pair.
  std::uint64_t split(Partition& part, std::span<const std::uint64_t> key) {
    const std::uint32_t v = d_->v();
    std::iota(order_.begin(), order_.end(), PointIndex{0});
    std::sort(order_.begin(), order_.end(), [&](PointIndex a, PointIndex b) {
      if (part.color[a] != part.color[b]) return part.color[a] < part.color[b];
      if (key[a] != key[b]) return key[a] < key[b];
      return a < b;
    });
    fresh_.resize(v);
    std::uint64_t trace = 0x51ed270b27e0a1a9ULL;
    std::uint32_t cell = 0;
    std::uint32_t size = 0;
    for (std::uint32_t i = 0; i < v; ++i) {
      const PointIndex p = order_[i];
      if (i > 0) {
        const PointIndex q = order_[i - 1];
        if (part.color[p] != part.color[q] || key[p] != key[q]) {
          trace = hash_combine(trace, hash_combine(key[q], size));
          ++cell;
          size = 0;
        }
      }
      ++size;
      fresh_[p] = cell;
    }
    if (v > 0) trace = hash_combine(trace, hash_combine(key[order_[v - 1]], size));
    part.cells = v == 0 ? 0 : cell + 1;
    part.color.swap(fresh_);
    return trace;
  }

  /// Point/block colour exchange until the cell count is stable.
  std::uint64_t exchange(Partition& part) {
    const std::uint32_t k = d_->k();
    std::uint64_t trace = 0;
    for (;;) {
      const std::uint32_t before = part.cells;
      if (part.discrete()) break;
      for (std::size_t b = 0; b < d_->block_count(); ++b) {
        std::uint64_t h = 0;
        for (PointIndex p : d_->block(static_cast<BlockId>(b))) h += mix64(part.color[p] + 1);
        block_keys_[b] = mix64(h ^ k);
      }
      for (PointIndex p = 0; p < d_->v(); ++p) {
        std::uint64_t h = 0;
        for (BlockId b : d_->blocks_through(p)) h += mix64(block_keys_[b] ^ part.color[p]);
        keys_[p] = h;
      }
      trace = hash_combine(trace, split(part, keys_));
      if (part.cells == before) break;
    }
    return trace;
  }

  /// Keys every point by the grid values it receives around centre c.
  std::uint64_t centre(Partition& part, PointIndex c) {
    std::fill(keys_.begin(), keys_.end(), 0);
    const auto& color = part.color;
    grid_.for_each_grid(*d_, c, [&](PointIndex z, std::uint32_t n, PointIndex x, PointIndex y) {
      const std::uint64_t cx = mix64(color[x] + 0x100);
      const std::uint64_t cy = mix64(color[y] + 0x100);
      keys_[z] += mix64((static_cast<std::uint64_t>(n) << 40) ^ (cx + cy));
    });
    return split(part, keys_);
  }

  const VerifiedDesign* d_;
  std::vector<std::uint64_t> root_keys_;
  GridScratch grid_;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> block_keys_;
  std::vector<PointIndex> order_;
  std::vector<std::uint32_t> fresh_;
  std::uint64_t nodes_ = 0;
};

/// Root keys from local profiles: equal profiles, equal keys.
inline std::vector<std::uint64_t> profile_keys(std::span<const GridProfile> locals) {
  std::vector<std::uint64_t> keys(locals.size());
  std::map<GridProfile, std::uint64_t> memo;
  for (std::size_t p = 0; p < locals.size(); ++p) {
    auto it = memo.find(locals[p]);
    if (it == memo.end()) {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (const auto& [value, count] : locals[p].counts()) h = hash_combine(hash_combine(h, value), count);
      it = memo.emplace(locals[p], h).first;
    }
    keys[p] = it->second;
  }
  return keys;
}

// ---------------------------------------------------------------------------
// Search trees.

namespace detail {

struct PathLevel {
  Partition before;          // partition before individualizing at this level
  std::uint32_t target = 0;  // target cell index
  PointIndex base = 0;       // point individualized on the first path
  std::uint64_t trace = 0;   // trace after individualizing base
};

struct FirstPath {
  std::uint64_t root_trace = 0;
  std::vector<PathLevel> levels;
  std::vector<PointIndex> leaf;  // labeling of the first leaf
};

inline FirstPath first_path(Refiner& refiner) {
  FirstPath path;
  Partition part;
  path.root_trace = refiner.root(part);
  while (!part.discrete()) {
    PathLevel level;
    level.before = part;
    level.target = part.target_cell();
    level.base = part.members(level.target).front();
    level.trace = refiner.individualize(part, level.base);
    path.levels.push_back(std::move(level));
  }
  path.leaf = part.labeling();
  return path;
}

class BudgetGuard {
 public:
  BudgetGuard(const Refiner& r, const SearchBudget& b) : refiner_(&r), limit_(r.nodes() + b.node_limit) {}
  bool exhausted() const noexcept { return refiner_->nodes() >= limit_; }

 private:
  const Refiner* refiner_;
  std::uint64_t limit_;
};

struct BudgetExhausted {};

/// Explores the subtree below `part` (already refined at `level`), following
/// the target cells of `path`. on_leaf(labeling) returns true to stop.
template <class OnLeaf>
bool explore(Refiner& refiner, const FirstPath& path, const Partition& part, std::size_t level,
             const BudgetGuard& guard, OnLeaf& on_leaf) {
  if (level == path.levels.size()) {
    if (!part.discrete()) return false;
    return on_leaf(part.labeling());
  }
  if (part.discrete()) return false;
  const auto& lv = path.levels[level];
  for (PointIndex q : part.members(lv.target)) {
    if (guard.exhausted()) throw BudgetExhausted{};
    Partition child = part;
    if (refiner.individualize(child, q) != lv.trace) continue;
    if (explore(refiner, path, child, level + 1, guard, on_leaf)) return true;
  }
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Automorphism group order.

struct AutReport {
  std::uint64_t order = 0;
  std::vector<PointMap> generators;
  std::uint64_t affine_count = 1;
  bool complete = true;      // false when the node budget ran out; order is then a lower bound
  std::uint64_t nodes = 0;
  std::vector<std::uint64_t> orbit_lengths;  // basic orbit lengths along the first path

  bool has_non_affine() const noexcept { return complete && order > affine_count; }
};

namespace detail {

inline std::vector<bool> orbit_of(PointIndex start, std::uint32_t v, const std::vector<const PointMap*>& gens) {
  std::vector<bool> in(v, false);
  std::vector<PointIndex> stack{start};
  in[start] = true;
  while (!stack.empty()) {
    const PointIndex p = stack.back();
    stack.pop_back();
    for (const PointMap* g : gens) {
      const PointIndex q = (*g)(p);
      if (!in[q]) {
        in[q] = true;
        stack.push_back(q);
      }
    }
  }
  return in;
}

inline std::vector<const PointMap*> fixing_prefix(const std::vector<PointMap>& gens,
                                                  const std::vector<PathLevel>& levels, std::size_t count) {
  std::vector<const PointMap*> out;
  for (const auto& g : gens) {
    bool fixes = true;
    for (std::size_t i = 0; i < count && fixes; ++i) fixes = g(levels[i].base) == levels[i].base;
    if (fixes) out.push_back(&g);
  }
  return out;
}

}  // namespace detail

/// Exact automorphism group order. `seeds` are known automorphisms (each is
/// re-verified); by default the affine harvest of a cyclic design is used.
inline AutReport automorphism_group_order(const VerifiedDesign& d, const SearchBudget& budget,
                                          std::optional<std::vector<PointMap>> seeds = std::nullopt) {
  AutReport report;
  const auto affine = affine_automorphisms(d);
  report.affine_count = affine.empty() ? 1 : affine.size();
  std::vector<PointMap> gens = seeds ? *seeds : affine_generators(d);
  std::erase_if(gens, [&](const PointMap& g) { return !verify_automorphism(d, g) || g.is_identity(); });

  Refiner refiner(d, profile_keys(local_profiles(d)));
  const auto path = detail::first_path(refiner);
  const std::uint32_t v = d.v();
  const detail::BudgetGuard guard(refiner, budget);

  std::vector<std::uint64_t> lengths(path.levels.size(), 1);
  try {
    for (std::size_t level = path.levels.size(); level-- > 0;) {
      const auto& lv = path.levels[level];
      auto fixers = detail::fixing_prefix(gens, path.levels, level);
      auto orbit = detail::orbit_of(lv.base, v, fixers);
      for (PointIndex q : lv.before.members(lv.target)) {
        if (orbit[q]) continue;
        if (guard.exhausted()) throw detail::BudgetExhausted{};
        Partition child = lv.before;
        if (refiner.individualize(child, q) != lv.trace) continue;
        std::optional<PointMap> found;
        auto on_leaf = [&](const std::vector<PointIndex>& leaf) {
          PointMap pi;
          pi.image.resize(v);
          for (std::uint32_t c = 0; c < v; ++c) pi.image[path.leaf[c]] = leaf[c];
          if (!d.preserves_blocks(pi)) return false;
          found = std::move(pi);
          return true;
        };
        detail::explore(refiner, path, child, level + 1, guard, on_leaf);
        if (found) {
          gens.push_back(std::move(*found));
          fixers = detail::fixing_prefix(gens, path.levels, level);
          orbit = detail::orbit_of(lv.base, v, fixers);
        }
      }
      lengths[level] = static_cast<std::uint64_t>(std::count(orbit.begin(), orbit.end(), true));
    }
  } catch (const detail::BudgetExhausted&) {
    report.complete = false;
  }
  report.orbit_lengths = lengths;
  report.order = 1;
  for (auto len : lengths) report.order *= len;
  if (!report.complete) report.order = std::max(report.order, report.affine_count);
  report.nodes = refiner.nodes();
  report.generators.assign(gens.begin(), gens.end());
  return report;
}

// ---------------------------------------------------------------------------
// Isomorphism.

enum class IsoVerdict { Isomorphic, NonIsomorphic, Unresolved };

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::NonIsomorphic;
  std::optional<PointMap> map;  // relabel(first, map) == second
  std::uint64_t nodes = 0;
};

/// Precomputed per-design data for repeated isomorphism tests.
class IsoCandidate {
 public:
  explicit IsoCandidate(const VerifiedDesign& d, std::vector<PointMap> known_automorphisms = {})
      : d_(&d), locals_(local_profiles(d)), known_(std::move(known_automorphisms)) {
    profile_ = sum_profiles(locals_);
    sorted_locals_ = locals_;
    std::sort(sorted_locals_.begin(), sorted_locals_.end());
    keys_ = profile_keys(locals_);
    if (known_.empty()) known_ = affine_generators(d);
  }

  const VerifiedDesign& design() const noexcept { return *d_; }
  const GridProfile& profile() const noexcept { return profile_; }
  const std::vector<GridProfile>& sorted_locals() const noexcept { return sorted_locals_; }
  const std::vector<std::uint64_t>& keys() const noexcept { return keys_; }
  const std::vector<PointMap>& known_automorphisms() const noexcept { return known_; }

 private:
  const VerifiedDesign* d_;
  std::vector<GridProfile> locals_;
  GridProfile profile_;
  std::vector<GridProfile> sorted_locals_;
  std::vector<std::uint64_t> keys_;
  std::vector<PointMap> known_;
};

inline IsoResult isomorphism_search(const IsoCandidate& a, const IsoCandidate& b, const SearchBudget& budget) {
  const auto& da = a.design();
  const auto& db = b.design();
  if (da.v() != db.v() || da.k() != db.k()) {
    throw Error(ErrorCode::ParameterMismatch, "designs have different (v, k)");
  }
  IsoResult result;
  if (da.block_count() != db.block_count() || a.profile() != b.profile() ||
      a.sorted_locals() != b.sorted_locals()) {
    return result;
  }
  Refiner ra(da, a.keys());
  Refiner rb(db, b.keys());
  const auto path = detail::first_path(ra);
  Partition root;
  if (rb.root(root) != path.root_trace) return result;

  const std::uint32_t v = da.v();
  const detail::BudgetGuard guard(rb, budget);
  auto on_leaf = [&](const std::vector<PointIndex>& leaf) {
    PointMap pi;
    pi.image.resize(v);
    for (std::uint32_t c = 0; c < v; ++c) pi.image[path.leaf[c]] = leaf[c];
    if (!maps_blocks(da, db, pi)) return false;
    result.map = std::move(pi);
    return true;
  };
  try {
    if (path.levels.empty()) {
      on_leaf(root.labeling());
    } else {
      // Candidates for the first base point: one per orbit of b's known
      // automorphisms, which carry any isomorphism to every orbit member.
      const auto& lv = path.levels.front();
      std::vector<const PointMap*> gens;
      for (const auto& g : b.known_automorphisms()) gens.push_back(&g);
      std::vector<bool> seen(v, false);
      for (PointIndex q : root.members(lv.target)) {
        if (seen[q]) continue;
        const auto orbit = detail::orbit_of(q, v, gens);
        for (PointIndex p = 0; p < v; ++p)
          if (orbit[p]) seen[p] = true;
        if (guard.exhausted()) throw detail::BudgetExhausted{};
        Partition child = root;
        if (rb.individualize(child, q) != lv.trace) continue;
        if (detail::explore(rb, path, child, 1, guard, on_leaf)) break;
      }
    }
    result.verdict = result.map ? IsoVerdict::Isomorphic : IsoVerdict::NonIsomorphic;
  } catch (const detail::BudgetExhausted&) {
    result.verdict = IsoVerdict::Unresolved;
  }
  result.nodes = ra.nodes() + rb.nodes();
  return result;
}

/// A verified witness with relabel(d1, map) == d2, or nullopt when the designs
/// are not isomorphic. Raises BudgetExceeded when the search is cut off.
inline std::optional<PointMap> are_isomorphic(const VerifiedDesign& d1, const VerifiedDesign& d2,
                                              const SearchBudget& budget = {}) {
  if (d1.v() != d2.v() || d1.k() != d2.k()) {
    throw Error(ErrorCode::ParameterMismatch, "designs have different (v, k)");
  }
  const IsoCandidate a(d1);
  const IsoCandidate b(d2);
  auto result = isomorphism_search(a, b, budget);
  if (result.verdict == IsoVerdict::Unresolved) {
    throw Error(ErrorCode::BudgetExceeded, "isomorphism search exceeded its node budget");
  }
  return result.map;
}

}  // namespace steiner
