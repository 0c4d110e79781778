#pragma once

// Grid profile: an isomorphism invariant of an S(2,k,v).
//
// For an ordered pair of blocks (B1, B2) meeting in a point p, every cross
// pair (x, y) in (B1\p) x (B2\p) spans a line l(x,y) avoiding p, B1 and B2
// except at x and y. For each z in l(x,y)\{x,y}, n(z) counts the cross lines
// through z. Every incidence (x, y, z) records the value n(z). The profile is
// the value -> count multiset over all such configurations; the local profile
// of p keeps only pairs meeting at p.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steiner/design.hpp"
#include "steiner/error.hpp"
#include "steiner/hash.hpp"
#include "steiner/parallel.hpp"

namespace steiner {

class GridProfile {
 public:
  GridProfile() = default;
  explicit GridProfile(std::map<std::uint32_t, std::uint64_t> counts) : counts_(std::move(counts)) {
    std::erase_if(counts_, [](const auto& kv) { return kv.second == 0; });
  }

  const std::map<std::uint32_t, std::uint64_t>& counts() const noexcept { return counts_; }
  bool empty() const noexcept { return counts_.empty(); }

  std::uint64_t count(std::uint32_t value) const {
    auto it = counts_.find(value);
    return it == counts_.end() ? 0 : it->second;
  }

  std::uint64_t mass() const {
    std::uint64_t s = 0;
    for (const auto& [value, c] : counts_) s += c;
    return s;
  }

  void add(std::uint32_t value, std::uint64_t c) {
    if (c != 0) counts_[value] += c;
  }

  GridProfile& operator+=(const GridProfile& other) {
    for (const auto& [value, c] : other.counts_) add(value, c);
    return *this;
  }

  GridProfile scaled(std::uint64_t factor) const {
    GridProfile out;
    for (const auto& [value, c] : counts_) out.add(value, c * factor);
    return out;
  }

  /// Ascending "value=count" items joined by `sep`.
  std::string serialize(std::string_view sep = ",") const {
    std::string s;
    bool first = true;
    for (const auto& [value, c] : counts_) {
      if (!first) s += sep;
      first = false;
      s += std::to_string(value) + "=" + std::to_string(c);
    }
    return s;
  }

  /// Brace notation, e.g. "{1=15150, 2=424200}".
  std::string to_string() const { return "{" + serialize(", ") + "}"; }

  friend bool operator==(const GridProfile&, const GridProfile&) = default;
  friend auto operator<=>(const GridProfile&, const GridProfile&) = default;

 private:
  std::map<std::uint32_t, std::uint64_t> counts_;
};

/// v(v-1)(v-k)(k-2): total configuration count of any S(2,k,v).
constexpr std::uint64_t expected_profile_mass(std::uint64_t v, std::uint64_t k) noexcept {
  return v * (v - 1) * (v - k) * (k - 2);
}

/// Relabels every value n as (k-1)-n. The published fingerprint tables for
/// the catalog families use this reading of the same counts.
inline GridProfile reflected(const GridProfile& g, std::uint32_t k) {
  GridProfile out;
  for (const auto& [value, c] : g.counts()) {
    if (value > k - 1) throw Error(ErrorCode::ParameterMismatch, "profile value exceeds k-1");
    out.add(k - 1 - value, c);
  }
  return out;
}

/// Stable 128-bit hex digest of the canonical serialization.
inline std::string profile_digest(const GridProfile& g) { return fnv1a128_hex(g.serialize()); }

/// Reusable per-thread buffers for the grid kernel.
class GridScratch {
 public:
  explicit GridScratch(std::uint32_t v) : count_(v, 0) {}

  /// For every unordered pair of lines through `center`, calls
  /// visit(z, n, x, y) once per incidence (x, y, z), with n = n(z) >= 1.
  template <class Visit>
  void for_each_grid(const VerifiedDesign& d, PointIndex center, Visit&& visit) {
    const auto lines_here = d.blocks_through(center);
    const std::uint32_t k = d.k();
    const PointIndex* points = d.design().flat().data();
    std::uint32_t* count = count_.data();
    PointIndex left[64];
    PointIndex right[64];
    const PointIndex* cross[64 * 64];
    for (std::size_t i = 0; i < lines_here.size(); ++i) {
      std::uint32_t nl = 0;
      for (PointIndex x : d.block(lines_here[i]))
        if (x != center) left[nl++] = x;
      for (std::size_t j = i + 1; j < lines_here.size(); ++j) {
        std::uint32_t nr = 0;
        for (PointIndex y : d.block(lines_here[j]))
          if (y != center) right[nr++] = y;
        std::uint32_t nc = 0;
        for (std::uint32_t a = 0; a < nl; ++a) {
          const BlockId* row = d.line_row(left[a]);
          for (std::uint32_t b = 0; b < nr; ++b) {
            const PointIndex* line = points + static_cast<std::size_t>(row[right[b]]) * k;
            cross[nc++] = line;
            for (std::uint32_t t = 0; t < k; ++t) ++count[line[t]];
          }
        }
        // Points of B1 and B2 sit on the cross lines too; zero them so they
        // are skipped below.
        for (std::uint32_t a = 0; a < nl; ++a) count[left[a]] = 0;
        for (std::uint32_t b = 0; b < nr; ++b) count[right[b]] = 0;
        for (std::uint32_t c = 0; c < nc; ++c) {
          const PointIndex x = left[c / nr];
          const PointIndex y = right[c % nr];
          for (std::uint32_t t = 0; t < k; ++t) {
            const PointIndex z = cross[c][t];
            if (const std::uint32_t n = count[z]) visit(z, n, x, y);
          }
        }
        for (std::uint32_t c = 0; c < nc; ++c)
          for (std::uint32_t t = 0; t < k; ++t) count[cross[c][t]] = 0;
      }
    }
  }

 private:
  std::vector<std::uint32_t> count_;
};

/// Local profile of one point; ordered block pairs, so each unordered grid
/// contributes twice.
inline GridProfile local_profile(const VerifiedDesign& d, PointIndex p, GridScratch& scratch) {
  std::vector<std::uint64_t> hist(d.k() + 1, 0);
  scratch.for_each_grid(d, p, [&](PointIndex, std::uint32_t n, PointIndex, PointIndex) { hist[n] += 2; });
  GridProfile out;
  for (std::uint32_t n = 0; n < hist.size(); ++n) out.add(n, hist[n]);
  return out;
}

inline GridProfile local_profile(const VerifiedDesign& d, PointIndex p) {
  GridScratch scratch(d.v());
  return local_profile(d, p, scratch);
}

/// Local profiles of every point, computed independently per point.
inline std::vector<GridProfile> local_profiles_exhaustive(const VerifiedDesign& d, unsigned threads = 1) {
  std::vector<GridProfile> out(d.v());
  std::vector<GridScratch> scratch(std::max(1u, threads), GridScratch(d.v()));
  parallel_for(d.v(), threads, [&](std::size_t p, unsigned w) {
    out[p] = local_profile(d, static_cast<PointIndex>(p), scratch[w]);
  });
  return out;
}

/// Local profiles; when the design carries a verified cyclic structure, one
/// representative per translation orbit is computed and copied across it.
inline std::vector<GridProfile> local_profiles(const VerifiedDesign& d, unsigned threads = 1) {
  const auto& cyc = d.design().cyclic();
  if (!cyc) return local_profiles_exhaustive(d, threads);
  GridScratch scratch(d.v());
  std::vector<GridProfile> out(d.v(), local_profile(d, 0, scratch));
  if (cyc->has_infinity) out[cyc->modulus] = local_profile(d, cyc->modulus, scratch);
  return out;
}

inline GridProfile sum_profiles(std::span<const GridProfile> profiles) {
  GridProfile total;
  for (const auto& g : profiles) total += g;
  return total;
}

inline GridProfile grid_profile(const VerifiedDesign& d, unsigned threads = 1) {
  const auto& cyc = d.design().cyclic();
  if (!cyc) return sum_profiles(local_profiles_exhaustive(d, threads));
  GridScratch scratch(d.v());
  GridProfile total = local_profile(d, 0, scratch).scaled(cyc->modulus);
  if (cyc->has_infinity) total += local_profile(d, cyc->modulus, scratch);
  return total;
}

/// Verifies first; an invalid design raises InvalidDesign.
inline GridProfile grid_profile(const SteinerDesign& d, unsigned threads = 1) {
  return grid_profile(VerifiedDesign(d), threads);
}

}  // namespace steiner
