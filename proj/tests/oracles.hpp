#pragma once

// Independent reference implementations for tests. Everything here works from
// raw block lists with naive data structures and shares no code paths with
// the library algorithms it checks.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using Block = std::vector<std::uint32_t>;
using Blocks = std::vector<Block>;

/// Translates of every base block over Z_m; `inf` (== m) stays fixed.
inline Blocks develop(std::uint32_t m, const Blocks& base) {
  std::set<Block> out;
  for (const auto& b : base) {
    for (std::uint32_t s = 0; s < m; ++s) {
      Block t;
      for (auto x : b) t.push_back(x == m ? m : (x + s) % m);
      std::sort(t.begin(), t.end());
      out.insert(t);
    }
  }
  return {out.begin(), out.end()};
}

/// Counts pair occurrences with a map.
inline bool is_steiner(std::uint32_t v, const Blocks& blocks) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, int> seen;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) {
        auto p = std::minmax(b[i], b[j]);
        if (p.first == p.second) return false;
        ++seen[{p.first, p.second}];
      }
  if (seen.size() != std::size_t{v} * (v - 1) / 2) return false;
  return std::all_of(seen.begin(), seen.end(), [](const auto& kv) { return kv.second == 1; });
}

/// Plain difference family check by listing every difference.
inline bool is_difference_family(std::uint32_t m, const Blocks& base) {
  std::vector<int> hits(m, 0);
  for (const auto& b : base)
    for (auto a : b)
      for (auto c : b)
        if (a != c) ++hits[(a + m - c) % m];
  for (std::uint32_t d = 1; d < m; ++d)
    if (hits[d] != 1) return false;
  return true;
}

inline std::set<Block> block_set(const Blocks& blocks) {
  std::set<Block> s;
  for (auto b : blocks) {
    std::sort(b.begin(), b.end());
    s.insert(b);
  }
  return s;
}

/// |Aut| by running through all v! permutations.
inline std::uint64_t automorphism_count(std::uint32_t v, const Blocks& blocks) {
  const auto target = block_set(blocks);
  std::vector<std::uint32_t> perm(v);
  std::iota(perm.begin(), perm.end(), 0u);
  std::uint64_t count = 0;
  do {
    bool ok = true;
    for (const auto& b : blocks) {
      Block img;
      for (auto x : b) img.push_back(perm[x]);
      std::sort(img.begin(), img.end());
      if (!target.count(img)) {
        ok = false;
        break;
      }
    }
    if (ok) ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

/// The block through p and q by linear search.
inline const Block& line(const Blocks& blocks, std::uint32_t p, std::uint32_t q) {
  for (const auto& b : blocks)
    if (std::count(b.begin(), b.end(), p) && std::count(b.begin(), b.end(), q)) return b;
  static const Block none;
  return none;
}

/// Grid profile straight from its definition: ordered pairs of distinct
/// blocks meeting in one point, every cross pair, every further point of the
/// cross line, and the number of cross lines through that point.
inline std::map<std::uint32_t, std::uint64_t> grid_profile(const Blocks& blocks) {
  std::map<std::uint32_t, std::uint64_t> out;
  for (const auto& b1 : blocks) {
    for (const auto& b2 : blocks) {
      if (&b1 == &b2) continue;
      Block common;
      std::set_intersection(b1.begin(), b1.end(), b2.begin(), b2.end(), std::back_inserter(common));
      if (common.size() != 1) continue;
      const auto p = common[0];
      std::vector<const Block*> cross;
      std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;
      for (auto x : b1)
        for (auto y : b2)
          if (x != p && y != p) {
            cross.push_back(&line(blocks, x, y));
            ends.push_back({x, y});
          }
      for (std::size_t c = 0; c < cross.size(); ++c) {
        for (auto z : *cross[c]) {
          if (z == ends[c].first || z == ends[c].second) continue;
          std::uint32_t n = 0;
          for (const auto* l : cross) n += static_cast<std::uint32_t>(std::count(l->begin(), l->end(), z));
          ++out[n];
        }
      }
    }
  }
  return out;
}

inline std::vector<std::uint32_t> random_permutation(std::uint32_t v, std::uint64_t seed) {
  std::vector<std::uint32_t> perm(v);
  std::iota(perm.begin(), perm.end(), 0u);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace oracle
