#pragma once

#include <vector>

#include "oracles.hpp"
#include "steiner/design.hpp"
#include "steiner/diffam.hpp"

namespace support {

inline oracle::Blocks blocks_of(const steiner::SteinerDesign& d) {
  oracle::Blocks out;
  for (const auto& b : d.blocks()) out.emplace_back(b.begin(), b.end());
  return out;
}

inline steiner::DifferenceFamily fano() {
  return steiner::DifferenceFamily::plain(7, 3, {steiner::BaseBlock::of({0, 1, 3})});
}

/// 1-rotational S(2,3,9) over Z_8 ∪ {∞}: H = {0,4}, block {0,1,3}.
inline steiner::DifferenceFamily s239() {
  using namespace steiner;
  return DifferenceFamily(GroupContext(8), 3, FamilyKind::Rotational,
                          {BaseBlock::of({0, 4}, true), BaseBlock::of({0, 1, 3})}, Residue{4});
}

inline steiner::PointMap permutation(std::uint32_t v, std::uint64_t seed) {
  return steiner::PointMap{oracle::random_permutation(v, seed)};
}

}  // namespace support
