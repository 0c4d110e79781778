#pragma once

// Developed designs, the pair -> line table, and the Steiner S(2,k,v) check.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "steiner/error.hpp"

namespace steiner {

using PointIndex = std::uint32_t;
using BlockId = std::uint32_t;

inline constexpr BlockId kNoBlock = std::numeric_limits<BlockId>::max();

/// Triangular index of the unordered pair {p, q}, p != q.
constexpr std::uint64_t pair_index(PointIndex p, PointIndex q) noexcept {
  if (p > q) std::swap(p, q);
  return static_cast<std::uint64_t>(q) * (q - 1) / 2 + p;
}

constexpr std::uint64_t pair_count(std::uint64_t v) noexcept { return v * (v - 1) / 2; }

/// A permutation of [0, n).
struct PointMap {
  std::vector<PointIndex> image;

  static PointMap identity(std::size_t n) {
    PointMap map;
    map.image.resize(n);
    std::iota(map.image.begin(), map.image.end(), PointIndex{0});
    return map;
  }

  std::size_t size() const noexcept { return image.size(); }
  PointIndex operator()(PointIndex p) const { return image[p]; }

  bool is_bijection() const {
    std::vector<bool> hit(image.size(), false);
    for (PointIndex x : image) {
      if (x >= image.size() || hit[x]) return false;
      hit[x] = true;
    }
    return true;
  }

  PointMap inverse() const {
    PointMap inv;
    inv.image.resize(image.size());
    for (PointIndex p = 0; p < image.size(); ++p) inv.image[image[p]] = p;
    return inv;
  }

  /// x -> other(this(x)).
  PointMap then(const PointMap& other) const {
    PointMap out;
    out.image.resize(image.size());
    for (PointIndex p = 0; p < image.size(); ++p) out.image[p] = other.image[image[p]];
    return out;
  }

  bool is_identity() const {
    for (PointIndex p = 0; p < image.size(); ++p)
      if (image[p] != p) return false;
    return true;
  }

  friend bool operator==(const PointMap&, const PointMap&) = default;
};

/// Points [0, modulus) carry Z_m; when has_infinity, point `modulus` is ∞.
struct CyclicStructure {
  std::uint32_t modulus = 0;
  bool has_infinity = false;

  friend bool operator==(const CyclicStructure&, const CyclicStructure&) = default;
};

class SteinerDesign {
 public:
  SteinerDesign(std::uint32_t v, std::uint32_t k, const std::vector<std::vector<PointIndex>>& blocks,
                std::optional<CyclicStructure> cyclic = std::nullopt)
      : v_(v), k_(k), cyclic_(cyclic) {
    if (k < 2 || k > v) {
      throw Error(ErrorCode::Structural,
                  "block size " + std::to_string(k) + " invalid for " + std::to_string(v) + " points");
    }
    points_.reserve(blocks.size() * k);
    for (const auto& b : blocks) {
      if (b.size() != k) {
        throw Error(ErrorCode::Structural, "block of size " + std::to_string(b.size()) +
                                               ", expected " + std::to_string(k));
      }
      for (PointIndex p : b) {
        if (p >= v) throw Error(ErrorCode::Structural, "point " + std::to_string(p) + " out of range");
        points_.push_back(p);
      }
    }
    if (cyclic_ && cyclic_->modulus + (cyclic_->has_infinity ? 1u : 0u) != v) {
      throw Error(ErrorCode::Structural, "cyclic structure does not match point count");
    }
  }

  /// Takes blocks as a flat array of block_count * k point indices.
  static SteinerDesign from_flat(std::uint32_t v, std::uint32_t k, std::vector<PointIndex> flat,
                                 std::optional<CyclicStructure> cyclic = std::nullopt) {
    SteinerDesign d(v, k, {}, cyclic);
    if (flat.size() % k != 0) throw Error(ErrorCode::Structural, "flat block array not a multiple of k");
    for (PointIndex p : flat)
      if (p >= v) throw Error(ErrorCode::Structural, "point " + std::to_string(p) + " out of range");
    d.points_ = std::move(flat);
    return d;
  }

  std::uint32_t v() const noexcept { return v_; }
  std::uint32_t k() const noexcept { return k_; }
  std::size_t block_count() const noexcept { return points_.size() / k_; }
  std::span<const PointIndex> block(std::size_t i) const noexcept {
    return {points_.data() + i * k_, k_};
  }
  std::span<const PointIndex> flat() const noexcept { return points_; }
  const std::optional<CyclicStructure>& cyclic() const noexcept { return cyclic_; }
  std::optional<PointIndex> infinity_point() const noexcept {
    if (cyclic_ && cyclic_->has_infinity) return cyclic_->modulus;
    return std::nullopt;
  }

  std::vector<std::vector<PointIndex>> blocks() const {
    std::vector<std::vector<PointIndex>> out;
    out.reserve(block_count());
    for (std::size_t i = 0; i < block_count(); ++i) {
      auto b = block(i);
      out.emplace_back(b.begin(), b.end());
    }
    return out;
  }

  /// Blocks sorted internally, block list sorted lexicographically.
  SteinerDesign canonical() const {
    auto bl = blocks();
    for (auto& b : bl) std::sort(b.begin(), b.end());
    std::sort(bl.begin(), bl.end());
    return SteinerDesign(v_, k_, bl, cyclic_);
  }

  bool is_canonical() const {
    for (std::size_t i = 0; i < block_count(); ++i) {
      auto b = block(i);
      if (!std::is_sorted(b.begin(), b.end())) return false;
      if (i > 0) {
        auto a = block(i - 1);
        if (!std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end())) return false;
      }
    }
    return true;
  }

  SteinerDesign without_cyclic_structure() const {
    SteinerDesign copy = *this;
    copy.cyclic_.reset();
    return copy;
  }

  /// Equality of canonical block lists.
  friend bool operator==(const SteinerDesign& a, const SteinerDesign& b) {
    if (a.v_ != b.v_ || a.k_ != b.k_ || a.points_.size() != b.points_.size()) return false;
    if (a.is_canonical() && b.is_canonical()) return a.points_ == b.points_;
    return a.canonical().points_ == b.canonical().points_;
  }

 private:
  std::uint32_t v_;
  std::uint32_t k_;
  std::vector<PointIndex> points_;
  std::optional<CyclicStructure> cyclic_;
};

/// Flat C(v,2) map from an unordered point pair to the block containing it.
class LineTable {
 public:
  LineTable() = default;
  explicit LineTable(std::uint32_t v) : v_(v), lines_(pair_count(v), kNoBlock) {}

  std::uint32_t v() const noexcept { return v_; }

  BlockId line_through(PointIndex p, PointIndex q) const {
    if (p == q) throw Error(ErrorCode::NotAPair, "points coincide: " + std::to_string(p));
    if (p >= v_ || q >= v_) throw Error(ErrorCode::NotAPair, "point out of range");
    return lines_[pair_index(p, q)];
  }

  BlockId operator()(PointIndex p, PointIndex q) const noexcept { return lines_[pair_index(p, q)]; }

  std::size_t filled() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(lines_.begin(), lines_.end(), [](BlockId b) { return b != kNoBlock; }));
  }

  BlockId& at_index(std::uint64_t idx) noexcept { return lines_[idx]; }

 private:
  std::uint32_t v_ = 0;
  std::vector<BlockId> lines_;
};

struct DesignReport {
  static constexpr std::size_t kMaxWitnesses = 32;

  bool valid = false;
  std::vector<std::size_t> malformed_blocks;
  std::vector<std::pair<PointIndex, PointIndex>> missing_pairs;
  std::vector<std::pair<PointIndex, PointIndex>> repeated_pairs;
  std::uint64_t missing_count = 0;
  std::uint64_t repeated_count = 0;
  std::uint64_t covered_pairs = 0;
  std::optional<LineTable> lines;
};

inline DesignReport verify_steiner(const SteinerDesign& d) {
  DesignReport report;
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    auto b = d.block(i);
    if (std::adjacent_find(b.begin(), b.end(), std::greater_equal<>()) != b.end()) {
      if (report.malformed_blocks.size() < DesignReport::kMaxWitnesses)
        report.malformed_blocks.push_back(i);
    }
  }
  if (!report.malformed_blocks.empty()) return report;

  const std::uint32_t v = d.v();
  const std::uint32_t k = d.k();
  LineTable lines(v);
  std::vector<std::uint8_t> multiplicity(pair_count(v), 0);
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    auto b = d.block(i);
    for (std::uint32_t a = 0; a < k; ++a) {
      for (std::uint32_t c = a + 1; c < k; ++c) {
        const auto idx = pair_index(b[a], b[c]);
        if (multiplicity[idx] == 0) lines.at_index(idx) = static_cast<BlockId>(i);
        if (multiplicity[idx] < 255) ++multiplicity[idx];
      }
    }
  }
  for (PointIndex q = 1; q < v; ++q) {
    for (PointIndex p = 0; p < q; ++p) {
      const auto m = multiplicity[pair_index(p, q)];
      if (m == 0) {
        ++report.missing_count;
        if (report.missing_pairs.size() < DesignReport::kMaxWitnesses) report.missing_pairs.emplace_back(p, q);
      } else {
        ++report.covered_pairs;
        if (m > 1) {
          ++report.repeated_count;
          if (report.repeated_pairs.size() < DesignReport::kMaxWitnesses)
            report.repeated_pairs.emplace_back(p, q);
        }
      }
    }
  }
  report.valid = report.missing_count == 0 && report.repeated_count == 0;
  if (report.valid) report.lines = std::move(lines);
  return report;
}

inline std::vector<std::uint32_t> replication_counts(const SteinerDesign& d) {
  std::vector<std::uint32_t> counts(d.v(), 0);
  for (PointIndex p : d.flat()) ++counts[p];
  return counts;
}

inline SteinerDesign relabel(const SteinerDesign& d, const PointMap& pi) {
  if (pi.size() != d.v() || !pi.is_bijection()) {
    throw Error(ErrorCode::NotABijection, "relabeling is not a bijection on the point set");
  }
  auto bl = d.blocks();
  for (auto& b : bl) {
    for (auto& p : b) p = pi(p);
    std::sort(b.begin(), b.end());
  }
  std::sort(bl.begin(), bl.end());
  return SteinerDesign(d.v(), d.k(), bl);
}

/// A design that passed verify_steiner, with its line table and incidences.
class VerifiedDesign {
 public:
  explicit VerifiedDesign(SteinerDesign d) : design_(std::move(d)) {
    auto report = verify_steiner(design_);
    if (!report.valid) throw Error(ErrorCode::InvalidDesign, "design fails the Steiner pair check");
    lines_ = std::move(*report.lines);

    const std::uint32_t v = design_.v();
    offsets_.assign(v + 1, 0);
    for (PointIndex p : design_.flat()) ++offsets_[p + 1];
    for (std::uint32_t p = 0; p < v; ++p) offsets_[p + 1] += offsets_[p];
    incidences_.resize(design_.flat().size());
    std::vector<std::uint32_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < design_.block_count(); ++i)
      for (PointIndex p : design_.block(i)) incidences_[fill[p]++] = static_cast<BlockId>(i);

    square_.assign(static_cast<std::size_t>(v) * v, kNoBlock);
    for (PointIndex q = 1; q < v; ++q) {
      for (PointIndex p = 0; p < q; ++p) {
        const BlockId b = lines_(p, q);
        square_[static_cast<std::size_t>(p) * v + q] = b;
        square_[static_cast<std::size_t>(q) * v + p] = b;
      }
    }

    if (design_.cyclic() && !translation_preserves_blocks()) {
      throw Error(ErrorCode::InvalidDesign, "declared cyclic structure is not an automorphism");
    }
  }

  const SteinerDesign& design() const noexcept { return design_; }
  const LineTable& lines() const noexcept { return lines_; }
  std::uint32_t v() const noexcept { return design_.v(); }
  std::uint32_t k() const noexcept { return design_.k(); }
  std::span<const PointIndex> block(BlockId b) const noexcept { return design_.block(b); }
  std::size_t block_count() const noexcept { return design_.block_count(); }
  std::uint32_t replication() const noexcept { return (v() - 1) / (k() - 1); }

  std::span<const BlockId> blocks_through(PointIndex p) const noexcept {
    return {incidences_.data() + offsets_[p], offsets_[p + 1] - offsets_[p]};
  }

  BlockId line_through(PointIndex p, PointIndex q) const { return lines_.line_through(p, q); }

  /// Row p of the dense line matrix; entry q is the line through p and q.
  const BlockId* line_row(PointIndex p) const noexcept {
    return square_.data() + static_cast<std::size_t>(p) * v();
  }

  /// True iff every block's image under the map is a block.
  bool preserves_blocks(const PointMap& map) const {
    for (std::size_t i = 0; i < block_count(); ++i) {
      auto b = block(static_cast<BlockId>(i));
      const BlockId target = line_row(map(b[0]))[map(b[1])];
      auto t = block(target);
      for (std::uint32_t j = 2; j < k(); ++j) {
        if (std::find(t.begin(), t.end(), map(b[j])) == t.end()) return false;
      }
    }
    return true;
  }

  /// The translation x -> x + s on Z_m (∞ fixed), when the design is cyclic.
  std::optional<PointMap> translation(std::uint32_t s) const {
    const auto& cyc = design_.cyclic();
    if (!cyc) return std::nullopt;
    PointMap map = PointMap::identity(v());
    for (PointIndex x = 0; x < cyc->modulus; ++x) map.image[x] = (x + s) % cyc->modulus;
    return map;
  }

 private:
  bool translation_preserves_blocks() const { return preserves_blocks(*translation(1)); }

  SteinerDesign design_;
  LineTable lines_;
  std::vector<BlockId> square_;
  std::vector<std::uint32_t> offsets_;
  std::vector<BlockId> incidences_;
};

}  // namespace steiner
