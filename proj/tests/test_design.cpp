#include <gtest/gtest.h>

#include <set>

#include "steiner/catalog.hpp"
#include "steiner/design.hpp"
#include "steiner/diffam.hpp"
#include "support.hpp"

using namespace steiner;

namespace {

SteinerDesign fano_design() { return develop(support::fano()); }

BlockId find_block(const SteinerDesign& d, std::vector<PointIndex> b) {
  for (std::size_t i = 0; i < d.block_count(); ++i) {
    auto s = d.block(static_cast<BlockId>(i));
    if (std::equal(s.begin(), s.end(), b.begin(), b.end())) return static_cast<BlockId>(i);
  }
  return kNoBlock;
}

}  // namespace

TEST(PairIndex, Triangular) {
  EXPECT_EQ(pair_index(0, 1), 0u);
  EXPECT_EQ(pair_index(1, 0), 0u);
  EXPECT_EQ(pair_index(0, 2), 1u);
  EXPECT_EQ(pair_index(1, 2), 2u);
  std::set<std::uint64_t> seen;
  for (PointIndex q = 1; q < 40; ++q)
    for (PointIndex p = 0; p < q; ++p) EXPECT_TRUE(seen.insert(pair_index(p, q)).second);
  EXPECT_EQ(seen.size(), pair_count(40));
  EXPECT_EQ(*seen.rbegin(), pair_count(40) - 1);
}

TEST(VerifySteiner, Fano) {
  const auto r = verify_steiner(fano_design());
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.covered_pairs, 21u);
  ASSERT_TRUE(r.lines);
  EXPECT_EQ(r.lines->filled(), 21u);
}

TEST(VerifySteiner, DeletedBlockReportsItsPairs) {
  auto blocks = fano_design().blocks();
  std::erase(blocks, std::vector<PointIndex>{0, 1, 3});
  const auto r = verify_steiner(SteinerDesign(7, 3, blocks));
  EXPECT_FALSE(r.valid);
  const std::vector<std::pair<PointIndex, PointIndex>> expected{{0, 1}, {0, 3}, {1, 3}};
  EXPECT_EQ(r.missing_pairs, expected);
  EXPECT_TRUE(r.repeated_pairs.empty());
}

TEST(VerifySteiner, RepeatedAndMalformed) {
  auto blocks = fano_design().blocks();
  blocks.push_back({0, 1, 2});
  const auto r = verify_steiner(SteinerDesign(7, 3, blocks));
  EXPECT_FALSE(r.valid);
  EXPECT_FALSE(r.repeated_pairs.empty());

  auto bad = fano_design().blocks();
  bad[0] = {3, 1, 0};
  bad[1] = {2, 2, 4};
  const auto m = verify_steiner(SteinerDesign(7, 3, bad));
  EXPECT_FALSE(m.valid);
  EXPECT_EQ(m.malformed_blocks.size(), 2u);
}

TEST(VerifySteiner, WitnessListsAreBounded) {
  std::vector<std::vector<PointIndex>> blocks{{0, 1, 2}};
  const auto r = verify_steiner(SteinerDesign(40, 3, blocks));
  EXPECT_FALSE(r.valid);
  EXPECT_EQ(r.missing_pairs.size(), DesignReport::kMaxWitnesses);
  EXPECT_EQ(r.missing_count, pair_count(40) - 3);
}

TEST(VerifySteiner, CatalogDesigns) {
  const struct {
    const char* id;
    std::size_t blocks;
    std::uint64_t pairs;
  } cases[] = {{"s2-7-505-1", 6060, 127260}, {"s2-7-589-2", 8246, 173166}, {"s2-8-624-4", 6942, 194376}};
  for (const auto& c : cases) {
    const auto d = develop(find_builtin(c.id)->family);
    const auto r = verify_steiner(d);
    EXPECT_TRUE(r.valid) << c.id;
    EXPECT_EQ(d.block_count(), c.blocks);
    EXPECT_EQ(r.covered_pairs, c.pairs);
    // b * C(k,2) = C(v,2).
    EXPECT_EQ(d.block_count() * d.k() * (d.k() - 1) / 2, pair_count(d.v()));
  }
}

TEST(LineThrough, Fano) {
  const VerifiedDesign d(fano_design());
  const auto b = d.line_through(0, 1);
  EXPECT_EQ(std::vector<PointIndex>(d.block(b).begin(), d.block(b).end()), (std::vector<PointIndex>{0, 1, 3}));
  try {
    d.line_through(2, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotAPair);
  }
}

TEST(LineThrough, SymmetricAndContainsBoth) {
  const VerifiedDesign d(fano_design());
  for (PointIndex p = 0; p < 7; ++p)
    for (PointIndex q = 0; q < 7; ++q) {
      if (p == q) continue;
      const auto b = d.line_through(p, q);
      EXPECT_EQ(b, d.line_through(q, p));
      auto s = d.block(b);
      EXPECT_TRUE(std::count(s.begin(), s.end(), p) && std::count(s.begin(), s.end(), q));
      EXPECT_EQ(d.line_row(p)[q], b);
    }
  const VerifiedDesign big(develop(find_builtin("s2-7-589-1")->family));
  for (PointIndex p = 0; p < 589; p += 37)
    for (PointIndex q = 1; q < 589; q += 41) {
      if (p == q) continue;
      auto s = big.block(big.line_through(p, q));
      EXPECT_TRUE(std::count(s.begin(), s.end(), p) && std::count(s.begin(), s.end(), q));
    }
}

TEST(LineThrough, InfinityAndZeroIn624) {
  const VerifiedDesign d(develop(find_builtin("s2-8-624-1")->family));
  auto s = d.block(d.line_through(623, 0));
  EXPECT_EQ(std::vector<PointIndex>(s.begin(), s.end()),
            (std::vector<PointIndex>{0, 89, 178, 267, 356, 445, 534, 623}));
}

TEST(Replication, Counts) {
  for (auto r : replication_counts(fano_design())) EXPECT_EQ(r, 3u);
  for (auto r : replication_counts(develop(find_builtin("s2-7-505-2")->family))) EXPECT_EQ(r, 84u);
  for (auto r : replication_counts(develop(find_builtin("s2-8-624-9")->family))) EXPECT_EQ(r, 89u);
}

TEST(Relabel, Examples) {
  const auto d = fano_design();
  EXPECT_EQ(relabel(d, PointMap::identity(7)), d);

  PointMap shift;
  PointMap neg;
  for (PointIndex x = 0; x < 7; ++x) {
    shift.image.push_back((x + 1) % 7);
    neg.image.push_back((7 - x) % 7);
  }
  EXPECT_EQ(relabel(d, shift), d);
  EXPECT_EQ(relabel(d, neg), develop(DifferenceFamily::plain(7, 3, {BaseBlock::of({0, 4, 6})})));
  EXPECT_NE(relabel(d, neg), d);

  try {
    relabel(d, PointMap{{0, 0, 1, 2, 3, 4, 5}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotABijection);
  }
}

TEST(Relabel, PreservesValidity) {
  const auto d = develop(find_builtin("s2-7-505-1")->family);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = relabel(d, support::permutation(d.v(), seed));
    EXPECT_TRUE(verify_steiner(r).valid);
    EXPECT_TRUE(r.is_canonical());
    EXPECT_FALSE(r.cyclic().has_value());
  }
  for (std::uint64_t seed = 1; seed <= 50; ++seed)
    EXPECT_TRUE(oracle::is_steiner(7, support::blocks_of(relabel(fano_design(), support::permutation(7, seed)))));
}

TEST(SteinerDesign, StructuralErrors) {
  EXPECT_THROW(SteinerDesign(7, 3, {{0, 1}}), Error);
  EXPECT_THROW(SteinerDesign(7, 3, {{0, 1, 7}}), Error);
  EXPECT_THROW(SteinerDesign(7, 8, {}), Error);
}

TEST(VerifiedDesign, RejectsInvalidAndFalseCyclicClaims) {
  auto blocks = fano_design().blocks();
  blocks.pop_back();
  EXPECT_THROW(VerifiedDesign(SteinerDesign(7, 3, blocks)), Error);
  // A relabeled Fano plane is still a Steiner system but x -> x+1 is no
  // longer an automorphism of it.
  PointMap swap01 = PointMap::identity(7);
  std::swap(swap01.image[0], swap01.image[2]);
  const auto r = relabel(fano_design(), swap01);
  EXPECT_NO_THROW(VerifiedDesign{r});
  const SteinerDesign lying(7, 3, r.blocks(), CyclicStructure{7, false});
  EXPECT_THROW(VerifiedDesign{lying}, Error);
}

TEST(VerifiedDesign, Incidences) {
  const VerifiedDesign d(develop(support::s239()));
  EXPECT_EQ(d.v(), 9u);
  EXPECT_EQ(d.block_count(), 12u);
  for (PointIndex p = 0; p < 9; ++p) {
    EXPECT_EQ(d.blocks_through(p).size(), 4u);
    for (BlockId b : d.blocks_through(p)) {
      auto s = d.block(b);
      EXPECT_TRUE(std::count(s.begin(), s.end(), p));
    }
  }
  EXPECT_NE(find_block(d.design(), {0, 4, 8}), kNoBlock);
}
