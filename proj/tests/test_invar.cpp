#include <gtest/gtest.h>

#include "steiner/catalog.hpp"
#include "steiner/hash.hpp"
#include "steiner/invar.hpp"
#include "support.hpp"

using namespace steiner;

namespace {

using Counts = std::map<std::uint32_t, std::uint64_t>;

GridProfile from_oracle(const std::map<std::uint32_t, std::uint64_t>& m) { return GridProfile(m); }

std::vector<SteinerDesign> small_designs() {
  std::vector<SteinerDesign> out{develop(support::fano()), develop(support::s239())};
  for (const auto& f : brute_force_families(13, 4)) out.push_back(develop(f));
  for (const auto& f : brute_force_families(13, 3)) out.push_back(develop(f));
  return out;
}

GridProfile published(const CatalogEntry& e) {
  return GridProfile(std::map<std::uint32_t, std::uint64_t>(e.claimed_fingerprint.begin(), e.claimed_fingerprint.end()));
}

}  // namespace

TEST(Hash, Fnv1a128Vectors) {
  EXPECT_EQ(fnv1a128_hex(""), "6c62272e07bb014262b821756295c58d");
  EXPECT_EQ(fnv1a128_hex("a"), "d228cb696f1a8caf78912b704e4a8964");
}

TEST(GridProfile, SmallExamples) {
  EXPECT_EQ(grid_profile(develop(support::fano())).to_string(), "{2=168}");
  EXPECT_EQ(grid_profile(develop(support::s239())).to_string(), "{1=432}");
}

TEST(GridProfile, MatchesDefinitionOracle) {
  for (const auto& d : small_designs()) {
    const auto expected = from_oracle(oracle::grid_profile(support::blocks_of(d)));
    EXPECT_EQ(grid_profile(d), expected) << d.v();
    const auto r = relabel(d, support::permutation(d.v(), d.block_count()));
    EXPECT_EQ(grid_profile(r), expected);
  }
}

TEST(GridProfile, HandCheckedGrid) {
  // B1 = {0,1,3}, B2 = {1,2,4} meet at 1; cross lines {0,2,6}, {0,4,5},
  // {2,3,5}, {3,4,6}; the off points 5 and 6 each lie on two of them.
  const VerifiedDesign d(develop(support::fano()));
  std::vector<std::pair<PointIndex, std::uint32_t>> seen;
  GridScratch scratch(7);
  const BlockId b1 = d.line_through(0, 1);
  const BlockId b2 = d.line_through(1, 2);
  scratch.for_each_grid(d, 1, [&](PointIndex z, std::uint32_t n, PointIndex x, PointIndex y) {
    const BlockId bx = d.line_through(1, x);
    const BlockId by = d.line_through(1, y);
    if ((bx == b1 && by == b2) || (bx == b2 && by == b1)) seen.emplace_back(z, n);
  });
  ASSERT_EQ(seen.size(), 4u);
  for (const auto& [z, n] : seen) {
    EXPECT_TRUE(z == 5 || z == 6);
    EXPECT_EQ(n, 2u);
  }
}

TEST(LocalProfiles, Fano) {
  for (const auto& g : local_profiles(VerifiedDesign(develop(support::fano())))) EXPECT_EQ(g.to_string(), "{2=24}");
}

TEST(LocalProfiles, SumToGlobalAndShortcutMatchesExhaustive) {
  for (const auto& d : small_designs()) {
    const VerifiedDesign vd(d);
    const auto locals = local_profiles_exhaustive(vd);
    EXPECT_EQ(sum_profiles(locals), grid_profile(vd));
    EXPECT_EQ(local_profiles(vd), locals);
  }
  const VerifiedDesign big(develop(find_builtin("s2-8-624-2")->family));
  const auto locals = local_profiles_exhaustive(big);
  EXPECT_EQ(local_profiles(big), locals);
  EXPECT_EQ(sum_profiles(locals), grid_profile(big));
  std::set<GridProfile> distinct(locals.begin(), locals.end());
  EXPECT_LE(distinct.size(), 2u);
}

TEST(LocalProfiles, CyclicDesignIsHomogeneous) {
  const VerifiedDesign d(develop(find_builtin("s2-7-505-1")->family).without_cyclic_structure());
  GridScratch scratch(d.v());
  const auto first = local_profile(d, 0, scratch);
  for (PointIndex p = 1; p < d.v(); p += 50) EXPECT_EQ(local_profile(d, p, scratch), first);
}

TEST(GridProfile, MassAndValueRange) {
  for (const auto& d : small_designs()) {
    const auto g = grid_profile(d);
    EXPECT_EQ(g.mass(), expected_profile_mass(d.v(), d.k()));
    for (const auto& [value, count] : g.counts()) {
      EXPECT_GE(value, 1u);
      EXPECT_LE(value, d.k() - 1);
      EXPECT_GT(count, 0u);
    }
  }
  EXPECT_EQ(expected_profile_mass(505, 7), 633754800u);
  EXPECT_EQ(expected_profile_mass(589, 7), 1007826120u);
  EXPECT_EQ(expected_profile_mass(624, 8), 1436827392u);
}

TEST(GridProfile, CatalogMassAndPublishedTables) {
  for (const auto& e : builtin_entries()) {
    const auto d = develop(e.family);
    const auto g = grid_profile(d);
    EXPECT_EQ(g.mass(), expected_profile_mass(d.v(), d.k())) << e.id;
    EXPECT_EQ(g.mass(), e.fingerprint_sum()) << e.id;
    // The published tables list the same counts with value n read as k-1-n.
    EXPECT_EQ(reflected(g, d.k()), published(e)) << e.id << " " << g.to_string();
  }
}

TEST(GridProfile, ThreadCountDoesNotMatter) {
  const auto d = develop(find_builtin("s2-7-589-2")->family).without_cyclic_structure();
  const VerifiedDesign vd(d);
  const auto one = local_profiles_exhaustive(vd, 1);
  EXPECT_EQ(local_profiles_exhaustive(vd, 4), one);
  EXPECT_EQ(grid_profile(VerifiedDesign(develop(find_builtin("s2-7-589-2")->family)), 4), sum_profiles(one));
}

TEST(GridProfile, RelabelInvariance) {
  for (const auto& d : {develop(support::fano()), develop(support::s239())}) {
    const auto g = grid_profile(d);
    for (std::uint64_t seed = 0; seed < 25; ++seed) EXPECT_EQ(grid_profile(relabel(d, support::permutation(d.v(), seed))), g);
  }
  const auto d = develop(find_builtin("s2-7-505-2")->family);
  const auto g = grid_profile(d);
  for (std::uint64_t seed = 0; seed < 2; ++seed) EXPECT_EQ(grid_profile(relabel(d, support::permutation(d.v(), seed))), g);
}

TEST(GridProfile, RejectsInvalidDesign) {
  auto blocks = develop(support::fano()).blocks();
  blocks.pop_back();
  try {
    grid_profile(SteinerDesign(7, 3, blocks));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidDesign);
  }
}

TEST(ProfileDigest, StableAndDiscriminating) {
  const GridProfile fano(Counts{{2, 168}});
  EXPECT_EQ(profile_digest(fano), profile_digest(GridProfile(Counts{{2, 168}})));
  EXPECT_EQ(profile_digest(fano), fnv1a128_hex("2=168"));
  EXPECT_EQ(profile_digest(fano).size(), 32u);
  EXPECT_NE(profile_digest(GridProfile()), profile_digest(GridProfile(Counts{{1, 1}})));
  EXPECT_NE(profile_digest(grid_profile(develop(find_builtin("s2-7-505-1")->family))),
            profile_digest(grid_profile(develop(find_builtin("s2-7-505-2")->family))));
}

TEST(GridProfileType, Serialization) {
  GridProfile g({{5, 475800900}, {1, 15150}, {3, 0}});
  EXPECT_EQ(g.serialize(), "1=15150,5=475800900");
  EXPECT_EQ(g.to_string(), "{1=15150, 5=475800900}");
  EXPECT_EQ(g.count(3), 0u);
  EXPECT_EQ(g.scaled(2).count(1), 30300u);
  EXPECT_EQ(reflected(g, 7).to_string(), "{1=475800900, 5=15150}");
}
