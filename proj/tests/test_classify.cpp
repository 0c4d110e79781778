#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <random>
#include <set>

#include "steiner/classify.hpp"
#include "steiner/mirrors.hpp"
#include "support.hpp"

using namespace steiner;

namespace {

std::vector<SteinerDesign> sts13_collection() {
  std::vector<SteinerDesign> out;
  for (const auto& f : brute_force_families(13, 3))
    for (auto mu : mirror_vectors(2, false)) out.push_back(develop(mirror(f, mu)));
  const std::size_t n = out.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back(relabel(out[i], support::permutation(13, 40 + i)));
  return out;
}

/// The partition as a set of sets of canonical designs.
std::set<std::set<std::vector<PointIndex>>> partition(const IsoClassReport& r, const std::vector<SteinerDesign>& ds) {
  std::set<std::set<std::vector<PointIndex>>> out;
  for (const auto& c : r.classes) {
    std::set<std::vector<PointIndex>> s;
    for (auto m : c.members) {
      const auto canon = ds[m].canonical();
      const auto flat = canon.flat();
      s.insert({flat.begin(), flat.end()});
    }
    out.insert(s);
  }
  return out;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("steiner_classify_" + name)).string();
}

}  // namespace

TEST(Classify, FanoMirrorsFormOneClass) {
  const auto f = support::fano();
  const std::vector<SteinerDesign> ds{develop(mirror(f, MirrorVector(0, 1))), develop(mirror(f, MirrorVector(1, 1)))};
  ASSERT_NE(ds[0], ds[1]);
  const auto r = classify(ds);
  ASSERT_EQ(r.classes.size(), 1u);
  EXPECT_EQ(r.classes[0].members, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.classes[0].aut.order, 168u);
  EXPECT_EQ(r.distinct_designs, 2u);
  EXPECT_EQ(r.input_count, 2u);
  EXPECT_TRUE(r.complete());
}

TEST(Classify, PartitionCoversInputAndDedupsIdenticalDesigns) {
  auto ds = sts13_collection();
  ds.push_back(ds[0]);
  const auto r = classify(ds);
  std::size_t total = 0;
  std::set<std::size_t> seen;
  for (const auto& c : r.classes) {
    total += c.members.size();
    for (auto m : c.members) EXPECT_TRUE(seen.insert(m).second);
    EXPECT_TRUE(std::is_sorted(c.members.begin(), c.members.end()));
  }
  EXPECT_EQ(total, ds.size());
  std::set<std::set<oracle::Block>> block_sets;
  for (const auto& d : ds) block_sets.insert(oracle::block_set(support::blocks_of(d)));
  EXPECT_EQ(r.distinct_designs, block_sets.size());
  EXPECT_LT(r.distinct_designs, ds.size());
  // Members match their representative; representatives are pairwise distinct.
  for (const auto& c : r.classes)
    for (auto m : c.members)
      EXPECT_TRUE(are_isomorphic(VerifiedDesign(ds[c.representative]), VerifiedDesign(ds[m])));
  for (std::size_t a = 0; a < r.classes.size(); ++a)
    for (std::size_t b = a + 1; b < r.classes.size(); ++b)
      EXPECT_FALSE(are_isomorphic(VerifiedDesign(ds[r.classes[a].representative]),
                                  VerifiedDesign(ds[r.classes[b].representative])));
}

TEST(Classify, IndependentOfInputOrderAndThreads) {
  const auto ds = sts13_collection();
  const auto base = classify(ds);
  auto shuffled = ds;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto other = classify(shuffled, ClassifyOptions{{}, 3, nullptr});
  EXPECT_EQ(partition(base, ds), partition(other, shuffled));
  // Representatives are canonical, so they coincide as designs.
  ASSERT_EQ(base.classes.size(), other.classes.size());
  for (std::size_t c = 0; c < base.classes.size(); ++c) {
    EXPECT_EQ(ds[base.classes[c].representative], shuffled[other.classes[c].representative]);
    EXPECT_EQ(base.classes[c].aut.order, other.classes[c].aut.order);
  }
}

TEST(Classify, MixedParametersRejected) {
  const std::vector<SteinerDesign> ds{develop(support::fano()), develop(support::s239())};
  try {
    classify(ds);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParameterMismatch);
  }
}

TEST(Classify, UnresolvedPairsStaySeparate) {
  const auto d = develop(support::fano());
  const std::vector<SteinerDesign> ds{d, relabel(d, support::permutation(7, 2))};
  ASSERT_NE(ds[0], ds[1]);
  ClassifyOptions opt;
  opt.budget = SearchBudget{0};
  const auto r = classify(ds, opt);
  EXPECT_EQ(r.classes.size(), 2u);
  ASSERT_EQ(r.unresolved.size(), 1u);
  EXPECT_FALSE(r.complete());
}

TEST(MirrorPipeline, QuickTierDeterministicAcrossThreads) {
  std::vector<CatalogEntry> es{*find_builtin("s2-7-505-1"), *find_builtin("s2-7-505-2")};
  const MirrorJob job(es, true, Tier::Quick);
  EXPECT_EQ(job.origins.size(), 2 * kQuickMirrorsPerFamily);
  const auto one = run_mirrors(job, ClassifyOptions{{}, 1, nullptr});
  const auto four = run_mirrors(job, ClassifyOptions{{}, 4, nullptr});
  EXPECT_EQ(to_text(one), to_text(four));
  EXPECT_EQ(to_json(one).dump(), to_json(four).dump());
  EXPECT_TRUE(one.classes.complete());
  for (const auto& c : one.classes.classes) {
    EXPECT_EQ(c.aut.order % 505, 0u);
    EXPECT_EQ(c.aut.order, c.aut.affine_count);
  }
}

TEST(MirrorPipeline, JobShapes) {
  const MirrorJob full624({*find_builtin("s2-8-624-1")}, true, Tier::Full);
  EXPECT_EQ(full624.origins.size(), 1024u);
  const MirrorJob all624({*find_builtin("s2-8-624-1")}, false, Tier::Full);
  EXPECT_EQ(all624.origins.size(), 2048u);
  EXPECT_EQ(all624.label(3), "s2-8-624-1:00000000011");
  EXPECT_THROW(MirrorJob({*find_builtin("s2-8-624-1"), *find_builtin("s2-7-505-1")}, true, Tier::Quick), Error);
  EXPECT_NE(full624.key(), all624.key());
}

TEST(MirrorPipeline, ProgressFileResumes) {
  const auto path = tmp_path("progress.log");
  std::remove(path.c_str());
  const MirrorJob job({*find_builtin("s2-7-589-1")}, true, Tier::Quick);
  std::string first;
  {
    ProgressLog log(path, job.key());
    first = to_text(run_mirrors(job, ClassifyOptions{{}, 1, &log}));
  }
  // With a zero budget every search would come back unresolved, so an equal
  // report shows the buckets and groups were read back from the log.
  ProgressLog log(path, job.key());
  ClassifyOptions opt{SearchBudget{0}, 1, &log};
  const auto resumed = classify(job.origins.size(), [&](std::size_t i) { return job.design(i); }, opt);
  MirrorReport r;
  r.families = 1;
  r.candidates = job.origins.size();
  r.v = 589;
  r.k = 7;
  r.classes = resumed;
  for (std::size_t i = 0; i < job.origins.size(); ++i) r.labels.push_back(job.label(i));
  EXPECT_EQ(to_text(r), first);
  EXPECT_TRUE(resumed.complete());
  std::remove(path.c_str());
}

TEST(MirrorPipeline, ReportNotes) {
  MirrorReport r;
  r.v = 589;
  r.k = 7;
  IsoClass c;
  c.aut.order = 3534;
  c.members = {0};
  r.classes.classes.push_back(c);
  r.labels = {"x"};
  EXPECT_EQ(histogram_line(r.classes), "1 classes: 3534×1");
  const auto notes = report_notes(r);
  ASSERT_EQ(notes.size(), 1u);
  EXPECT_NE(notes[0].find("3934"), std::string::npos);
}
