#pragma once

// Partition a collection of designs into isomorphism classes.
//
// Designs are produced on demand by a factory so that large collections never
// sit in memory at once. Pipeline: per-design profile digest and canonical
// hash; buckets by digest; inside a bucket, members are compared in input
// order against the class representatives found so far; finally the
// automorphism group of each class representative is computed.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "steiner/design.hpp"
#include "steiner/hash.hpp"
#include "steiner/invar.hpp"
#include "steiner/isomorph.hpp"
#include "steiner/parallel.hpp"

namespace steiner {

/// 128-bit hex hash of the canonical block list.
inline std::string canonical_hash(const SteinerDesign& d) {
  const SteinerDesign c = d.is_canonical() ? d : d.canonical();
  std::string bytes = std::to_string(c.v()) + ":" + std::to_string(c.k()) + ":";
  const auto flat = c.flat();
  bytes.append(reinterpret_cast<const char*>(flat.data()), flat.size() * sizeof(PointIndex));
  return fnv1a128_hex(bytes);
}

struct IsoClass {
  std::size_t representative = 0;
  std::vector<std::size_t> members;        // input ids, ascending
  std::vector<std::size_t> distinct;       // members with pairwise different block sets
  std::string digest;                      // profile digest shared by all members
  AutReport aut;
};

struct IsoClassReport {
  std::vector<IsoClass> classes;
  std::size_t input_count = 0;
  std::size_t distinct_designs = 0;
  std::vector<std::pair<std::size_t, std::size_t>> unresolved;  // (member, representative)

  /// Automorphism order -> number of classes, largest order first.
  std::vector<std::pair<std::uint64_t, std::size_t>> order_histogram() const {
    std::map<std::uint64_t, std::size_t, std::greater<>> h;
    for (const auto& c : classes) ++h[c.aut.order];
    return {h.begin(), h.end()};
  }

  bool complete() const {
    return unresolved.empty() &&
           std::all_of(classes.begin(), classes.end(), [](const IsoClass& c) { return c.aut.complete; });
  }
};

/// Append-only record of finished work, so an interrupted run can resume.
///   D <id> <digest> <canonical-hash>
///   B <digest> <member>:<class-slot>[,...] [unresolved <member>:<slot>,...]
///   A <representative> <order> <affine> <complete>
class ProgressLog {
 public:
  ProgressLog(std::string path, std::string job_key) : path_(std::move(path)), job_key_(std::move(job_key)) {
    std::ifstream in(path_);
    std::string line;
    bool matched = false;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::string tag;
      ls >> tag;
      if (tag == "H") {
        std::string key;
        ls >> key;
        matched = key == job_key_;
        continue;
      }
      if (!matched) continue;
      if (tag == "D") {
        std::size_t id;
        std::string digest, canon;
        if (ls >> id >> digest >> canon) designs_[id] = {digest, canon};
      } else if (tag == "B") {
        std::string digest;
        ls >> digest;
        std::string rest;
        std::getline(ls, rest);
        buckets_[digest] = rest;
      } else if (tag == "A") {
        std::size_t rep;
        AutReport r;
        int complete = 0;
        if (ls >> rep >> r.order >> r.affine_count >> complete) {
          r.complete = complete != 0;
          auts_[rep] = r;
        }
      }
    }
    if (!matched) {
      std::ofstream out(path_, std::ios::app);
      out << "H " << job_key_ << "\n";
    }
  }

  std::optional<std::pair<std::string, std::string>> design(std::size_t id) const {
    auto it = designs_.find(id);
    if (it == designs_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::string> bucket(const std::string& digest) const {
    auto it = buckets_.find(digest);
    if (it == buckets_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<AutReport> aut(std::size_t rep) const {
    auto it = auts_.find(rep);
    if (it == auts_.end()) return std::nullopt;
    return it->second;
  }

  void record_design(std::size_t id, const std::string& digest, const std::string& canon) {
    append("D " + std::to_string(id) + " " + digest + " " + canon);
  }
  void record_bucket(const std::string& digest, const std::string& body) { append("B " + digest + body); }
  void record_aut(std::size_t rep, const AutReport& r) {
    append("A " + std::to_string(rep) + " " + std::to_string(r.order) + " " + std::to_string(r.affine_count) +
           " " + (r.complete ? "1" : "0"));
  }

 private:
  void append(const std::string& line) {
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    out << line << "\n";
  }

  std::string path_;
  std::string job_key_;
  std::map<std::size_t, std::pair<std::string, std::string>> designs_;
  std::map<std::string, std::string> buckets_;
  std::map<std::size_t, AutReport> auts_;
  std::mutex mutex_;
};

using DesignFactory = std::function<SteinerDesign(std::size_t)>;

namespace detail {

struct BucketResult {
  // slot -> members; slot order is creation order inside the bucket.
  std::vector<std::vector<std::size_t>> slots;
  std::vector<std::vector<std::size_t>> distinct;
  std::vector<std::pair<std::size_t, std::size_t>> unresolved;
};

inline std::string encode_bucket(const BucketResult& r) {
  std::string s;
  bool first = true;
  for (std::size_t slot = 0; slot < r.slots.size(); ++slot) {
    for (std::size_t m : r.slots[slot]) {
      const bool dup = std::find(r.distinct[slot].begin(), r.distinct[slot].end(), m) == r.distinct[slot].end();
      s += (first ? " " : ",") + std::to_string(m) + ":" + std::to_string(slot) + (dup ? "=" : "");
      first = false;
    }
  }
  if (!r.unresolved.empty()) {
    s += " unresolved";
    bool f = true;
    for (const auto& [a, b] : r.unresolved) {
      s += (f ? " " : ",") + std::to_string(a) + ":" + std::to_string(b);
      f = false;
    }
  }
  return s;
}

inline BucketResult decode_bucket(const std::string& body) {
  BucketResult r;
  std::istringstream in(body);
  std::string assignments;
  in >> assignments;
  std::stringstream items(assignments);
  std::string item;
  while (std::getline(items, item, ',')) {
    const auto colon = item.find(':');
    const bool dup = !item.empty() && item.back() == '=';
    const std::size_t m = std::stoull(item.substr(0, colon));
    const std::size_t slot = std::stoull(item.substr(colon + 1, item.size() - colon - 1 - (dup ? 1 : 0)));
    if (r.slots.size() <= slot) {
      r.slots.resize(slot + 1);
      r.distinct.resize(slot + 1);
    }
    r.slots[slot].push_back(m);
    if (!dup) r.distinct[slot].push_back(m);
  }
  std::string tag;
  if (in >> tag && tag == "unresolved") {
    std::string list;
    in >> list;
    std::stringstream us(list);
    while (std::getline(us, item, ',')) {
      const auto colon = item.find(':');
      r.unresolved.emplace_back(std::stoull(item.substr(0, colon)), std::stoull(item.substr(colon + 1)));
    }
  }
  return r;
}

}  // namespace detail

// Leading entries of each representative's canonical block list kept for
// ordering; ties beyond it regenerate both designs.
inline constexpr std::size_t kOrderPrefix = 4096;

struct ClassifyOptions {
  SearchBudget budget;
  unsigned threads = 1;
  ProgressLog* progress = nullptr;
};

/// Classes ordered by the representative's canonical block list; the
/// representative is the member with the smallest canonical block
/// list. The result does not depend on the thread count.
inline IsoClassReport classify(std::size_t count, const DesignFactory& make, const ClassifyOptions& opt = {}) {
  IsoClassReport report;
  report.input_count = count;

  // Phase 1: digests and canonical hashes.
  std::vector<std::string> digests(count);
  std::vector<std::string> canon(count);
  std::optional<std::pair<std::uint32_t, std::uint32_t>> params;
  std::mutex params_mutex;
  parallel_for(count, opt.threads, [&](std::size_t i, unsigned) {
    if (opt.progress) {
      if (auto known = opt.progress->design(i)) {
        digests[i] = known->first;
        canon[i] = known->second;
        return;
      }
    }
    const VerifiedDesign d(make(i));
    {
      std::lock_guard lock(params_mutex);
      if (!params) params.emplace(d.v(), d.k());
      if (*params != std::pair{d.v(), d.k()}) {
        throw Error(ErrorCode::ParameterMismatch, "designs in one classification must share (v, k)");
      }
    }
    digests[i] = profile_digest(grid_profile(d));
    canon[i] = canonical_hash(d.design());
    if (opt.progress) opt.progress->record_design(i, digests[i], canon[i]);
  });

  // Phase 2: buckets, in digest order.
  std::map<std::string, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < count; ++i) buckets[digests[i]].push_back(i);
  std::vector<std::pair<std::string, std::vector<std::size_t>>> bucket_list(buckets.begin(), buckets.end());

  // Phase 3: chain isomorphism tests within each bucket.
  std::vector<detail::BucketResult> results(bucket_list.size());
  parallel_for(bucket_list.size(), opt.threads, [&](std::size_t bi, unsigned) {
    const auto& [digest, ids] = bucket_list[bi];
    if (opt.progress) {
      if (auto known = opt.progress->bucket(digest)) {
        results[bi] = detail::decode_bucket(*known);
        return;
      }
    }
    detail::BucketResult r;
    struct Rep {
      std::size_t id;
      std::unique_ptr<VerifiedDesign> design;
      std::unique_ptr<IsoCandidate> cand;
      std::vector<std::string> hashes;  // canonical hashes of distinct members
    };
    std::vector<Rep> reps;
    for (std::size_t id : ids) {
      // Identical block sets need no search.
      bool placed = false;
      for (std::size_t s = 0; s < reps.size() && !placed; ++s) {
        if (std::find(reps[s].hashes.begin(), reps[s].hashes.end(), canon[id]) != reps[s].hashes.end()) {
          r.slots[s].push_back(id);
          placed = true;
        }
      }
      if (placed) continue;
      auto design = std::make_unique<VerifiedDesign>(make(id));
      auto cand = std::make_unique<IsoCandidate>(*design);
      for (std::size_t s = 0; s < reps.size() && !placed; ++s) {
        const auto res = isomorphism_search(*cand, *reps[s].cand, opt.budget);
        if (res.verdict == IsoVerdict::Isomorphic) {
          if (!maps_blocks(*design, *reps[s].design, *res.map)) {
            throw Error(ErrorCode::InvalidDesign, "isomorphism witness failed re-verification");
          }
          r.slots[s].push_back(id);
          r.distinct[s].push_back(id);
          reps[s].hashes.push_back(canon[id]);
          placed = true;
        } else if (res.verdict == IsoVerdict::Unresolved) {
          r.unresolved.emplace_back(id, reps[s].id);
        }
      }
      if (placed) continue;
      r.slots.push_back({id});
      r.distinct.push_back({id});
      reps.push_back(Rep{id, std::move(design), std::move(cand), {canon[id]}});
    }
    if (opt.progress) opt.progress->record_bucket(digest, detail::encode_bucket(r));
    results[bi] = std::move(r);
  });

  // Representatives: smallest canonical block list among distinct members.
  struct Pending {
    std::string digest;
    std::vector<std::size_t> members;
    std::vector<std::size_t> distinct;
  };
  std::vector<Pending> pending;
  for (std::size_t bi = 0; bi < bucket_list.size(); ++bi) {
    for (std::size_t s = 0; s < results[bi].slots.size(); ++s) {
      Pending p{bucket_list[bi].first, results[bi].slots[s], results[bi].distinct[s]};
      std::sort(p.members.begin(), p.members.end());
      std::sort(p.distinct.begin(), p.distinct.end());
      pending.push_back(std::move(p));
    }
    for (const auto& u : results[bi].unresolved) report.unresolved.push_back(u);
  }

  std::vector<IsoClass> classes(pending.size());
  std::vector<std::vector<PointIndex>> rep_prefix(pending.size());
  parallel_for(pending.size(), opt.threads, [&](std::size_t c, unsigned) {
    auto& p = pending[c];
    std::size_t best = p.distinct.front();
    SteinerDesign best_design = make(best).canonical();
    for (std::size_t j = 1; j < p.distinct.size(); ++j) {
      SteinerDesign cd = make(p.distinct[j]).canonical();
      if (std::lexicographical_compare(cd.flat().begin(), cd.flat().end(), best_design.flat().begin(),
                                       best_design.flat().end())) {
        best = p.distinct[j];
        best_design = std::move(cd);
      }
    }
    classes[c].representative = best;
    classes[c].members = std::move(p.members);
    classes[c].distinct = std::move(p.distinct);
    classes[c].digest = std::move(p.digest);
    const auto flat = best_design.flat();
    rep_prefix[c].assign(flat.begin(), flat.begin() + std::min<std::size_t>(flat.size(), kOrderPrefix));
  });

  // Phase 4: automorphism groups of the representatives.
  parallel_for(classes.size(), opt.threads, [&](std::size_t c, unsigned) {
    const std::size_t rep = classes[c].representative;
    if (opt.progress) {
      if (auto known = opt.progress->aut(rep)) {
        classes[c].aut = *known;
        return;
      }
    }
    const VerifiedDesign d(make(rep));
    classes[c].aut = automorphism_group_order(d, opt.budget);
    if (opt.progress) opt.progress->record_aut(rep, classes[c].aut);
  });

  std::vector<std::size_t> order(classes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rep_prefix[a] != rep_prefix[b]) return rep_prefix[a] < rep_prefix[b];
    // Long common prefix: compare the full canonical block lists.
    const SteinerDesign da = make(classes[a].representative).canonical();
    const SteinerDesign db = make(classes[b].representative).canonical();
    return std::lexicographical_compare(da.flat().begin(), da.flat().end(), db.flat().begin(), db.flat().end());
  });
  for (std::size_t c : order) {
    report.distinct_designs += classes[c].distinct.size();
    report.classes.push_back(std::move(classes[c]));
  }
  std::sort(report.unresolved.begin(), report.unresolved.end());
  return report;
}

inline IsoClassReport classify(const std::vector<SteinerDesign>& designs, const ClassifyOptions& opt = {}) {
  return classify(designs.size(), [&](std::size_t i) { return designs[i]; }, opt);
}

}  // namespace steiner
