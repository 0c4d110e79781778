#pragma once

// Joint mirror enumeration over several families sharing (v, k), followed by
// isomorphism classification of the developments.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "steiner/catalog.hpp"
#include "steiner/classify.hpp"
#include "steiner/diffam.hpp"
#include "steiner/hash.hpp"

namespace steiner {

enum class Tier { Quick, Full };

/// Mirror vectors per family in the quick tier.
inline constexpr std::uint32_t kQuickMirrorsPerFamily = 24;

struct MirrorSource {
  std::string id;
  DifferenceFamily family;  // already expanded
};

struct MirrorOrigin {
  std::size_t source = 0;
  MirrorVector mu;
};

struct MirrorJob {
  std::vector<MirrorSource> sources;
  bool reduce_negation = true;
  Tier tier = Tier::Quick;

  MirrorJob(std::vector<CatalogEntry> entries, bool reduce, Tier t) : reduce_negation(reduce), tier(t) {
    if (entries.empty()) throw Error(ErrorCode::ParameterInfeasible, "no families to mirror");
    for (auto& e : entries) {
      DifferenceFamily f = e.family.multiplier() ? expand(e.family) : e.family;
      if (f.point_count() != sources_point_count(entries.front()) || f.k() != entries.front().family.k()) {
        throw Error(ErrorCode::ParameterMismatch, "families must share (v, k)");
      }
      sources.push_back({e.id, std::move(f)});
    }
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const auto n = static_cast<std::uint32_t>(sources[s].family.mirrorable_indices().size());
      std::uint32_t taken = 0;
      for (MirrorVector mu : mirror_vectors(n, reduce_negation)) {
        if (tier == Tier::Quick && taken == kQuickMirrorsPerFamily) break;
        origins.push_back({s, mu});
        ++taken;
      }
    }
  }

  std::vector<MirrorOrigin> origins;

  SteinerDesign design(std::size_t i) const {
    const auto& o = origins.at(i);
    return develop(mirror(sources[o.source].family, o.mu));
  }

  std::string label(std::size_t i) const {
    const auto& o = origins.at(i);
    return sources[o.source].id + ":" + o.mu.to_string();
  }

  /// Identifies the job in a progress file.
  std::string key() const {
    std::string s = reduce_negation ? "reduced" : "all";
    s += tier == Tier::Full ? ":full" : ":quick";
    for (const auto& src : sources) {
      s += "|" + src.id + ":" + std::to_string(src.family.modulus()) + ":";
      for (const auto& b : src.family.seeds()) s += b.to_string();
    }
    return fnv1a128_hex(s);
  }

 private:
  static std::uint32_t sources_point_count(const CatalogEntry& e) { return e.family.point_count(); }
};

struct MirrorReport {
  std::size_t families = 0;
  std::size_t candidates = 0;
  bool reduce_negation = true;
  Tier tier = Tier::Quick;
  std::uint32_t v = 0;
  std::uint32_t k = 0;
  IsoClassReport classes;
  std::vector<std::string> labels;  // per candidate
};

inline MirrorReport run_mirrors(const MirrorJob& job, const ClassifyOptions& opt) {
  MirrorReport r;
  r.families = job.sources.size();
  r.candidates = job.origins.size();
  r.reduce_negation = job.reduce_negation;
  r.tier = job.tier;
  r.v = job.sources.front().family.point_count();
  r.k = job.sources.front().family.k();
  r.classes = classify(job.origins.size(), [&](std::size_t i) { return job.design(i); }, opt);
  for (std::size_t i = 0; i < job.origins.size(); ++i) r.labels.push_back(job.label(i));
  return r;
}

/// e.g. "832 classes: 2525×16, 505×816"
inline std::string histogram_line(const IsoClassReport& c) {
  std::string s = std::to_string(c.classes.size()) + " classes:";
  bool first = true;
  for (const auto& [order, n] : c.order_histogram()) {
    s += (first ? " " : ", ") + std::to_string(order) + "×" + std::to_string(n);
    first = false;
  }
  return s;
}

/// Notes printed under the histogram for parameters with known quirks in the
/// published tables.
inline std::vector<std::string> report_notes(const MirrorReport& r) {
  std::vector<std::string> notes;
  if (r.v == 589) {
    for (const auto& [order, n] : r.classes.order_histogram()) {
      if (order == 3534) {
        notes.push_back("note: the published split labels these " + std::to_string(n) +
                        " classes with order 3934, which is not a multiple of 589; computed order is 3534 = 6*589");
      }
    }
  }
  if (!r.classes.unresolved.empty()) {
    notes.push_back("warning: " + std::to_string(r.classes.unresolved.size()) +
                    " pair(s) unresolved within the node budget; classes may be split");
  }
  for (const auto& c : r.classes.classes) {
    if (!c.aut.complete) {
      notes.push_back("warning: automorphism search incomplete for " + r.labels[c.representative] +
                      "; order is a lower bound");
    }
  }
  return notes;
}

inline std::string to_text(const MirrorReport& r) {
  std::string s;
  s += "S(2," + std::to_string(r.k) + "," + std::to_string(r.v) + ") mirrors of " + std::to_string(r.families) +
       " famil" + (r.families == 1 ? "y" : "ies") + ", tier " + (r.tier == Tier::Full ? "full" : "quick") + "\n";
  s += "candidates: " + std::to_string(r.candidates) + (r.reduce_negation ? " (negation-reduced)" : "") + "\n";
  s += "distinct designs: " + std::to_string(r.classes.distinct_designs) + "\n";
  s += histogram_line(r.classes) + "\n";
  for (const auto& n : report_notes(r)) s += n + "\n";
  s += "class  size  distinct  aut  affine  representative\n";
  std::size_t idx = 0;
  for (const auto& c : r.classes.classes) {
    s += std::to_string(++idx) + "  " + std::to_string(c.members.size()) + "  " + std::to_string(c.distinct.size()) +
         "  " + std::to_string(c.aut.order) + "  " + std::to_string(c.aut.affine_count) + "  " +
         r.labels[c.representative] + "\n";
  }
  for (const auto& [a, b] : r.classes.unresolved) s += "unresolved " + r.labels[a] + " ~ " + r.labels[b] + "\n";
  return s;
}

inline nlohmann::json to_json(const MirrorReport& r) {
  nlohmann::json j;
  j["v"] = r.v;
  j["k"] = r.k;
  j["families"] = r.families;
  j["tier"] = r.tier == Tier::Full ? "full" : "quick";
  j["negation_reduced"] = r.reduce_negation;
  j["candidates"] = r.candidates;
  j["distinct_designs"] = r.classes.distinct_designs;
  j["class_count"] = r.classes.classes.size();
  j["histogram"] = nlohmann::json::array();
  for (const auto& [order, n] : r.classes.order_histogram()) j["histogram"].push_back({{"order", order}, {"classes", n}});
  j["notes"] = report_notes(r);
  j["classes"] = nlohmann::json::array();
  for (const auto& c : r.classes.classes) {
    nlohmann::json cj;
    cj["representative"] = r.labels[c.representative];
    cj["size"] = c.members.size();
    cj["distinct"] = c.distinct.size();
    cj["aut_order"] = c.aut.order;
    cj["affine_count"] = c.aut.affine_count;
    cj["complete"] = c.aut.complete;
    cj["profile_digest"] = c.digest;
    nlohmann::json members = nlohmann::json::array();
    for (auto m : c.members) members.push_back(r.labels[m]);
    cj["members"] = std::move(members);
    j["classes"].push_back(std::move(cj));
  }
  j["unresolved"] = nlohmann::json::array();
  for (const auto& [a, b] : r.classes.unresolved) j["unresolved"].push_back({r.labels[a], r.labels[b]});
  return j;
}

}  // namespace steiner
