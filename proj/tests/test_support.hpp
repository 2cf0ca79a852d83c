#pragma once

// Test-only oracles: an exhaustive structural checker and a naive reference
// construction of the clip set, both independent of ClipNetwork's indexing.

#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ps/clip_network.hpp"

namespace ps::testing {

inline std::string describe(const Pattern& p) {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) os << ',';
    if (p[k].is_wildcard()) {
      os << '#';
    } else {
      os << p[k].value();
    }
  }
  os << ')';
  return os.str();
}

/// O(#clips^2) scan of every network invariant. Returns the violations found.
inline std::vector<std::string> check_network(const ClipNetwork& net, double normalization_tol = 1e-12,
                                              bool expect_floor_one = true) {
  std::vector<std::string> errors;
  const std::size_t n = net.action_count();
  std::set<std::pair<int, Pattern>> seen;
  for (ClipId id = 0; id < net.clip_count(); ++id) {
    const Clip& c = net.clip(id);
    if (c.is_action()) {
      if (c.action != id) errors.push_back("action clip id mismatch");
      if (!net.edges(id).empty()) errors.push_back("action clip has out-edges");
      continue;
    }
    if (c.slots.size() != net.categories()) errors.push_back("clip arity mismatch");
    if (static_cast<std::size_t>(c.layer) != wildcard_count(c.slots)) errors.push_back("layer != wildcard count");
    if (c.kind == ClipKind::Percept && c.layer != 0) errors.push_back("percept with wildcard");
    if (c.kind == ClipKind::Wildcard && c.layer < 1) errors.push_back("wildcard without wildcard slot");
    if (!seen.insert({static_cast<int>(c.kind), c.slots}).second) errors.push_back("duplicate clip " + describe(c.slots));

    std::set<ClipId> targets;
    double total = 0.0;
    for (const Edge& e : net.edges(id)) {
      if (!targets.insert(e.target).second) errors.push_back("duplicate edge");
      if (!(e.h > 0.0)) errors.push_back("non-positive h");
      if (expect_floor_one && e.h < 1.0) errors.push_back("h below 1");
      const Clip& t = net.clip(e.target);
      if (!t.is_action() && t.layer <= c.layer) errors.push_back("edge does not climb layers");
      if (!t.is_action() && !matches(c, t)) errors.push_back("edge to non-matching clip");
      total += e.h;
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (!targets.count(static_cast<ClipId>(a))) errors.push_back("missing action edge from " + describe(c.slots));
    }
    for (ClipId other = 0; other < net.clip_count(); ++other) {
      const Clip& o = net.clip(other);
      if (o.is_action() || other == id) continue;
      if (matches(c, o) && !targets.count(other)) {
        errors.push_back("closure: missing " + describe(c.slots) + " -> " + describe(o.slots));
      }
    }
    if (!net.edges(id).empty()) {
      double sum = 0.0;
      for (double p : net.hop_distribution(id)) sum += p;
      if (std::abs(sum - 1.0) > normalization_tol) errors.push_back("hop distribution not normalized");
    }
  }
  return errors;
}

/// Naive wildcard construction: compare each new percept with every earlier
/// one, literally, and collect the clips that should exist.
class ReferenceClips {
 public:
  void add(const Pattern& percept) {
    if (percepts_.count(percept)) return;
    for (const Pattern& q : percepts_) {
      Pattern w = percept;
      for (std::size_t k = 0; k < w.size(); ++k) {
        if (q[k] != percept[k]) w[k] = Slot::wildcard();
      }
      wildcards_.insert(w);
    }
    percepts_.insert(percept);
  }
  const std::set<Pattern>& percepts() const { return percepts_; }
  const std::set<Pattern>& wildcards() const { return wildcards_; }

 private:
  std::set<Pattern> percepts_;
  std::set<Pattern> wildcards_;
};

inline std::set<Pattern> clip_patterns(const ClipNetwork& net, ClipKind kind) {
  std::set<Pattern> out;
  for (ClipId id = 0; id < net.clip_count(); ++id) {
    if (net.clip(id).kind == kind) out.insert(net.clip(id).slots);
  }
  return out;
}

}  // namespace ps::testing
