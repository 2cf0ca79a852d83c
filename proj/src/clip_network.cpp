#include "ps/clip_network.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ps/error.hpp"

namespace ps {
namespace {

Pattern with_wildcards(const Pattern& base, std::uint64_t mask) {
  Pattern out = base;
  for (std::size_t k = 0; k < out.size(); ++k) {
    if (mask & (std::uint64_t{1} << k)) out[k] = Slot::wildcard();
  }
  return out;
}

template <typename Key>
Key projection_key(const Pattern& p, std::uint64_t mask) {
  Key key{};
  key[0] = mask;
  std::size_t next = 1;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (mask & (std::uint64_t{1} << k)) key[next++] = p[k].value();
  }
  return key;
}

void require_percept(const Pattern& p, std::size_t categories) {
  require(p.size() == categories, "percept arity differs from the network's category count");
  require(wildcard_count(p) == 0, "percept must not contain wildcard slots");
}

}  // namespace

Pattern make_percept(std::initializer_list<std::uint64_t> values) {
  Pattern p;
  p.reserve(values.size());
  for (auto v : values) p.emplace_back(v);
  return p;
}

std::size_t wildcard_count(const Pattern& pattern) {
  return static_cast<std::size_t>(
      std::count_if(pattern.begin(), pattern.end(), [](Slot s) { return s.is_wildcard(); }));
}

Clip Clip::percept(Pattern slots) {
  require(wildcard_count(slots) == 0, "percept clip must not contain wildcard slots");
  return Clip{ClipKind::Percept, std::move(slots), 0, 0};
}

Clip Clip::wildcard(Pattern slots) {
  const auto layer = static_cast<int>(wildcard_count(slots));
  require(layer >= 1, "wildcard clip needs at least one wildcard slot");
  return Clip{ClipKind::Wildcard, std::move(slots), 0, layer};
}

Clip Clip::action_clip(ActionId action) { return Clip{ClipKind::Action, {}, action, 0}; }

bool matches(const Pattern& lower, const Pattern& higher) {
  require(lower.size() == higher.size(), "matches: category counts differ");
  std::size_t lower_wild = 0;
  std::size_t higher_wild = 0;
  for (std::size_t k = 0; k < lower.size(); ++k) {
    if (lower[k].is_wildcard()) ++lower_wild;
    if (higher[k].is_wildcard()) {
      ++higher_wild;
    } else if (higher[k] != lower[k]) {
      return false;
    }
  }
  return higher_wild > lower_wild;
}

bool matches(const Clip& lower, const Clip& higher) {
  require(!lower.is_action() && !higher.is_action(), "matches: action clips have no slots");
  return matches(lower.slots, higher.slots);
}

std::optional<Pattern> wildcard_from_pair(const Pattern& p, const Pattern& q) {
  require(p.size() == q.size(), "wildcard_from_pair: category counts differ");
  Pattern out = p;
  bool differs = false;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] != q[k]) {
      out[k] = Slot::wildcard();
      differs = true;
    }
  }
  if (!differs) return std::nullopt;
  return out;
}

std::optional<Clip> wildcard_from_pair(const Clip& p, const Clip& q) {
  require(p.kind == ClipKind::Percept && q.kind == ClipKind::Percept,
          "wildcard_from_pair: both clips must be percepts");
  auto slots = wildcard_from_pair(p.slots, q.slots);
  if (!slots) return std::nullopt;
  return Clip::wildcard(std::move(*slots));
}

namespace {

std::uint64_t mix_word(std::uint64_t h, std::uint64_t v) {
  return std::rotl((h ^ v) * 0x9E3779B97F4A7C15ULL, 29);
}

}  // namespace

std::size_t ClipNetwork::PatternHash::operator()(const Pattern& p) const noexcept {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (Slot s : p) h = mix_word(h, s.value());
  return static_cast<std::size_t>(splitmix64(h));
}

std::size_t ClipNetwork::KeyHash::operator()(const ProjectionKey& key) const noexcept {
  // Words past the projected values are zero padding.
  const auto used = 1 + static_cast<std::size_t>(std::popcount(key[0]));
  std::uint64_t h = 0x13198A2E03707344ULL;
  for (std::size_t i = 0; i < used; ++i) h = mix_word(h, key[i]);
  return static_cast<std::size_t>(splitmix64(h));
}

ClipNetwork::ClipNetwork(std::size_t categories, std::size_t actions, double h0)
    : categories_(categories), actions_(actions), h0_(h0) {
  require(categories >= 1 && categories <= 64, "category count must be in [1, 64]");
  require(actions >= 1, "network needs at least one action");
  require(h0 > 0.0 && std::isfinite(h0), "h0 must be positive and finite");
  for (std::size_t a = 0; a < actions; ++a) insert_clip(Clip::action_clip(static_cast<ActionId>(a)));
}

std::optional<ClipId> ClipNetwork::find(const Pattern& slots) const {
  auto it = lookup_.find(slots);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<double> ClipNetwork::h(ClipId source, ClipId target) const {
  for (const Edge& e : edges_.at(source)) {
    if (e.target == target) return e.h;
  }
  return std::nullopt;
}

ClipId ClipNetwork::insert_clip(Clip clip) {
  const auto id = static_cast<ClipId>(clips_.size());
  if (clip.kind == ClipKind::Percept) percepts_.push_back(id);
  if (clip.kind == ClipKind::Wildcard) wildcards_.push_back(id);
  if (!clip.is_action()) lookup_.emplace(clip.slots, id);
  clips_.push_back(std::move(clip));
  edges_.emplace_back();
  return id;
}

bool ClipNetwork::add_edge_if_absent(ClipId source, ClipId target, AddReport& report) {
  auto& out = edges_[source];
  for (const Edge& e : out) {
    if (e.target == target) return false;
  }
  out.push_back(Edge{target, h0_});
  ++edge_count_;
  report.new_edges.push_back(PathEdge{source, target});
  return true;
}

void ClipNetwork::wire_to_actions(ClipId id, AddReport& report) {
  auto& out = edges_[id];
  out.reserve(out.size() + actions_);
  for (std::size_t a = 0; a < actions_; ++a) {
    out.push_back(Edge{static_cast<ClipId>(a), h0_});
    report.new_edges.push_back(PathEdge{id, static_cast<ClipId>(a)});
  }
  edge_count_ += actions_;
}

// Masks of the wildcards that pairing `percept` with each known percept would
// produce and that do not exist yet, ascending.
std::vector<std::uint64_t> ClipNetwork::new_wildcard_masks(const Pattern& percept) const {
  std::vector<std::uint64_t> masks;
  if (categories_ > kMaxIndexedCategories) {
    for (ClipId q : percepts_) {
      std::uint64_t mask = 0;
      const Pattern& other = clips_[q].slots;
      for (std::size_t k = 0; k < categories_; ++k) {
        if (other[k] != percept[k]) mask |= std::uint64_t{1} << k;
      }
      masks.push_back(mask);
    }
    std::sort(masks.begin(), masks.end());
    masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
    std::erase_if(masks, [&](std::uint64_t m) { return m == 0 || find(with_wildcards(percept, m)); });
    return masks;
  }

  // A known percept differs from `percept` exactly on M iff it agrees exactly
  // on A = ~M. Count those by inclusion-exclusion over supersets of A.
  const std::uint64_t full = (std::uint64_t{1} << categories_) - 1;
  auto count = [&](std::uint64_t agree) -> std::int64_t {
    auto it = projection_counts_.find(projection_key<ProjectionKey>(percept, agree));
    return it == projection_counts_.end() ? 0 : it->second;
  };
  Pattern probe = percept;
  for (std::uint64_t m = 1; m <= full; ++m) {
    for (std::size_t k = 0; k < categories_; ++k) {
      probe[k] = (m & (std::uint64_t{1} << k)) ? Slot::wildcard() : percept[k];
    }
    if (find(probe)) continue;
    const std::uint64_t agree = full & ~m;
    if (count(agree) == 0) continue;
    std::int64_t exact = 0;
    // Walk every submask `sub` of m, including 0.
    for (std::uint64_t sub = m;; sub = (sub - 1) & m) {
      const std::int64_t c = count(agree | sub);
      exact += (std::popcount(sub) % 2 == 0) ? c : -c;
      if (sub == 0) break;
    }
    if (exact > 0) masks.push_back(m);
  }
  return masks;
}

void ClipNetwork::index_percept(const Pattern& percept) {
  if (categories_ > kMaxIndexedCategories) return;
  const std::uint64_t full = (std::uint64_t{1} << categories_) - 1;
  for (std::uint64_t b = 0; b <= full; ++b) ++projection_counts_[projection_key<ProjectionKey>(percept, b)];
}

AddReport ClipNetwork::add_percept(const Pattern& percept) {
  require_percept(percept, categories_);
  AddReport report;
  if (auto existing = find(percept)) {
    report.percept = *existing;
    return report;
  }

  const auto masks = new_wildcard_masks(percept);

  const ClipId pid = insert_clip(Clip::percept(percept));
  report.percept = pid;
  report.created = true;
  report.new_clips.reserve(1 + masks.size());
  report.new_edges.reserve((1 + masks.size()) * (actions_ + 2) + wildcards_.size());
  report.new_clips.push_back(pid);
  wire_to_actions(pid, report);
  index_percept(percept);

  std::vector<ClipId> fresh;
  fresh.reserve(masks.size());
  for (std::uint64_t m : masks) {
    const ClipId wid = insert_clip(Clip::wildcard(with_wildcards(percept, m)));
    wire_to_actions(wid, report);
    fresh.push_back(wid);
    report.new_clips.push_back(wid);
  }

  for (ClipId w : wildcards_) {
    if (matches(clips_[pid].slots, clips_[w].slots)) add_edge_if_absent(pid, w, report);
  }
  for (ClipId w : fresh) {
    const Pattern& ws = clips_[w].slots;
    for (ClipId q : percepts_) {
      if (q != pid && matches(clips_[q].slots, ws)) add_edge_if_absent(q, w, report);
    }
    for (ClipId u : wildcards_) {
      const Pattern& us = clips_[u].slots;
      if (matches(us, ws)) add_edge_if_absent(u, w, report);
      if (matches(ws, us)) add_edge_if_absent(w, u, report);
    }
  }
  return report;
}

AddReport ClipNetwork::add_plain_percept(const Pattern& percept) {
  require_percept(percept, categories_);
  AddReport report;
  if (auto existing = find(percept)) {
    report.percept = *existing;
    return report;
  }
  const ClipId pid = insert_clip(Clip::percept(percept));
  report.percept = pid;
  report.created = true;
  report.new_clips.push_back(pid);
  wire_to_actions(pid, report);
  return report;
}

std::vector<double> ClipNetwork::hop_distribution(ClipId id) const {
  const auto& out = edges_.at(id);
  require(!out.empty(), "hop_distribution: clip has no out-edges");
  double total = 0.0;
  for (const Edge& e : out) total += e.h;
  std::vector<double> p;
  p.reserve(out.size());
  for (const Edge& e : out) p.push_back(e.h / total);
  return p;
}

void ClipNetwork::update_weights(const WalkPath& path, double reward, double damping) {
  require(reward >= 0.0, "reward must be non-negative");
  require(damping >= 0.0 && damping <= 1.0, "damping must be in [0, 1]");
  std::vector<Edge*> traversed;
  traversed.reserve(path.size());
  for (const PathEdge& pe : path) {
    require(pe.source < edges_.size(), "path references an unknown clip");
    Edge* hit = nullptr;
    for (Edge& e : edges_[pe.source]) {
      if (e.target == pe.target) {
        hit = &e;
        break;
      }
    }
    require(hit != nullptr, "path references an edge that is not in the network");
    traversed.push_back(hit);
  }
  if (damping > 0.0) {
    for (auto& out : edges_) {
      for (Edge& e : out) e.h -= damping * (e.h - 1.0);
    }
  }
  for (Edge* e : traversed) e->h += reward;
}

ClipId sample_hop(const ClipNetwork& net, ClipId from, Rng& rng) {
  const auto out = net.edges(from);
  require(!out.empty(), "sample_hop: clip has no out-edges");
  double total = 0.0;
  for (const Edge& e : out) total += e.h;
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  for (const Edge& e : out) {
    acc += e.h;
    if (u < acc) return e.target;
  }
  return out.back().target;
}

WalkResult random_walk(const ClipNetwork& net, ClipId start, Rng& rng) {
  require(start < net.clip_count() && !net.clip(start).is_action(),
          "random_walk must start at a percept or wildcard clip");
  WalkResult result;
  ClipId current = start;
  while (!net.clip(current).is_action()) {
    const ClipId next = sample_hop(net, current, rng);
    result.path.push_back(PathEdge{current, next});
    current = next;
  }
  result.action = net.clip(current).action;
  return result;
}

WalkResult majority_vote(const ClipNetwork& net, ClipId start, Rng& rng, int rounds) {
  require(rounds >= 1 && rounds % 2 == 1, "majority vote needs an odd, positive number of walks");
  std::vector<int> votes(net.action_count(), 0);
  std::vector<WalkPath> last_path(net.action_count());
  for (int r = 0; r < rounds; ++r) {
    auto walk = random_walk(net, start, rng);
    ++votes[walk.action];
    last_path[walk.action] = std::move(walk.path);
  }
  const auto winner = static_cast<ActionId>(std::max_element(votes.begin(), votes.end()) - votes.begin());
  return WalkResult{winner, std::move(last_path[winner])};
}

void write_snapshot(std::ostream& out, const ClipNetwork& net) {
  for (ClipId id = 0; id < net.clip_count(); ++id) {
    const Clip& c = net.clip(id);
    out << "clip " << id << ' ';
    if (c.is_action()) {
      out << "action " << c.action << '\n';
      continue;
    }
    out << (c.kind == ClipKind::Percept ? "percept " : "wildcard ");
    for (std::size_t k = 0; k < c.slots.size(); ++k) {
      if (k) out << ',';
      if (c.slots[k].is_wildcard()) {
        out << '#';
      } else {
        out << c.slots[k].value();
      }
    }
    out << '\n';
  }
  char buf[64];
  for (ClipId id = 0; id < net.clip_count(); ++id) {
    std::vector<Edge> sorted(net.edges(id).begin(), net.edges(id).end());
    std::sort(sorted.begin(), sorted.end(), [](const Edge& a, const Edge& b) { return a.target < b.target; });
    for (const Edge& e : sorted) {
      std::snprintf(buf, sizeof buf, "%.17g", e.h);
      out << "edge " << id << ' ' << e.target << ' ' << buf << '\n';
    }
  }
}

}  // namespace ps
