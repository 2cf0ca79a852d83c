#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "ps/random.hpp"

namespace ps {

using ClipId = std::uint32_t;
using ActionId = std::uint32_t;

/// One category slot of a percept or wildcard clip: an explicit value or `#`.
class Slot {
 public:
  constexpr Slot() = default;
  constexpr explicit Slot(std::uint64_t value) : raw_(value) {}
  static constexpr Slot wildcard() { return Slot(kWildcardRaw); }

  constexpr bool is_wildcard() const { return raw_ == kWildcardRaw; }
  constexpr std::uint64_t value() const { return raw_; }

  friend constexpr auto operator<=>(Slot, Slot) = default;

 private:
  static constexpr std::uint64_t kWildcardRaw = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t raw_ = 0;
};

/// K slots. A percept has no wildcard slots.
using Pattern = std::vector<Slot>;

/// Builds a percept pattern from plain category values.
Pattern make_percept(std::initializer_list<std::uint64_t> values);

std::size_t wildcard_count(const Pattern& pattern);

enum class ClipKind : std::uint8_t { Percept, Wildcard, Action };

struct Clip {
  ClipKind kind = ClipKind::Percept;
  Pattern slots;       // empty for action clips
  ActionId action = 0; // meaningful for action clips only
  int layer = 0;       // number of wildcard slots; 0 for percepts and actions

  static Clip percept(Pattern slots);
  static Clip wildcard(Pattern slots);
  static Clip action_clip(ActionId action);

  bool is_action() const { return kind == ClipKind::Action; }
};

struct Edge {
  ClipId target;
  double h;
};

struct PathEdge {
  ClipId source;
  ClipId target;
  friend bool operator==(const PathEdge&, const PathEdge&) = default;
};

/// Edges traversed by one deliberation, percept clip first, action clip last.
using WalkPath = std::vector<PathEdge>;

struct WalkResult {
  ActionId action = 0;
  WalkPath path;
};

/// What add_percept changed.
struct AddReport {
  ClipId percept = 0;
  bool created = false;
  std::vector<ClipId> new_clips;  // the percept (if new) followed by new wildcards
  std::vector<PathEdge> new_edges;
};

/// `higher` generalizes `lower`: strictly more wildcard slots, and each
/// explicit slot of `higher` equals the same slot of `lower`.
bool matches(const Pattern& lower, const Pattern& higher);
bool matches(const Clip& lower, const Clip& higher);

/// The wildcard with `#` exactly where the two percepts differ, or nullopt if
/// they are equal.
std::optional<Pattern> wildcard_from_pair(const Pattern& p, const Pattern& q);
std::optional<Clip> wildcard_from_pair(const Clip& p, const Clip& q);

/// Episodic and compositional memory: a layered DAG of percept, wildcard and
/// action clips with h-valued edges.
///
/// Action clips occupy ids [0, n) so that `ClipId == ActionId` for them.
/// Out-edges of a clip are kept in creation order, which fixes the sampling
/// order of random walks.
class ClipNetwork {
 public:
  ClipNetwork(std::size_t categories, std::size_t actions, double h0 = 1.0);

  std::size_t categories() const { return categories_; }
  std::size_t action_count() const { return actions_; }
  double h0() const { return h0_; }

  std::size_t clip_count() const { return clips_.size(); }
  std::size_t edge_count() const { return edge_count_; }
  std::size_t percept_count() const { return percepts_.size(); }
  std::size_t wildcard_count() const { return wildcards_.size(); }

  const Clip& clip(ClipId id) const { return clips_.at(id); }
  std::span<const Edge> edges(ClipId id) const { return edges_.at(id); }
  std::span<const ClipId> percept_ids() const { return percepts_; }
  std::span<const ClipId> wildcard_ids() const { return wildcards_; }

  std::optional<ClipId> find(const Pattern& slots) const;
  std::optional<double> h(ClipId source, ClipId target) const;

  /// Adds a percept with the generalization machinery: creates the percept
  /// clip, one wildcard per differing existing percept, and wires every new
  /// `matches` pair. Idempotent for known percepts.
  AddReport add_percept(const Pattern& percept);

  /// Adds a percept wired only to the action clips (basic two-layer agent).
  AddReport add_plain_percept(const Pattern& percept);

  /// Hop probabilities over `edges(id)`, in the same order.
  std::vector<double> hop_distribution(ClipId id) const;

  /// Damps every edge by `h <- h - damping * (h - 1)`, then adds `reward` to
  /// the edges of `path`.
  void update_weights(const WalkPath& path, double reward, double damping);

 private:
  ClipId insert_clip(Clip clip);
  bool add_edge_if_absent(ClipId source, ClipId target, AddReport& report);
  void wire_to_actions(ClipId id, AddReport& report);
  std::vector<std::uint64_t> new_wildcard_masks(const Pattern& percept) const;
  void index_percept(const Pattern& percept);

  struct PatternHash {
    std::size_t operator()(const Pattern& p) const noexcept;
  };
  // Above this many categories the projection index (2^K entries per
  // percept) gives way to a pairwise scan over known percepts.
  static constexpr std::size_t kMaxIndexedCategories = 10;
  // [mask, values at the set bits of mask..., zero padding]
  using ProjectionKey = std::array<std::uint64_t, kMaxIndexedCategories + 1>;

  struct KeyHash {
    std::size_t operator()(const ProjectionKey& key) const noexcept;
  };

  std::size_t categories_;
  std::size_t actions_;
  double h0_;

  std::vector<Clip> clips_;
  std::vector<std::vector<Edge>> edges_;
  std::size_t edge_count_ = 0;
  std::vector<ClipId> percepts_;
  std::vector<ClipId> wildcards_;
  absl::flat_hash_map<Pattern, ClipId, PatternHash> lookup_;

  // For every subset B of categories, the number of known percepts with each
  // projection onto B.
  absl::flat_hash_map<ProjectionKey, std::uint32_t, KeyHash> projection_counts_;
};

/// Samples one hop target from `from` with probability proportional to h.
ClipId sample_hop(const ClipNetwork& net, ClipId from, Rng& rng);

/// Hops from `start` until an action clip is reached.
WalkResult random_walk(const ClipNetwork& net, ClipId start, Rng& rng);

/// Runs `rounds` (odd) independent walks and returns the modal action, ties
/// going to the lowest action id. The returned path is that of the last walk
/// that ended in the winning action.
WalkResult majority_vote(const ClipNetwork& net, ClipId start, Rng& rng, int rounds);

/// Plain-text dump: `clip <id> <kind> <slots|action>` lines then
/// `edge <src> <dst> <h>` lines, each sorted by id, h with 17 significant digits.
void write_snapshot(std::ostream& out, const ClipNetwork& net);

}  // namespace ps
