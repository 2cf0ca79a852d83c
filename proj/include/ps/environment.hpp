#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ps/clip_network.hpp"
#include "ps/random.hpp"

namespace ps {

enum class Variant { Driver, NeverendingColor, AllIrrelevant };

// Driver encoding: category 0 is the arrow, category 1 the light color.
namespace driver {
inline constexpr std::uint64_t kLeft = 0;
inline constexpr std::uint64_t kRight = 1;
inline constexpr std::uint64_t kGreen = 0;
inline constexpr std::uint64_t kRed = 1;
inline constexpr ActionId kDrive = 0;
inline constexpr ActionId kStop = 1;
}  // namespace driver

enum class DriverRule {
  StopOnRed,    // (a) stop at red, drive at green
  DriveOnRed,   // (b) the opposite
  FollowArrow,  // (c) drive on left arrows, stop on right arrows
  AlwaysDrive,  // (d) drive whatever the signal
};

struct Phase {
  std::uint64_t first;  // inclusive
  std::uint64_t last;   // inclusive
  DriverRule rule;
};

/// Task description. Neverending-color and all-irrelevant percepts are
/// (arrow, color, extra...) with a never-repeating color and extra categories
/// drawn uniformly from `extra_cardinalities`.
struct EnvironmentSpec {
  Variant variant = Variant::NeverendingColor;
  std::size_t actions = 2;
  std::size_t categories = 2;
  double reward = 1.0;
  std::vector<Phase> phases;                       // Driver only
  std::vector<std::uint64_t> extra_cardinalities;  // categories 2..K-1

  static EnvironmentSpec driver(double reward, std::uint64_t phase_length = 1000);
  static EnvironmentSpec neverending_color(std::size_t actions, std::size_t categories, double reward);
  static EnvironmentSpec all_irrelevant(std::size_t actions, std::size_t categories, double reward);

  void validate() const;
  /// Last time step covered by the schedule (Driver); 0 for unbounded variants.
  std::uint64_t horizon() const;
};

/// Action rewarded by the all-irrelevant variant.
inline constexpr ActionId kAllIrrelevantAction = 0;

struct EnvironmentStep {
  std::uint64_t t;
  Pattern percept;
  ActionId action;
  double reward;
};

class Environment {
 public:
  explicit Environment(EnvironmentSpec spec);

  const EnvironmentSpec& spec() const { return spec_; }

  Pattern next_percept(std::uint64_t t, Rng& rng);
  ActionId rewarded_action(std::uint64_t t, const Pattern& percept) const;
  double evaluate(std::uint64_t t, const Pattern& percept, ActionId action) const;

  /// Driver rule active at time t.
  DriverRule rule_at(std::uint64_t t) const;

 private:
  EnvironmentSpec spec_;
  std::uint64_t next_color_ = 0;
};

}  // namespace ps
