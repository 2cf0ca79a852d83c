#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "ps/clip_network.hpp"
#include "ps/random.hpp"

namespace ps {

struct AgentConfig {
  bool generalization = true;
  double damping = 0.0;  // gamma
  double h0 = 1.0;
  std::size_t categories = 2;  // K
  std::size_t actions = 2;     // n
  std::optional<int> majority_rounds;  // odd; unset means a single walk

  void validate() const;
};

/// Projective-simulation agent: perceive, deliberate by random walk, act, and
/// learn from the reward of the last walk. `step` and `learn` must alternate.
class Agent {
 public:
  explicit Agent(AgentConfig config);

  ActionId step(const Pattern& percept, Rng& rng);
  void learn(double reward);

  const AgentConfig& config() const { return config_; }
  const ClipNetwork& network() const { return network_; }
  ClipNetwork& network() { return network_; }
  const std::optional<WalkPath>& last_path() const { return last_path_; }
  std::uint64_t steps_taken() const { return steps_; }

 private:
  AgentConfig config_;
  ClipNetwork network_;
  std::optional<WalkPath> last_path_;
  bool awaiting_learn_ = false;
  std::uint64_t steps_ = 0;
};

}  // namespace ps
