#include "ps/agent.hpp"

#include "ps/error.hpp"

namespace ps {

void AgentConfig::validate() const {
  require(damping >= 0.0 && damping <= 1.0, "damping must be in [0, 1]");
  require(h0 > 0.0, "h0 must be positive");
  require(actions >= 2, "agent needs at least two actions");
  require(categories >= 1, "agent needs at least one category");
  if (majority_rounds) {
    require(*majority_rounds >= 1 && *majority_rounds % 2 == 1,
            "majority vote needs an odd, positive number of walks");
  }
}

Agent::Agent(AgentConfig config)
    : config_((config.validate(), config)), network_(config_.categories, config_.actions, config_.h0) {}

ActionId Agent::step(const Pattern& percept, Rng& rng) {
  require(!awaiting_learn_, "step called twice without learn");
  const AddReport report =
      config_.generalization ? network_.add_percept(percept) : network_.add_plain_percept(percept);
  WalkResult walk = config_.majority_rounds
                        ? majority_vote(network_, report.percept, rng, *config_.majority_rounds)
                        : random_walk(network_, report.percept, rng);
  last_path_ = std::move(walk.path);
  awaiting_learn_ = true;
  ++steps_;
  return walk.action;
}

void Agent::learn(double reward) {
  require(awaiting_learn_, "learn called without a preceding step");
  network_.update_weights(*last_path_, reward, config_.damping);
  awaiting_learn_ = false;
}

}  // namespace ps
