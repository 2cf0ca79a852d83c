#include <doctest.h>

#include <sstream>

#include "ps/agent.hpp"
#include "ps/environment.hpp"
#include "ps/error.hpp"

using namespace ps;

namespace {

AgentConfig config(bool generalization, std::size_t n = 2, std::size_t K = 2, double gamma = 0.0) {
  AgentConfig cfg;
  cfg.generalization = generalization;
  cfg.actions = n;
  cfg.categories = K;
  cfg.damping = gamma;
  return cfg;
}

std::string snapshot(const ClipNetwork& net) {
  std::ostringstream os;
  write_snapshot(os, net);
  return os.str();
}

}  // namespace

TEST_CASE("agent config validation") {
  auto bad = config(true);
  bad.damping = 1.5;
  CHECK_THROWS_AS(Agent{bad}, ContractViolation);
  bad = config(true, 1);
  CHECK_THROWS_AS(Agent{bad}, ContractViolation);
  bad = config(true);
  bad.majority_rounds = 4;
  CHECK_THROWS_AS(Agent{bad}, ContractViolation);
  bad = config(true);
  bad.h0 = 0.0;
  CHECK_THROWS_AS(Agent{bad}, ContractViolation);
}

TEST_CASE("step and learn must alternate") {
  Agent agent(config(true));
  Rng rng(1);
  CHECK_THROWS_AS(agent.learn(1.0), ContractViolation);
  agent.step(make_percept({0, 0}), rng);
  CHECK_THROWS_AS(agent.step(make_percept({0, 1}), rng), ContractViolation);
  agent.learn(0.0);
  CHECK_THROWS_AS(agent.learn(0.0), ContractViolation);
  agent.step(make_percept({0, 1}), rng);
  agent.learn(1.0);
  CHECK(agent.steps_taken() == 2);
}

TEST_CASE("basic agents never build wildcards; enhanced agents never duplicate clips") {
  Agent basic(config(false));
  Agent enhanced(config(true));
  Rng rng(2);
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto p = make_percept({t % 2, t % 7});
    basic.step(p, rng);
    basic.learn(1.0);
    enhanced.step(p, rng);
    enhanced.learn(1.0);
  }
  CHECK(basic.network().wildcard_count() == 0);
  CHECK(basic.network().percept_count() == 14);
  CHECK(enhanced.network().percept_count() == 14);
  for (ClipId p : basic.network().percept_ids()) CHECK(basic.network().edges(p).size() == 2);
}

TEST_CASE("a fresh percept is answered uniformly") {
  for (bool generalization : {false, true}) {
    int first = 0;
    const int trials = 20000;
    for (int i = 0; i < trials; ++i) {
      Agent agent(config(generalization));
      Rng rng(static_cast<std::uint64_t>(i));
      if (agent.step(make_percept({0, 0}), rng) == 0) ++first;
    }
    // 0.5 within 4 sigma.
    CHECK(std::abs(first / double(trials) - 0.5) < 4 * 0.5 / std::sqrt(double(trials)));
  }
}

TEST_CASE("learn applies the update to the last walk") {
  Agent agent(config(true));
  Rng rng(3);
  agent.step(make_percept({0, 0}), rng);
  agent.learn(0.0);
  agent.step(make_percept({1, 1}), rng);
  agent.learn(0.0);
  const std::string before = snapshot(agent.network());

  // lambda = 0 at gamma = 0 is the identity.
  agent.step(make_percept({0, 0}), rng);
  agent.learn(0.0);
  CHECK(snapshot(agent.network()) == before);

  agent.step(make_percept({0, 0}), rng);
  const WalkPath path = *agent.last_path();
  std::vector<double> prior;
  for (const auto& e : path) prior.push_back(*agent.network().h(e.source, e.target));
  agent.learn(1000.0);
  for (std::size_t i = 0; i < path.size(); ++i) {
    CHECK(*agent.network().h(path[i].source, path[i].target) == prior[i] + 1000.0);
  }
}

TEST_CASE("majority-vote agents store a path ending in the chosen action") {
  auto cfg = config(true);
  cfg.majority_rounds = 5;
  Agent agent(cfg);
  Rng rng(6);
  for (std::uint64_t t = 0; t < 30; ++t) {
    const ActionId a = agent.step(make_percept({t % 2, t}), rng);
    CHECK(agent.last_path()->back().target == a);
    agent.learn(a == t % 2 ? 1000.0 : 0.0);
  }
}

TEST_CASE("agents replay bit-identically from the same seed") {
  auto run = [] {
    Agent agent(config(true, 3, 3, 0.01));
    Environment env(EnvironmentSpec::neverending_color(3, 3, 5.0));
    Rng arng(42), erng(43);
    for (std::uint64_t t = 1; t <= 200; ++t) {
      const auto p = env.next_percept(t, erng);
      const auto a = agent.step(p, arng);
      agent.learn(env.evaluate(t, p, a));
    }
    return snapshot(agent.network());
  };
  CHECK(run() == run());
}
