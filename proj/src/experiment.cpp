#include "ps/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "ps/analytics.hpp"
#include "ps/error.hpp"

namespace ps {
namespace {

struct AgentOutcome {
  std::uint64_t tail_successes = 0;
  std::vector<std::optional<std::uint64_t>> tau;  // per arrow, when tracked
};

// Rewarded hop from a wildcard carrying an explicit arrow to that arrow's action.
bool is_critical_reward(const ClipNetwork& net, const WalkPath& path, ActionId action, double reward) {
  if (reward <= 0.0 || path.size() < 2) return false;
  const Clip& from = net.clip(path.back().source);
  return from.kind == ClipKind::Wildcard && !from.slots[0].is_wildcard() && from.slots[0].value() == action;
}

void run_agent(const ExperimentConfig& cfg, std::uint64_t index, std::uint64_t tail_first,
               std::vector<std::uint64_t>& successes, AgentOutcome& outcome) {
  Rng agent_rng(substream_seed(cfg.master_seed, index, 0));
  Rng env_rng(substream_seed(cfg.master_seed, index, 1));
  Environment env(cfg.env);
  Agent agent(cfg.agent);
  if (cfg.track_learning_time) outcome.tau.assign(cfg.env.actions, std::nullopt);
  for (std::uint64_t t = 1; t <= cfg.steps; ++t) {
    const Pattern percept = env.next_percept(t, env_rng);
    const ActionId action = agent.step(percept, agent_rng);
    const double reward = env.evaluate(t, percept, action);
    // A rewarded action equals the shown arrow, so `action` indexes the arrow.
    if (cfg.track_learning_time && !outcome.tau[action] &&
        is_critical_reward(agent.network(), *agent.last_path(), action, reward)) {
      outcome.tau[action] = t;
    }
    agent.learn(reward);
    if (reward > 0.0) {
      ++successes[t - 1];
      if (t >= tail_first) ++outcome.tail_successes;
    }
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  env.validate();
  agent.validate();
  require(agents >= 1, "need at least one agent");
  require(steps >= 1, "need at least one step");
  require(agent.actions == env.actions && agent.categories == env.categories,
          "agent and environment disagree on categories or actions");
  if (env.variant == Variant::Driver) {
    require(steps <= env.horizon(), "driver scenario runs at most to the end of its schedule");
  }
  if (analytic_overlay) {
    require(env.variant == Variant::NeverendingColor, "analytic overlay is defined for the neverending-color task");
  }
  if (track_learning_time) {
    require(env.variant == Variant::NeverendingColor && agent.generalization,
            "learning time needs an enhanced agent in the neverending-color task");
  }
}

double EfficiencyCurve::at(std::uint64_t t) const {
  return static_cast<double>(successes.at(t - 1)) / static_cast<double>(agents);
}

double EfficiencyCurve::mean(std::uint64_t first, std::uint64_t last) const {
  require(first >= 1 && first <= last && last <= steps(), "invalid step window");
  std::uint64_t total = 0;
  for (std::uint64_t t = first; t <= last; ++t) total += successes[t - 1];
  return static_cast<double>(total) / (static_cast<double>(agents) * static_cast<double>(last - first + 1));
}

std::uint64_t tail_window(std::uint64_t steps) { return std::max<std::uint64_t>(1, steps / 10); }

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::uint64_t window = tail_window(cfg.steps);
  const std::uint64_t tail_first = cfg.steps - window + 1;

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, cfg.agents));

  std::vector<AgentOutcome> outcomes(cfg.agents);
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(cfg.steps, 0));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto work = [&](unsigned w) {
    try {
      for (std::uint64_t i = next++; i < cfg.agents && !failed; i = next++) {
        run_agent(cfg, i, tail_first, partial[w], outcomes[i]);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  if (failure) std::rethrow_exception(failure);

  // Integer counts: the reduction is exact in any order.
  ExperimentResult result;
  result.curve.agents = cfg.agents;
  result.curve.successes.assign(cfg.steps, 0);
  for (const auto& counts : partial) {
    for (std::uint64_t t = 0; t < cfg.steps; ++t) result.curve.successes[t] += counts[t];
  }

  result.tail_window = window;
  result.tail_mean = result.curve.mean(tail_first, cfg.steps);
  if (cfg.agents > 1) {
    double sum_sq = 0.0;
    for (const auto& o : outcomes) {
      const double d = static_cast<double>(o.tail_successes) / static_cast<double>(window) - result.tail_mean;
      sum_sq += d * d;
    }
    const double n = static_cast<double>(cfg.agents);
    result.tail_stderr = std::sqrt(sum_sq / (n - 1.0) / n);
  }

  if (cfg.analytic_overlay) {
    const int n = static_cast<int>(cfg.env.actions);
    result.analytic.reserve(cfg.steps);
    for (std::uint64_t t = 1; t <= cfg.steps; ++t) result.analytic.push_back(analytics::expected_efficiency(n, t));
  }

  if (cfg.track_learning_time) {
    LearningTimeSummary s;
    double total = 0.0;
    for (const auto& o : outcomes) {
      for (const auto& tau : o.tau) {
        if (tau) {
          total += static_cast<double>(*tau);
          ++s.recorded;
        } else {
          ++s.missing;
        }
      }
    }
    s.mean_tau = s.recorded ? total / static_cast<double>(s.recorded) : std::numeric_limits<double>::quiet_NaN();
    result.learning_time = s;
  }

  if (cfg.output_path) write_csv_file(*cfg.output_path, result);
  return result;
}

LearningTimeSummary measure_learning_time(ExperimentConfig cfg) {
  cfg.track_learning_time = true;
  cfg.output_path.reset();
  return *run_experiment(cfg).learning_time;
}

void write_csv(std::ostream& out, const ExperimentResult& result) {
  const bool overlay = !result.analytic.empty();
  out << (overlay ? "t,efficiency,analytic\n" : "t,efficiency\n");
  char buf[96];
  for (std::uint64_t t = 1; t <= result.curve.steps(); ++t) {
    if (overlay) {
      std::snprintf(buf, sizeof buf, "%llu,%.6f,%.6f\n", static_cast<unsigned long long>(t), result.curve.at(t),
                    result.analytic[t - 1]);
    } else {
      std::snprintf(buf, sizeof buf, "%llu,%.6f\n", static_cast<unsigned long long>(t), result.curve.at(t));
    }
    out << buf;
  }
}

void write_csv_file(const std::string& path, const ExperimentResult& result) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open output file: " + path);
  write_csv(file, result);
  file.flush();
  if (!file) throw std::runtime_error("failed writing output file: " + path);
}

double max_tail_deviation(const ExperimentResult& result) {
  require(!result.analytic.empty(), "no analytic column to compare against");
  const std::uint64_t steps = result.curve.steps();
  double worst = 0.0;
  for (std::uint64_t t = steps - result.tail_window + 1; t <= steps; ++t) {
    worst = std::max(worst, std::abs(result.curve.at(t) - result.analytic[t - 1]));
  }
  return worst;
}

void write_summary(std::ostream& out, const ExperimentConfig& cfg, const ExperimentResult& result) {
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  out << "agents=" << cfg.agents << '\n';
  out << "steps=" << cfg.steps << '\n';
  out << "seed=" << cfg.master_seed << '\n';
  out << "tail_window=" << result.tail_window << '\n';
  out << "tail_mean=" << num(result.tail_mean) << '\n';
  out << "tail_stderr=" << num(result.tail_stderr) << '\n';
  const int n = static_cast<int>(cfg.env.actions);
  const int k = static_cast<int>(cfg.env.categories);
  switch (cfg.env.variant) {
    case Variant::NeverendingColor:
      out << "analytic_asymptote=" << num(cfg.agent.generalization ? analytics::asymptotic_efficiency_k(n, k) : 1.0 / n)
          << '\n';
      break;
    case Variant::AllIrrelevant:
      out << "analytic_asymptote="
          << num(cfg.agent.generalization ? analytics::asymptotic_efficiency_all_irrelevant(n, k) : 1.0 / n) << '\n';
      break;
    case Variant::Driver:
      break;
  }
  if (!result.analytic.empty()) out << "max_tail_deviation=" << num(max_tail_deviation(result)) << '\n';
  if (result.learning_time) {
    out << "mean_tau=" << num(result.learning_time->mean_tau) << '\n';
    out << "tau_recorded=" << result.learning_time->recorded << '\n';
    out << "tau_missing=" << result.learning_time->missing << '\n';
    out << "expected_tau=" << num(analytics::expected_learning_time(n)) << '\n';
  }
}

}  // namespace ps
