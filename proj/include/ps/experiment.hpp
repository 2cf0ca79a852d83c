#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ps/agent.hpp"
#include "ps/environment.hpp"

namespace ps {

struct ExperimentConfig {
  EnvironmentSpec env;
  AgentConfig agent;
  std::uint64_t agents = 10000;  // N
  std::uint64_t steps = 500;     // T
  std::uint64_t master_seed = 0;
  std::optional<std::string> output_path;
  bool analytic_overlay = false;
  bool track_learning_time = false;
  unsigned threads = 0;  // 0: one per hardware thread

  void validate() const;
};

/// Number of agents rewarded at each step.
struct EfficiencyCurve {
  std::uint64_t agents = 0;
  std::vector<std::uint64_t> successes;  // index t-1

  std::uint64_t steps() const { return successes.size(); }
  double at(std::uint64_t t) const;
  /// Mean efficiency over steps [first, last], inclusive.
  double mean(std::uint64_t first, std::uint64_t last) const;
};

/// First step at which an arrow's wildcard-to-action hop is traversed and
/// rewarded, collected for every (agent, arrow) pair.
struct LearningTimeSummary {
  double mean_tau = 0.0;  // over pairs that learned; NaN if none did
  std::uint64_t recorded = 0;
  std::uint64_t missing = 0;
};

struct ExperimentResult {
  EfficiencyCurve curve;
  std::vector<double> analytic;  // empty unless requested
  std::optional<LearningTimeSummary> learning_time;
  std::uint64_t tail_window = 0;     // last 10% of steps, at least one
  double tail_mean = 0.0;
  double tail_stderr = 0.0;          // across agents
};

/// Last 10% of `steps`, at least one step.
std::uint64_t tail_window(std::uint64_t steps);

/// Runs N independent agent/environment pairs for T steps. Agent i draws from
/// substreams `substream_seed(master_seed, i, 0)` (agent) and `(…, 1)`
/// (environment). Output does not depend on the thread count.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Learning-time statistics for an enhanced agent in the neverending-color task.
LearningTimeSummary measure_learning_time(ExperimentConfig cfg);

/// `t,efficiency[,analytic]` with six fractional digits.
void write_csv(std::ostream& out, const ExperimentResult& result);
/// Writes the CSV to `cfg.output_path`; throws std::runtime_error if it cannot.
void write_csv_file(const std::string& path, const ExperimentResult& result);
/// `key=value` summary lines.
void write_summary(std::ostream& out, const ExperimentConfig& cfg, const ExperimentResult& result);

/// Largest |simulated - analytic| over the tail window.
double max_tail_deviation(const ExperimentResult& result);

}  // namespace ps
