// Command-line front end for the projective-simulation experiments.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "ps/analytics.hpp"
#include "ps/error.hpp"
#include "ps/experiment.hpp"

namespace {

struct RunOptions {
  double gamma = 0.0;
  double reward = 1000.0;
  std::uint64_t agents = 10000;
  std::uint64_t steps = 500;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::string out;
};

struct ColorOptions {
  RunOptions run;
  std::size_t actions = 2;
  std::size_t categories = 2;
  bool basic = false;
  std::optional<int> majority;
  bool track_tau = false;
  bool all_irrelevant = false;
  bool overlay = false;
};

void add_run_flags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--gamma", o.gamma, "Damping parameter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--reward", o.reward, "Reward for a correct action")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--agents", o.agents, "Number of independent agents")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--steps", o.steps, "Time steps per agent")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", o.out, "CSV output path (default: stdout)");
}

void add_color_flags(CLI::App* cmd, ColorOptions& o) {
  add_run_flags(cmd, o.run);
  cmd->add_option("--n-actions", o.actions, "Number of arrows/actions")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  cmd->add_option("--categories", o.categories, "Number of percept categories K")->check(CLI::Range(2, 64))->capture_default_str();
  cmd->add_flag("--basic", o.basic, "Disable generalization (basic two-layer agent)");
  cmd->add_option("--majority", o.majority, "Majority vote over R walks (odd)");
  cmd->add_flag("--track-tau", o.track_tau, "Measure the learning time");
  cmd->add_flag("--all-irrelevant", o.all_irrelevant, "Reward the same action for every percept");
}

ps::ExperimentConfig color_config(const ColorOptions& o) {
  ps::ExperimentConfig cfg;
  cfg.env = o.all_irrelevant ? ps::EnvironmentSpec::all_irrelevant(o.actions, o.categories, o.run.reward)
                             : ps::EnvironmentSpec::neverending_color(o.actions, o.categories, o.run.reward);
  cfg.agent.generalization = !o.basic;
  cfg.agent.damping = o.run.gamma;
  cfg.agent.categories = o.categories;
  cfg.agent.actions = o.actions;
  cfg.agent.majority_rounds = o.majority;
  cfg.agents = o.run.agents;
  cfg.steps = o.run.steps;
  cfg.master_seed = o.run.seed;
  cfg.threads = o.run.threads;
  cfg.track_learning_time = o.track_tau;
  cfg.analytic_overlay = o.overlay;
  if (!o.run.out.empty()) cfg.output_path = o.run.out;
  return cfg;
}

// CSV goes to --out when given (summary to stdout), otherwise CSV to stdout
// and the summary to stderr.
int run_and_report(const ps::ExperimentConfig& cfg) {
  const auto result = ps::run_experiment(cfg);
  if (cfg.output_path) {
    ps::write_summary(std::cout, cfg, result);
  } else {
    ps::write_csv(std::cout, result);
    ps::write_summary(std::cerr, cfg, result);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projective simulation agents with wildcard generalization"};
  app.require_subcommand(1);

  RunOptions driver_opts;
  driver_opts.gamma = 0.005;
  driver_opts.reward = 1.0;
  driver_opts.steps = 4000;
  auto* driver_cmd = app.add_subcommand("driver", "Four-phase driver scenario");
  add_run_flags(driver_cmd, driver_opts);

  ColorOptions color_opts;
  auto* colors_cmd = app.add_subcommand("colors", "Neverending-color scenario");
  add_color_flags(colors_cmd, color_opts);
  colors_cmd->add_flag("--analytic", color_opts.overlay, "Append the analytic learning curve column");

  ColorOptions compare_opts;
  auto* compare_cmd = app.add_subcommand("compare", "Simulation and analytic curve side by side");
  add_color_flags(compare_cmd, compare_opts);

  int an_actions = 2;
  int an_categories = 2;
  std::uint64_t t_min = 1;
  std::uint64_t t_max = 100;
  std::string an_out;
  auto* analytic_cmd = app.add_subcommand("analytic", "Closed-form efficiencies and learning curve");
  analytic_cmd->add_option("--n", an_actions, "Number of actions")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  analytic_cmd->add_option("--categories", an_categories, "Number of categories K")->check(CLI::Range(2, 64))->capture_default_str();
  analytic_cmd->add_option("--t-min", t_min, "First time step")->check(CLI::PositiveNumber)->capture_default_str();
  analytic_cmd->add_option("--t-max", t_max, "Last time step")->check(CLI::PositiveNumber)->capture_default_str();
  analytic_cmd->add_option("--out", an_out, "CSV output path (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*driver_cmd) {
      ps::ExperimentConfig cfg;
      cfg.env = ps::EnvironmentSpec::driver(driver_opts.reward);
      cfg.agent.generalization = true;
      cfg.agent.damping = driver_opts.gamma;
      cfg.agent.categories = 2;
      cfg.agent.actions = 2;
      cfg.agents = driver_opts.agents;
      cfg.steps = driver_opts.steps;
      cfg.master_seed = driver_opts.seed;
      cfg.threads = driver_opts.threads;
      if (!driver_opts.out.empty()) cfg.output_path = driver_opts.out;
      return run_and_report(cfg);
    }
    if (*colors_cmd) return run_and_report(color_config(color_opts));
    if (*compare_cmd) {
      compare_opts.overlay = true;
      auto cfg = color_config(compare_opts);
      const auto result = ps::run_experiment(cfg);
      if (!cfg.output_path) ps::write_csv(std::cout, result);
      ps::write_summary(cfg.output_path ? std::cout : std::cerr, cfg, result);
      return 0;
    }
    if (*analytic_cmd) {
      if (t_min > t_max) throw ps::ContractViolation("--t-min must not exceed --t-max");
      std::FILE* sink = stdout;
      if (!an_out.empty()) {
        sink = std::fopen(an_out.c_str(), "wb");
        if (!sink) throw std::runtime_error("cannot open output file: " + an_out);
      }
      std::FILE* info = an_out.empty() ? stderr : stdout;
      std::fprintf(info, "asymptotic_efficiency=%.6f\n", ps::analytics::asymptotic_efficiency(an_actions));
      std::fprintf(info, "asymptotic_efficiency_k=%.6f\n", ps::analytics::asymptotic_efficiency_k(an_actions, an_categories));
      std::fprintf(info, "asymptotic_efficiency_all_irrelevant=%.6f\n",
                   ps::analytics::asymptotic_efficiency_all_irrelevant(an_actions, an_categories));
      std::fprintf(info, "expected_learning_time=%.6f\n", ps::analytics::expected_learning_time(an_actions));
      std::fprintf(sink, "t,efficiency,p_learn\n");
      for (std::uint64_t t = t_min; t <= t_max; ++t) {
        std::fprintf(sink, "%llu,%.6f,%.6f\n", static_cast<unsigned long long>(t),
                     ps::analytics::expected_efficiency(an_actions, t), ps::analytics::p_learn(an_actions, t));
      }
      if (sink != stdout) std::fclose(sink);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
