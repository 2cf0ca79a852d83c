#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ps/analytics.hpp"
#include "ps/error.hpp"
#include "ps/experiment.hpp"

using namespace ps;

namespace {

ExperimentConfig colors(std::size_t n, std::uint64_t agents, std::uint64_t steps, std::uint64_t seed = 7) {
  ExperimentConfig cfg;
  cfg.env = EnvironmentSpec::neverending_color(n, 2, 1000.0);
  cfg.agent.actions = n;
  cfg.agent.categories = 2;
  cfg.agents = agents;
  cfg.steps = steps;
  cfg.master_seed = seed;
  return cfg;
}

std::string csv(const ExperimentResult& r) {
  std::ostringstream os;
  write_csv(os, r);
  return os.str();
}

}  // namespace

TEST_CASE("substream seeds are fixed") {
  static_assert(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(substream_seed(0, 0, 0) != substream_seed(0, 1, 0));
  CHECK(substream_seed(0, 0, 0) != substream_seed(0, 0, 1));
  CHECK(substream_seed(1, 0, 0) != substream_seed(0, 0, 0));
}

TEST_CASE("curve counts are integers in [0, N] and CSV has the documented shape") {
  auto cfg = colors(2, 300, 50);
  const auto r = run_experiment(cfg);
  REQUIRE(r.curve.steps() == 50);
  for (auto s : r.curve.successes) CHECK(s <= 300);
  const std::string text = csv(r);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,efficiency");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    const auto comma = line.find(',');
    REQUIRE(comma != std::string::npos);
    CHECK(std::stoi(line.substr(0, comma)) == rows);
    const std::string value = line.substr(comma + 1);
    CHECK(value.size() == 8);  // 0.xxxxxx
    CHECK(value[1] == '.');
  }
  CHECK(rows == 50);
  CHECK(r.tail_window == 5);
}

TEST_CASE("results do not depend on the thread count") {
  auto cfg = colors(3, 97, 120);
  cfg.track_learning_time = true;
  cfg.threads = 1;
  const auto one = run_experiment(cfg);
  cfg.threads = 5;
  const auto five = run_experiment(cfg);
  CHECK(csv(one) == csv(five));
  CHECK(one.learning_time->mean_tau == five.learning_time->mean_tau);
  CHECK(one.tail_stderr == five.tail_stderr);
  cfg.master_seed = 8;
  CHECK(csv(run_experiment(cfg)) != csv(one));
}

TEST_CASE("analytic overlay column is the expected-efficiency curve") {
  auto cfg = colors(2, 50, 30);
  cfg.analytic_overlay = true;
  const auto r = run_experiment(cfg);
  REQUIRE(r.analytic.size() == 30);
  for (std::uint64_t t = 1; t <= 30; ++t) {
    CHECK(r.analytic[t - 1] == analytics::expected_efficiency(2, t));
    if (t > 1) CHECK(r.analytic[t - 1] >= r.analytic[t - 2]);
  }
  CHECK(csv(r).rfind("t,efficiency,analytic\n1,", 0) == 0);
  CHECK(max_tail_deviation(r) >= 0.0);
}

TEST_CASE("invalid configurations are rejected") {
  auto cfg = colors(2, 10, 10);
  cfg.agents = 0;
  CHECK_THROWS_AS(run_experiment(cfg), ContractViolation);
  cfg = colors(2, 10, 10);
  cfg.agent.actions = 3;
  CHECK_THROWS_AS(run_experiment(cfg), ContractViolation);
  cfg = colors(2, 10, 10);
  cfg.agent.generalization = false;
  cfg.track_learning_time = true;
  CHECK_THROWS_AS(run_experiment(cfg), ContractViolation);

  ExperimentConfig drv;
  drv.env = EnvironmentSpec::driver(1.0);
  drv.agents = 2;
  drv.steps = 4001;
  CHECK_THROWS_AS(run_experiment(drv), ContractViolation);
  drv.steps = 10;
  drv.analytic_overlay = true;
  CHECK_THROWS_AS(run_experiment(drv), ContractViolation);
}

TEST_CASE("unwritable output path throws") {
  auto cfg = colors(2, 2, 5);
  cfg.output_path = "/nonexistent-dir/sub/e.csv";
  CHECK_THROWS_AS(run_experiment(cfg), std::runtime_error);
}

TEST_CASE("output file matches the in-memory CSV") {
  const auto path = std::filesystem::temp_directory_path() / "ps_experiment_test.csv";
  auto cfg = colors(2, 20, 15);
  cfg.output_path = path.string();
  const auto r = run_experiment(cfg);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == csv(r));
  std::filesystem::remove(path);
}

TEST_CASE("learning time at T = 1 is almost always missing") {
  auto cfg = colors(2, 2000, 1);
  const auto s = measure_learning_time(cfg);
  // No wildcard exists at t = 1.
  CHECK(s.recorded == 0);
  CHECK(s.missing == 2 * 2000);
  CHECK(std::isnan(s.mean_tau));
}

TEST_CASE("recorded learning times lie in [1, T]") {
  auto cfg = colors(2, 500, 60);
  cfg.track_learning_time = true;
  const auto r = run_experiment(cfg);
  REQUIRE(r.learning_time);
  CHECK(r.learning_time->recorded + r.learning_time->missing == 2 * 500);
  CHECK(r.learning_time->recorded > 0);
  CHECK(r.learning_time->mean_tau >= 1.0);
  CHECK(r.learning_time->mean_tau <= 60.0);
}

TEST_CASE("tail standard error shrinks like 1/sqrt(N)") {
  double se[3];
  std::uint64_t sizes[3] = {100, 1000, 10000};
  for (int i = 0; i < 3; ++i) se[i] = run_experiment(colors(2, sizes[i], 200, 3)).tail_stderr;
  for (int i = 0; i < 2; ++i) {
    const double ratio = se[i] / se[i + 1];
    CHECK(ratio == doctest::Approx(std::sqrt(10.0)).epsilon(0.3));
  }
}

TEST_CASE("basic agents stay at chance in the neverending-color task") {
  auto cfg = colors(2, 4000, 100);
  cfg.agent.generalization = false;
  const auto r = run_experiment(cfg);
  // 4 sigma band for a window of 100 steps x 4000 agents.
  CHECK(std::abs(r.curve.mean(1, 100) - 0.5) < 4 * 0.5 / std::sqrt(4000.0 * 100.0));
}

TEST_CASE("summary lines") {
  auto cfg = colors(2, 20, 20);
  cfg.analytic_overlay = true;
  cfg.track_learning_time = true;
  const auto r = run_experiment(cfg);
  std::ostringstream os;
  write_summary(os, cfg, r);
  const std::string s = os.str();
  CHECK(s.find("tail_mean=") != std::string::npos);
  CHECK(s.find("analytic_asymptote=0.625000") != std::string::npos);
  CHECK(s.find("max_tail_deviation=") != std::string::npos);
  CHECK(s.find("expected_tau=24.000000") != std::string::npos);
}
