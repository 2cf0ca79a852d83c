#include "ps/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "ps/error.hpp"

namespace ps::analytics {
namespace {

void require_actions(int actions) { require(actions >= 2, "analytic formulas need n >= 2"); }

double critical_path_probability(int actions) {
  const double n = actions;
  return 1.0 / (n * (n + 1.0) * (n + 2.0));
}

}  // namespace

double asymptotic_efficiency(int actions) {
  require_actions(actions);
  const double n = actions;
  return (1.0 + 2.0 * n) / (n * (n + 2.0));
}

double p_learn(int actions, std::uint64_t t) {
  require_actions(actions);
  require(t >= 1, "time steps start at 1");
  const double eps = critical_path_probability(actions);
  // (1 - eps)^(t-1) evaluated in log space.
  return -std::expm1(static_cast<double>(t - 1) * std::log1p(-eps));
}

double expected_efficiency(int actions, std::uint64_t t) {
  // Written as chance + learned * gain so rounding keeps it monotone in t.
  const double chance = 1.0 / actions;
  return chance + p_learn(actions, t) * (asymptotic_efficiency(actions) - chance);
}

double expected_learning_time(int actions) {
  require_actions(actions);
  const double n = actions;
  return n * (n + 1.0) * (n + 2.0);
}

double asymptotic_efficiency_k(int actions, int categories) {
  require_actions(actions);
  require(categories >= 2, "K-category formula needs K >= 2");
  const double n = actions;
  const double half = std::ldexp(1.0, categories - 2);
  return (n + (1.0 + n) * half) / (n * (n + 2.0 * half));
}

double asymptotic_efficiency_all_irrelevant(int actions, int categories) {
  require_actions(actions);
  require(categories >= 2, "all-irrelevant formula needs K >= 2");
  const double wild = std::ldexp(1.0, categories - 1);
  return (1.0 + wild) / (actions + wild);
}

double majority_vote_success(double p_single, int actions, int rounds) {
  require_actions(actions);
  require(rounds >= 1 && rounds % 2 == 1, "majority vote needs an odd, positive number of walks");
  require(p_single > 0.0 && p_single <= 1.0, "single-walk success must lie in (0, 1]");
  if (p_single == 1.0) return 1.0;
  // P[Binomial(R, p) >= (R + 1) / 2]
  const double lp = std::log(p_single);
  const double lq = std::log1p(-p_single);
  const double lg_r = std::lgamma(rounds + 1.0);
  double total = 0.0;
  for (int k = (rounds + 1) / 2; k <= rounds; ++k) {
    const double log_term = lg_r - std::lgamma(k + 1.0) - std::lgamma(rounds - k + 1.0) + k * lp + (rounds - k) * lq;
    total += std::exp(log_term);
  }
  return std::min(total, 1.0);
}

std::vector<std::pair<std::uint64_t, double>> expected_curve(int actions, std::uint64_t t_first,
                                                             std::uint64_t t_last) {
  require(t_first >= 1 && t_first <= t_last, "invalid time range");
  std::vector<std::pair<std::uint64_t, double>> curve;
  curve.reserve(t_last - t_first + 1);
  for (std::uint64_t t = t_first; t <= t_last; ++t) curve.emplace_back(t, expected_efficiency(actions, t));
  return curve;
}

}  // namespace ps::analytics
