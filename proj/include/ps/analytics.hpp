#pragma once

#include <cstdint>
#include <utility>
#include <vector>

// Closed-form results for the neverending-color family of tasks, derived for
// zero damping and an unbounded reward.
namespace ps::analytics {

/// Asymptotic two-category efficiency, (1 + 2n) / (n (n + 2)).
double asymptotic_efficiency(int actions);

/// Probability that the arrow-wildcard to action edge has been rewarded
/// before step t: 1 - (1 - 1/(n(n+1)(n+2)))^(t-1).
double p_learn(int actions, std::uint64_t t);

/// p_learn(t) * E_inf(n) + (1 - p_learn(t)) / n.
double expected_efficiency(int actions, std::uint64_t t);

/// Mean first step at which the critical edge is rewarded, n(n+1)(n+2).
double expected_learning_time(int actions);

/// Asymptotic efficiency with K categories (one color, K-2 finite extras).
double asymptotic_efficiency_k(int actions, int categories);

/// Asymptotic efficiency when the same action is rewarded for every percept.
double asymptotic_efficiency_all_irrelevant(int actions, int categories);

/// Probability that the correct action wins an R-walk majority vote when a
/// single walk is correct with probability `p_single`. Exact for two actions;
/// for more actions all wrong outcomes are lumped into one, which
/// underestimates the true mode probability.
double majority_vote_success(double p_single, int actions, int rounds);

/// (t, expected_efficiency) for t in [t_first, t_last].
std::vector<std::pair<std::uint64_t, double>> expected_curve(int actions, std::uint64_t t_first,
                                                             std::uint64_t t_last);

}  // namespace ps::analytics
