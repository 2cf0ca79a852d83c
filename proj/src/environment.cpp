#include "ps/environment.hpp"

#include "ps/error.hpp"

namespace ps {

EnvironmentSpec EnvironmentSpec::driver(double reward, std::uint64_t phase_length) {
  require(phase_length >= 1, "driver phases need at least one step");
  EnvironmentSpec spec;
  spec.variant = Variant::Driver;
  spec.actions = 2;
  spec.categories = 2;
  spec.reward = reward;
  const DriverRule rules[] = {DriverRule::StopOnRed, DriverRule::DriveOnRed, DriverRule::FollowArrow,
                              DriverRule::AlwaysDrive};
  for (std::uint64_t i = 0; i < 4; ++i) {
    spec.phases.push_back(Phase{i * phase_length + 1, (i + 1) * phase_length, rules[i]});
  }
  return spec;
}

EnvironmentSpec EnvironmentSpec::neverending_color(std::size_t actions, std::size_t categories, double reward) {
  EnvironmentSpec spec;
  spec.variant = Variant::NeverendingColor;
  spec.actions = actions;
  spec.categories = categories;
  spec.reward = reward;
  if (categories > 2) spec.extra_cardinalities.assign(categories - 2, 2);
  return spec;
}

EnvironmentSpec EnvironmentSpec::all_irrelevant(std::size_t actions, std::size_t categories, double reward) {
  auto spec = neverending_color(actions, categories, reward);
  spec.variant = Variant::AllIrrelevant;
  return spec;
}

void EnvironmentSpec::validate() const {
  require(reward > 0.0, "reward must be positive");
  require(actions >= 2, "environment needs at least two actions");
  if (variant == Variant::Driver) {
    require(actions == 2 && categories == 2, "driver scenario has two categories and two actions");
    require(phases.size() == 4, "driver scenario has exactly four phases");
    std::uint64_t expected_first = 1;
    for (const Phase& p : phases) {
      require(p.first == expected_first && p.last >= p.first, "driver phases must be contiguous from t=1");
      expected_first = p.last + 1;
    }
    return;
  }
  require(categories >= 2, "color scenarios need an arrow and a color category");
  require(extra_cardinalities.size() == categories - 2, "one cardinality per extra category");
  for (auto c : extra_cardinalities) require(c >= 1, "extra category cardinality must be positive");
}

std::uint64_t EnvironmentSpec::horizon() const {
  return variant == Variant::Driver ? phases.back().last : 0;
}

Environment::Environment(EnvironmentSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Pattern Environment::next_percept(std::uint64_t t, Rng& rng) {
  require(t >= 1, "time steps start at 1");
  Pattern p(spec_.categories);
  if (spec_.variant == Variant::Driver) {
    const auto combo = rng.uniform_index(4);
    p[0] = Slot(combo & 1);
    p[1] = Slot(combo >> 1);
    return p;
  }
  p[0] = Slot(rng.uniform_index(spec_.actions));
  p[1] = Slot(next_color_++);
  for (std::size_t k = 2; k < spec_.categories; ++k) {
    p[k] = Slot(rng.uniform_index(spec_.extra_cardinalities[k - 2]));
  }
  return p;
}

DriverRule Environment::rule_at(std::uint64_t t) const {
  require(spec_.variant == Variant::Driver, "only the driver scenario has phases");
  for (const Phase& p : spec_.phases) {
    if (t >= p.first && t <= p.last) return p.rule;
  }
  throw ContractViolation("time step lies outside the driver schedule");
}

ActionId Environment::rewarded_action(std::uint64_t t, const Pattern& percept) const {
  require(percept.size() == spec_.categories, "percept arity mismatch");
  switch (spec_.variant) {
    case Variant::Driver: {
      const bool red = percept[1].value() == driver::kRed;
      const bool left = percept[0].value() == driver::kLeft;
      switch (rule_at(t)) {
        case DriverRule::StopOnRed:
          return red ? driver::kStop : driver::kDrive;
        case DriverRule::DriveOnRed:
          return red ? driver::kDrive : driver::kStop;
        case DriverRule::FollowArrow:
          return left ? driver::kDrive : driver::kStop;
        case DriverRule::AlwaysDrive:
          return driver::kDrive;
      }
      break;
    }
    case Variant::NeverendingColor:
      return static_cast<ActionId>(percept[0].value());
    case Variant::AllIrrelevant:
      return kAllIrrelevantAction;
  }
  throw ContractViolation("unknown environment variant");
}

double Environment::evaluate(std::uint64_t t, const Pattern& percept, ActionId action) const {
  return action == rewarded_action(t, percept) ? spec_.reward : 0.0;
}

}  // namespace ps
