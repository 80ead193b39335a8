#include "lsmdp/policies.hpp"

#include <cmath>
#include <limits>

#include "lsmdp/descriptor.hpp"
#include "lsmdp/errors.hpp"
#include "lsmdp/format.hpp"

namespace lsmdp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const Policy::Kind& kind) {
  std::visit(Overloaded{
                 [](const HillClimbing&) {},
                 [](const RandomWalk&) {},
                 [](const SimulatedAnnealing& sa) {
                   if (!(sa.initial_temperature > 0.0) || !std::isfinite(sa.initial_temperature)) {
                     throw InvalidArgument("simulated annealing needs T0 > 0");
                   }
                   if (!(sa.cooling_rate >= 0.0 && sa.cooling_rate < 1.0)) {
                     throw InvalidArgument("simulated annealing needs a cooling rate in [0, 1)");
                   }
                 },
                 [](const Metropolis& m) {
                   if (!(m.temperature > 0.0) || !std::isfinite(m.temperature)) {
                     throw InvalidArgument("metropolis needs T > 0");
                   }
                 },
             },
             kind);
}

ActionDistribution uniform_over(const std::vector<Move>& actions) {
  ActionDistribution d;
  const double p = 1.0 / static_cast<double>(actions.size());
  for (const auto& a : actions) d.entries.emplace_back(a, p);
  return d;
}

ActionDistribution metropolis_rule(const LocalSearchMdp& mdp, const std::vector<Move>& actions,
                                   double temperature) {
  ActionDistribution d;
  const double proposal = 1.0 / static_cast<double>(actions.size());
  for (const auto& a : actions) {
    const double p = proposal * acceptance_probability(mdp.reward(a), temperature);
    d.entries.emplace_back(a, p);
  }
  // Rejected proposals stay put. Summing the rejected mass directly keeps
  // the total at 1 to rounding even when acceptances are tiny.
  double rejected = 0.0;
  for (const auto& [a, p] : d.entries) rejected += proposal - p;
  d.stay_probability = rejected < 0.0 ? 0.0 : rejected;
  return d;
}

ActionDistribution hill_climbing_rule(const LocalSearchMdp& mdp, const std::vector<Move>& actions,
                                      State i, HillClimbingVariant variant) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& a : actions) best = std::max(best, mdp.value(a.to));
  std::size_t ties = 0;
  for (const auto& a : actions) ties += mdp.value(a.to) == best;

  ActionDistribution d;
  const bool improving = best > mdp.value(i);
  if (variant == HillClimbingVariant::strict && !improving) {
    for (const auto& a : actions) d.entries.emplace_back(a, 0.0);
    d.stay_probability = 1.0;
    return d;
  }
  const double p = 1.0 / static_cast<double>(ties);
  for (const auto& a : actions) d.entries.emplace_back(a, mdp.value(a.to) == best ? p : 0.0);
  return d;
}

}  // namespace

Policy::Policy(Kind kind, std::optional<std::int64_t> horizon_hint)
    : kind_(std::move(kind)), horizon_hint_(horizon_hint) {
  validate(kind_);
  if (horizon_hint_ && *horizon_hint_ < 1) throw InvalidArgument("horizon hint must be positive");
}

bool Policy::is_stationary() const { return !std::holds_alternative<SimulatedAnnealing>(kind_); }

std::string Policy::descriptor() const {
  return std::visit(
      Overloaded{
          [](const HillClimbing& hc) -> std::string {
            return hc.variant == HillClimbingVariant::strict ? "hc" : "hc:literal";
          },
          [](const SimulatedAnnealing& sa) -> std::string {
            return "sa:T0=" + format_double(sa.initial_temperature) +
                   ",rate=" + format_double(sa.cooling_rate);
          },
          [](const RandomWalk&) -> std::string { return "walk"; },
          [](const Metropolis& m) -> std::string { return "metropolis:T=" + format_double(m.temperature); },
      },
      kind_);
}

Policy hill_climbing(HillClimbingVariant variant) { return Policy(HillClimbing{variant}); }
Policy simulated_annealing(double t0, double rate) { return Policy(SimulatedAnnealing{t0, rate}); }
Policy random_walk() { return Policy(RandomWalk{}); }
Policy metropolis(double temperature) { return Policy(Metropolis{temperature}); }

Policy parse_policy(std::string_view text) {
  const auto d = Descriptor::parse(text);
  const auto& name = d.name();
  if (name == "hc") {
    d.expect_only({""});
    if (!d.has("")) return hill_climbing();
    const auto variant = d.get_string("");
    if (variant == "literal") return hill_climbing(HillClimbingVariant::literal);
    if (variant == "strict") return hill_climbing(HillClimbingVariant::strict);
    throw ParseError(0, "unknown hill climbing variant in '" + std::string(text) + "'");
  }
  if (name == "sa") {
    d.expect_only({"T0", "rate"});
    return simulated_annealing(d.get_double("T0"), d.get_double("rate"));
  }
  if (name == "walk") {
    d.expect_only({});
    return random_walk();
  }
  if (name == "metropolis") {
    d.expect_only({"T"});
    return metropolis(d.get_double("T"));
  }
  throw ParseError(0, "unknown policy '" + std::string(text) + "'");
}

double ActionDistribution::move_mass() const {
  double total = 0.0;
  for (const auto& [a, p] : entries) total += p;
  return total;
}

double temperature_at(const SimulatedAnnealing& sa, TimeIndex t) {
  if (t < 0) throw InvalidArgument("time index must be >= 0, got " + std::to_string(t));
  return sa.initial_temperature * std::pow(sa.cooling_rate, static_cast<double>(t));
}

double acceptance_probability(double delta, double temperature) {
  if (delta > 0.0) return 1.0;
  if (!(temperature > 0.0)) return 0.0;
  return std::exp(delta / temperature);
}

ActionDistribution action_distribution(const Policy& policy, const LocalSearchMdp& mdp, State i,
                                       TimeIndex t) {
  if (t < 0) throw InvalidArgument("time index must be >= 0, got " + std::to_string(t));
  const auto actions = mdp.actions(i);
  if (actions.empty()) {
    ActionDistribution d;
    d.stay_probability = 1.0;
    return d;
  }
  return std::visit(
      Overloaded{
          [&](const HillClimbing& hc) { return hill_climbing_rule(mdp, actions, i, hc.variant); },
          [&](const SimulatedAnnealing& sa) {
            return metropolis_rule(mdp, actions, temperature_at(sa, t));
          },
          [&](const RandomWalk&) { return uniform_over(actions); },
          [&](const Metropolis& m) { return metropolis_rule(mdp, actions, m.temperature); },
      },
      policy.kind());
}

StepResult step(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t, Rng& rng) {
  const auto d = action_distribution(policy, mdp, i, t);
  const double u = rng.uniform();
  double cumulative = 0.0;
  const std::pair<Move, double>* last_positive = nullptr;
  for (const auto& entry : d.entries) {
    if (entry.second <= 0.0) continue;
    last_positive = &entry;
    cumulative += entry.second;
    if (u < cumulative) {
      return {entry.first.to, entry.first, mdp.reward(entry.first)};
    }
  }
  // Rounding can leave u just above the summed move mass; without stay mass
  // that draw belongs to the last move.
  if (d.stay_probability <= 0.0 && last_positive != nullptr) {
    return {last_positive->first.to, last_positive->first, mdp.reward(last_positive->first)};
  }
  return {i, std::nullopt, 0.0};
}

bool is_terminal(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t) {
  if (t < 0) throw InvalidArgument("time index must be >= 0, got " + std::to_string(t));
  if (mdp.actions(i).empty()) return true;
  // Only strict hill climbing ever stays with certainty, and its rule is
  // stationary. Annealing acceptance is positive at every finite time.
  const auto* hc = std::get_if<HillClimbing>(&policy.kind());
  if (hc == nullptr || hc->variant != HillClimbingVariant::strict) return false;
  return action_distribution(policy, mdp, i, t).stay_probability == 1.0;
}

}  // namespace lsmdp
