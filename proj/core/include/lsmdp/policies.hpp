#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lsmdp/rng.hpp"
#include "lsmdp/search_space.hpp"
#include "lsmdp/types.hpp"

namespace lsmdp {

enum class HillClimbingVariant {
  /// Move to a best neighbor only if it strictly improves; absorb otherwise.
  strict,
  /// Always move uniformly to a best neighbor, improving or not.
  literal,
};

struct HillClimbing {
  HillClimbingVariant variant = HillClimbingVariant::strict;
};

/// Uniform proposals, Metropolis acceptance at temperature
/// T_t = cooling_rate^t * initial_temperature.
struct SimulatedAnnealing {
  double initial_temperature = 1.0;
  double cooling_rate = 0.9;
};

struct RandomWalk {};

/// Simulated annealing frozen at a fixed temperature.
struct Metropolis {
  double temperature = 1.0;
};

/// A time-indexed stochastic decision rule over a LocalSearchMdp.
class Policy {
 public:
  using Kind = std::variant<HillClimbing, SimulatedAnnealing, RandomWalk, Metropolis>;

  /// Throws InvalidArgument for out-of-range parameters.
  explicit Policy(Kind kind, std::optional<std::int64_t> horizon_hint = std::nullopt);

  const Kind& kind() const { return kind_; }
  std::optional<std::int64_t> horizon_hint() const { return horizon_hint_; }
  bool is_stationary() const;
  /// Canonical descriptor; parse_policy(descriptor()) reproduces the policy.
  std::string descriptor() const;

 private:
  Kind kind_;
  std::optional<std::int64_t> horizon_hint_;
};

Policy hill_climbing(HillClimbingVariant variant = HillClimbingVariant::strict);
Policy simulated_annealing(double initial_temperature, double cooling_rate);
Policy random_walk();
Policy metropolis(double temperature);

/// Parses `hc`, `hc:literal`, `sa:T0=10,rate=0.95`, `walk`, `metropolis:T=1`.
Policy parse_policy(std::string_view descriptor);

/// pi^t_{i.}: one entry per action of i in canonical order (probabilities
/// may be zero) plus the mass of staying put (rejections, absorption).
struct ActionDistribution {
  std::vector<std::pair<Move, double>> entries;
  double stay_probability = 0.0;

  double move_mass() const;
  double total_mass() const { return move_mass() + stay_probability; }
};

/// Temperature at time t; 0 once the geometric schedule underflows.
double temperature_at(const SimulatedAnnealing& sa, TimeIndex t);

/// Metropolis acceptance of a move with objective change `delta` (f(j) -
/// f(i)) at temperature `temperature`. Improvements are always accepted;
/// at temperature 0 nothing else is.
double acceptance_probability(double delta, double temperature);

ActionDistribution action_distribution(const Policy& policy, const LocalSearchMdp& mdp, State i,
                                       TimeIndex t);

struct StepResult {
  State next = 0;
  std::optional<Move> taken;
  double reward = 0.0;
};

/// Samples one transition. Consumes exactly one uniform draw.
StepResult step(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t, Rng& rng);

/// True iff the policy stays at i with probability 1 at every t' >= t.
bool is_terminal(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t);

}  // namespace lsmdp
