#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsmdp/policies.hpp"
#include "lsmdp/search_space.hpp"

// Convergence and exploration-exploitation analysis of a policy on a local
// search MDP.
//
// Extended-real conventions used throughout: a ratio x/0 with x > 0 is
// +infinity, 0/y is 0, and 0/0 is 0.
//
// The neighborhoods are static, so partitions, alpha, beta and gamma do not
// depend on time. Their time parameters are accepted and ignored.

namespace lsmdp {

enum class Sigma : int { exploitation = 0, exploration = 1 };

/// Exploration iff the move does not improve f (plateaus included).
Sigma sigma(const LocalSearchMdp& mdp, Move a);

/// M+ (strictly improving neighbors) and M- (the rest), ascending.
struct MovePartition {
  std::vector<State> improving;
  std::vector<State> non_improving;
};

MovePartition partition_moves(const LocalSearchMdp& mdp, State i, TimeIndex t = 0);

/// A nonnegative rational kept as integer counts.
struct CountRatio {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// alpha = |M-| / (|M+| + |M-|), beta = |M+| / (|M+| + |M-|).
struct AlphaBeta {
  CountRatio alpha;
  CountRatio beta;

  /// alpha + beta == 1 in exact arithmetic.
  bool complementary() const {
    return alpha.denominator == beta.denominator &&
           alpha.numerator + beta.numerator == alpha.denominator;
  }
};

/// Throws UndefinedCoefficient when i has no actions.
AlphaBeta alpha_beta(const LocalSearchMdp& mdp, State i, TimeIndex t = 0);

/// Convergence coefficient |M+| / |M-|; +infinity when only improving moves
/// exist, 0 at local maxima.
double gamma(const LocalSearchMdp& mdp, State i, TimeIndex t = 0);

struct GammaTrajectory {
  std::vector<State> states;  ///< visited states, states[0] = start
  std::vector<double> gamma;  ///< gamma at each visited state
  std::optional<std::size_t> first_zero;
};

/// Follows one sampled trajectory for t_max steps and records gamma at every
/// visited state (t_max + 1 values).
GammaTrajectory gamma_trajectory(const Policy& policy, const LocalSearchMdp& mdp, State start,
                                 std::size_t t_max, Rng& rng);

/// Policy mass on exploration and on exploitation moves. Staying put is
/// neither.
struct MoveMass {
  double exploration = 0.0;
  double exploitation = 0.0;
};

MoveMass move_mass(const LocalSearchMdp& mdp, const ActionDistribution& distribution);

/// exploration / exploitation with the extended-real conventions.
double mass_ratio(double exploration, double exploitation);

/// delta_ia(t): ratio of the policy's exploration mass to its exploitation
/// mass at state i and time t. Under this mass reading the value is the
/// same for every action a of i.
double delta_ia(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t);

enum class Verdict { zero, converged, diverging, inconclusive };

struct SeriesOptions {
  std::size_t horizon = 200;
  double tail_tolerance = 1e-9;
  /// Window of the moving average used by the divergence test.
  std::size_t average_window = 20;
  /// Span over which a nondecreasing moving average declares divergence.
  std::size_t divergence_span = 100;
  /// Trailing terms whose ratios must all stay below 1 for convergence.
  std::size_t ratio_window = 10;
};

struct SeriesAnalysis {
  double partial_sum = 0.0;
  Verdict verdict = Verdict::inconclusive;
  /// Largest consecutive-term ratio over the trailing ratio window.
  double tail_ratio = 0.0;
  /// Geometric bound on the omitted tail; +infinity when no bound exists.
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

/// Decides the fate of a nonnegative series from its first terms:
///  - zero: every term is 0;
///  - diverging: some term is +infinity, or the moving average of the terms
///    never decreases over the final divergence span;
///  - converged: the trailing consecutive-term ratios stay below 1 and the
///    geometric tail bound is below the tolerance;
///  - inconclusive: otherwise, or when a term is NaN or negative.
SeriesAnalysis analyze_series(std::span<const double> terms, const SeriesOptions& options);

/// delta_i = sum over t of the action-averaged delta_ia(t), truncated at the
/// horizon and classified by analyze_series.
SeriesAnalysis delta_i(const Policy& policy, const LocalSearchMdp& mdp, State i,
                       const SeriesOptions& options = {});

/// Terms delta_i(0..horizon-1) that delta_i sums.
std::vector<double> delta_terms(const Policy& policy, const LocalSearchMdp& mdp, State i,
                                std::size_t horizon);

enum class Orientation { exploitation_oriented, balanced, exploration_oriented, inconclusive };

struct StateCoefficients {
  State state = 0;
  AlphaBeta alpha_beta;
  double gamma = 0.0;
  SeriesAnalysis delta;
  /// False at local maxima (gamma = 0): no exploitation move exists there,
  /// so delta is structurally 0 or +infinity and is left out of delta*.
  /// When every analyzed state is a local maximum all rows are kept.
  bool aggregated = true;
};

struct CoefficientReport {
  std::string objective;
  std::string neighborhood;
  std::string policy;
  int n = 0;
  SeriesOptions options;
  std::vector<StateCoefficients> states;

  Orientation orientation = Orientation::inconclusive;
  /// max_i delta_i over aggregated states; +infinity when any diverges.
  double delta_star = 0.0;
  bool inconclusive = false;
  std::size_t zero_count = 0;
  std::size_t converged_count = 0;
  std::size_t diverging_count = 0;
  std::size_t inconclusive_count = 0;
  std::size_t excluded_count = 0;
  /// Horizon used and the worst tail ratio among converged states.
  std::size_t horizon = 0;
  double max_tail_ratio = 0.0;
};

struct ClassifyOptions {
  SeriesOptions series;
  /// Analyze only these states (required above kMaxExactBits).
  std::optional<std::vector<State>> states;
  /// Restrict to states reachable from this start under the policy.
  std::optional<State> reachable_from;
};

/// Sweeps the requested states and classifies the policy from delta*.
/// Any diverging state makes it exploration-oriented; otherwise any
/// inconclusive state makes the report inconclusive; otherwise all-zero is
/// exploitation-oriented and the rest balanced with C = delta*.
CoefficientReport classify(const Policy& policy, const LocalSearchMdp& mdp,
                           const ClassifyOptions& options = {});

/// States reachable from `start` through moves of positive probability.
/// Acceptance only shrinks as a built-in policy cools, so the moves that
/// are possible at t = 0 are the moves possible at any t.
std::vector<State> reachable_states(const Policy& policy, const LocalSearchMdp& mdp, State start);

/// Residual of the decomposition
///   pi_ia = alpha_i * P{sigma(a)=1 | i} + beta_i * P{sigma(a)=0 | i}
/// summed over the actions of i, where alpha and beta are the count ratios
/// and the class-conditional terms come from each policy's closed-form
/// selection rule, independently of action_distribution. Includes
/// |alpha + beta - 1|.
double decomposition_check(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t);

std::string to_string(Sigma s);
std::string to_string(Verdict v);
std::string to_string(Orientation o);

/// `exploitation-oriented`, `balanced (C=...)`, `exploration-oriented` or
/// `inconclusive`.
std::string verdict_line(const CoefficientReport& report);

nlohmann::json to_json(const CoefficientReport& report);
/// Header `state,bits,alpha,beta,gamma,delta,verdict,aggregated`, one row per
/// analyzed state; delta is the truncated partial sum.
void write_csv(std::ostream& out, const CoefficientReport& report);

}  // namespace lsmdp
