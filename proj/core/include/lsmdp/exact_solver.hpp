#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lsmdp/policies.hpp"
#include "lsmdp/search_space.hpp"

// Ground truth for small instances: dense policy matrices, policy
// evaluation, value iteration and an exhaustive trajectory enumerator.
//
// Time runs from 0, so a reward collected at step t is discounted by
// discount^t.

namespace lsmdp {

/// Row-major dense square matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t size) : size_(size), data_(size * size, 0.0) {}

  std::size_t size() const { return size_; }
  double& operator()(std::size_t row, std::size_t col) { return data_[row * size_ + col]; }
  double operator()(std::size_t row, std::size_t col) const { return data_[row * size_ + col]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * size_, size_}; }

  /// y = M x
  std::vector<double> multiply(std::span<const double> x) const;
  /// y = x^T M (propagates a distribution one step)
  std::vector<double> left_multiply(std::span<const double> x) const;

 private:
  std::size_t size_ = 0;
  std::vector<double> data_;
};

/// P(pi^t) and r(pi^t) of a policy frozen at time t.
struct PolicyMatrices {
  DenseMatrix transition;
  std::vector<double> reward;
  TimeIndex frozen_at = 0;
};

/// Deterministic stationary policy: next[i] is the target of the chosen
/// move, or empty to stay at i.
struct GreedyPolicy {
  std::vector<std::optional<State>> next;
};

/// Throws ResourceLimit above kMaxDenseBits.
PolicyMatrices freeze(const Policy& policy, const LocalSearchMdp& mdp, TimeIndex t);
PolicyMatrices freeze(const GreedyPolicy& policy, const LocalSearchMdp& mdp);

enum class ValueMethod { policy_eval, value_iteration, trajectory_enum };

struct ValueVector {
  std::vector<double> values;
  double discount = 1.0;
  ValueMethod method = ValueMethod::policy_eval;
  /// Sup-norm Bellman residual of the returned values.
  double residual = 0.0;
  std::size_t iterations = 0;
};

/// Closed communicating classes of the chain (states indexed ascending,
/// classes ordered by smallest member).
std::vector<std::vector<std::size_t>> recurrent_classes(const DenseMatrix& transition);

/// Solves v = r + discount * P v by fixed-point iteration to `tolerance`.
/// discount must lie in [0, 1); discount == 1 is accepted only when every
/// recurrent class is reward-free, and throws DivergentValue otherwise.
ValueVector evaluate_stationary(const PolicyMatrices& matrices, double discount,
                                double tolerance = 1e-12);

/// Finite-horizon value
///   v = sum_{t < horizon} discount^t P(pi^0) ... P(pi^{t-1}) r(pi^t),
/// accumulated in nested (Horner) form from the last step back to t = 0,
/// freezing the policy at every t.
ValueVector evaluate_nonstationary(const Policy& policy, const LocalSearchMdp& mdp,
                                   std::size_t horizon, double discount);

struct OptimalSolution {
  ValueVector value;
  GreedyPolicy policy;
};

/// Optimal values over deterministic stationary policies that may move to
/// any neighbor or stay put, to sup-norm accuracy `tolerance`. Ties go to
/// staying, then to the smallest target state.
OptimalSolution value_iteration(const LocalSearchMdp& mdp, double discount, double tolerance);

/// Exact expected discounted reward over `horizon` steps from `start`,
/// expanding every branch of positive probability. Throws ResourceLimit once
/// more than `leaf_budget` leaves are reached.
double enumerate_trajectories(const Policy& policy, const LocalSearchMdp& mdp, State start,
                              std::size_t horizon, double discount = 1.0,
                              std::uint64_t leaf_budget = 10'000'000);

std::string to_string(ValueMethod m);

nlohmann::json to_json(const ValueVector& value);
nlohmann::json to_json(const GreedyPolicy& policy, int n);
/// `state,action` rows; the action is the target bit string or `stay`.
void write_greedy_csv(std::ostream& out, const GreedyPolicy& policy, int n);

}  // namespace lsmdp
