#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "lsmdp/objectives.hpp"
#include "lsmdp/types.hpp"

namespace lsmdp {

/// The action i -> j: move from candidate `from` to its neighbor `to`.
struct Move {
  State from = 0;
  State to = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

/// Decides which candidates are neighbors. Implementations must be
/// symmetric (j in N(i) iff i in N(j)) and return neighbors in ascending
/// integer order.
class NeighborhoodCriterion {
 public:
  virtual ~NeighborhoodCriterion() = default;

  virtual std::vector<State> neighbors(State i, int n) const = 0;
  /// Throws InvalidArgument if the criterion is meaningless for length n.
  virtual void validate(int n) const = 0;
  virtual std::string descriptor() const = 0;
};

/// All strings at Hamming distance exactly `distance` (>= 1).
class HammingNeighborhood final : public NeighborhoodCriterion {
 public:
  explicit HammingNeighborhood(int distance);

  std::vector<State> neighbors(State i, int n) const override;
  void validate(int n) const override;
  std::string descriptor() const override;

  int distance() const { return distance_; }

 private:
  int distance_;
};

std::shared_ptr<const NeighborhoodCriterion> hamming(int distance);

/// Parses `hamming:<d>` (also `hamming:d=<d>`).
std::shared_ptr<const NeighborhoodCriterion> parse_neighborhood(std::string_view descriptor);

/// The local search MDP over all 2^n bit strings: actions are moves to
/// neighbors and the reward of i -> j is f(j) - f(i).
///
/// Executing a move is deterministic; the 1/|A(i)| weight of the model is
/// exposed separately through action_weight() and reads as uniform action
/// selection.
class LocalSearchMdp {
 public:
  explicit LocalSearchMdp(Objective objective,
                          std::shared_ptr<const NeighborhoodCriterion> criterion = hamming(1));

  int n() const { return objective_.n(); }
  std::uint64_t num_states() const { return objective_.num_states(); }
  bool contains(State i) const { return i < num_states(); }

  const Objective& objective() const { return objective_; }
  const NeighborhoodCriterion& criterion() const { return *criterion_; }

  /// f(i); served from a table for small n.
  double value(State i) const { return table_.empty() ? objective_(i) : table_[i]; }

  std::vector<State> neighbors(State i) const;
  std::vector<Move> actions(State i) const;
  double reward(Move a) const { return value(a.to) - value(a.from); }

  /// 1/|A(i)|. Throws InvalidArgument if a is not an action of i.
  double action_weight(State i, Move a) const;

 private:
  void check_state(State i) const;

  Objective objective_;
  std::shared_ptr<const NeighborhoodCriterion> criterion_;
  std::vector<double> table_;
};

}  // namespace lsmdp
