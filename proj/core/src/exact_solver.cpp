#include "lsmdp/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "lsmdp/errors.hpp"
#include "parallel.hpp"

namespace lsmdp {

namespace {

constexpr std::size_t kMaxSweeps = 200'000;

void check_dense(const LocalSearchMdp& mdp) {
  if (mdp.n() > kMaxDenseBits) {
    throw ResourceLimit("dense policy matrices are capped at n=" + std::to_string(kMaxDenseBits) +
                        ", got n=" + std::to_string(mdp.n()));
  }
}

void check_discount(double discount) {
  if (!(discount >= 0.0 && discount <= 1.0)) {
    throw InvalidArgument("discount must lie in [0, 1], got " + std::to_string(discount));
  }
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, std::abs(a[k] - b[k]));
  return d;
}

// r + discount * P v
std::vector<double> bellman(const PolicyMatrices& m, double discount, const std::vector<double>& v) {
  auto next = m.transition.multiply(v);
  for (std::size_t k = 0; k < next.size(); ++k) next[k] = m.reward[k] + discount * next[k];
  return next;
}

}  // namespace

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(size_, 0.0);
  for (std::size_t r = 0; r < size_; ++r) {
    const double* row_data = data_.data() + r * size_;
    double total = 0.0;
    for (std::size_t c = 0; c < size_; ++c) total += row_data[c] * x[c];
    y[r] = total;
  }
  return y;
}

std::vector<double> DenseMatrix::left_multiply(std::span<const double> x) const {
  std::vector<double> y(size_, 0.0);
  for (std::size_t r = 0; r < size_; ++r) {
    if (x[r] == 0.0) continue;
    const double* row_data = data_.data() + r * size_;
    for (std::size_t c = 0; c < size_; ++c) y[c] += x[r] * row_data[c];
  }
  return y;
}

PolicyMatrices freeze(const Policy& policy, const LocalSearchMdp& mdp, TimeIndex t) {
  check_dense(mdp);
  if (t < 0) throw InvalidArgument("time index must be >= 0");
  const std::size_t size = mdp.num_states();
  PolicyMatrices m{DenseMatrix(size), std::vector<double>(size, 0.0), t};
  detail::parallel_for(size, 0, [&](std::size_t i) {
    const auto d = action_distribution(policy, mdp, i, t);
    double reward = 0.0;
    for (const auto& [a, p] : d.entries) {
      m.transition(i, a.to) += p;
      reward += p * mdp.reward(a);
    }
    m.transition(i, i) += d.stay_probability;
    m.reward[i] = reward;
  });
  return m;
}

PolicyMatrices freeze(const GreedyPolicy& policy, const LocalSearchMdp& mdp) {
  check_dense(mdp);
  const std::size_t size = mdp.num_states();
  if (policy.next.size() != size) throw InvalidArgument("greedy policy size does not match the MDP");
  PolicyMatrices m{DenseMatrix(size), std::vector<double>(size, 0.0), 0};
  for (std::size_t i = 0; i < size; ++i) {
    if (const auto& j = policy.next[i]) {
      m.transition(i, *j) = 1.0;
      m.reward[i] = mdp.reward({i, *j});
    } else {
      m.transition(i, i) = 1.0;
    }
  }
  return m;
}

std::vector<std::vector<std::size_t>> recurrent_classes(const DenseMatrix& transition) {
  const std::size_t size = transition.size();
  std::vector<std::vector<std::size_t>> adjacency(size);
  for (std::size_t i = 0; i < size; ++i) {
    const auto row = transition.row(i);
    for (std::size_t j = 0; j < size; ++j) {
      if (row[j] > 0.0) adjacency[i].push_back(j);
    }
  }

  // Iterative Tarjan.
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> index(size, kUnvisited), low(size, 0), component(size, kUnvisited);
  std::vector<bool> on_stack(size, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;
  struct Frame {
    std::size_t node;
    std::size_t edge;
  };
  for (std::size_t root = 0; root < size; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& frame = call.back();
      const std::size_t v = frame.node;
      if (frame.edge < adjacency[v].size()) {
        const std::size_t w = adjacency[v][frame.edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::vector<std::size_t> members;
        std::size_t w = 0;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components.size();
          members.push_back(w);
        } while (w != v);
        components.push_back(std::move(members));
      }
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
    }
  }

  std::vector<std::vector<std::size_t>> closed;
  for (std::size_t c = 0; c < components.size(); ++c) {
    bool is_closed = true;
    for (std::size_t v : components[c]) {
      for (std::size_t w : adjacency[v]) is_closed = is_closed && component[w] == c;
    }
    if (is_closed) {
      auto members = components[c];
      std::sort(members.begin(), members.end());
      closed.push_back(std::move(members));
    }
  }
  std::sort(closed.begin(), closed.end());
  return closed;
}

ValueVector evaluate_stationary(const PolicyMatrices& matrices, double discount, double tolerance) {
  check_discount(discount);
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");
  const std::size_t size = matrices.reward.size();

  if (discount == 1.0) {
    double scale = 1.0;
    for (double r : matrices.reward) scale = std::max(scale, std::abs(r));
    for (const auto& members : recurrent_classes(matrices.transition)) {
      for (std::size_t i : members) {
        if (std::abs(matrices.reward[i]) > 1e-12 * scale) {
          throw DivergentValue("undiscounted value diverges: recurrent class containing state " +
                               std::to_string(members.front()) + " collects reward");
        }
      }
    }
  }

  // Stop once the contraction bound puts the iterate within `tolerance` of
  // the fixed point; undiscounted chains stop when the update vanishes.
  const double stop = discount < 1.0 && discount > 0.0 ? tolerance * (1.0 - discount) / discount
                                                       : tolerance;
  ValueVector out;
  out.discount = discount;
  out.method = ValueMethod::policy_eval;
  std::vector<double> v(size, 0.0);
  for (std::size_t sweep = 1;; ++sweep) {
    auto next = bellman(matrices, discount, v);
    const double change = sup_distance(next, v);
    v = std::move(next);
    out.iterations = sweep;
    if (change <= stop || discount == 0.0) break;
    if (sweep == kMaxSweeps) {
      throw DivergentValue("policy evaluation did not converge in " + std::to_string(kMaxSweeps) +
                           " sweeps");
    }
  }
  out.residual = sup_distance(bellman(matrices, discount, v), v);
  out.values = std::move(v);
  return out;
}

ValueVector evaluate_nonstationary(const Policy& policy, const LocalSearchMdp& mdp,
                                   std::size_t horizon, double discount) {
  check_dense(mdp);
  check_discount(discount);
  ValueVector out;
  out.discount = discount;
  out.method = ValueMethod::policy_eval;
  out.iterations = horizon;
  std::vector<double> v(mdp.num_states(), 0.0);
  std::optional<PolicyMatrices> stationary;
  if (policy.is_stationary() && horizon > 0) stationary = freeze(policy, mdp, 0);
  for (std::size_t step = horizon; step-- > 0;) {
    if (stationary) {
      v = bellman(*stationary, discount, v);
    } else {
      v = bellman(freeze(policy, mdp, static_cast<TimeIndex>(step)), discount, v);
    }
  }
  out.values = std::move(v);
  return out;
}

OptimalSolution value_iteration(const LocalSearchMdp& mdp, double discount, double tolerance) {
  check_dense(mdp);
  if (!(discount > 0.0 && discount < 1.0)) {
    throw InvalidArgument("value iteration needs a discount in (0, 1), got " +
                          std::to_string(discount));
  }
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be > 0");

  const std::size_t size = mdp.num_states();
  std::vector<std::vector<State>> neighbors(size);
  for (std::size_t i = 0; i < size; ++i) neighbors[i] = mdp.neighbors(i);

  auto backup = [&](const std::vector<double>& v) {
    std::vector<double> next(size);
    for (std::size_t i = 0; i < size; ++i) {
      double best = discount * v[i];
      for (State j : neighbors[i]) best = std::max(best, mdp.reward({i, j}) + discount * v[j]);
      next[i] = best;
    }
    return next;
  };

  const double stop = tolerance * (1.0 - discount) / discount;
  OptimalSolution out;
  out.value.discount = discount;
  out.value.method = ValueMethod::value_iteration;
  std::vector<double> v(size, 0.0);
  for (std::size_t sweep = 1;; ++sweep) {
    auto next = backup(v);
    const double change = sup_distance(next, v);
    v = std::move(next);
    out.value.iterations = sweep;
    if (change <= stop) break;
    if (sweep == kMaxSweeps) throw DivergentValue("value iteration did not converge");
  }
  out.value.residual = sup_distance(backup(v), v);

  const double tie = 10.0 * tolerance;
  out.policy.next.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    double best = discount * v[i];
    for (State j : neighbors[i]) best = std::max(best, mdp.reward({i, j}) + discount * v[j]);
    if (discount * v[i] >= best - tie) continue;
    for (State j : neighbors[i]) {
      if (mdp.reward({i, j}) + discount * v[j] >= best - tie) {
        out.policy.next[i] = j;
        break;
      }
    }
  }
  out.value.values = std::move(v);
  return out;
}

double enumerate_trajectories(const Policy& policy, const LocalSearchMdp& mdp, State start,
                              std::size_t horizon, double discount, std::uint64_t leaf_budget) {
  check_discount(discount);
  if (!mdp.contains(start)) throw InvalidArgument("start state out of range");
  std::uint64_t leaves = 0;
  std::function<double(State, TimeIndex, std::size_t)> expand =
      [&](State i, TimeIndex t, std::size_t remaining) -> double {
    if (remaining == 0) {
      if (++leaves > leaf_budget) {
        throw ResourceLimit("trajectory enumeration exceeded " + std::to_string(leaf_budget) +
                            " leaves");
      }
      return 0.0;
    }
    const auto d = action_distribution(policy, mdp, i, t);
    double total = 0.0;
    for (const auto& [a, p] : d.entries) {
      if (p <= 0.0) continue;
      total += p * (mdp.reward(a) + discount * expand(a.to, t + 1, remaining - 1));
    }
    if (d.stay_probability > 0.0) {
      total += d.stay_probability * discount * expand(i, t + 1, remaining - 1);
    }
    return total;
  };
  return expand(start, 0, horizon);
}

std::string to_string(ValueMethod m) {
  switch (m) {
    case ValueMethod::policy_eval:
      return "policy_eval";
    case ValueMethod::value_iteration:
      return "value_iteration";
    case ValueMethod::trajectory_enum:
      break;
  }
  return "trajectory_enum";
}

}  // namespace lsmdp
