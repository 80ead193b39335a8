#include "lsmdp/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <unordered_set>

#include "lsmdp/errors.hpp"
#include "parallel.hpp"

namespace lsmdp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double ratio(double numerator, double denominator) {
  if (numerator == 0.0) return 0.0;
  if (denominator == 0.0) return kInf;
  return numerator / denominator;
}

// Moving average of the `window` terms ending at index `last`, summed afresh
// so that equal terms give bit-identical averages.
double window_mean(std::span<const double> terms, std::size_t last, std::size_t window) {
  double total = 0.0;
  for (std::size_t k = last + 1 - window; k <= last; ++k) total += terms[k];
  return total / static_cast<double>(window);
}

}  // namespace

Sigma sigma(const LocalSearchMdp& mdp, Move a) {
  return mdp.value(a.to) <= mdp.value(a.from) ? Sigma::exploration : Sigma::exploitation;
}

MovePartition partition_moves(const LocalSearchMdp& mdp, State i, TimeIndex /*t*/) {
  MovePartition p;
  const double fi = mdp.value(i);
  for (State j : mdp.neighbors(i)) {
    (mdp.value(j) > fi ? p.improving : p.non_improving).push_back(j);
  }
  return p;
}

AlphaBeta alpha_beta(const LocalSearchMdp& mdp, State i, TimeIndex t) {
  const auto p = partition_moves(mdp, i, t);
  const std::uint64_t total = p.improving.size() + p.non_improving.size();
  if (total == 0) {
    throw UndefinedCoefficient("alpha/beta undefined: state " + to_bits(i, mdp.n()) +
                               " has no actions");
  }
  return {{p.non_improving.size(), total}, {p.improving.size(), total}};
}

double gamma(const LocalSearchMdp& mdp, State i, TimeIndex t) {
  const auto p = partition_moves(mdp, i, t);
  return ratio(static_cast<double>(p.improving.size()), static_cast<double>(p.non_improving.size()));
}

GammaTrajectory gamma_trajectory(const Policy& policy, const LocalSearchMdp& mdp, State start,
                                 std::size_t t_max, Rng& rng) {
  GammaTrajectory out;
  State current = start;
  for (std::size_t t = 0;; ++t) {
    const double g = gamma(mdp, current);
    out.states.push_back(current);
    out.gamma.push_back(g);
    if (g == 0.0 && !out.first_zero) out.first_zero = t;
    if (t == t_max) break;
    current = step(policy, mdp, current, static_cast<TimeIndex>(t), rng).next;
  }
  return out;
}

MoveMass move_mass(const LocalSearchMdp& mdp, const ActionDistribution& distribution) {
  MoveMass m;
  for (const auto& [a, p] : distribution.entries) {
    (sigma(mdp, a) == Sigma::exploration ? m.exploration : m.exploitation) += p;
  }
  return m;
}

double mass_ratio(double exploration, double exploitation) { return ratio(exploration, exploitation); }

double delta_ia(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t) {
  const auto m = move_mass(mdp, action_distribution(policy, mdp, i, t));
  return mass_ratio(m.exploration, m.exploitation);
}

SeriesAnalysis analyze_series(std::span<const double> terms, const SeriesOptions& options) {
  SeriesAnalysis out;
  out.terms = terms.size();
  if (terms.empty()) return out;

  bool all_zero = true;
  bool infinite = false;
  for (double x : terms) {
    if (std::isnan(x) || x < 0.0) {
      out.partial_sum = std::numeric_limits<double>::quiet_NaN();
      out.tail_bound = kInf;
      return out;
    }
    infinite = infinite || std::isinf(x);
    all_zero = all_zero && x == 0.0;
    out.partial_sum += x;
  }
  if (all_zero) {
    out.verdict = Verdict::zero;
    return out;
  }
  if (infinite) {
    out.verdict = Verdict::diverging;
    out.tail_ratio = kInf;
    out.tail_bound = kInf;
    return out;
  }

  const std::size_t n = terms.size();
  out.tail_bound = kInf;
  if (n >= 2) {
    const std::size_t window = std::min(options.ratio_window, n - 1);
    double worst = 0.0;
    for (std::size_t k = n - window; k < n; ++k) {
      worst = std::max(worst, ratio(terms[k], terms[k - 1]));
    }
    out.tail_ratio = worst;
    if (worst < 1.0) {
      out.tail_bound = terms[n - 1] * worst / (1.0 - worst);
      if (out.tail_bound <= options.tail_tolerance) {
        out.verdict = Verdict::converged;
        return out;
      }
    }
  }

  const std::size_t window = std::min(options.average_window, n);
  const std::size_t averages = n - window + 1;
  const std::size_t span = std::min(options.divergence_span, averages);
  if (span >= 2) {
    bool nondecreasing = true;
    double previous = window_mean(terms, n - span, window);
    for (std::size_t last = n - span + 1; last < n && nondecreasing; ++last) {
      const double current = window_mean(terms, last, window);
      nondecreasing = current >= previous;
      previous = current;
    }
    if (nondecreasing && previous > 0.0) {
      out.verdict = Verdict::diverging;
      return out;
    }
  }
  out.verdict = Verdict::inconclusive;
  return out;
}

std::vector<double> delta_terms(const Policy& policy, const LocalSearchMdp& mdp, State i,
                                std::size_t horizon) {
  // The action average (1/|A(i)|) sum_a delta_ia(t) collapses to delta_ia(t)
  // because the mass ratio is the same for every action of i.
  std::vector<double> terms;
  terms.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    terms.push_back(delta_ia(policy, mdp, i, static_cast<TimeIndex>(t)));
  }
  return terms;
}

SeriesAnalysis delta_i(const Policy& policy, const LocalSearchMdp& mdp, State i,
                       const SeriesOptions& options) {
  if (options.horizon < 1) throw InvalidArgument("delta horizon must be >= 1");
  if (!(options.tail_tolerance > 0.0)) throw InvalidArgument("tail tolerance must be > 0");
  const auto terms = delta_terms(policy, mdp, i, options.horizon);
  return analyze_series(terms, options);
}

std::vector<State> reachable_states(const Policy& policy, const LocalSearchMdp& mdp, State start) {
  if (!mdp.contains(start)) throw InvalidArgument("start state out of range");
  std::unordered_set<State> seen{start};
  std::deque<State> frontier{start};
  while (!frontier.empty()) {
    const State i = frontier.front();
    frontier.pop_front();
    for (const auto& [a, p] : action_distribution(policy, mdp, i, 0).entries) {
      if (p > 0.0 && seen.insert(a.to).second) frontier.push_back(a.to);
    }
  }
  std::vector<State> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

CoefficientReport classify(const Policy& policy, const LocalSearchMdp& mdp,
                           const ClassifyOptions& options) {
  if (options.series.horizon < 1) throw InvalidArgument("delta horizon must be >= 1");
  if (!(options.series.tail_tolerance > 0.0)) throw InvalidArgument("tail tolerance must be > 0");

  std::vector<State> states;
  if (options.states) {
    states = *options.states;
    if (states.empty()) throw InvalidArgument("empty state sample");
    for (State s : states) {
      if (!mdp.contains(s)) throw InvalidArgument("sampled state out of range");
    }
  } else if (options.reachable_from) {
    states = reachable_states(policy, mdp, *options.reachable_from);
  } else {
    if (mdp.n() > kMaxExactBits) {
      throw ResourceLimit("exhaustive classification is capped at n=" +
                          std::to_string(kMaxExactBits) + "; pass an explicit state sample");
    }
    states.resize(mdp.num_states());
    for (State s = 0; s < mdp.num_states(); ++s) states[s] = s;
  }

  CoefficientReport report;
  report.objective = mdp.objective().name();
  report.neighborhood = mdp.criterion().descriptor();
  report.policy = policy.descriptor();
  report.n = mdp.n();
  report.options = options.series;
  report.horizon = options.series.horizon;
  report.states.resize(states.size());

  detail::parallel_for(states.size(), 0, [&](std::size_t k) {
    const State i = states[k];
    auto& row = report.states[k];
    row.state = i;
    row.alpha_beta = alpha_beta(mdp, i);
    row.gamma = gamma(mdp, i);
    row.delta = delta_i(policy, mdp, i, options.series);
    row.aggregated = row.alpha_beta.beta.numerator > 0;
  });
  // Only local maxima in scope: nothing else to judge by, so use their own series.
  if (std::none_of(report.states.begin(), report.states.end(),
                   [](const StateCoefficients& row) { return row.aggregated; })) {
    for (auto& row : report.states) row.aggregated = true;
  }

  double delta_star = 0.0;
  for (const auto& row : report.states) {
    if (!row.aggregated) {
      ++report.excluded_count;
      continue;
    }
    switch (row.delta.verdict) {
      case Verdict::zero:
        ++report.zero_count;
        break;
      case Verdict::converged:
        ++report.converged_count;
        delta_star = std::max(delta_star, row.delta.partial_sum);
        report.max_tail_ratio = std::max(report.max_tail_ratio, row.delta.tail_ratio);
        break;
      case Verdict::diverging:
        ++report.diverging_count;
        break;
      case Verdict::inconclusive:
        ++report.inconclusive_count;
        break;
    }
  }

  report.inconclusive = report.inconclusive_count > 0;
  if (report.diverging_count > 0) {
    report.orientation = Orientation::exploration_oriented;
    report.delta_star = kInf;
  } else if (report.inconclusive) {
    report.orientation = Orientation::inconclusive;
    report.delta_star = delta_star;
  } else if (report.converged_count == 0) {
    report.orientation = Orientation::exploitation_oriented;
    report.delta_star = 0.0;
  } else {
    report.orientation = Orientation::balanced;
    report.delta_star = delta_star;
  }
  return report;
}

double decomposition_check(const Policy& policy, const LocalSearchMdp& mdp, State i, TimeIndex t) {
  const auto actions = mdp.actions(i);
  const auto ab = alpha_beta(mdp, i, t);
  const double alpha = ab.alpha.value();
  const double beta = ab.beta.value();
  const double minus = static_cast<double>(ab.alpha.numerator);
  const double plus = static_cast<double>(ab.beta.numerator);
  const double fi = mdp.value(i);

  double best = -kInf;
  for (const auto& a : actions) best = std::max(best, mdp.value(a.to));
  double ties = 0.0;
  for (const auto& a : actions) ties += mdp.value(a.to) == best;

  // Class-conditional selection terms of each policy's explicit form.
  auto conditional = [&](Move a) -> std::pair<double, double> {
    const bool improving = mdp.value(a.to) > fi;
    return std::visit(
        Overloaded{
            [&](const RandomWalk&) -> std::pair<double, double> {
              return improving ? std::pair{0.0, 1.0 / plus} : std::pair{1.0 / minus, 0.0};
            },
            [&](const SimulatedAnnealing& sa) -> std::pair<double, double> {
              if (improving) return {0.0, 1.0 / plus};
              return {acceptance_probability(mdp.value(a.to) - fi, temperature_at(sa, t)) / minus,
                      0.0};
            },
            [&](const Metropolis& m) -> std::pair<double, double> {
              if (improving) return {0.0, 1.0 / plus};
              return {acceptance_probability(mdp.value(a.to) - fi, m.temperature) / minus, 0.0};
            },
            [&](const HillClimbing& hc) -> std::pair<double, double> {
              const bool chosen = mdp.value(a.to) == best;
              if (best > fi) return {0.0, chosen ? 1.0 / (ties * beta) : 0.0};
              if (hc.variant == HillClimbingVariant::strict) return {0.0, 0.0};
              return {chosen ? 1.0 / (ties * alpha) : 0.0, 0.0};
            },
        },
        policy.kind());
  };

  const auto distribution = action_distribution(policy, mdp, i, t);
  double residual = ab.complementary() ? 0.0 : 1.0;
  for (std::size_t k = 0; k < actions.size(); ++k) {
    const auto [explore, exploit] = conditional(actions[k]);
    const double rhs = alpha * explore + beta * exploit;
    residual += std::abs(distribution.entries[k].second - rhs);
  }
  return residual;
}

std::string to_string(Sigma s) { return s == Sigma::exploration ? "exploration" : "exploitation"; }

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::zero:
      return "zero";
    case Verdict::converged:
      return "converged";
    case Verdict::diverging:
      return "diverging";
    case Verdict::inconclusive:
      break;
  }
  return "inconclusive";
}

std::string to_string(Orientation o) {
  switch (o) {
    case Orientation::exploitation_oriented:
      return "exploitation-oriented";
    case Orientation::balanced:
      return "balanced";
    case Orientation::exploration_oriented:
      return "exploration-oriented";
    case Orientation::inconclusive:
      break;
  }
  return "inconclusive";
}

}  // namespace lsmdp
