#include <bit>
#include <cmath>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "lsmdp/errors.hpp"
#include "lsmdp/exact_solver.hpp"
#include "lsmdp/objectives.hpp"
#include "lsmdp/policies.hpp"
#include "lsmdp/search_space.hpp"

using namespace lsmdp;

namespace {

std::vector<Policy> stationary_policies() {
  return {hill_climbing(), hill_climbing(HillClimbingVariant::literal), random_walk(), metropolis(1.0),
          metropolis(0.2)};
}

std::vector<Objective> builtins(int n) {
  std::vector<Objective> out = {make_onemax(n), make_leading_ones(n), make_nk_landscape(n, std::min(n - 1, 2), 5),
                                make_constant(n, 1.0)};
  if (n % 2 == 0) out.push_back(make_trap(n, 2));
  if (n % 4 == 0) out.push_back(make_trap(n, 4));
  return out;
}

}  // namespace

TEST(ExactSolver, FreezeHillClimbing) {
  const LocalSearchMdp mdp(make_onemax(2));
  const auto m = freeze(hill_climbing(), mdp, 0);
  EXPECT_EQ(m.transition(parse_bits("01"), parse_bits("11")), 1.0);
  EXPECT_EQ(m.transition(3, 3), 1.0);
  EXPECT_EQ(m.reward[1], 1.0);
  EXPECT_EQ(m.reward[3], 0.0);
}

TEST(ExactSolver, FreezeRandomWalk) {
  const LocalSearchMdp mdp(make_onemax(2));
  const auto m = freeze(random_walk(), mdp, 0);
  for (State i = 0; i < 4; ++i) {
    for (State j = 0; j < 4; ++j) {
      const double expected = std::popcount(i ^ j) == 1 ? 0.5 : 0.0;
      EXPECT_EQ(m.transition(i, j), expected);
    }
  }
}

TEST(ExactSolver, FreezeAnnealingCools) {
  const LocalSearchMdp mdp(make_onemax(3));
  const auto sa = simulated_annealing(1.0, 0.5);
  const auto early = freeze(sa, mdp, 0);
  const auto late = freeze(sa, mdp, 5);
  EXPECT_EQ(late.frozen_at, 5);
  for (State i = 0; i < 8; ++i) {
    for (State j : mdp.neighbors(i)) {
      if (mdp.value(j) < mdp.value(i)) {
        EXPECT_LT(late.transition(i, j), early.transition(i, j));
      } else {
        EXPECT_EQ(late.transition(i, j), early.transition(i, j));
      }
    }
  }
}

TEST(ExactSolver, FreezeIsRowStochastic) {
  for (int n = 1; n <= 8; ++n) {
    const LocalSearchMdp mdp(make_leading_ones(n));
    auto policies = stationary_policies();
    policies.push_back(simulated_annealing(2.0, 0.9));
    for (const auto& p : policies) {
      for (TimeIndex t : {0, 7, 20}) {
        const auto m = freeze(p, mdp, t);
        for (std::size_t i = 0; i < m.transition.size(); ++i) {
          double sum = 0.0;
          for (double x : m.transition.row(i)) {
            ASSERT_GE(x, 0.0);
            sum += x;
          }
          ASSERT_NEAR(sum, 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(ExactSolver, DenseCap) {
  const LocalSearchMdp mdp(make_onemax(15));
  EXPECT_THROW(freeze(random_walk(), mdp, 0), ResourceLimit);
  EXPECT_THROW(value_iteration(mdp, 0.9, 1e-8), ResourceLimit);
}

TEST(ExactSolver, UndiscountedHillClimbing) {
  const LocalSearchMdp mdp(make_onemax(2));
  const auto v = evaluate_stationary(freeze(hill_climbing(), mdp, 0), 1.0);
  EXPECT_NEAR(v.values[0], 2.0, 1e-12);
  EXPECT_NEAR(v.values[1], 1.0, 1e-12);
  EXPECT_NEAR(v.values[2], 1.0, 1e-12);
  EXPECT_NEAR(v.values[3], 0.0, 1e-12);
  EXPECT_EQ(v.method, ValueMethod::policy_eval);
}

TEST(ExactSolver, ZeroObjectiveHasZeroValue) {
  const LocalSearchMdp mdp(make_constant(4, 0.0));
  for (const auto& p : stationary_policies()) {
    for (double discount : {0.0, 0.5, 0.9, 1.0}) {
      const auto v = evaluate_stationary(freeze(p, mdp, 0), discount);
      for (double x : v.values) EXPECT_EQ(x, 0.0);
    }
  }
  const auto opt = value_iteration(mdp, 0.9, 1e-10);
  for (double x : opt.value.values) EXPECT_EQ(x, 0.0);
  for (const auto& next : opt.policy.next) EXPECT_FALSE(next.has_value());
}

TEST(ExactSolver, MyopicValueIsReward) {
  const LocalSearchMdp mdp(make_onemax(2));
  const auto m = freeze(random_walk(), mdp, 0);
  const auto v = evaluate_stationary(m, 0.0);
  EXPECT_EQ(v.values, m.reward);
}

TEST(ExactSolver, DivergentUndiscountedValue) {
  const LocalSearchMdp mdp(make_onemax(3));
  EXPECT_THROW(evaluate_stationary(freeze(random_walk(), mdp, 0), 1.0), DivergentValue);
  EXPECT_THROW(evaluate_stationary(freeze(metropolis(1.0), mdp, 0), 1.0), DivergentValue);
  EXPECT_THROW(evaluate_stationary(freeze(random_walk(), mdp, 0), 1.5), InvalidArgument);
}

TEST(ExactSolver, RecurrentClasses) {
  const LocalSearchMdp mdp(make_onemax(2));
  const auto walk = recurrent_classes(freeze(random_walk(), mdp, 0).transition);
  ASSERT_EQ(walk.size(), 1U);
  EXPECT_EQ(walk[0].size(), 4U);
  const auto hc = recurrent_classes(freeze(hill_climbing(), mdp, 0).transition);
  ASSERT_EQ(hc.size(), 1U);
  EXPECT_EQ(hc[0], std::vector<std::size_t>{3});

  const LocalSearchMdp trap(make_trap(4, 2));
  // local maxima of the 2-bit trap: each block 00 or 11
  const auto classes = recurrent_classes(freeze(hill_climbing(), trap, 0).transition);
  EXPECT_EQ(classes.size(), 4U);
}

TEST(ExactSolver, TelescopingIdentity) {
  for (const auto& f : {make_onemax(6), make_nk_landscape(6, 2, 9)}) {
    const LocalSearchMdp mdp(f);
    const auto v = evaluate_stationary(freeze(hill_climbing(), mdp, 0), 1.0);
    for (State i = 0; i < mdp.num_states(); ++i) {
      // follow argmax while it is unique and improving
      State x = i;
      bool unique = true;
      for (;;) {
        double best = mdp.value(x);
        std::vector<State> top;
        for (State j : mdp.neighbors(x)) {
          if (mdp.value(j) > best) {
            best = mdp.value(j);
            top = {j};
          } else if (mdp.value(j) == best && best > mdp.value(x)) {
            top.push_back(j);
          }
        }
        if (top.empty()) break;
        if (top.size() > 1) unique = false;
        x = top.front();
      }
      if (unique) {
        EXPECT_NEAR(v.values[i], mdp.value(x) - mdp.value(i), 1e-10) << f.name() << " " << i;
      }
      if (f.name().rfind("onemax", 0) == 0) EXPECT_NEAR(v.values[i], 6.0 - std::popcount(i), 1e-10);
    }
  }
}

TEST(ExactSolver, NonstationaryMatchesStationary) {
  const LocalSearchMdp mdp(make_onemax(4));
  for (const auto& p : stationary_policies()) {
    const auto a = evaluate_stationary(freeze(p, mdp, 0), 0.9);
    const auto b = evaluate_nonstationary(p, mdp, 500, 0.9);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-9);
  }
}

TEST(ExactSolver, HorizonOneIsReward) {
  const LocalSearchMdp mdp(make_onemax(3));
  const auto sa = simulated_annealing(1.0, 0.5);
  const auto v = evaluate_nonstationary(sa, mdp, 1, 0.9);
  EXPECT_EQ(v.values, freeze(sa, mdp, 0).reward);
  const auto zero = evaluate_nonstationary(sa, mdp, 0, 0.9);
  for (double x : zero.values) EXPECT_EQ(x, 0.0);
}

TEST(ExactSolver, AnnealingValueGrowsWithHorizon) {
  const LocalSearchMdp mdp(make_onemax(3));
  const auto sa = simulated_annealing(1.0, 0.5);
  double previous = -1.0;
  for (std::size_t h = 0; h <= 100; ++h) {
    const double v = evaluate_nonstationary(sa, mdp, h, 1.0).values[0];
    EXPECT_GE(v, previous - 1e-12) << h;
    if (h <= 6) EXPECT_NEAR(v, enumerate_trajectories(sa, mdp, 0, h), 1e-12);
    previous = v;
  }
}

TEST(ExactSolver, EnumeratorExamples) {
  const LocalSearchMdp mdp(make_onemax(2));
  EXPECT_NEAR(enumerate_trajectories(hill_climbing(), mdp, 0, 3), 2.0, 1e-15);
  for (const auto& p : stationary_policies()) EXPECT_EQ(enumerate_trajectories(p, mdp, 1, 0), 0.0);
  const auto sa = simulated_annealing(1.0, 0.5);
  const auto v = evaluate_nonstationary(sa, mdp, 2, 1.0);
  EXPECT_NEAR(enumerate_trajectories(sa, mdp, 0, 2), v.values[0], 1e-12);
}

TEST(ExactSolver, EnumeratorLeafBudget) {
  const LocalSearchMdp mdp(make_onemax(10));
  EXPECT_THROW(enumerate_trajectories(random_walk(), mdp, 0, 10), ResourceLimit);
  EXPECT_THROW(enumerate_trajectories(random_walk(), mdp, 0, 5, 1.0, 1000), ResourceLimit);
}

TEST(ExactSolver, OracleTriangle) {
  for (int n = 1; n <= 3; ++n) {
    for (const auto& f : {make_onemax(n), make_leading_ones(n)}) {
      const LocalSearchMdp mdp(f);
      for (const auto& p : stationary_policies()) {
        const auto stationary = evaluate_stationary(freeze(p, mdp, 0), 0.9);
        const auto series = evaluate_nonstationary(p, mdp, 500, 0.9);
        for (State i = 0; i < mdp.num_states(); ++i) {
          ASSERT_NEAR(stationary.values[i], series.values[i], 1e-9);
          for (std::size_t h = 0; h <= 6; ++h) {
            const auto finite = evaluate_nonstationary(p, mdp, h, 0.9);
            ASSERT_NEAR(enumerate_trajectories(p, mdp, i, h, 0.9), finite.values[i], 1e-9)
                << p.descriptor() << " " << i << " h=" << h;
          }
        }
      }
    }
  }
}

TEST(ExactSolver, GreedyPolicyImprovesOnOnemax) {
  const LocalSearchMdp mdp(make_onemax(3));
  const auto opt = value_iteration(mdp, 0.9, 1e-10);
  EXPECT_EQ(opt.value.method, ValueMethod::value_iteration);
  for (State i = 0; i < 8; ++i) {
    if (i == 7) {
      EXPECT_FALSE(opt.policy.next[i].has_value());
      continue;
    }
    ASSERT_TRUE(opt.policy.next[i].has_value());
    EXPECT_GT(mdp.value(*opt.policy.next[i]), mdp.value(i));
  }
  // the greedy policy attains the optimal value
  const auto greedy = evaluate_stationary(freeze(opt.policy, mdp), 0.9);
  for (State i = 0; i < 8; ++i) EXPECT_NEAR(greedy.values[i], opt.value.values[i], 1e-9);
}

TEST(ExactSolver, ValueIterationDominates) {
  for (int n = 1; n <= 8; ++n) {
    for (const auto& f : builtins(n)) {
      const LocalSearchMdp mdp(f);
      const auto opt = value_iteration(mdp, 0.9, 1e-10);
      for (const auto& p : {hill_climbing(), random_walk()}) {
        const auto v = evaluate_stationary(freeze(p, mdp, 0), 0.9);
        for (State i = 0; i < mdp.num_states(); ++i) {
          ASSERT_GE(opt.value.values[i], v.values[i] - 1e-8) << f.name() << " " << p.descriptor();
        }
      }
    }
  }
}

TEST(ExactSolver, ValueIterationArguments) {
  const LocalSearchMdp mdp(make_onemax(3));
  EXPECT_THROW(value_iteration(mdp, 0.9, 0.0), InvalidArgument);
  EXPECT_THROW(value_iteration(mdp, 1.0, 1e-8), InvalidArgument);
}

TEST(ExactSolver, Serialization) {
  const LocalSearchMdp mdp(make_onemax(2));
  const auto opt = value_iteration(mdp, 0.9, 1e-10);
  const auto j = to_json(opt.value);
  EXPECT_EQ(j.at("values").size(), 4U);
  EXPECT_EQ(to_json(opt.policy, 2).at("actions").size(), 4U);
  std::ostringstream csv;
  write_greedy_csv(csv, opt.policy, 2);
  EXPECT_EQ(csv.str(), "state,action\n00,01\n01,11\n10,11\n11,stay\n");
}
