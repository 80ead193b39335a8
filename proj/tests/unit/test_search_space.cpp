#include <algorithm>
#include <bit>

#include <gtest/gtest.h>

#include "lsmdp/errors.hpp"
#include "lsmdp/objectives.hpp"
#include "lsmdp/search_space.hpp"

using namespace lsmdp;

namespace {

std::vector<State> bits_list(std::initializer_list<const char*> items) {
  std::vector<State> out;
  for (const char* s : items) out.push_back(parse_bits(s));
  return out;
}

}  // namespace

TEST(SearchSpace, BitStrings) {
  EXPECT_EQ(to_bits(3, 3), "011");
  EXPECT_EQ(parse_bits("011"), 3U);
  EXPECT_EQ(parse_bits("100"), 4U);
  for (State x = 0; x < 64; ++x) ASSERT_EQ(parse_bits(to_bits(x, 6)), x);
  EXPECT_THROW(parse_bits("01a"), InvalidArgument);
}

TEST(SearchSpace, HammingOneNeighbors) {
  const LocalSearchMdp mdp(make_onemax(3));
  EXPECT_EQ(mdp.neighbors(parse_bits("011")), bits_list({"001", "010", "111"}));
  EXPECT_EQ(mdp.neighbors(parse_bits("000")), bits_list({"001", "010", "100"}));
}

TEST(SearchSpace, HammingThreeNeighbors) {
  const LocalSearchMdp mdp(make_onemax(3), hamming(3));
  EXPECT_EQ(mdp.neighbors(0), bits_list({"111"}));
}

TEST(SearchSpace, HammingNeighborsMatchBruteForce) {
  for (int n = 1; n <= 8; ++n) {
    for (int d = 1; d <= n; ++d) {
      const LocalSearchMdp mdp(make_onemax(n), hamming(d));
      for (State i = 0; i < mdp.num_states(); ++i) {
        std::vector<State> expected;
        for (State j = 0; j < mdp.num_states(); ++j) {
          if (std::popcount(i ^ j) == d) expected.push_back(j);
        }
        ASSERT_EQ(mdp.neighbors(i), expected) << n << " " << d << " " << i;
      }
    }
  }
}

TEST(SearchSpace, ActionsOnePerNeighbor) {
  const LocalSearchMdp mdp(make_onemax(3));
  EXPECT_EQ(mdp.actions(parse_bits("011")).size(), 3U);
  std::size_t total = 0;
  for (State i = 0; i < 8; ++i) {
    const auto actions = mdp.actions(i);
    const auto neighbors = mdp.neighbors(i);
    ASSERT_EQ(actions.size(), neighbors.size());
    for (std::size_t k = 0; k < actions.size(); ++k) {
      EXPECT_EQ(actions[k], (Move{i, neighbors[k]}));
    }
    total += actions.size();
  }
  EXPECT_EQ(total, 24U);

  const LocalSearchMdp one(make_onemax(1));
  EXPECT_EQ(one.actions(0), (std::vector<Move>{{0, 1}}));
}

TEST(SearchSpace, Rewards) {
  const LocalSearchMdp mdp(make_onemax(3));
  EXPECT_EQ(mdp.reward({parse_bits("011"), parse_bits("111")}), 1.0);
  EXPECT_EQ(mdp.reward({parse_bits("011"), parse_bits("001")}), -1.0);
  const LocalSearchMdp flat(make_constant(3, 4.0));
  EXPECT_EQ(flat.reward({0, 1}), 0.0);
}

TEST(SearchSpace, ActionWeights) {
  const LocalSearchMdp mdp(make_onemax(3));
  for (State i = 0; i < 8; ++i) {
    for (const auto& a : mdp.actions(i)) EXPECT_DOUBLE_EQ(mdp.action_weight(i, a), 1.0 / 3.0);
  }
  const LocalSearchMdp one(make_onemax(1));
  EXPECT_EQ(one.action_weight(0, {0, 1}), 1.0);
  const LocalSearchMdp four(make_onemax(4));
  EXPECT_EQ(four.action_weight(0, {0, 1}), 0.25);
  EXPECT_THROW(mdp.action_weight(0, {0, 3}), InvalidArgument);
  EXPECT_THROW(mdp.action_weight(1, {0, 1}), InvalidArgument);
}

TEST(SearchSpace, SymmetryAntisymmetryAndWeightMass) {
  const std::vector<Objective> objectives = {make_onemax(12), make_leading_ones(12), make_trap(12, 4),
                                             make_nk_landscape(12, 3, 5)};
  for (const auto& f : objectives) {
    for (int d : {1, 2}) {
      const LocalSearchMdp mdp(f, hamming(d));
      for (State i = 0; i < mdp.num_states(); ++i) {
        double mass = 0.0;
        for (const auto& a : mdp.actions(i)) {
          const auto back = mdp.neighbors(a.to);
          ASSERT_TRUE(std::binary_search(back.begin(), back.end(), i));
          ASSERT_EQ(mdp.reward(a), -mdp.reward({a.to, a.from}));
          mass += mdp.action_weight(i, a);
        }
        ASSERT_NEAR(mass, 1.0, 1e-12);
      }
    }
  }
}

TEST(SearchSpace, NeighborhoodDescriptors) {
  EXPECT_EQ(parse_neighborhood("hamming:1")->descriptor(), "hamming:1");
  EXPECT_EQ(parse_neighborhood("hamming:d=2")->descriptor(), "hamming:2");
  EXPECT_THROW(parse_neighborhood("hamming:0"), std::exception);
  EXPECT_THROW(parse_neighborhood("swap:1"), std::exception);
  EXPECT_THROW(LocalSearchMdp(make_onemax(3), hamming(4)), InvalidArgument);
}

TEST(SearchSpace, TableMatchesObjective) {
  const auto f = make_nk_landscape(10, 2, 8);
  const LocalSearchMdp mdp(f);
  for (State i = 0; i < mdp.num_states(); ++i) ASSERT_EQ(mdp.value(i), f(i));
  EXPECT_TRUE(mdp.contains(1023));
  EXPECT_FALSE(mdp.contains(1024));
}
