#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rumorlab/chernoff.hpp"
#include "rumorlab/experiments.hpp"

using namespace rumorlab;

TEST(TreePath, TwoNodesTakeOneRound) {
  auto rep = exp_tree_path(2, 50, 1);
  EXPECT_EQ(rep.path_cost, 1u);
  ASSERT_EQ(rep.samples.size(), 3u);
  for (const auto& s : rep.samples) {
    EXPECT_EQ(s.mean, 1.0);
    EXPECT_EQ(s.timeouts, 0u);
  }
}

TEST(TreePath, ThreeNodesMatchOracle) {
  auto rep = exp_tree_path(3, 20000, 2);
  ASSERT_TRUE(rep.exact);
  EXPECT_EQ(to_double(*rep.exact), oracle::path_pull_expected_time(3));
  for (const auto& s : rep.samples) EXPECT_NEAR(s.mean, 3.0, 4 * s.std_error + 1e-9) << s.protocol;
}

TEST(TreePath, LongPathRatiosAreOrderOne) {
  auto rep = exp_tree_path(32, 300, 3);
  EXPECT_EQ(rep.path_cost, 2u * 30 + 1);
  EXPECT_FALSE(rep.exact);
  for (double r : rep.ratios) {
    EXPECT_GT(r, 0.5);
    EXPECT_LT(r, 2.0);
  }
  EXPECT_THROW(exp_tree_path(1, 10, 1), Error);
}

TEST(TreeFull, StarIsDeterministic) {
  Graph g = gen_basic(BasicKind::star, 40);
  auto rep = exp_tree_full(g, 0, 20, 4);
  EXPECT_EQ(rep.max_path_cost, oracle::tree_max_path_degree_sum(g));
  for (const auto& s : rep.samples) EXPECT_EQ(s.median, 39.0);
  EXPECT_THROW(exp_tree_full(gen_basic(BasicKind::complete, 4), 0, 5, 1), Error);
}

TEST(TreeFull, BinaryTreeStaysWithinBound) {
  Graph g = gen_basic(BasicKind::complete_binary_tree, 6);
  auto rep = exp_tree_full(g, 0, 200, 5);
  EXPECT_TRUE(rep.within_bound);
  EXPECT_GT(rep.bound, static_cast<double>(rep.max_path_cost));
}

TEST(Separation, SmallRunBookkeeping) {
  auto rep = exp_separation({8}, 1, 10, 6);
  ASSERT_EQ(rep.points.size(), 1u);
  const auto& pt = rep.points.front();
  EXPECT_TRUE(pt.stall_respected);
  EXPECT_EQ(pt.random_timeouts, 0u);
  EXPECT_EQ(pt.adversarial_timeouts, 0u);
  auto [g, lay] = gen_separation(8, 1, false);
  EXPECT_EQ(pt.nodes, g.node_count());
  for (const auto& runs : {pt.random_runs, pt.adversarial_runs})
    for (const auto& m : runs) {
      ASSERT_TRUE(m.broadcast_time);
      EXPECT_EQ(m.informed_parts.size(), *m.broadcast_time);
      for (std::size_t t = 1; t < m.informed_parts.size(); ++t) EXPECT_GE(m.informed_parts[t], m.informed_parts[t - 1]);
      EXPECT_EQ(m.informed_parts.back(), lay.m);
    }
  EXPECT_GT(pt.ratio, 0.0);
}

TEST(Separation, AdversaryNeverSlowsBelowRandomMuch) {
  auto rep = exp_separation({8}, 1, 30, 7);
  EXPECT_GE(rep.points[0].adversarial_median, 0.8 * rep.points[0].random_median);
}

TEST(Tightness, SmallPoint) {
  auto pt = tightness_point(2, 300, 8);
  EXPECT_EQ(pt.nodes, 40u);
  EXPECT_DOUBLE_EQ(pt.degree_ratio, 8.0);
  EXPECT_EQ(pt.timeouts, 0u);
  EXPECT_GE(pt.m_star, 1.0);
  EXPECT_GE(pt.m_star, pt.mean_rounds);
  EXPECT_GT(pt.first_round_win, 0.0);
  EXPECT_LT(pt.first_round_win, 1.0);
  EXPECT_EQ(pt.rounds.size(), 300u);
  // A node in A has every neighbour in B informed, so PULL finishes A at once.
  EXPECT_DOUBLE_EQ(pt.pull_one_round, 1.0);
}

TEST(Tightness, ReportCoversEveryK) {
  auto rep = exp_tightness({2, 3}, 50, 9);
  ASSERT_EQ(rep.points.size(), 2u);
  EXPECT_LT(rep.points[0].nodes, rep.points[1].nodes);
  EXPECT_THROW(exp_tightness({2}, 0, 9), Error);
}

TEST(Dominance, SuiteShape) {
  auto suite = small_suite();
  EXPECT_EQ(suite.size(), 10u);
  for (const auto& sc : suite) {
    auto ground = exact_distribution(sc.graph, sc.seeds, ExactProtocol::pull, 1).ground();
    EXPECT_LE(ground.size(), 4u) << sc.name;
    EXPECT_GE(ground.size(), 1u) << sc.name;
  }
}

TEST(Dominance, RoundsFormula) {
  EXPECT_EQ(dominance_rounds(gen_basic(BasicKind::complete, 8)), 24u);
  EXPECT_EQ(dominance_rounds(gen_basic(BasicKind::path, 4)), 32u);
}

TEST(Dominance, CasePasses) {
  auto suite = small_suite();
  auto rep = dominance_case(suite[4], 2000, 10);
  EXPECT_TRUE(rep.test.passes);
  EXPECT_EQ(rep.samples, 2000u);
  EXPECT_EQ(rep.exact_pull.prob(0b1111), 1);
}

TEST(Chernoff, ExampleValues) {
  std::vector<double> p{0.5, 0.5};
  auto b = chernoff_geo_bound(p, 0.0);
  EXPECT_DOUBLE_EQ(b.mu, 4.0);
  EXPECT_DOUBLE_EQ(b.threshold, 12.0);
  EXPECT_DOUBLE_EQ(b.bound, std::exp(-1.0));
  auto c = chernoff_geo_bound(p, 2.0);
  EXPECT_DOUBLE_EQ(c.threshold, 18.0);
  EXPECT_DOUBLE_EQ(c.bound, std::exp(-2.0));
}

TEST(Chernoff, DecreasingInSlack) {
  std::vector<double> p{0.2, 0.4, 0.9};
  double prev = 2.0;
  for (double t = 0; t <= 20; t += 2.5) {
    double b = chernoff_geo_bound(p, t).bound;
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Chernoff, Validation) {
  std::vector<double> empty, zero{0.0}, one{1.0}, unsorted{0.5, 0.2}, ok{0.3};
  EXPECT_THROW(chernoff_geo_bound(empty, 0), Error);
  EXPECT_THROW(chernoff_geo_bound(zero, 0), Error);
  EXPECT_THROW(chernoff_geo_bound(one, 0), Error);
  EXPECT_THROW(chernoff_geo_bound(unsorted, 0), Error);
  EXPECT_THROW(chernoff_geo_bound(ok, -1), Error);
  EXPECT_THROW(chernoff_empirical_tail(ok, 0, 0, 1), Error);
}

TEST(Chernoff, SingleGeometricMatchesClosedForm) {
  std::vector<double> p{0.3};
  auto b = chernoff_geo_bound(p, 1.0);
  const double exact = oracle::geometric_tail(0.3, b.threshold);
  const double emp = chernoff_empirical_tail(p, 1.0, 200000, 11);
  EXPECT_NEAR(emp, exact, 5 * std::sqrt(exact * (1 - exact) / 200000) + 1e-6);
  EXPECT_LE(exact, b.bound);
}

TEST(Chernoff, EmpiricalTailBelowBound) {
  std::vector<double> p{0.1, 0.3, 0.5, 0.7};
  for (double t : {0.0, 5.0, 20.0}) {
    auto b = chernoff_geo_bound(p, t);
    EXPECT_LE(chernoff_empirical_tail(p, t, 100000, 12), b.bound);
  }
}

TEST(Reproducibility, TrialSeedsAndRepeats) {
  EXPECT_EQ(trial_seed(5, 1, 2), trial_seed(5, 1, 2));
  EXPECT_NE(trial_seed(5, 1, 2), trial_seed(5, 2, 1));
  EXPECT_NE(trial_seed(5, 1, 2), trial_seed(6, 1, 2));
  auto a = exp_tree_path(16, 40, 13), b = exp_tree_path(16, 40, 13);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i].times, b.samples[i].times);
  auto c = tightness_point(2, 40, 14), d = tightness_point(2, 40, 14);
  EXPECT_EQ(c.rounds, d.rounds);
}
