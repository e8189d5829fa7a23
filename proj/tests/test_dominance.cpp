#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "rumorlab/dominance.hpp"
#include "rumorlab/generators.hpp"
#include "rumorlab/maxflow.hpp"
#include "rumorlab/protocol.hpp"

using namespace rumorlab;

namespace {

const std::vector<NodeId> kGround3{0, 1, 2};

OutcomeDistribution from_oracle(const std::vector<oracle::Q>& p, std::vector<NodeId> ground) {
  return OutcomeDistribution(std::move(ground), std::vector<Rational>(p.begin(), p.end()));
}

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

/// Oracle law restricted to the uninformed nodes, as masks over `ground`.
std::vector<Rational> oracle_masks(const std::map<oracle::NodeSet, oracle::Q>& law, const std::vector<NodeId>& ground) {
  std::vector<Rational> out(std::size_t{1} << ground.size(), Rational(0));
  for (const auto& [set, p] : law) {
    Subset m = 0;
    for (std::size_t i = 0; i < ground.size(); ++i)
      if (set[ground[i]]) m |= Subset{1} << i;
    out[m] += p;
  }
  return out;
}

std::vector<Graph> small_graphs() {
  std::vector<Graph> gs{gen_basic(BasicKind::path, 4), gen_basic(BasicKind::star, 5), gen_basic(BasicKind::complete, 4),
                        gen_basic(BasicKind::complete_binary_tree, 2)};
  std::vector<Edge> kite{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}, {3, 4}};
  gs.push_back(Graph::from_edges(5, kite));
  std::vector<Edge> cycle{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
  gs.push_back(Graph::from_edges(5, cycle));
  gs.push_back(gen_tightness_fragment(1, 2, 1, 2).first);
  return gs;
}

}  // namespace

TEST(ExactDistribution, PathPullOneRound) {
  Graph g = gen_basic(BasicKind::path, 3);
  std::vector<NodeId> seeds{0};
  auto d = exact_distribution(g, seeds, ExactProtocol::pull, 1);
  EXPECT_EQ(d.ground(), (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(d.prob(0b01), Rational(1, 2));
  EXPECT_EQ(d.prob(0b00), Rational(1, 2));
  EXPECT_EQ(d.prob_contains(0b10), 0);
}

TEST(ExactDistribution, StarThree) {
  Graph g = gen_basic(BasicKind::star, 3);
  std::vector<NodeId> seeds{0};
  auto pull = exact_distribution(g, seeds, ExactProtocol::pull, 1);
  EXPECT_EQ(pull.prob(0b11), 1);
  auto rpull = exact_distribution(g, seeds, ExactProtocol::rpull_random, 1);
  EXPECT_EQ(rpull.prob(0b01), Rational(1, 2));
  EXPECT_EQ(rpull.prob(0b10), Rational(1, 2));
  EXPECT_EQ(rpull.prob(0b11), 0);
}

TEST(ExactDistribution, Guards) {
  Graph big = gen_basic(BasicKind::star, 12);
  std::vector<NodeId> seeds{0};
  EXPECT_EQ(error_code([&] { exact_distribution(big, seeds, ExactProtocol::pull, 1); }), "too-large-exact");
  Graph g = gen_basic(BasicKind::path, 3);
  EXPECT_EQ(error_code([&] { exact_distribution(g, seeds, ExactProtocol::pull, 5); }), "too-large-exact");
}

TEST(ExactDistribution, PullMarginalsAreDegreeRatios) {
  std::mt19937_64 gen(3);
  for (const auto& g : small_graphs()) {
    for (int rep = 0; rep < 5; ++rep) {
      std::vector<NodeId> seeds;
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (std::bernoulli_distribution(0.4)(gen)) seeds.push_back(v);
      if (seeds.empty()) seeds.push_back(0);
      auto d = exact_distribution(g, seeds, ExactProtocol::pull, 1);
      InformedSet s(g.node_count(), seeds);
      for (std::size_t i = 0; i < d.ground_size(); ++i) {
        NodeId u = d.ground()[i];
        Rational expect(static_cast<long long>(g.degree_into(u, s)), static_cast<long long>(g.degree(u)));
        EXPECT_EQ(d.prob_contains(Subset{1} << i), expect);
      }
    }
  }
}

TEST(ExactDistribution, MatchesBruteForceEnumerator) {
  std::mt19937_64 gen(9);
  int checked = 0;
  for (const auto& g : small_graphs()) {
    for (int rep = 0; rep < 8; ++rep) {
      std::vector<NodeId> seeds;
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (std::bernoulli_distribution(0.35)(gen)) seeds.push_back(v);
      if (seeds.empty()) seeds.push_back(static_cast<NodeId>(rep % g.node_count()));
      if (g.node_count() - seeds.size() > 4) continue;
      oracle::NodeSet start(g.node_count(), false);
      for (NodeId v : seeds) start[v] = true;
      for (int rounds = 1; rounds <= 2; ++rounds) {
        for (bool restricted : {false, true}) {
          auto d = exact_distribution(g, seeds, restricted ? ExactProtocol::rpull_random : ExactProtocol::pull, rounds);
          auto ref = oracle_masks(oracle::rounds(g, start, restricted, rounds), d.ground());
          EXPECT_EQ(d.probs(), ref);
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 40);
}

TEST(ExpectedBroadcastTime, PathClosedForm) {
  for (std::size_t q = 2; q <= 8; ++q) {
    Graph g = gen_basic(BasicKind::path, q);
    std::vector<NodeId> seeds{0};
    EXPECT_EQ(to_double(exact_expected_broadcast_time(g, seeds, ExactProtocol::pull)),
              oracle::path_pull_expected_time(q));
  }
  Graph star = gen_basic(BasicKind::star, 5);
  std::vector<NodeId> center{0};
  EXPECT_EQ(exact_expected_broadcast_time(star, center, ExactProtocol::rpull_random), 4);
  EXPECT_EQ(exact_expected_broadcast_time(star, center, ExactProtocol::pull), 1);
}

TEST(MonotoneFamilies, DedekindCounts) {
  for (std::size_t k = 0; k <= 5; ++k) {
    const auto& fams = monotone_families(k);
    EXPECT_EQ(fams.size(), oracle::dedekind(k));
    for (std::uint64_t f : fams)
      for (Subset a = 0; a < (Subset{1} << k); ++a)
        for (std::size_t x = 0; x < k; ++x)
          if (f >> a & 1) {
            ASSERT_TRUE(f >> (a | (Subset{1} << x)) & 1);
          }
  }
  EXPECT_EQ(error_code([] { monotone_families(6); }), "too-large-exact");
}

TEST(MonotoneFamilies, AgreeWithBruteForceUpsets) {
  for (std::size_t k = 0; k <= 3; ++k) {
    std::set<std::uint64_t> mine(monotone_families(k).begin(), monotone_families(k).end());
    std::set<std::uint64_t> ref;
    for (const auto& fam : oracle::upsets(k)) {
      std::uint64_t bits = 0;
      for (auto s : fam) bits |= std::uint64_t{1} << s;
      ref.insert(bits);
    }
    EXPECT_EQ(mine, ref);
  }
}

TEST(IncreasingExpectation, Examples) {
  auto u = OutcomeDistribution::uniform(kGround3);
  std::vector<Rational> size(8), constant(8, Rational(7)), at_least_two(8), bad(8, Rational(0));
  for (Subset s = 0; s < 8; ++s) {
    size[s] = std::popcount(s);
    at_least_two[s] = std::popcount(s) >= 2 ? 1 : 0;
  }
  bad[0] = 1;
  EXPECT_TRUE(check_increasing_expectation(u, u, size));
  auto [d1, d2] = counterexample_distributions(Rational(1, 32));
  EXPECT_FALSE(check_increasing_expectation(d1, d2, at_least_two));
  EXPECT_TRUE(check_increasing_expectation(d1, d2, constant));
  EXPECT_TRUE(check_increasing_expectation(d2, d1, constant));
  EXPECT_EQ(error_code([&] { check_increasing_expectation(u, u, bad); }), "not-increasing");
}

TEST(Strassen, Examples) {
  std::mt19937_64 gen(1);
  auto top = OutcomeDistribution::point_mass(kGround3, 0b111);
  for (int i = 0; i < 20; ++i) {
    auto d2 = from_oracle(oracle::random_law(gen, 3, true), kGround3);
    EXPECT_TRUE(check_strassen_monotone_sets(top, d2).holds);
    EXPECT_TRUE(check_strassen_monotone_sets(d2, d2).holds);
  }
  auto [d1, d2] = counterexample_distributions(Rational(1, 100));
  auto rep = check_strassen_monotone_sets(d1, d2);
  EXPECT_FALSE(rep.holds);
  EXPECT_EQ(rep.witness, cardinality_family(3, 2));
  EXPECT_EQ(rep.deficit, Rational(2, 100));
  EXPECT_EQ(rep.families, 20u);
}

TEST(Strassen, GuardAndGroundMismatch) {
  std::vector<NodeId> six{0, 1, 2, 3, 4, 5};
  auto u6 = OutcomeDistribution::uniform(six);
  EXPECT_EQ(error_code([&] { check_strassen_monotone_sets(u6, u6); }), "too-large-exact");
  auto a = OutcomeDistribution::uniform({0, 1});
  auto b = OutcomeDistribution::uniform({0, 2});
  EXPECT_EQ(error_code([&] { check_strassen_monotone_sets(a, b); }), "bad-distribution");
}

TEST(Strassen, AgreesWithUpsetOracleAndCoupling) {
  std::mt19937_64 gen(77);
  int holds = 0;
  for (int i = 0; i < 400; ++i) {
    const std::size_t k = 1 + i % 3;
    std::vector<NodeId> ground(k);
    for (std::size_t x = 0; x < k; ++x) ground[x] = static_cast<NodeId>(x);
    auto p2 = oracle::random_law(gen, k, true);
    auto p1 = i % 2 ? oracle::push_up(gen, p2, k) : oracle::random_law(gen, k, true);
    auto d1 = from_oracle(p1, ground), d2 = from_oracle(p2, ground);
    const bool strassen = check_strassen_monotone_sets(d1, d2).holds;
    EXPECT_EQ(strassen, oracle::dominates(p1, p2, k));
    auto plan = find_monotone_coupling(d1, d2);
    EXPECT_EQ(strassen, plan.has_value());
    if (plan) {
      EXPECT_TRUE(plan->monotone());
      for (Subset s = 0; s < d1.subset_count(); ++s) {
        EXPECT_EQ(plan->upper_marginal(s), d1.prob(s));
        EXPECT_EQ(plan->lower_marginal(s), d2.prob(s));
      }
    }
    holds += strassen;
  }
  EXPECT_GT(holds, 150);
  EXPECT_LT(holds, 400);
}

TEST(Coupling, IdenticalLawsGiveDiagonal) {
  std::mt19937_64 gen(4);
  auto d = from_oracle(oracle::random_law(gen, 3, false), kGround3);
  auto plan = find_monotone_coupling(d, d);
  ASSERT_TRUE(plan);
  EXPECT_EQ(plan->entries.size(), 8u);
  for (const auto& e : plan->entries) {
    EXPECT_EQ(e.lower, e.upper);
    EXPECT_EQ(e.mass, d.prob(e.upper));
  }
}

TEST(Coupling, EmptySetIsBelowEverything) {
  std::mt19937_64 gen(5);
  auto d1 = from_oracle(oracle::random_law(gen, 3, true), kGround3);
  auto bottom = OutcomeDistribution::point_mass(kGround3, 0);
  auto plan = find_monotone_coupling(d1, bottom);
  ASSERT_TRUE(plan);
  for (const auto& e : plan->entries) {
    EXPECT_EQ(e.lower, 0u);
    EXPECT_EQ(e.mass, d1.prob(e.upper));
  }
}

TEST(Coupling, CounterexampleHasNone) {
  auto [d1, d2] = counterexample_distributions(Rational(1, 16));
  EXPECT_FALSE(find_monotone_coupling(d1, d2));
  nlohmann::json j = *find_monotone_coupling(d2, d2);
  EXPECT_EQ(j.at("entries").size(), 8u);
}

TEST(Coupling, WorksBeyondFamilyGuard) {
  std::vector<NodeId> ground(7);
  for (NodeId i = 0; i < 7; ++i) ground[i] = i;
  std::vector<Rational> half(7, Rational(1, 2)), third(7, Rational(1, 3));
  auto hi = OutcomeDistribution::product(ground, half), lo = OutcomeDistribution::product(ground, third);
  EXPECT_TRUE(find_monotone_coupling(hi, lo));
  EXPECT_FALSE(find_monotone_coupling(lo, hi));
}

TEST(Holley, ProductMeasuresHoldWithEquality) {
  std::vector<Rational> p(3, Rational(1, 3));
  auto mu = OutcomeDistribution::product(kGround3, p);
  EXPECT_TRUE(check_holley(mu, mu).holds);
  EXPECT_TRUE(quotient_rule_check(mu, mu).holds);
}

TEST(Holley, CounterexampleFails) {
  auto [d1, d2] = counterexample_distributions(Rational(1, 16));
  EXPECT_FALSE(check_holley(d1, d2).holds);
  EXPECT_FALSE(quotient_rule_check(d1, d2).holds);
  auto zero = OutcomeDistribution::point_mass(kGround3, 0b111);
  EXPECT_EQ(error_code([&] { check_holley(zero, d2); }), "not-strictly-positive");
  EXPECT_EQ(error_code([&] { quotient_rule_check(d2, zero); }), "not-strictly-positive");
}

TEST(Holley, SkewedTowardTopDominatesUniform) {
  std::vector<Rational> w(8);
  for (Subset s = 0; s < 8; ++s) w[s] = Rational(1 << std::popcount(s), 27);
  auto mu1 = OutcomeDistribution(kGround3, w);
  auto mu2 = OutcomeDistribution::uniform(kGround3);
  EXPECT_TRUE(check_holley(mu1, mu2).holds);
  EXPECT_TRUE(check_strassen_monotone_sets(mu1, mu2).holds);
}

TEST(Holley, AgreesWithOracleAndImpliesDominance) {
  std::mt19937_64 gen(21);
  int holley_true = 0, quotient_true = 0;
  for (int i = 0; i < 300; ++i) {
    const std::size_t k = 2 + i % 2;
    std::vector<NodeId> ground(k);
    for (std::size_t x = 0; x < k; ++x) ground[x] = static_cast<NodeId>(x);
    std::vector<oracle::Q> p1, p2;
    if (i % 3 == 0) {
      // Product pairs with p1 >= p2 coordinatewise satisfy both criteria.
      std::vector<Rational> a(k), b(k);
      for (std::size_t x = 0; x < k; ++x) {
        int lo = std::uniform_int_distribution<int>(1, 4)(gen);
        int hi = std::uniform_int_distribution<int>(lo, 5)(gen);
        a[x] = Rational(hi, 6);
        b[x] = Rational(lo, 6);
      }
      auto A = OutcomeDistribution::product(ground, a), B = OutcomeDistribution::product(ground, b);
      p1.assign(A.probs().begin(), A.probs().end());
      p2.assign(B.probs().begin(), B.probs().end());
    } else {
      p1 = oracle::random_law(gen, k, false);
      p2 = oracle::random_law(gen, k, false);
    }
    auto d1 = from_oracle(p1, ground), d2 = from_oracle(p2, ground);
    const bool h = check_holley(d1, d2).holds;
    EXPECT_EQ(h, oracle::holley(p1, p2));
    const bool q = quotient_rule_check(d1, d2).holds;
    if (h) {
      EXPECT_TRUE(check_strassen_monotone_sets(d1, d2).holds);
    }
    if (q) {
      EXPECT_TRUE(h);
    }
    holley_true += h;
    quotient_true += q;
  }
  EXPECT_GT(holley_true, 50);
  EXPECT_GT(quotient_true, 50);
}

TEST(QuotientRule, UniformVersusSingletonHeavy) {
  std::vector<Rational> w(8, Rational(1, 100));
  for (Subset s : {1u, 2u, 4u}) w[s] = Rational(95, 300);
  w[0] = Rational(1, 100) + Rational(1, 20) - Rational(3, 100) - Rational(5, 300) * 0;
  Rational total = 0;
  for (const auto& x : w) total += x;
  for (auto& x : w) x /= total;
  auto mu2 = OutcomeDistribution(kGround3, w);
  auto mu1 = OutcomeDistribution::uniform(kGround3);
  auto rep = quotient_rule_check(mu1, mu2);
  EXPECT_FALSE(rep.holds);
  EXPECT_EQ(rep.b, 0u);
}

TEST(Counterexample, Epsilon16) {
  auto [d1, d2] = counterexample_distributions(Rational(1, 16));
  EXPECT_EQ(d1.prob_family(cardinality_family(3, 2)), Rational(3, 8));
  EXPECT_EQ(d2.prob_family(cardinality_family(3, 2)), Rational(1, 2));
  for (Subset m : {1u, 2u, 4u}) {
    EXPECT_EQ(d1.prob_contains(m), Rational(1, 2));
    EXPECT_EQ(d2.prob_contains(m), Rational(1, 2));
  }
  EXPECT_TRUE(d1.strictly_positive());
}

TEST(Counterexample, EpsilonRange) {
  auto [a, b] = counterexample_distributions(Rational(0));
  EXPECT_TRUE(a == b);
  EXPECT_EQ(error_code([] { counterexample_distributions(Rational(1, 8)); }), "bad-epsilon");
  EXPECT_EQ(error_code([] { counterexample_distributions(Rational(-1, 8)); }), "bad-epsilon");
}

TEST(Distribution, ValidationAndJson) {
  EXPECT_EQ(error_code([] { OutcomeDistribution({0}, {Rational(1, 2), Rational(1, 3)}); }), "bad-distribution");
  EXPECT_EQ(error_code([] { OutcomeDistribution({0}, {Rational(3, 2), Rational(-1, 2)}); }), "bad-distribution");
  EXPECT_EQ(error_code([] { OutcomeDistribution({0}, {Rational(1)}); }), "bad-distribution");
  auto [d1, d2] = counterexample_distributions(Rational(1, 16));
  nlohmann::json j = d1;
  EXPECT_EQ(j.at("probs").at("7"), "3/16");
  EXPECT_EQ(j.at("U"), nlohmann::json::array({0, 1, 2}));
  EXPECT_TRUE(j.get<OutcomeDistribution>() == d1);
  auto bad = nlohmann::json::parse(R"({"U":[0],"probs":{"5":"1/1"}})");
  EXPECT_EQ(error_code([&] { bad.get<OutcomeDistribution>(); }), "bad-distribution");
  auto bad_rational = nlohmann::json::parse(R"({"U":[0],"probs":{"1":"x/2"}})");
  EXPECT_EQ(error_code([&] { bad_rational.get<OutcomeDistribution>(); }), "bad-rational");
}

TEST(Distribution, MarginalOnSubset) {
  std::vector<Rational> p{Rational(1, 2), Rational(1, 3), Rational(1, 4)};
  auto d = OutcomeDistribution::product(kGround3, p);
  auto m = d.marginal_on({0, 2});
  EXPECT_EQ(m.prob(0b11), Rational(1, 8));
  EXPECT_EQ(m.prob_contains(0b10), Rational(1, 4));
}

TEST(StrictlyRandomNodes, DropsSureAndImpossible) {
  Graph g = gen_basic(BasicKind::path, 5);
  std::vector<NodeId> seeds{0, 2};
  // 1 has both neighbors informed, 3 has one of two, 4 has none.
  EXPECT_EQ(strictly_random_nodes(g, seeds), (std::vector<NodeId>{3}));
}

TEST(Empirical, IdenticalGeneratorsShowNoDeficit) {
  std::mt19937_64 gen(8);
  std::discrete_distribution<Subset> law{1, 2, 3, 4, 4, 3, 2, 1};
  std::vector<Subset> a(50000), b(50000);
  for (auto& x : a) x = law(gen);
  for (auto& x : b) x = law(gen);
  auto rep = empirical_dominance_test(a, b, 3);
  EXPECT_EQ(rep.families, 20u);
  EXPECT_LT(rep.worst_deficit, 4.0);
  EXPECT_THROW(empirical_dominance_test({}, b, 3), Error);
}

TEST(Empirical, AdversarialRestrictedPullFallsShortOfPull) {
  auto [g, lay] = gen_tightness_fragment(2, 1, 2, 2);
  std::vector<NodeId> seeds = lay.b;
  for (const auto& cl : lay.cliques) seeds.insert(seeds.end(), cl.begin() + 1, cl.end());
  std::sort(seeds.begin(), seeds.end());
  auto exact = exact_distribution(g, seeds, ExactProtocol::pull, 1);
  std::vector<Subset> rp, pl;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    SpreadState s(g, seeds);
    auto tr = step_rpull(s, RngPolicy(i), 1, ServeMode::adversarial, lowest_id_adversary());
    InformedSet next = s.informed();
    for (NodeId v : tr.newly_informed) next.insert(v);
    rp.push_back(exact.mask_of(next));
    auto tp = step_pull(s, RngPolicy(i), 1);
    InformedSet next2 = s.informed();
    for (NodeId v : tp.newly_informed) next2.insert(v);
    pl.push_back(exact.mask_of(next2));
  }
  auto two = empirical_dominance_test(rp, pl, exact.ground_size());
  EXPECT_FALSE(two.passes);
  EXPECT_GT(two.worst_deficit, 10.0);
  auto one = empirical_vs_exact(rp, exact);
  EXPECT_FALSE(one.passes);
}

TEST(MaxFlow, SmallNetwork) {
  MaxFlow<long long> f(4);
  auto a = f.add_edge(0, 1, 3);
  f.add_edge(0, 2, 2);
  f.add_edge(1, 2, 5);
  f.add_edge(1, 3, 2);
  f.add_edge(2, 3, 3);
  EXPECT_EQ(f.run(0, 3), 5);
  EXPECT_EQ(f.flow(a), 3);
}
