#include <gtest/gtest.h>

#include <set>

#include "instances.hpp"
#include "poolcascade/errors.hpp"
#include "poolcascade/oracle.hpp"
#include "poolcascade/reconstruct.hpp"
#include "reference.hpp"

namespace pc = poolcascade;

TEST(SpanningTrees, MatchesMatrixTreeTheorem) {
  pc::Rng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    std::vector<std::pair<int, int>> edges;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (coin(rng)) edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    std::set<std::vector<int>> distinct;
    std::size_t count = pc::for_each_spanning_tree(n, edges, [&](std::span<const int> tree) {
      EXPECT_EQ(tree.size() + 1, n);
      std::vector<int> t(tree.begin(), tree.end());
      std::sort(t.begin(), t.end());
      distinct.insert(t);
    });
    EXPECT_EQ(static_cast<std::int64_t>(count), pctest::matrix_tree_count(n, edges));
    EXPECT_EQ(distinct.size(), count);
  }
}

TEST(SpanningTrees, CompleteGraphCayley) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < 6; ++u)
    for (int v = u + 1; v < 6; ++v) edges.emplace_back(u, v);
  EXPECT_EQ(pc::for_each_spanning_tree(6, edges, [](std::span<const int>) {}), 1296u);
}

TEST(PoolOracle, NoPositivePools) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  pc::OracleResult o = pc::brute_force_pool_mle(g, cm, 0, pctest::worked_example_pools(), pc::Observation{{false, false}});
  EXPECT_EQ(o.optimal_cascade.infected(), (std::vector<pc::NodeId>{0}));
  EXPECT_NEAR(o.optimal_cost, 2 * cm.d(0), 1e-12);
}

TEST(PoolOracle, WorkedExampleBelowApprox) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet ps = pctest::worked_example_pools();
  pc::Observation obs{{true, true}};
  pc::OracleResult o = pc::brute_force_pool_mle(g, cm, 0, ps, obs);
  EXPECT_TRUE(pc::is_consistent(o.optimal_cascade, obs, ps));
  EXPECT_LE(o.optimal_cost, pc::approx_cascade(g, cm, 0, ps, obs).cost.total + 1e-9);
  pc::OracleResult again = pc::brute_force_pool_mle(g, cm, 0, ps, obs);
  EXPECT_EQ(o.optimal_cost, again.optimal_cost);
}

TEST(PoolOracle, CapEnforced) {
  pc::Rng rng(2);
  pc::Graph g = pctest::random_connected_graph(14, 0.2, rng);
  g.set_homogeneous_probability(0.1);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet ps;
  ps.pools = {{3}};
  EXPECT_THROW(pc::brute_force_pool_mle(g, cm, 0, ps, pc::Observation{{true}}), pc::LimitExceededError);
}

TEST(PoolOracle, PooledLeavesMissesGroundTruth) {
  pc::LimitationInstance inst = pc::make_limitation_instance(pc::LimitationKind::pooled_leaves, {4, 0.2, 0.2});
  pc::Observation obs = pc::evaluate_pools(inst.pools, inst.ground_truth.infected());
  ASSERT_TRUE(pc::is_consistent(inst.ground_truth, obs, inst.pools));
  pc::OracleResult o = pc::brute_force_pool_mle(inst.graph, inst.costs, inst.root, inst.pools, obs);
  for (pc::NodeId v : o.optimal_cascade.infected()) {
    if (v == inst.root) continue;
    EXPECT_FALSE(inst.ground_truth.contains(v)) << v;
  }
  pc::ReconstructionResult a = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, obs);
  for (pc::NodeId v : a.cascade.infected())
    if (v != inst.root) EXPECT_FALSE(inst.ground_truth.contains(v)) << v;
}

TEST(OneHopOracle, NoPositivePools) {
  pc::Rng rng(3);
  pctest::OneHopInstance inst = pctest::random_one_hop_instance(rng, 6, 0.1, 0.4, 0.1, 0.8, 2);
  pc::Observation none{std::vector<bool>(inst.pools.size(), false)};
  pc::OracleResult o = pc::brute_force_one_hop_mle(inst.bip, inst.costs, inst.pools, none);
  EXPECT_TRUE(o.optimal_cascade.infected().empty());
  EXPECT_NEAR(o.optimal_cost, 6 * -std::log1p(-0.1), 1e-12);
}

TEST(OneHopOracle, SingleEdge) {
  pc::BipartiteExpansion bip(1, 1);
  bip.add_arc(0, 1, 0.3);
  pc::CostModel cm = pc::compute_one_hop_costs(bip, 0.1);
  pc::PoolSet ps;
  ps.pools = {{1}};
  pc::OracleResult o = pc::brute_force_one_hop_mle(bip, cm, ps, pc::Observation{{true}});
  EXPECT_EQ(o.optimal_cascade.seeds(), (std::vector<pc::NodeId>{0}));
  EXPECT_NEAR(o.optimal_cost, cm.a(0) + cm.c(0), 1e-12);
}

TEST(OneHopOracle, BelowRoundingOutput) {
  pc::Rng rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    pctest::OneHopInstance inst = pctest::random_one_hop_instance(rng, 6, 0.05, 0.45, 0.15, 0.8, 2);
    pc::OracleResult o = pc::brute_force_one_hop_mle(inst.bip, inst.costs, inst.pools, inst.obs);
    EXPECT_TRUE(pc::is_consistent(o.optimal_cascade, inst.obs, inst.pools));
    pc::RoundingResult r = pc::reconstruct_one_hop(inst.bip, inst.costs, inst.pools, inst.obs, rng);
    EXPECT_LE(o.optimal_cost, r.cost.total + 1e-9);
  }
}

TEST(Limitation, SpiderShape) {
  const std::size_t k = 5;
  pc::LimitationInstance inst = pc::make_limitation_instance(pc::LimitationKind::noisy_spider, {k, 0.5, 0.2});
  EXPECT_EQ(inst.graph.num_nodes(), 1 + k + k * k);
  EXPECT_EQ(inst.pools.size(), k);
  EXPECT_EQ(inst.path_nodes.size(), k);
  EXPECT_EQ(inst.spoke_nodes.size(), k * k);
  EXPECT_EQ(inst.root, inst.path_nodes.front());
  EXPECT_EQ(inst.ground_truth.infected().size(), k);
  EXPECT_NEAR(pc::spider_bad_event_probability(k, 0.3), 0.49 * (1 - std::pow(0.7, k - 2)), 1e-15);
}

TEST(Limitation, InvalidParameters) {
  EXPECT_THROW(pc::make_limitation_instance(pc::LimitationKind::pooled_leaves, {1, 0.2, 0.2}),
               pc::InvalidInputError);
  EXPECT_THROW(pc::make_limitation_instance(pc::LimitationKind::noisy_spider, {2, 0.2, 0.2}),
               pc::InvalidInputError);
}
