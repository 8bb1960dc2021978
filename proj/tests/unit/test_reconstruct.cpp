#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "instances.hpp"
#include "poolcascade/errors.hpp"
#include "poolcascade/oracle.hpp"
#include "poolcascade/reconstruct.hpp"

namespace pc = poolcascade;

namespace {

bool is_tree_on(const pc::Cascade& c, const pc::Graph& g) {
  if (c.arcs().size() + 1 != c.infected().size()) return false;
  for (auto [u, v] : c.arcs())
    if (!g.find_edge(u, v)) return false;
  return c.contains(c.root());
}

}  // namespace

TEST(Weights, NodeAndEdgeWeights) {
  pc::Graph g(3);
  g.add_edge(0, 1, 0.2);
  g.add_edge(1, 2, 0.1);
  pc::CostModel cm = pc::compute_costs(g);
  pc::GstWeights w = pc::pool_gst_weights(g, cm);
  EXPECT_NEAR(w.node[1], cm.d(0) + cm.d(1), 1e-15);
  EXPECT_NEAR(w.node[0], cm.d(0), 1e-15);
  EXPECT_NEAR(w.edge[0], cm.c(0) - cm.d(0), 1e-15);
}

TEST(Weights, AssumptionPolicy) {
  pc::Graph g(2);
  g.add_edge(0, 1, 0.7);
  pc::CostModel cm = pc::compute_costs(g);
  EXPECT_THROW(pc::pool_gst_weights(g, cm), pc::AssumptionViolation);
  pc::GstWeights w = pc::pool_gst_weights(g, cm, pc::AssumptionPolicy::warn);
  EXPECT_EQ(w.edge[0], 0.0);
}

TEST(ApproxCascade, NoPositivePools) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet ps = pctest::worked_example_pools();
  pc::ReconstructionResult r = pc::approx_cascade(g, cm, 0, ps, pc::Observation{{false, false}});
  EXPECT_EQ(r.cascade.infected(), (std::vector<pc::NodeId>{0}));
  EXPECT_NEAR(r.cost.total, 2 * cm.d(0), 1e-12);
  EXPECT_EQ(r.cost.inclusion, 0.0);
}

TEST(ApproxCascade, WorkedExample) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet ps = pctest::worked_example_pools();
  pc::Observation obs{{true, true}};
  pc::ReconstructionResult r = pc::approx_cascade(g, cm, 0, ps, obs);
  EXPECT_TRUE(pc::is_consistent(r.cascade, obs, ps));
  EXPECT_TRUE(is_tree_on(r.cascade, g));
  EXPECT_LE(r.cost.total, r.gst_weight + 1e-9);
  EXPECT_LE(r.gst_weight, 2 * r.cost.total + 1e-9);
  pc::OracleResult o = pc::brute_force_pool_mle(g, cm, 0, ps, obs);
  EXPECT_LE(o.optimal_cost, r.cost.total + 1e-9);
}

TEST(ApproxCascade, InfeasibleReasons) {
  pc::Graph g(4);
  g.add_edge(0, 1, 0.1);
  g.add_edge(1, 2, 0.1);
  g.add_edge(2, 3, 0.1);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet ps;
  ps.pools = {{0}, {3}};
  try {
    pc::approx_cascade(g, cm, 0, ps, pc::Observation{{false, true}});
    FAIL();
  } catch (const pc::InfeasibleError& e) {
    EXPECT_EQ(e.reason(), pc::InfeasibleReason::root_in_negative_pool);
  }
  ps.pools = {{2}, {3}};
  try {
    pc::approx_cascade(g, cm, 0, ps, pc::Observation{{false, true}});
    FAIL();
  } catch (const pc::InfeasibleError& e) {
    EXPECT_EQ(e.reason(), pc::InfeasibleReason::unreachable_pool);
  }
}

TEST(ApproxCascade, RejectsMismatchedObservation) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  EXPECT_THROW(pc::approx_cascade(g, cm, 0, pctest::worked_example_pools(), pc::Observation{{true}}),
               pc::InvalidInputError);
  EXPECT_THROW(pc::approx_cascade(g, cm, 42, pctest::worked_example_pools(), pc::Observation{{true, true}}),
               pc::InvalidInputError);
}

TEST(ApproxCascade, SandwichTreeAndConsistencyOnRandomInstances) {
  pc::Rng rng(5);
  const double probs[] = {0.01, 0.05, 0.1, 0.2};
  const double ratios[] = {0.5, 0.9};
  const std::size_t sizes[] = {3, 5, 7, 9};
  for (int i = 0; i < 80; ++i) {
    pctest::PoolInstance inst = pctest::random_pool_instance(rng, 20, 120, probs, ratios, sizes);
    pc::ReconstructionResult r = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    EXPECT_TRUE(pc::is_consistent(r.cascade, inst.obs, inst.pools));
    EXPECT_TRUE(is_tree_on(r.cascade, inst.graph));
    EXPECT_LE(r.cost.total, r.gst_weight + 1e-9);
    EXPECT_LE(r.gst_weight, 2 * r.cost.total + 1e-9);
  }
}

TEST(ApproxCascade, NeverBeatsOracle) {
  pc::Rng rng(6);
  for (int i = 0; i < 60; ++i) {
    pctest::PoolInstance inst = pctest::small_pool_instance(rng, 8);
    pc::ReconstructionResult r = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    pc::OracleResult o = pc::brute_force_pool_mle(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    EXPECT_LE(o.optimal_cost, r.cost.total + 1e-9);
  }
}

TEST(ApproxCascade, DeeperRecursionStillConsistent) {
  pc::Rng rng(7);
  for (int i = 0; i < 15; ++i) {
    pctest::PoolInstance inst = pctest::small_pool_instance(rng, 10);
    pc::ReconstructOptions opt;
    opt.level = 3;
    pc::ReconstructionResult r = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs, opt);
    EXPECT_TRUE(pc::is_consistent(r.cascade, inst.obs, inst.pools));
    EXPECT_TRUE(is_tree_on(r.cascade, inst.graph));
  }
}

TEST(ApproxCascade, AllRootsPicksCheapest) {
  pc::Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    pctest::PoolInstance inst = pctest::small_pool_instance(rng, 8);
    pc::ReconstructionResult best = pc::approx_cascade_all_roots(inst.graph, inst.costs, inst.pools, inst.obs);
    EXPECT_TRUE(pc::is_consistent(best.cascade, inst.obs, inst.pools));
    pc::ReconstructionResult fixed = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    EXPECT_LE(best.cost.total, fixed.cost.total + 1e-12);
  }
}

TEST(Baselines, SingletonPoolsMatchApprox) {
  pc::Rng rng(9);
  for (int i = 0; i < 10; ++i) {
    pc::Graph g = pctest::random_connected_graph(25, 0.1, rng);
    g.set_homogeneous_probability(0.3);
    pctest::PoolInstance inst = pctest::pool_instance_from(std::move(g), 0.6, 1, rng);
    pc::ReconstructionResult a = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    pc::ReconstructionResult b = pc::baseline_random(inst.graph, inst.costs, inst.root, inst.pools, inst.obs, rng);
    pc::ReconstructionResult c = pc::baseline_all(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    EXPECT_EQ(a.cascade.infected(), b.cascade.infected());
    EXPECT_EQ(a.cascade.infected(), c.cascade.infected());
    EXPECT_DOUBLE_EQ(a.cost.total, c.cost.total);
  }
}

TEST(Baselines, WorkedExampleForcedChoices) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet singletons;
  singletons.pools = {{7}, {3}};
  pc::ReconstructionResult r = pc::approx_cascade(g, cm, 0, singletons, pc::Observation{{true, true}});
  EXPECT_TRUE(r.cascade.contains(7));
  EXPECT_TRUE(r.cascade.contains(3));

  pc::ReconstructionResult all =
      pc::baseline_all(g, cm, 0, pctest::worked_example_pools(), pc::Observation{{true, true}});
  for (pc::NodeId v : {5, 6, 7, 3, 8, 9}) EXPECT_TRUE(all.cascade.contains(v)) << v;
}

TEST(Baselines, RandomPicksOneMemberPerPool) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::CostModel cm = pc::compute_costs(g);
  pc::PoolSet ps = pctest::worked_example_pools();
  pc::Observation obs{{true, true}};
  pc::Rng rng(10);
  for (int i = 0; i < 20; ++i) {
    pc::ReconstructionResult r = pc::baseline_random(g, cm, 0, ps, obs, rng);
    EXPECT_TRUE(pc::is_consistent(r.cascade, obs, ps));
    EXPECT_TRUE(is_tree_on(r.cascade, g));
  }
}

TEST(Baselines, AllCoversEveryPositiveNode) {
  pc::Rng rng(11);
  const double probs[] = {0.1, 0.2};
  const double ratios[] = {0.5, 0.9};
  const std::size_t sizes[] = {3, 5};
  for (int i = 0; i < 30; ++i) {
    pctest::PoolInstance inst = pctest::random_pool_instance(rng, 20, 60, probs, ratios, sizes);
    pc::ReconstructionResult a = pc::approx_cascade(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    pc::ReconstructionResult all;
    try {
      all = pc::baseline_all(inst.graph, inst.costs, inst.root, inst.pools, inst.obs);
    } catch (const pc::InfeasibleError&) {
      continue;
    }
    EXPECT_TRUE(pc::is_consistent(all.cascade, inst.obs, inst.pools));
    std::size_t hit_all = 0, hit_approx = 0;
    for (int gi : inst.obs.gamma1()) {
      for (pc::NodeId v : inst.pools.pools[static_cast<std::size_t>(gi)]) {
        hit_all += all.cascade.contains(v);
        hit_approx += a.cascade.contains(v);
        EXPECT_TRUE(all.cascade.contains(v));
      }
    }
    EXPECT_GE(hit_all, hit_approx);
  }
}
