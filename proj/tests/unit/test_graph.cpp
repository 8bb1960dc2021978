#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "poolcascade/errors.hpp"
#include "poolcascade/graph.hpp"

namespace pc = poolcascade;

TEST(EdgeList, ReadsProbabilityLine) {
  std::istringstream in("0 1 0.05\n");
  pc::Graph g = pc::read_edge_list(in, pc::EdgeWeightMode::probability);
  ASSERT_EQ(g.num_nodes(), 2u);
  ASSERT_EQ(g.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(g.prob(0, 1), 0.05);
}

TEST(EdgeList, DurationModeUsesExponentialTransmissibility) {
  std::istringstream in("0 1 100000\n");
  pc::Graph g = pc::read_edge_list(in, pc::EdgeWeightMode::duration, 3e-6);
  EXPECT_NEAR(g.prob(0, 1), -std::expm1(-0.3), 1e-15);
  EXPECT_NEAR(g.prob(0, 1), 0.259, 1e-3);
}

TEST(EdgeList, SymmetricDuplicatesCollapse) {
  std::istringstream in("0 1 0.05\n1 0 0.05\n");
  pc::Graph g = pc::read_edge_list(in, pc::EdgeWeightMode::probability);
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(EdgeList, LabelsAreCompactedAndRoundTrip) {
  std::istringstream in("# contacts\n10 30 0.1\n30 20 0.2\n");
  pc::Graph g = pc::read_edge_list(in, pc::EdgeWeightMode::probability);
  ASSERT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.label(0), 10);
  EXPECT_EQ(g.label(2), 30);
  EXPECT_EQ(*g.node_of_label(20), 1);
  std::ostringstream out;
  pc::write_edge_list(out, g);
  std::istringstream back(out.str());
  pc::Graph h = pc::read_edge_list(back, pc::EdgeWeightMode::probability);
  EXPECT_EQ(h.num_edges(), 2u);
  EXPECT_DOUBLE_EQ(h.prob(*h.node_of_label(30), *h.node_of_label(20)), 0.2);
}

TEST(EdgeList, RejectsMalformedInput) {
  std::istringstream bad_prob("0 1 1.5\n");
  EXPECT_THROW(pc::read_edge_list(bad_prob, pc::EdgeWeightMode::probability), pc::InvalidInputError);
  std::istringstream self_loop("2 2 0.1\n");
  EXPECT_THROW(pc::read_edge_list(self_loop, pc::EdgeWeightMode::probability), pc::InvalidInputError);
  std::istringstream garbage("0 x 0.1\n");
  EXPECT_THROW(pc::read_edge_list(garbage, pc::EdgeWeightMode::probability), pc::InvalidInputError);
}

TEST(Generators, BarabasiAlbertEdgeCount) {
  pc::Rng rng(7);
  pc::Graph g = pc::generate_ba(1000, 3, rng);
  EXPECT_EQ(g.num_nodes(), 1000u);
  EXPECT_NEAR(static_cast<double>(g.num_edges()), 2991.0, 5.0);
}

TEST(Generators, BarabasiAlbertSmallestCase) {
  pc::Rng rng(1);
  pc::Graph g = pc::generate_ba(4, 3, rng);
  EXPECT_EQ(g.degree(3), 3u);
}

TEST(Generators, Deterministic) {
  pc::Rng a(42), b(42);
  pc::Graph g = pc::generate_ba(200, 3, a);
  pc::Graph h = pc::generate_ba(200, 3, b);
  ASSERT_EQ(g.num_edges(), h.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    EXPECT_EQ(g.edge(static_cast<pc::EdgeId>(e)).u, h.edge(static_cast<pc::EdgeId>(e)).u);
    EXPECT_EQ(g.edge(static_cast<pc::EdgeId>(e)).v, h.edge(static_cast<pc::EdgeId>(e)).v);
  }
  pc::Rng c(3), d(3);
  EXPECT_EQ(pc::generate_gnq(300, 0.05, c).num_edges(), pc::generate_gnq(300, 0.05, d).num_edges());
}

TEST(Generators, GnqExpectedEdges) {
  pc::Rng rng(11);
  pc::Graph g = pc::generate_gnq(1000, 0.02, rng);
  EXPECT_NEAR(static_cast<double>(g.num_edges()), 9990.0, 0.05 * 9990.0);
}

TEST(Generators, GnqTwoNodesHalfProbability) {
  pc::Rng rng(5);
  int hits = 0;
  const int trials = 4000;
  for (int i = 0; i < trials; ++i) hits += static_cast<int>(pc::generate_gnq(2, 0.5, rng).num_edges());
  double sigma = std::sqrt(0.25 / trials);
  EXPECT_NEAR(static_cast<double>(hits) / trials, 0.5, 4 * sigma);
}

TEST(Costs, SymmetryPointAndKnownValues) {
  pc::Graph g(3);
  g.add_edge(0, 1, 0.5);
  g.add_edge(1, 2, 0.2);
  pc::CostModel cm = pc::compute_costs(g);
  EXPECT_NEAR(cm.c(0), std::log(2.0), 1e-12);
  EXPECT_NEAR(cm.d(0), std::log(2.0), 1e-12);
  EXPECT_NEAR(cm.c(1), 1.6094379124341003, 1e-12);
  EXPECT_NEAR(cm.d(1), 0.2231435513142097, 1e-12);
}

TEST(Costs, ExponentialsSumToOne) {
  pc::Rng rng(9);
  pc::Graph g = pc::generate_gnq(60, 0.1, rng);
  std::uniform_real_distribution<double> p(0.001, 0.999);
  for (std::size_t e = 0; e < g.num_edges(); ++e) g.set_probability(static_cast<pc::EdgeId>(e), p(rng));
  pc::CostModel cm = pc::compute_costs(g);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    auto id = static_cast<pc::EdgeId>(e);
    EXPECT_NEAR(std::exp(-cm.c(id)) + std::exp(-cm.d(id)), 1.0, 1e-12);
    EXPECT_NEAR(std::exp(-cm.c(id)), g.edge(id).prob, 1e-12);
  }
}

TEST(Costs, ForbiddenSeed) {
  pc::Graph g(2);
  g.add_edge(0, 1, 0.1);
  std::vector<double> p0{0.0, 0.3};
  pc::CostModel cm = pc::compute_costs(g, p0);
  EXPECT_TRUE(std::isinf(cm.a(0)));
  EXPECT_EQ(cm.b(0), 0.0);
  EXPECT_NEAR(cm.a(1), -std::log(0.3), 1e-12);
}

TEST(Costs, RejectsDegenerateProbabilities) {
  pc::Graph g(2);
  g.add_edge(0, 1, 1.0);
  EXPECT_THROW(pc::compute_costs(g), pc::InvalidInputError);
  pc::Graph h(2);
  h.add_edge(0, 1);
  EXPECT_THROW(pc::compute_costs(h), pc::InvalidInputError);
}

TEST(Assumption, BoundaryInclusive) {
  pc::Graph g(3);
  g.add_edge(0, 1, 0.05);
  g.add_edge(1, 2, 0.05);
  EXPECT_TRUE(pc::check_assumption(pc::compute_costs(g)));
  g.set_probability(1, 0.5);
  EXPECT_TRUE(pc::check_assumption(pc::compute_costs(g)));
  g.set_probability(1, 0.6);
  EXPECT_FALSE(pc::check_assumption(pc::compute_costs(g)));
}

TEST(Assumption, AgreesWithMaxProbability) {
  pc::Rng rng(21);
  std::uniform_real_distribution<double> p(0.3, 0.7);
  for (int trial = 0; trial < 50; ++trial) {
    pc::Graph g = pc::generate_gnq(15, 0.3, rng);
    if (g.num_edges() == 0) continue;
    for (std::size_t e = 0; e < g.num_edges(); ++e) g.set_probability(static_cast<pc::EdgeId>(e), p(rng));
    EXPECT_EQ(pc::check_assumption(pc::compute_costs(g)), g.max_probability() <= 0.5);
  }
}
