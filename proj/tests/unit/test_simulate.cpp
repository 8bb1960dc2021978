#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "poolcascade/simulate.hpp"

namespace pc = poolcascade;

TEST(SingleSeed, CertainTransmissionCoversPath) {
  pc::Graph g(3);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  pc::Rng rng(1);
  pc::Cascade c = pc::simulate_single_seed(g, 0, rng);
  EXPECT_EQ(c.infected(), (std::vector<pc::NodeId>{0, 1, 2}));
  EXPECT_EQ(c.depth().at(2), 2);
  EXPECT_EQ(c.root(), 0);
}

TEST(SingleSeed, TinyProbabilityRarelySpreads) {
  pc::Graph g(5);
  const double eps = 1e-3;
  for (pc::NodeId v = 1; v < 5; ++v) g.add_edge(0, v, eps);
  pc::Rng rng(2);
  int alone = 0;
  const int trials = 2000;
  for (int i = 0; i < trials; ++i) alone += pc::simulate_single_seed(g, 0, rng).infected().size() == 1;
  double expected = std::pow(1 - eps, 4);
  EXPECT_GE(static_cast<double>(alone) / trials, expected - 4 * std::sqrt(expected * (1 - expected) / trials) - 1e-3);
}

TEST(SingleSeed, TransmissionFrequencyMatchesProbability) {
  pc::Graph g(2);
  const double p = 0.3;
  g.add_edge(0, 1, p);
  pc::Rng rng(3);
  const int n = 10000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += pc::simulate_single_seed(g, 0, rng).contains(1);
  EXPECT_NEAR(static_cast<double>(hits) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(SingleSeed, InfectedSetIsClosedTree) {
  pc::Rng rng(4);
  pc::Graph g = pc::generate_ba(300, 3, rng);
  g.set_homogeneous_probability(0.2);
  for (int i = 0; i < 20; ++i) {
    pc::Cascade c = pc::simulate_single_seed(g, static_cast<pc::NodeId>(i), rng);
    EXPECT_EQ(c.arcs().size() + 1, c.infected().size());
    std::vector<int> indeg(g.num_nodes(), 0);
    for (auto [u, v] : c.arcs()) {
      EXPECT_TRUE(g.find_edge(u, v).has_value());
      EXPECT_TRUE(c.contains(u));
      EXPECT_EQ(c.depth().at(v), c.depth().at(u) + 1);
      ++indeg[static_cast<std::size_t>(v)];
    }
    for (pc::NodeId v : c.infected()) EXPECT_EQ(indeg[static_cast<std::size_t>(v)], v == c.root() ? 0 : 1);
  }
}

TEST(SingleSeed, HigherProbabilityGivesLargerCascades) {
  pc::Rng rng(5);
  pc::Graph g = pc::generate_ba(1000, 3, rng);
  auto mean_size = [&](double p) {
    g.set_homogeneous_probability(p);
    double total = 0;
    for (int s = 0; s < 50; ++s) total += static_cast<double>(pc::simulate_single_seed(g, s, rng).infected().size());
    return total / 50;
  };
  double low = mean_size(0.05);
  double high = mean_size(0.20);
  EXPECT_GT(high, low);
}

TEST(SingleSeed, Reproducible) {
  pc::Rng g_rng(6);
  pc::Graph g = pc::generate_gnq(200, 0.03, g_rng);
  g.set_homogeneous_probability(0.25);
  pc::Rng a(99), b(99);
  EXPECT_EQ(pc::simulate_single_seed(g, 0, a).arcs(), pc::simulate_single_seed(g, 0, b).arcs());
}

TEST(TimeExpand, SingleEdge) {
  pc::Graph g(2);
  g.add_edge(0, 1, 0.3);
  pc::BipartiteExpansion bip = pc::time_expand(g);
  ASSERT_EQ(bip.num_arcs(), 2u);
  EXPECT_EQ(bip.arc(0).source, bip.source_copy(0));
  EXPECT_EQ(bip.arc(0).target, bip.target_copy(1));
  EXPECT_EQ(bip.arc(1).source, bip.source_copy(1));
  EXPECT_EQ(bip.arc(1).target, bip.target_copy(0));
  EXPECT_DOUBLE_EQ(bip.arc(1).prob, 0.3);
  EXPECT_EQ(bip.origin(bip.target_copy(1)), 1);
}

TEST(TimeExpand, EmptyAndTriangle) {
  EXPECT_EQ(pc::time_expand(pc::Graph()).num_nodes(), 0u);
  pc::Graph t(3);
  t.add_edge(0, 1, 0.1);
  t.add_edge(1, 2, 0.1);
  t.add_edge(0, 2, 0.1);
  EXPECT_EQ(pc::time_expand(t).num_arcs(), 6u);
}

TEST(OneHop, ZeroSeedProbability) {
  pc::Rng rng(7);
  pc::Graph g = pc::generate_gnq(50, 0.1, rng);
  g.set_homogeneous_probability(0.5);
  pc::Cascade c = pc::simulate_one_hop(pc::time_expand(g), 0.0, rng);
  EXPECT_TRUE(c.infected().empty());
}

TEST(OneHop, EverythingCertain) {
  pc::Graph g(4);
  g.add_edge(0, 1, 1.0);
  g.add_edge(2, 3, 1.0);
  g.add_edge(1, 2, 1.0);
  pc::BipartiteExpansion bip = pc::time_expand(g);
  pc::Rng rng(8);
  pc::Cascade c = pc::simulate_one_hop(bip, 1.0, rng);
  EXPECT_EQ(c.seeds().size(), 4u);
  EXPECT_EQ(c.infected().size(), 8u);
  for (auto [s, t] : c.arcs()) {
    EXPECT_TRUE(bip.is_source(s));
    EXPECT_TRUE(bip.is_target(t));
  }
}

TEST(OneHop, SeedCountMatchesBinomial) {
  pc::Rng rng(9);
  pc::Graph g = pc::generate_ba(1000, 3, rng);
  g.set_homogeneous_probability(0.05);
  pc::BipartiteExpansion bip = pc::time_expand(g);
  double total = 0;
  const int reps = 30;
  for (int r = 0; r < reps; ++r) total += static_cast<double>(pc::simulate_one_hop(bip, 0.05, rng).seeds().size());
  double sd = std::sqrt(1000 * 0.05 * 0.95);
  EXPECT_NEAR(total / reps, 50.0, 3 * sd);
}

TEST(OneHop, UndirectedVariantLiveEdgesLeaveSeeds) {
  pc::Rng rng(10);
  pc::Graph g = pc::generate_gnq(100, 0.05, rng);
  g.set_homogeneous_probability(0.4);
  pc::Cascade c = pc::simulate_one_hop(g, 0.1, rng);
  for (auto [s, t] : c.arcs()) {
    EXPECT_TRUE(std::find(c.seeds().begin(), c.seeds().end(), s) != c.seeds().end());
    EXPECT_TRUE(std::find(c.seeds().begin(), c.seeds().end(), t) == c.seeds().end());
  }
}
