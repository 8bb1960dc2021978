#include <gtest/gtest.h>

#include <sstream>

#include "instances.hpp"
#include "poolcascade/errors.hpp"
#include "poolcascade/io.hpp"

namespace pc = poolcascade;

TEST(CascadeFile, SingleSeedRoundTripWithLabels) {
  std::istringstream el("10 11 0.1\n11 12 0.1\n10 13 0.1\n");
  pc::Graph g = pc::read_edge_list(el, pc::EdgeWeightMode::probability);
  pc::NodeLabels labels{&g, nullptr};
  pc::Cascade c = pc::Cascade::single_seed(0, {{0, 1}, {1, 2}});
  std::ostringstream out;
  pc::write_cascade(out, c, labels);
  EXPECT_EQ(out.str(), "root 10\n10 11\n11 12\n");
  std::istringstream in("# comment\n" + out.str());
  pc::Cascade back = pc::read_cascade(in, labels);
  EXPECT_EQ(back.arcs(), c.arcs());
  EXPECT_EQ(back.root(), 0);
}

TEST(CascadeFile, OneHopRoundTrip) {
  pc::Graph g(3);
  g.add_edge(0, 1, 0.2);
  g.add_edge(1, 2, 0.2);
  pc::BipartiteExpansion bip = pc::time_expand(g);
  pc::NodeLabels labels{&g, &bip};
  pc::Cascade c = pc::Cascade::one_hop({1}, {{1, bip.target_copy(0)}, {1, bip.target_copy(2)}});
  std::ostringstream out;
  pc::write_cascade(out, c, labels);
  EXPECT_EQ(out.str(), "seeds 1\n1 0\n1 2\n");
  std::istringstream in(out.str());
  pc::Cascade back = pc::read_cascade(in, labels);
  EXPECT_EQ(back.infected(), c.infected());
}

TEST(CascadeFile, RejectsMissingHeaderAndUnknownNodes) {
  pc::Graph g(2);
  g.add_edge(0, 1, 0.1);
  pc::NodeLabels labels{&g, nullptr};
  std::istringstream no_header("0 1\n");
  EXPECT_THROW(pc::read_cascade(no_header, labels), pc::InvalidInputError);
  std::istringstream unknown("root 0\n0 7\n");
  EXPECT_THROW(pc::read_cascade(unknown, labels), pc::InvalidInputError);
}

TEST(PoolFile, RoundTripWithAndWithoutResults) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::NodeLabels labels{&g, nullptr};
  pc::PoolSet ps = pctest::worked_example_pools();
  pc::Observation obs{{true, false}};
  std::ostringstream out;
  pc::write_pools(out, ps, &obs, labels);
  EXPECT_EQ(out.str(), "g 0 1 5 6 7\ng 1 0 3 8 9\n");
  std::istringstream in(out.str());
  pc::PoolFile pf = pc::read_pools(in, labels);
  EXPECT_EQ(pf.pools.pools, ps.pools);
  ASSERT_TRUE(pf.observation.has_value());
  EXPECT_EQ(pf.observation->positive, obs.positive);

  std::ostringstream untested;
  pc::write_pools(untested, ps, nullptr, labels);
  std::istringstream in2(untested.str());
  EXPECT_FALSE(pc::read_pools(in2, labels).observation.has_value());
}

TEST(PoolFile, OneHopMembersAreTargets) {
  pc::Graph g(3);
  g.add_edge(0, 1, 0.2);
  g.add_edge(1, 2, 0.2);
  pc::BipartiteExpansion bip = pc::time_expand(g);
  std::istringstream in("g 0 1 0 2\n");
  pc::PoolFile pf = pc::read_pools(in, pc::NodeLabels{&g, &bip});
  EXPECT_EQ(pf.pools.pools[0], (std::vector<pc::NodeId>{bip.target_copy(0), bip.target_copy(2)}));
}

TEST(PoolFile, RejectsDuplicatesAndBadResults) {
  pc::Graph g = pctest::worked_example_graph(0.2);
  pc::NodeLabels labels{&g, nullptr};
  std::istringstream dup("g 0 1 5\ng 0 0 6\n");
  EXPECT_THROW(pc::read_pools(dup, labels), pc::InvalidInputError);
  std::istringstream bad("g 0 x 5\n");
  EXPECT_THROW(pc::read_pools(bad, labels), pc::InvalidInputError);
}
