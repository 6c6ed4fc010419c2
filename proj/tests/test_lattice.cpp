#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "dimerlab/lattice.hpp"

using namespace dimerlab;

namespace {

void expect_regular(const LatticeGraph& g, std::size_t degree) {
  for (std::size_t v = 0; v < g.num_vertices(); ++v) EXPECT_EQ(g.degree(v), degree) << "vertex " << v;
}

void expect_proper_bipartition(const LatticeGraph& g) {
  ASSERT_TRUE(g.bipartite());
  for (const auto& e : g.edges()) EXPECT_NE(g.side(e.u), g.side(e.v));
}

}  // namespace

TEST(SquareGrid, OpenCountsAndDegrees) {
  const auto g = build_square_grid(4, 3, Boundary::kOpen);
  EXPECT_EQ(g.num_vertices(), 12u);
  EXPECT_EQ(g.num_edges(), 3u * 3 + 4u * 2);
  EXPECT_EQ(g.degree(0), 2u);
  EXPECT_EQ(g.degree(5), 4u);
  EXPECT_FALSE(g.degenerate());
  expect_proper_bipartition(g);
}

TEST(SquareGrid, PeriodicIsFourRegular) {
  const auto g = build_square_grid(4, 4, Boundary::kPeriodic);
  EXPECT_EQ(g.num_edges(), 32u);
  expect_regular(g, 4);
  expect_proper_bipartition(g);
  EXPECT_FALSE(g.degenerate());
}

TEST(SquareGrid, TwoByTwoTorusCollapsesDuplicateBonds) {
  const auto g = build_square_grid(2, 2, Boundary::kPeriodic);
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_TRUE(g.degenerate());
  expect_regular(g, 2);
}

TEST(SquareGrid, RejectsImpossibleSizes) {
  EXPECT_THROW(build_square_grid(3, 3, Boundary::kOpen), ArgumentError);
  EXPECT_THROW(build_square_grid(3, 4, Boundary::kPeriodic), ArgumentError);
  EXPECT_THROW(build_square_grid(0, 4, Boundary::kOpen), ArgumentError);
}

TEST(Honeycomb, PeriodicIsThreeRegular) {
  const auto g = build_honeycomb(4, 4, Boundary::kPeriodic);
  EXPECT_EQ(g.num_vertices(), 16u);
  EXPECT_EQ(g.num_edges(), 24u);
  expect_regular(g, 3);
  expect_proper_bipartition(g);
}

TEST(Honeycomb, SmallestOpenCellIsAHexagon) {
  const auto g = build_honeycomb(2, 3, Boundary::kOpen);
  EXPECT_EQ(g.num_vertices(), 6u);
  EXPECT_EQ(g.num_edges(), 6u);
  expect_regular(g, 2);
}

TEST(CubicGrid, PeriodicDegrees) {
  const auto big = build_cubic_grid(4, 4, 4, Boundary::kPeriodic);
  EXPECT_EQ(big.num_edges(), 192u);
  expect_regular(big, 6);
  expect_proper_bipartition(big);
  const auto small = build_cubic_grid(2, 2, 2, Boundary::kPeriodic);
  EXPECT_TRUE(small.degenerate());
  expect_regular(small, 3);
}

TEST(LatticeGraph, RejectsSelfLoopsAndBadBipartitions) {
  EXPECT_THROW(LatticeGraph(2, {{0, 0}}), ArgumentError);
  EXPECT_THROW(LatticeGraph(2, {{0, 2}}), ArgumentError);
  EXPECT_THROW(LatticeGraph(2, {{0, 1}}, std::vector<std::uint8_t>{0, 0}), ArgumentError);
  const LatticeGraph g(2, {{1, 0}, {0, 1}});
  EXPECT_TRUE(g.degenerate());
  EXPECT_EQ(g.num_edges(), 1u);
}

TEST(LatticeGraph, EdgeLookupAndOrientation) {
  const auto g = build_square_grid(2, 2, Boundary::kOpen);
  EXPECT_EQ(g.edge_index(1, 0), g.edge_index(0, 1));
  EXPECT_FALSE(g.find_edge(0, 3).has_value());
  EXPECT_THROW(g.edge_index(0, 3), ArgumentError);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [a, b] = g.oriented(e);
    EXPECT_EQ(g.side(a), 0);
    EXPECT_EQ(g.side(b), 1);
  }
}

TEST(LatticeGraph, CentralEdgeIsAnXBond) {
  const auto g = build_square_grid(6, 6, Boundary::kPeriodic);
  const auto& e = g.edge(central_edge(g));
  EXPECT_EQ(e.u, 14u);
  EXPECT_EQ(e.v, 15u);
  const auto open = build_square_grid(2, 2, Boundary::kOpen);
  EXPECT_EQ(open.edge(central_edge(open)).u, 0u);
  EXPECT_EQ(open.edge(central_edge(open)).v, 1u);
}

TEST(TwoColoring, DetectsOddCycles) {
  EXPECT_FALSE(two_coloring(3, {{0, 1}, {1, 2}, {2, 0}}).has_value());
  EXPECT_TRUE(two_coloring(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}).has_value());
}

TEST(EdgeList, RoundTrip) {
  const auto g = build_honeycomb(4, 4, Boundary::kPeriodic);
  std::stringstream ss;
  write_edge_list(ss, g);
  const auto back = read_edge_list(ss);
  EXPECT_EQ(back.num_vertices(), g.num_vertices());
  ASSERT_EQ(back.num_edges(), g.num_edges());
  for (std::size_t i = 0; i < g.num_edges(); ++i) EXPECT_EQ(back.edge(i), g.edge(i));
  EXPECT_TRUE(back.bipartite());
}

TEST(EdgeList, CommentsBlankLinesAndErrors) {
  std::istringstream ok("# hexagon\n\nvertices 4\n0 1\n  # inner comment\n1 2\n2 3\n3 0\n");
  const auto g = read_edge_list(ok);
  EXPECT_EQ(g.num_edges(), 4u);
  EXPECT_TRUE(g.bipartite());

  std::istringstream triangle("vertices 3\n0 1\n1 2\n2 0\n");
  EXPECT_FALSE(read_edge_list(triangle).bipartite());

  std::istringstream missing("0 1\n");
  EXPECT_THROW(read_edge_list(missing), ArgumentError);
  std::istringstream junk("vertices 2\n0 1 7\n");
  EXPECT_THROW(read_edge_list(junk), ArgumentError);
  std::istringstream range("vertices 2\n0 2\n");
  EXPECT_THROW(read_edge_list(range), ArgumentError);
}
