#include <gtest/gtest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "dimerlab/matchings.hpp"

using namespace dimerlab;

namespace {

/// Counts perfect matchings by testing every subset of n/2 edges (small graphs only).
std::uint64_t count_by_subsets(const LatticeGraph& g) {
  const std::size_t m = g.num_edges();
  const std::size_t half = g.num_vertices() / 2;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) != half) continue;
    std::vector<char> used(g.num_vertices(), 0);
    bool ok = true;
    for (std::size_t e = 0; e < m && ok; ++e) {
      if (!(mask >> e & 1)) continue;
      const auto& edge = g.edge(e);
      ok = !used[edge.u] && !used[edge.v];
      used[edge.u] = used[edge.v] = 1;
    }
    count += ok ? 1 : 0;
  }
  return count;
}

LatticeGraph complete_bipartite(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::uint8_t> sides(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    sides[n + i] = 1;
    for (std::size_t j = 0; j < n; ++j) edges.emplace_back(i, n + j);
  }
  return LatticeGraph(2 * n, edges, sides);
}

}  // namespace

TEST(Matchings, CompleteBipartiteCountsAreFactorials) {
  EXPECT_EQ(enumerate_matchings(complete_bipartite(3)).total, 6u);
  EXPECT_EQ(count_by_permanent(complete_bipartite(3)), 6u);
  EXPECT_EQ(enumerate_matchings(complete_bipartite(5)).total, 120u);
  EXPECT_EQ(count_by_permanent(complete_bipartite(5)), 120u);
}

TEST(Matchings, LadderCountsFollowFibonacci) {
  std::uint64_t f0 = 1, f1 = 1;  // 2 x n ladder has F(n+1) matchings
  for (std::size_t n = 1; n <= 12; ++n) {
    const auto g = build_square_grid(n, 2, Boundary::kOpen);
    EXPECT_EQ(enumerate_matchings(g).total, f1) << "n=" << n;
    EXPECT_EQ(count_by_permanent(g), f1) << "n=" << n;
    const auto next = f0 + f1;
    f0 = f1;
    f1 = next;
  }
}

TEST(Matchings, AgreeWithSubsetEnumeration) {
  for (const auto& g : {build_square_grid(2, 3, Boundary::kOpen), build_square_grid(4, 2, Boundary::kPeriodic),
                        build_square_grid(3, 4, Boundary::kOpen), build_honeycomb(2, 4, Boundary::kOpen),
                        build_cubic_grid(2, 2, 2, Boundary::kOpen)}) {
    ASSERT_LE(g.num_edges(), 24u);
    EXPECT_EQ(enumerate_matchings(g).total, count_by_subsets(g));
  }
}

TEST(Matchings, KnownSquareGridCounts) {
  EXPECT_EQ(enumerate_matchings(build_square_grid(4, 4, Boundary::kOpen)).total, 36u);
  EXPECT_EQ(enumerate_matchings(build_square_grid(6, 6, Boundary::kOpen)).total, 6728u);
  EXPECT_EQ(enumerate_matchings(build_square_grid(4, 4, Boundary::kPeriodic)).total, 272u);
}

TEST(Matchings, PartitionIdentityAtEveryVertex) {
  const auto g = build_honeycomb(4, 4, Boundary::kPeriodic);
  const auto stats = enumerate_matchings(g);
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    std::uint64_t sum = 0;
    for (const auto& inc : g.incident(v)) sum += stats.with_edge[inc.edge];
    EXPECT_EQ(sum, stats.total) << "vertex " << v;
  }
}

TEST(Matchings, VisitorSeesDistinctPerfectMatchings) {
  const auto g = build_square_grid(4, 3, Boundary::kOpen);
  std::set<std::vector<std::size_t>> seen;
  const auto stats = enumerate_matchings(g, [&](const PerfectMatching& m) {
    std::vector<char> used(g.num_vertices(), 0);
    for (std::size_t e : m.edges) {
      const auto& edge = g.edge(e);
      EXPECT_FALSE(used[edge.u] || used[edge.v]);
      used[edge.u] = used[edge.v] = 1;
    }
    auto key = m.edges;
    std::sort(key.begin(), key.end());
    seen.insert(key);
  });
  EXPECT_EQ(seen.size(), stats.total);
}

TEST(Matchings, ParallelCountsMatchSerial) {
  const auto g = build_square_grid(6, 6, Boundary::kPeriodic);
  const auto serial = enumerate_matchings(g, {}, {limits().max_enumeration_nodes, 1});
  const auto parallel = enumerate_matchings(g, {}, {limits().max_enumeration_nodes, 4});
  EXPECT_EQ(serial.total, 90176u);
  EXPECT_EQ(parallel.total, serial.total);
  EXPECT_EQ(parallel.with_edge, serial.with_edge);
}

TEST(Matchings, NodeCapCarriesPartialCounts) {
  const auto g = build_square_grid(6, 6, Boundary::kOpen);
  for (unsigned threads : {1u, 3u}) {
    try {
      enumerate_matchings(g, {}, {1000, threads});
      FAIL() << "expected EnumerationCapExceeded";
    } catch (const EnumerationCapExceeded& e) {
      EXPECT_LT(e.partial().total, 6728u);
      EXPECT_GE(e.partial().nodes_visited, 1000u);
    }
  }
}

TEST(Matchings, OddGraphsAndMissingMatchings) {
  EXPECT_THROW(enumerate_matchings(LatticeGraph(3, {{0, 1}, {1, 2}})), ArgumentError);
  const LatticeGraph star(4, {{0, 1}, {0, 2}, {0, 3}}, std::vector<std::uint8_t>{0, 1, 1, 1});
  const auto stats = enumerate_matchings(star);
  EXPECT_EQ(stats.total, 0u);
  EXPECT_EQ(count_by_permanent(star), 0u);
  EXPECT_THROW(stats.fraction(0), ArgumentError);
}

TEST(Permanent, RejectsOversizedAndUncoloredGraphs) {
  EXPECT_THROW(count_by_permanent(build_square_grid(6, 6, Boundary::kOpen)), CapacityError);
  EXPECT_THROW(count_by_permanent(LatticeGraph(3, {{0, 1}, {1, 2}, {2, 0}})), ArgumentError);
}

TEST(EdgeFraction, HexagonAndSmallGrids) {
  const auto hex = build_honeycomb(2, 3, Boundary::kOpen);
  const auto hs = enumerate_matchings(hex);
  for (std::size_t e = 0; e < hex.num_edges(); ++e) EXPECT_DOUBLE_EQ(edge_dimer_fraction(hs, e), 0.5);
  const auto sq = build_square_grid(2, 2, Boundary::kOpen);
  EXPECT_DOUBLE_EQ(edge_dimer_fraction(enumerate_matchings(sq), sq, 1, 0), 0.5);
  EXPECT_THROW(edge_dimer_fraction(enumerate_matchings(sq), sq, 0, 3), ArgumentError);
}

TEST(PairState, MatchesStatevectorOracle) {
  const auto g = build_square_grid(4, 2, Boundary::kOpen);
  const auto stats = enumerate_matchings(g);
  for (int s : {2, 3}) {
    const SpinDim S(s);
    for (std::size_t e = 0; e < g.num_edges(); ++e) {
      const auto a = pair_state_from_stats(stats, e, S, {1, 1});
      const auto b = statevector_sigma_check(g, S, {1, 1}, e);
      EXPECT_LT(max_abs_diff(a.matrix(), b.matrix()), 1e-12) << "S=" << s << " edge " << e;
    }
  }
  EXPECT_THROW(statevector_sigma_check(build_square_grid(4, 4, Boundary::kOpen), SpinDim(2), {}, 0), CapacityError);
}

TEST(Extrapolation, RecoversExactModel) {
  const std::vector<double> L{4, 6, 8, 10};
  std::vector<double> f;
  for (double x : L) f.push_back(0.25 + 0.3 / x);
  const auto fit = extrapolate_fraction(L, f);
  EXPECT_NEAR(fit.f_inf, 0.25, 1e-12);
  EXPECT_NEAR(fit.slope, 0.3, 1e-12);
  EXPECT_NEAR(fit.rms_residual, 0.0, 1e-12);
  EXPECT_FALSE(fit.degenerate);
  EXPECT_EQ(fit.points, 4u);
}

TEST(Extrapolation, TwoPointsAreFlaggedAndBadInputRejected) {
  const std::vector<double> L{4, 6};
  const std::vector<double> f{0.25, 0.25};
  const auto fit = extrapolate_fraction(L, f);
  EXPECT_TRUE(fit.degenerate);
  EXPECT_NEAR(fit.f_inf, 0.25, 1e-15);
  const std::vector<double> one{4};
  const std::vector<double> desc{6, 4};
  EXPECT_THROW(extrapolate_fraction(one, one), ArgumentError);
  EXPECT_THROW(extrapolate_fraction(desc, f), ArgumentError);
  EXPECT_THROW(extrapolate_fraction(L, one), ArgumentError);
}
