#pragma once

// Perfect matchings (dimer coverings) of finite lattice graphs: exact
// enumeration with per-edge counts, an independent permanent count, the
// neighbour-pair state of the uniform covering mixture, and finite-size
// extrapolation of edge-dimer fractions.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "dimerlab/bell.hpp"
#include "dimerlab/errors.hpp"
#include "dimerlab/lattice.hpp"
#include "dimerlab/linalg.hpp"

namespace dimerlab {

/// Edge indices of one perfect matching, in the order they were chosen.
struct PerfectMatching {
  std::vector<std::size_t> edges;
};

struct MatchingStats {
  std::uint64_t total = 0;
  std::vector<std::uint64_t> with_edge;  // indexed like LatticeGraph::edges()
  std::uint64_t nodes_visited = 0;

  double fraction(std::size_t edge) const {
    if (total == 0) throw ArgumentError("MatchingStats: graph has no perfect matching");
    return static_cast<double>(with_edge.at(edge)) / static_cast<double>(total);
  }
};

/// Thrown when the node cap is hit; carries the counts accumulated so far.
class EnumerationCapExceeded : public CapacityError {
 public:
  EnumerationCapExceeded(const std::string& what, MatchingStats partial)
      : CapacityError(what), partial_(std::move(partial)) {}
  const MatchingStats& partial() const noexcept { return partial_; }

 private:
  MatchingStats partial_;
};

using MatchingVisitor = std::function<void(const PerfectMatching&)>;

struct EnumerationOptions {
  std::uint64_t max_nodes = limits().max_enumeration_nodes;
  unsigned threads = limits().threads;
};

namespace detail {

class MatchingSearch {
 public:
  MatchingSearch(const LatticeGraph& g, std::vector<std::uint64_t>& with_edge, std::atomic<std::uint64_t>& nodes,
                 std::uint64_t max_nodes, const MatchingVisitor* visitor)
      : g_(g), with_edge_(with_edge), nodes_(nodes), max_nodes_(max_nodes), visitor_(visitor),
        covered_(g.num_vertices(), 0) {}

  void cover(std::size_t edge) {
    const auto& e = g_.edge(edge);
    covered_[e.u] = covered_[e.v] = 1;
    stack_.edges.push_back(edge);
  }

  /// Number of completions of the current partial matching; adds subtree counts
  /// to with_edge for every edge chosen below this point.
  std::uint64_t run(std::size_t from = 0) {
    // Batch node accounting to keep the shared counter cold.
    if (++local_nodes_ == 1024) flush_nodes();
    std::size_t u = from;
    while (u < covered_.size() && covered_[u]) ++u;
    if (u == covered_.size()) {
      if (visitor_ != nullptr) (*visitor_)(stack_);
      ++leaves_;
      return 1;
    }
    std::uint64_t total = 0;
    covered_[u] = 1;
    for (const auto& inc : g_.incident(u)) {
      if (covered_[inc.neighbor]) continue;
      covered_[inc.neighbor] = 1;
      stack_.edges.push_back(inc.edge);
      const std::uint64_t c = run(u + 1);
      stack_.edges.pop_back();
      covered_[inc.neighbor] = 0;
      with_edge_[inc.edge] += c;
      total += c;
    }
    covered_[u] = 0;
    return total;
  }

  /// Matchings reached so far, including those inside unfinished subtrees.
  std::uint64_t leaves() const noexcept { return leaves_; }

  void flush_nodes() {
    const auto seen = nodes_.fetch_add(local_nodes_) + local_nodes_;
    local_nodes_ = 0;
    if (seen > max_nodes_) throw CapacityError("node cap");
  }

 private:
  const LatticeGraph& g_;
  std::vector<std::uint64_t>& with_edge_;
  std::atomic<std::uint64_t>& nodes_;
  std::uint64_t max_nodes_;
  const MatchingVisitor* visitor_;
  std::vector<char> covered_;
  PerfectMatching stack_;
  std::uint64_t local_nodes_ = 0;
  std::uint64_t leaves_ = 0;
};

/// Partial matchings at a fixed depth in deterministic search order.
inline void collect_prefixes(const LatticeGraph& g, std::size_t depth, std::vector<char>& covered,
                             std::vector<std::size_t>& prefix, std::vector<std::vector<std::size_t>>& out) {
  std::size_t u = 0;
  while (u < covered.size() && covered[u]) ++u;
  if (prefix.size() == depth || u == covered.size()) {
    out.push_back(prefix);
    return;
  }
  covered[u] = 1;
  for (const auto& inc : g.incident(u)) {
    if (covered[inc.neighbor]) continue;
    covered[inc.neighbor] = 1;
    prefix.push_back(inc.edge);
    collect_prefixes(g, depth, covered, prefix, out);
    prefix.pop_back();
    covered[inc.neighbor] = 0;
  }
  covered[u] = 0;
}

}  // namespace detail

/// Exact count of perfect matchings and of matchings through each edge, by
/// backtracking: take the lowest-index uncovered vertex and branch over its free
/// neighbors in ascending order. A visitor forces single-threaded search and
/// receives matchings in that deterministic order.
inline MatchingStats enumerate_matchings(const LatticeGraph& g, const MatchingVisitor& visitor = {},
                                         EnumerationOptions opts = {}) {
  MatchingStats stats;
  stats.with_edge.assign(g.num_edges(), 0);
  if (g.num_vertices() % 2 != 0) {
    throw ArgumentError("enumerate_matchings: odd vertex count " + std::to_string(g.num_vertices()));
  }
  std::atomic<std::uint64_t> nodes{0};
  const unsigned threads = visitor ? 1U : std::max(1U, opts.threads);

  auto cap_error = [&](MatchingStats partial) {
    partial.nodes_visited = nodes.load();
    return EnumerationCapExceeded("enumerate_matchings: exceeded " + std::to_string(opts.max_nodes) +
                                      " search nodes after " + std::to_string(partial.total) +
                                      " matchings (raise the node cap or shrink the lattice)",
                                  std::move(partial));
  };

  if (threads == 1) {
    detail::MatchingSearch search(g, stats.with_edge, nodes, opts.max_nodes, visitor ? &visitor : nullptr);
    try {
      stats.total = search.run();
      search.flush_nodes();
    } catch (const CapacityError&) {
      stats.total = search.leaves();
      throw cap_error(stats);
    }
    stats.nodes_visited = nodes.load();
    return stats;
  }

  // Split the search tree into independent subtrees; integer counts merge exactly,
  // so the result does not depend on scheduling.
  std::vector<std::vector<std::size_t>> prefixes;
  {
    std::vector<char> covered(g.num_vertices(), 0);
    std::vector<std::size_t> prefix;
    std::size_t depth = 1;
    do {
      prefixes.clear();
      detail::collect_prefixes(g, depth, covered, prefix, prefixes);
      ++depth;
    } while (prefixes.size() < 8 * threads && depth <= g.num_vertices() / 2);
  }
  std::vector<std::vector<std::uint64_t>> per_task(prefixes.size());
  std::vector<std::uint64_t> task_total(prefixes.size(), 0);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::atomic<std::uint64_t> partial_leaves{0};
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t t = next.fetch_add(1);
      if (t >= prefixes.size()) return;
      per_task[t].assign(g.num_edges(), 0);
      detail::MatchingSearch search(g, per_task[t], nodes, opts.max_nodes, nullptr);
      for (std::size_t e : prefixes[t]) search.cover(e);
      try {
        task_total[t] = search.run();
        search.flush_nodes();
      } catch (const CapacityError&) {
        partial_leaves.fetch_add(search.leaves());
        per_task[t].clear();
        failed.store(true);
        return;
      }
      for (std::size_t e : prefixes[t]) per_task[t][e] += task_total[t];
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (std::size_t t = 0; t < prefixes.size(); ++t) {
    if (per_task[t].empty()) continue;
    stats.total += task_total[t];
    for (std::size_t e = 0; e < g.num_edges(); ++e) stats.with_edge[e] += per_task[t][e];
  }
  if (failed.load()) {
    stats.total += partial_leaves.load();
    throw cap_error(stats);
  }
  stats.nodes_visited = nodes.load();
  return stats;
}

/// Permanent of the biadjacency matrix (Ryser's formula with Gray-code updates).
/// Counts perfect matchings of a bipartite graph with at most 16 vertices per side.
inline std::uint64_t count_by_permanent(const LatticeGraph& g) {
  if (!g.bipartite()) throw ArgumentError("count_by_permanent: graph has no bipartition");
  std::vector<std::size_t> row_of(g.num_vertices());
  std::vector<std::size_t> col_of(g.num_vertices());
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    if (g.side(v) == 0) row_of[v] = rows++;
    else col_of[v] = cols++;
  }
  if (rows != cols) return 0;
  constexpr std::size_t kMaxSide = 16;
  if (rows > kMaxSide) {
    throw CapacityError("count_by_permanent: " + std::to_string(rows) + " vertices per side exceeds " +
                        std::to_string(kMaxSide));
  }
  const std::size_t n = rows;
  if (n == 0) return 1;
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (const auto& e : g.edges()) {
    const auto [u, v] = std::pair{g.side(e.u) == 0 ? e.u : e.v, g.side(e.u) == 0 ? e.v : e.u};
    a[row_of[u]][col_of[v]] = 1;
  }
  // perm(A) = (-1)^n sum_{T subset cols} (-1)^{|T|} prod_i sum_{j in T} a_ij
  std::vector<long long> row_sum(n, 0);
  __extension__ using Wide = __int128;  // products of up to 16 row sums
  Wide acc = 0;
  std::uint64_t gray = 0;
  for (std::uint64_t k = 1; k < (std::uint64_t{1} << n); ++k) {
    const std::uint64_t next_gray = k ^ (k >> 1);
    const std::uint64_t changed = next_gray ^ gray;
    const auto j = static_cast<std::size_t>(__builtin_ctzll(changed));
    const int sign = (next_gray & changed) != 0 ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) row_sum[i] += sign * a[i][j];
    gray = next_gray;
    Wide prod = 1;
    for (std::size_t i = 0; i < n && prod != 0; ++i) prod *= row_sum[i];
    const int parity = __builtin_popcountll(gray) % 2;
    acc += parity != 0 ? -prod : prod;
  }
  if (n % 2 != 0) acc = -acc;
  return static_cast<std::uint64_t>(acc);
}

/// Fraction of perfect matchings that contain `edge`.
inline double edge_dimer_fraction(const MatchingStats& stats, std::size_t edge) {
  if (edge >= stats.with_edge.size()) throw ArgumentError("edge_dimer_fraction: no edge " + std::to_string(edge));
  return stats.fraction(edge);
}

inline double edge_dimer_fraction(const MatchingStats& stats, const LatticeGraph& g, std::size_t u, std::size_t v) {
  return edge_dimer_fraction(stats, g.edge_index(u, v));
}

/// Normalized two-site state of a neighbour pair whose edge carries a dimer in a
/// fraction f of the coverings: each covering either holds the pair in |(ab)> or
/// splits it across two other dimers (marginal I/S^2), with no cross terms.
/// Subsystem order is (A endpoint, B endpoint).
inline DensityMatrix pair_state_from_stats(const MatchingStats& stats, std::size_t edge, SpinDim S, BellLabel label) {
  return werner_state(S, label, edge_dimer_fraction(stats, edge));
}

/// Oracle for pair_state_from_stats: builds every covering as an explicit product
/// of dimers (A endpoint carries |k>, B endpoint |k+a>), mixes them uniformly and
/// reduces onto the edge's (A, B) endpoints.
inline DensityMatrix statevector_sigma_check(const LatticeGraph& g, SpinDim S, BellLabel label, std::size_t edge) {
  constexpr std::size_t kMaxVertices = 8;
  if (g.num_vertices() > kMaxVertices) {
    throw CapacityError("statevector_sigma_check: " + std::to_string(g.num_vertices()) + " vertices exceed " +
                        std::to_string(kMaxVertices));
  }
  if (edge >= g.num_edges()) throw ArgumentError("statevector_sigma_check: no edge " + std::to_string(edge));
  const auto [pa, pb] = g.oriented(edge);
  const std::vector<std::size_t> keep{std::min(pa, pb), std::max(pa, pb)};
  const std::size_t d = S.size() * S.size();
  ComplexMatrix sum(d, d);
  std::uint64_t count = 0;
  enumerate_matchings(g, [&](const PerfectMatching& m) {
    std::vector<Dimer> dimers;
    for (std::size_t e : m.edges) {
      const auto [va, vb] = g.oriented(e);
      dimers.push_back({va, vb, label});
    }
    const auto psi = dimer_product(S, g.num_vertices(), dimers);
    const auto dims = psi.dims();
    sum += reduce_pure(psi.amplitudes(), dims, keep).matrix();
    ++count;
  }, {limits().max_enumeration_nodes, 1});
  if (count == 0) throw ArgumentError("statevector_sigma_check: graph has no perfect matching");
  DensityMatrix rho(sum * Complex(1.0 / static_cast<double>(count)), {S.size(), S.size()});
  if (pa > pb) {
    const std::vector<std::size_t> swap{1, 0};
    rho = permute_subsystems(rho, swap);
  }
  return rho;
}

struct Extrapolation {
  double f_inf = 0.0;
  double slope = 0.0;  // coefficient of 1/L
  double rms_residual = 0.0;
  std::size_t points = 0;
  /// No residual degrees of freedom (fewer than three points) or a singular fit.
  bool degenerate = false;
};

/// Least-squares fit of f(L) = f_inf + c / L.
inline Extrapolation extrapolate_fraction(std::span<const double> sizes, std::span<const double> fractions) {
  if (sizes.size() != fractions.size()) throw ArgumentError("extrapolate_fraction: length mismatch");
  if (sizes.size() < 2) throw ArgumentError("extrapolate_fraction: need at least two points");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] > 0.0)) throw ArgumentError("extrapolate_fraction: sizes must be positive");
    if (i > 0 && !(sizes[i] > sizes[i - 1])) throw ArgumentError("extrapolate_fraction: sizes must increase");
  }
  const auto n = static_cast<double>(sizes.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double x = 1.0 / sizes[i];
    sx += x;
    sy += fractions[i];
    sxx += x * x;
    sxy += x * fractions[i];
  }
  Extrapolation out;
  out.points = sizes.size();
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) {
    out.f_inf = sy / n;
    out.degenerate = true;
    return out;
  }
  out.slope = (n * sxy - sx * sy) / det;
  out.f_inf = (sy - out.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double r = fractions[i] - (out.f_inf + out.slope / sizes[i]);
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / n);
  out.degenerate = sizes.size() < 3;
  return out;
}

}  // namespace dimerlab
