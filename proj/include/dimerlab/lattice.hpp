#pragma once

// Finite lattice graphs (square, honeycomb, simple cubic) with open or periodic
// boundaries, plus a plain-text edge-list format:
//
//   vertices <N>
//   <u> <v>
//   ...
//
// Vertices are 0-based. Blank lines and lines starting with '#' are ignored.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "dimerlab/errors.hpp"

namespace dimerlab {

enum class Boundary { kOpen, kPeriodic };
enum class LatticeFamily { kSquare, kHoneycomb, kCubic, kCustom };

inline const char* to_string(Boundary b) { return b == Boundary::kOpen ? "open" : "periodic"; }

inline const char* to_string(LatticeFamily f) {
  switch (f) {
    case LatticeFamily::kSquare: return "square";
    case LatticeFamily::kHoneycomb: return "honeycomb";
    case LatticeFamily::kCubic: return "cubic";
    case LatticeFamily::kCustom: return "custom";
  }
  return "custom";
}

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;  // u < v
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct LatticeMetadata {
  LatticeFamily family = LatticeFamily::kCustom;
  std::vector<std::size_t> sizes;
  Boundary boundary = Boundary::kOpen;
  /// Set when periodic wrapping produced duplicate edges that were collapsed.
  bool degenerate = false;
};

class LatticeGraph {
 public:
  struct Incidence {
    std::size_t neighbor;
    std::size_t edge;
  };

  /// Builds a simple graph. Self-loops are rejected; duplicate edges are collapsed
  /// and mark the graph degenerate. `sides`, when given, must be a proper 2-coloring.
  LatticeGraph(std::size_t num_vertices, std::vector<std::pair<std::size_t, std::size_t>> raw_edges,
               std::optional<std::vector<std::uint8_t>> sides = std::nullopt, LatticeMetadata meta = {})
      : num_vertices_(num_vertices), sides_(std::move(sides)), meta_(std::move(meta)) {
    for (auto [u, v] : raw_edges) {
      if (u >= num_vertices || v >= num_vertices) {
        throw ArgumentError("LatticeGraph: edge (" + std::to_string(u) + "," + std::to_string(v) +
                            ") references a missing vertex");
      }
      if (u == v) throw ArgumentError("LatticeGraph: self-loop at vertex " + std::to_string(u));
      edges_.push_back({std::min(u, v), std::max(u, v)});
    }
    std::sort(edges_.begin(), edges_.end());
    const auto last = std::unique(edges_.begin(), edges_.end());
    if (last != edges_.end()) meta_.degenerate = true;
    edges_.erase(last, edges_.end());

    if (sides_) {
      if (sides_->size() != num_vertices_) throw ArgumentError("LatticeGraph: bipartition has wrong length");
      for (const auto& e : edges_) {
        if ((*sides_)[e.u] == (*sides_)[e.v]) {
          throw ArgumentError("LatticeGraph: edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") does not cross the bipartition");
        }
      }
    }
    adjacency_.assign(num_vertices_, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      adjacency_[edges_[i].u].push_back({edges_[i].v, i});
      adjacency_[edges_[i].v].push_back({edges_[i].u, i});
    }
    for (auto& adj : adjacency_) {
      std::sort(adj.begin(), adj.end(), [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
    }
  }

  std::size_t num_vertices() const noexcept { return num_vertices_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }
  /// Incident edges of v, by ascending neighbor index.
  const std::vector<Incidence>& incident(std::size_t v) const { return adjacency_.at(v); }
  std::size_t degree(std::size_t v) const { return adjacency_.at(v).size(); }
  const LatticeMetadata& metadata() const noexcept { return meta_; }
  bool degenerate() const noexcept { return meta_.degenerate; }

  bool bipartite() const noexcept { return sides_.has_value(); }
  /// 0 for sublattice A, 1 for B.
  std::uint8_t side(std::size_t v) const {
    if (!sides_) throw ArgumentError("LatticeGraph: no bipartition");
    return sides_->at(v);
  }

  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const {
    if (u >= num_vertices_ || v >= num_vertices_) return std::nullopt;
    const Edge key{std::min(u, v), std::max(u, v)};
    const auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<std::size_t>(it - edges_.begin());
  }

  std::size_t edge_index(std::size_t u, std::size_t v) const {
    const auto e = find_edge(u, v);
    if (!e) throw ArgumentError("edge (" + std::to_string(u) + "," + std::to_string(v) + ") is not in the graph");
    return *e;
  }

  /// Endpoints ordered (A, B) when a bipartition exists, else (u, v) with u < v.
  std::pair<std::size_t, std::size_t> oriented(std::size_t edge_idx) const {
    const auto& e = edges_.at(edge_idx);
    if (sides_ && (*sides_)[e.u] == 1) return {e.v, e.u};
    return {e.u, e.v};
  }

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Incidence>> adjacency_;
  std::optional<std::vector<std::uint8_t>> sides_;
  LatticeMetadata meta_;
};

/// Two-coloring by breadth-first search, or nullopt when the graph has an odd cycle.
inline std::optional<std::vector<std::uint8_t>> two_coloring(std::size_t n,
                                                              const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (auto [u, v] : edges) {
    if (u >= n || v >= n) return std::nullopt;
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> color(n, -1);
  for (std::size_t s = 0; s < n; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t w : adj[u]) {
        if (color[w] == -1) {
          color[w] = 1 - color[u];
          q.push(w);
        } else if (color[w] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(color[i]);
  return out;
}

namespace detail {

inline void check_extent(std::size_t n, Boundary boundary, const char* family) {
  if (n == 0) throw ArgumentError(std::string(family) + ": sizes must be positive");
  if (boundary == Boundary::kPeriodic && (n < 2 || n % 2 != 0)) {
    throw ArgumentError(std::string(family) + ": periodic sizes must be even and >= 2 (got " + std::to_string(n) +
                        ")");
  }
}

}  // namespace detail

/// w x h square grid, vertex index r*w + c, bipartition by (r + c) parity.
inline LatticeGraph build_square_grid(std::size_t w, std::size_t h, Boundary boundary) {
  detail::check_extent(w, boundary, "square grid");
  detail::check_extent(h, boundary, "square grid");
  if ((w * h) % 2 != 0) throw ArgumentError("square grid: odd vertex count " + std::to_string(w * h));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::uint8_t> sides(w * h);
  auto id = [w](std::size_t r, std::size_t c) { return r * w + c; };
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      sides[id(r, c)] = static_cast<std::uint8_t>((r + c) % 2);
      if (c + 1 < w) edges.emplace_back(id(r, c), id(r, c + 1));
      else if (boundary == Boundary::kPeriodic) edges.emplace_back(id(r, c), id(r, 0));
      if (r + 1 < h) edges.emplace_back(id(r, c), id(r + 1, c));
      else if (boundary == Boundary::kPeriodic) edges.emplace_back(id(r, c), id(0, c));
    }
  }
  return LatticeGraph(w * h, std::move(edges), std::move(sides), {LatticeFamily::kSquare, {w, h}, boundary, false});
}

/// Brick-wall honeycomb: rows x cols vertices, every horizontal bond present and
/// a vertical bond below (r, c) whenever r + c is even.
inline LatticeGraph build_honeycomb(std::size_t rows, std::size_t cols, Boundary boundary) {
  detail::check_extent(rows, boundary, "honeycomb");
  detail::check_extent(cols, boundary, "honeycomb");
  if ((rows * cols) % 2 != 0) throw ArgumentError("honeycomb: odd vertex count " + std::to_string(rows * cols));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::uint8_t> sides(rows * cols);
  auto id = [cols](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      sides[id(r, c)] = static_cast<std::uint8_t>((r + c) % 2);
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      else if (boundary == Boundary::kPeriodic) edges.emplace_back(id(r, c), id(r, 0));
      if ((r + c) % 2 == 0) {
        if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
        else if (boundary == Boundary::kPeriodic) edges.emplace_back(id(r, c), id(0, c));
      }
    }
  }
  return LatticeGraph(rows * cols, std::move(edges), std::move(sides),
                      {LatticeFamily::kHoneycomb, {rows, cols}, boundary, false});
}

/// w x h x d simple cubic grid, vertex index (z*h + y)*w + x, bipartition by x+y+z parity.
inline LatticeGraph build_cubic_grid(std::size_t w, std::size_t h, std::size_t d, Boundary boundary) {
  for (std::size_t n : {w, h, d}) detail::check_extent(n, boundary, "cubic grid");
  if ((w * h * d) % 2 != 0) throw ArgumentError("cubic grid: odd vertex count " + std::to_string(w * h * d));
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::uint8_t> sides(w * h * d);
  auto id = [w, h](std::size_t x, std::size_t y, std::size_t z) { return (z * h + y) * w + x; };
  const std::array<std::size_t, 3> extent{w, h, d};
  for (std::size_t z = 0; z < d; ++z) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        sides[id(x, y, z)] = static_cast<std::uint8_t>((x + y + z) % 2);
        const std::array<std::size_t, 3> p{x, y, z};
        for (std::size_t axis = 0; axis < 3; ++axis) {
          auto q = p;
          if (p[axis] + 1 < extent[axis]) q[axis] = p[axis] + 1;
          else if (boundary == Boundary::kPeriodic) q[axis] = 0;
          else continue;
          edges.emplace_back(id(x, y, z), id(q[0], q[1], q[2]));
        }
      }
    }
  }
  return LatticeGraph(w * h * d, std::move(edges), std::move(sides),
                      {LatticeFamily::kCubic, {w, h, d}, boundary, false});
}

/// The edge from the most central vertex to its next-index neighbor (the +x bond
/// on grids), falling back to the vertex's first incident edge.
inline std::size_t central_edge(const LatticeGraph& g) {
  const auto& meta = g.metadata();
  std::size_t center = g.num_vertices() / 2;
  const auto& n = meta.sizes;
  switch (meta.family) {
    case LatticeFamily::kSquare: center = ((n[1] - 1) / 2) * n[0] + (n[0] - 1) / 2; break;
    case LatticeFamily::kHoneycomb: center = ((n[0] - 1) / 2) * n[1] + (n[1] - 1) / 2; break;
    case LatticeFamily::kCubic: center = (((n[2] - 1) / 2) * n[1] + (n[1] - 1) / 2) * n[0] + (n[0] - 1) / 2; break;
    case LatticeFamily::kCustom: break;
  }
  if (g.degree(center) == 0) throw ArgumentError("central_edge: central vertex is isolated");
  if (auto e = g.find_edge(center, center + 1)) return *e;
  return g.incident(center).front().edge;
}

inline void write_edge_list(std::ostream& os, const LatticeGraph& g) {
  os << "vertices " << g.num_vertices() << '\n';
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << '\n';
}

inline LatticeGraph read_edge_list(std::istream& is) {
  std::string line;
  std::optional<std::size_t> n;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (!n) {
      std::string keyword;
      long long count = -1;
      if (!(ls >> keyword >> count) || keyword != "vertices" || count < 0) {
        throw ArgumentError("edge list line " + std::to_string(line_no) + ": expected 'vertices <N>'");
      }
      n = static_cast<std::size_t>(count);
      continue;
    }
    long long u = -1;
    long long v = -1;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest) || u < 0 || v < 0) {
      throw ArgumentError("edge list line " + std::to_string(line_no) + ": expected '<u> <v>'");
    }
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  if (!n) throw ArgumentError("edge list: missing 'vertices <N>' header");
  for (auto [u, v] : edges) {
    if (u >= *n || v >= *n) throw ArgumentError("edge list: vertex index out of range");
  }
  auto sides = two_coloring(*n, edges);
  return LatticeGraph(*n, std::move(edges), std::move(sides));
}

}  // namespace dimerlab
