// Brute-force reference answers. Textbook algorithms only, nothing shared
// with the structures they check.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "dynoracle/graph_reductions.hpp"
#include "dynoracle/omv.hpp"
#include "dynoracle/partial_dynamic.hpp"

namespace dynoracle::harness {

inline constexpr std::int64_t kNoPath = std::numeric_limits<std::int64_t>::max();

struct WeightedArc {
  std::size_t from, to;
  std::int64_t weight;
};

/// Floyd-Warshall; kNoPath for unreachable pairs. Parallel arcs keep the lightest.
std::vector<std::vector<std::int64_t>> fw_apsp(std::size_t n, const std::vector<WeightedArc>& arcs);

std::vector<bool> bfs_reach(const Digraph& g, std::size_t source);
/// Hop distances from `source` over an edge list; nullopt when unreachable.
std::vector<std::optional<std::size_t>> bfs_hops(std::size_t n, const std::vector<Edge>& edges,
                                                  std::size_t source);
bool dfs_cycle(const Digraph& g);
bool strongly_connected(const Digraph& g);

/// Triangles of an undirected graph stored with both arc directions.
std::int64_t triangle_cubic(const Digraph& g);
/// Cyclic triples a->b->c->a of a directed graph.
std::int64_t directed_triangles_cubic(const Digraph& g);

/// Maximum matching of an undirected graph by search over vertex subsets.
std::size_t matching_exhaustive(const Digraph& g);

/// Internally vertex-disjoint s-t paths by unit-capacity max flow on the split graph.
std::size_t maxflow_vertex_disjoint(const Digraph& g, std::size_t s, std::size_t t);

BoolVector bool_matvec(const BoolMatrix& m, const BoolVector& v);
bool bool_quadratic(const BoolVector& u, const BoolMatrix& m, const BoolVector& v);

}  // namespace dynoracle::harness
