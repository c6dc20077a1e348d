// Fully dynamic graph problems under vertex updates, answered through the
// predicted-queue matrix inverse.
//
// Each problem encodes the graph as a matrix (block adjacency, I - A with
// random arc values, Tutte or Edmonds matrices). A vertex update rewrites a
// fixed set of rows and columns, and is queued as one rank-1 part per row and
// per column.
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dynoracle/predicted_inverse.hpp"

namespace dynoracle {

/// Simple directed graph on vertices 0..n-1, adjacency stored densely.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : n_(n), adj_(n * n, 0) {}

  std::size_t size() const noexcept { return n_; }
  bool has_arc(std::size_t u, std::size_t v) const noexcept { return adj_[u * n_ + v] != 0; }
  void set_arc(std::size_t u, std::size_t v, bool present);
  /// Adds u->v and v->u.
  void set_edge(std::size_t u, std::size_t v, bool present);
  Digraph reversed() const;
  std::size_t arc_count() const noexcept;

  bool operator==(const Digraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<char> adj_;
};

/// Replaces every arc touching `vertex`: afterwards its in-neighbours are
/// exactly `in` and its out-neighbours exactly `out`.
struct VertexUpdate {
  std::size_t vertex = 0;
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
  bool operator==(const VertexUpdate&) const = default;
};

/// Applies a vertex update. Undirected graphs treat in and out alike and
/// keep arcs symmetric.
Digraph apply_vertex_update(const Digraph& g, const VertexUpdate& upd, bool undirected);

enum class GraphProblem { kTriangles, kAcyclic, kReachable, kStrong, kMatching, kDisjointPaths };

const char* problem_name(GraphProblem kind);
std::optional<GraphProblem> parse_problem(const std::string& name);
bool is_undirected(GraphProblem kind);

struct GraphOptions {
  std::uint64_t seed = 1;
  std::size_t source = 0;  // reachability source; s for disjoint paths
  std::size_t target = 1;  // t for disjoint paths
  std::size_t size_constant = 3;
};

struct StepReport {
  std::uint64_t work = 0;
  std::size_t parts = 0;
  std::size_t predicted_parts = 0;
  std::size_t rebuilds = 0;  // fresh random encodings after a singular one
};

class DynamicGraphOracle {
 public:
  DynamicGraphOracle(GraphProblem kind, Digraph initial, std::vector<VertexUpdate> predicted,
                     GraphOptions options = {});
  ~DynamicGraphOracle();
  DynamicGraphOracle(DynamicGraphOracle&&) noexcept;

  /// Queues an update nobody predicted.
  void append_update(VertexUpdate upd);

  /// Performs the vertex update at 1-based queue position eta. `realized`
  /// overrides its neighbourhoods but must name the same vertex.
  StepReport perform_update(std::size_t eta, const std::optional<VertexUpdate>& realized = {});

  std::size_t pending() const noexcept;
  const VertexUpdate& pending_at(std::size_t pos) const;
  const Digraph& graph() const noexcept { return graph_; }
  GraphProblem kind() const noexcept { return kind_; }
  std::uint64_t work() const noexcept;

  /// Closed directed triangles (cyclic triples).
  std::int64_t directed_triangles() const noexcept { return directed_triangles_; }
  /// Undirected triangles when every edge is stored in both directions.
  std::int64_t undirected_triangles() const noexcept { return directed_triangles_ / 2; }
  bool acyclic() const;
  std::vector<std::size_t> reachable_set() const { return reachable_; }
  bool strongly_connected() const;
  std::size_t matching_size() const;
  std::size_t disjoint_paths() const;

 private:
  class Engine;

  void refresh_answers();

  GraphProblem kind_;
  GraphOptions options_;
  Digraph graph_;
  std::vector<std::unique_ptr<Engine>> engines_;
  std::int64_t directed_triangles_ = 0;
  std::vector<std::size_t> reachable_;
  std::vector<std::size_t> reaches_root_;
};

}  // namespace dynoracle
