// Incremental / decremental transitive closure and approximate APSP when the
// order of edge updates is predicted up front.
//
// Preprocessing weights predicted edge j by j (incremental) or -j
// (decremental) and builds hop-bounded bottleneck matrices. A query builds a
// small auxiliary graph on the endpoints of out-of-order edges, so its cost
// depends on how far the realized order strays from the prediction.
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynoracle/bottleneck.hpp"

namespace dynoracle {

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Raised for an update whose edge never appeared in the prediction.
class UnpredictedEdge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DynamicMode { kIncremental, kDecremental };

class PredictedEdgeSequence {
 public:
  PredictedEdgeSequence() = default;
  /// Edge i of `edges` gets rank i + 1. Vertices are 0..n-1.
  PredictedEdgeSequence(std::size_t n, std::vector<Edge> edges);

  std::size_t vertices() const noexcept { return n_; }
  std::size_t size() const noexcept { return edges_.size(); }
  /// 1-based rank.
  const Edge& at_rank(std::size_t rank) const { return edges_.at(rank - 1); }
  std::optional<std::size_t> rank_of(const Edge& e) const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::map<Edge, std::size_t> rank_;
};

struct ErrorStats {
  std::size_t eta_bar = 0;
  /// Prefix length p (incremental) or suffix start j* (decremental).
  std::size_t boundary = 0;
  std::vector<Edge> out_of_order;
};

struct ReachAnswer {
  bool reachable = false;
  std::size_t aux_nodes = 0;
  std::uint64_t work = 0;
};

struct DistanceAnswer {
  std::optional<std::size_t> distance;  // nullopt when unreachable
  std::size_t aux_nodes = 0;
  std::uint64_t work = 0;
};

class PartiallyDynamic {
 public:
  /// eps may be +infinity, which keeps only the d = n matrix (reachability only).
  PartiallyDynamic(PredictedEdgeSequence seq, double eps, DynamicMode mode);

  /// Inserts (incremental) or deletes (decremental) a predicted edge.
  void apply_update(const Edge& e);

  ReachAnswer query_reachable(std::size_t u, std::size_t v) const;
  DistanceAnswer query_distance(std::size_t u, std::size_t v) const;

  ErrorStats error_stats() const;
  std::size_t boundary() const noexcept;
  std::size_t eta_bar() const noexcept;
  /// Ranks of edges currently in the graph.
  std::vector<std::size_t> present_ranks() const;

  DynamicMode mode() const noexcept { return mode_; }
  double eps() const noexcept { return eps_; }
  const PredictedEdgeSequence& sequence() const noexcept { return seq_; }
  const std::vector<LadderRung>& ladder() const noexcept { return ladder_; }
  std::uint64_t preprocess_work() const noexcept { return preprocess_work_; }

 private:
  struct AuxGraph {
    std::vector<std::size_t> nodes;
    std::size_t source = 0, target = 0;
  };
  AuxGraph build_aux(std::size_t u, std::size_t v, std::set<Edge>& err_edges,
                     std::uint64_t& work) const;
  /// Bottleneck threshold a pair must meet to be connected by the prefix/suffix.
  Weight threshold() const noexcept;
  std::size_t rank_checked(const Edge& e) const;
  void check_vertex(std::size_t v) const;

  PredictedEdgeSequence seq_;
  double eps_;
  DynamicMode mode_;
  std::vector<LadderRung> ladder_;
  std::uint64_t preprocess_work_ = 0;
  // incremental: ranks inserted so far, and ranks still absent
  // decremental: ranks deleted so far, and ranks still present
  std::set<std::size_t> touched_;
  std::set<std::size_t> untouched_;
};

}  // namespace dynoracle
