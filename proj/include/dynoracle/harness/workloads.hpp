// Seeded workload generators for every module. The same seed and config
// always give the same workload.
#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "dynoracle/graph_reductions.hpp"
#include "dynoracle/harness/error_model.hpp"
#include "dynoracle/omv.hpp"
#include "dynoracle/partial_dynamic.hpp"
#include "dynoracle/predicted_deletions.hpp"
#include "dynoracle/predicted_inverse.hpp"

namespace dynoracle::harness {

// ---- partially dynamic reachability / distances ----

struct PartialOp {
  enum class Kind { kUpdate, kQuery };
  Kind kind = Kind::kUpdate;
  Edge edge;  // the updated edge, or the queried pair
  bool operator==(const PartialOp&) const = default;
};

struct PartialWorkload {
  std::size_t n = 0;
  DynamicMode mode = DynamicMode::kIncremental;
  double eps = std::numeric_limits<double>::infinity();
  std::vector<Edge> predicted;
  std::vector<PartialOp> script;
};

enum class QueryPlacement {
  kEveryUpdate,   // one query after each update
  kPeakDisorder,  // one query per window of w+1 updates, where the
                  // out-of-order count peaks
};

struct PartialConfig {
  std::size_t n = 16;
  std::size_t m = 48;
  DynamicMode mode = DynamicMode::kIncremental;
  double eps = 1.0;
  ErrorModel errors;
  QueryPlacement placement = QueryPlacement::kEveryUpdate;
  std::size_t window = 1;  // placement window for kPeakDisorder
  std::uint64_t seed = 1;
};

PartialWorkload random_partial_workload(const PartialConfig& config);

/// Largest |realized update position - predicted rank| over the script.
std::size_t realized_eta_inf(const PartialWorkload& w);

// ---- online matrix-vector ----

struct OmvSession {
  BoolMatrix matrix;
  std::vector<BoolVector> predicted;
  std::vector<BoolVector> realized;
};

/// Vectors are realized in perturbed order; an unpredicted position gets a
/// fresh random vector.
OmvSession random_omv_session(std::size_t n, std::size_t queries, const ErrorModel& errors,
                              std::uint64_t seed);

// ---- matrix inverse with a predicted queue ----

struct InverseStep {
  std::size_t eta = 1;
  std::optional<RankOneUpdate> realized;
};

struct InverseWorkload {
  FieldMatrix initial;
  std::vector<RankOneUpdate> queue;
  std::vector<InverseStep> steps;
};

struct InverseConfig {
  std::size_t n = 32;
  std::size_t steps = 300;
  std::vector<std::size_t> etas{1};  // drawn uniformly per step
  double unpredicted = 0.0;          // fraction of steps with a realized override
  std::uint64_t seed = 1;
};

/// Queued updates are random dense rank-1 updates. An unpredicted step
/// copies one row of the current matrix onto another, which drops the rank
/// when the matrix was invertible.
InverseWorkload random_inverse_workload(const InverseConfig& config);

// ---- graph problems under vertex updates ----

struct GraphStep {
  std::size_t eta = 1;
  std::optional<VertexUpdate> realized;
};

struct GraphWorkload {
  GraphProblem problem = GraphProblem::kReachable;
  Digraph initial;
  std::vector<VertexUpdate> queue;
  std::vector<GraphStep> steps;
  GraphOptions options;
};

GraphWorkload random_graph_workload(GraphProblem problem, std::size_t n, std::size_t steps,
                                    std::uint64_t seed);

// ---- APSP with predicted deletions ----

struct ApspOp {
  enum class Kind { kInsert, kDelete, kQuery };
  Kind kind = Kind::kQuery;
  ElementId vertex = 0;
  ElementId other = 0;  // second query endpoint
  std::int64_t key = 0;
  std::vector<WeightedNeighbour> in, out;
};

struct ApspConfig {
  std::size_t max_live = 24;
  std::size_t operations = 120;
  double early_deletion = 0.15;  // chance a deletion ignores the prediction
  std::int64_t max_weight = 9;
  std::uint64_t seed = 1;
};

std::vector<ApspOp> random_apsp_script(const ApspConfig& config);

}  // namespace dynoracle::harness
