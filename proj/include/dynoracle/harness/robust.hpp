// Best-of-both combination of a prediction structure and a classic baseline.
//
// Both sides see every request. Time is handed out in equal slices to both;
// a request is answered by whichever side finishes it first, and the other
// keeps its unfinished backlog into the next request. The schedule here is
// replayed over each side's counted work per request.
#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "dynoracle/partial_dynamic.hpp"

namespace dynoracle::harness {

enum class Side { kPrediction, kBaseline };

class InterleavedSchedule {
 public:
  explicit InterleavedSchedule(std::uint64_t switch_cost = 1) : switch_cost_(switch_cost) {}

  /// Adds the next request's cost for each side and runs slices until one
  /// side has no backlog left.
  Side request(std::uint64_t prediction_cost, std::uint64_t baseline_cost);

  std::uint64_t combined() const noexcept { return combined_; }
  std::uint64_t prediction_total() const noexcept { return prediction_total_; }
  std::uint64_t baseline_total() const noexcept { return baseline_total_; }
  std::size_t requests() const noexcept { return requests_; }
  std::uint64_t switch_cost() const noexcept { return switch_cost_; }

 private:
  std::uint64_t switch_cost_;
  std::uint64_t prediction_backlog_ = 0, baseline_backlog_ = 0;
  std::uint64_t prediction_total_ = 0, baseline_total_ = 0;
  std::uint64_t combined_ = 0;
  std::size_t requests_ = 0;
};

/// Adjacency sets plus a fresh BFS per query.
class BfsBaseline {
 public:
  BfsBaseline(std::size_t n, const std::vector<Edge>& initial);

  std::uint64_t insert(const Edge& e);
  std::uint64_t erase(const Edge& e);
  /// Returns the answer; `work` receives vertices visited plus arcs scanned.
  bool reachable(std::size_t u, std::size_t v, std::uint64_t& work) const;
  std::uint64_t build_work() const noexcept { return build_work_; }

 private:
  std::vector<std::set<std::size_t>> out_;
  std::uint64_t build_work_ = 0;
};

struct RobustAnswer {
  bool reachable = false;
  Side answered_by = Side::kPrediction;
  bool sides_agree = true;
};

class RobustReachability {
 public:
  RobustReachability(const PredictedEdgeSequence& seq, DynamicMode mode);

  void update(const Edge& e);
  RobustAnswer query(std::size_t u, std::size_t v);

  const InterleavedSchedule& schedule() const noexcept { return schedule_; }

 private:
  PartiallyDynamic prediction_;
  BfsBaseline baseline_;
  InterleavedSchedule schedule_;
};

}  // namespace dynoracle::harness
