#include "dynoracle/harness/robust.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace dynoracle::harness {

Side InterleavedSchedule::request(std::uint64_t prediction_cost, std::uint64_t baseline_cost) {
  prediction_backlog_ += prediction_cost;
  baseline_backlog_ += baseline_cost;
  prediction_total_ += prediction_cost;
  baseline_total_ += baseline_cost;
  ++requests_;
  const std::uint64_t run = std::min(prediction_backlog_, baseline_backlog_);
  prediction_backlog_ -= run;
  baseline_backlog_ -= run;
  combined_ += 2 * run + switch_cost_;
  return prediction_backlog_ == 0 ? Side::kPrediction : Side::kBaseline;
}

BfsBaseline::BfsBaseline(std::size_t n, const std::vector<Edge>& initial) : out_(n) {
  for (const auto& e : initial) out_[e.from].insert(e.to);
  build_work_ = n + initial.size();
}

std::uint64_t BfsBaseline::insert(const Edge& e) {
  out_[e.from].insert(e.to);
  return 1;
}

std::uint64_t BfsBaseline::erase(const Edge& e) {
  out_[e.from].erase(e.to);
  return 1;
}

bool BfsBaseline::reachable(std::size_t u, std::size_t v, std::uint64_t& work) const {
  work = 1;
  if (u == v) return true;
  std::vector<char> seen(out_.size(), 0);
  std::deque<std::size_t> queue{u};
  seen[u] = 1;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    ++work;
    for (std::size_t y : out_[x]) {
      ++work;
      if (y == v) return true;
      if (!seen[y]) {
        seen[y] = 1;
        queue.push_back(y);
      }
    }
  }
  return false;
}

namespace {

std::vector<Edge> starting_edges(const PredictedEdgeSequence& seq, DynamicMode mode) {
  return mode == DynamicMode::kDecremental ? seq.edges() : std::vector<Edge>{};
}

}  // namespace

RobustReachability::RobustReachability(const PredictedEdgeSequence& seq, DynamicMode mode)
    : prediction_(seq, std::numeric_limits<double>::infinity(), mode),
      baseline_(seq.vertices(), starting_edges(seq, mode)) {
  schedule_.request(prediction_.preprocess_work(), baseline_.build_work());
}

void RobustReachability::update(const Edge& e) {
  prediction_.apply_update(e);
  const std::uint64_t base = prediction_.mode() == DynamicMode::kIncremental ? baseline_.insert(e)
                                                                              : baseline_.erase(e);
  schedule_.request(1, base);
}

RobustAnswer RobustReachability::query(std::size_t u, std::size_t v) {
  const ReachAnswer pred = prediction_.query_reachable(u, v);
  std::uint64_t base_work = 0;
  const bool base = baseline_.reachable(u, v, base_work);
  RobustAnswer out;
  out.answered_by = schedule_.request(pred.work, base_work);
  out.reachable = out.answered_by == Side::kPrediction ? pred.reachable : base;
  out.sides_agree = pred.reachable == base;
  return out;
}

}  // namespace dynoracle::harness
