#include "dynoracle/partial_dynamic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dynoracle {

PredictedEdgeSequence::PredictedEdgeSequence(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    const Edge& e = edges_[i];
    if (e.from >= n_ || e.to >= n_)
      throw ContractViolation("PredictedEdgeSequence: vertex out of range");
    if (e.from == e.to) throw ContractViolation("PredictedEdgeSequence: self-loop");
    if (!rank_.emplace(e, i + 1).second)
      throw ContractViolation("PredictedEdgeSequence: duplicate edge " + std::to_string(e.from) +
                              "->" + std::to_string(e.to));
  }
}

std::optional<std::size_t> PredictedEdgeSequence::rank_of(const Edge& e) const {
  auto it = rank_.find(e);
  if (it == rank_.end()) return std::nullopt;
  return it->second;
}

PartiallyDynamic::PartiallyDynamic(PredictedEdgeSequence seq, double eps, DynamicMode mode)
    : seq_(std::move(seq)), eps_(eps), mode_(mode) {
  const std::size_t n = seq_.vertices();
  const std::size_t m = seq_.size();
  BottleneckMatrix w = BottleneckMatrix::identity(n);
  for (std::size_t j = 1; j <= m; ++j) {
    const Edge& e = seq_.at_rank(j);
    const auto rank = static_cast<Weight>(j);
    w(e.from, e.to) = mode_ == DynamicMode::kIncremental ? rank : -rank;
  }
  OpCounter counter;
  ladder_ = build_d_ladder(w, eps_, n, &counter);
  preprocess_work_ = counter.ops;
  for (std::size_t j = 1; j <= m; ++j) untouched_.insert(untouched_.end(), j);
}

std::size_t PartiallyDynamic::rank_checked(const Edge& e) const {
  auto rank = seq_.rank_of(e);
  if (!rank) {
    throw UnpredictedEdge("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                          " is not in the predicted sequence");
  }
  return *rank;
}

void PartiallyDynamic::check_vertex(std::size_t v) const {
  if (v >= seq_.vertices()) throw ContractViolation("PartiallyDynamic: vertex out of range");
}

void PartiallyDynamic::apply_update(const Edge& e) {
  const std::size_t rank = rank_checked(e);
  if (untouched_.erase(rank) == 0)
    throw ContractViolation("PartiallyDynamic::apply_update: edge already updated");
  touched_.insert(rank);
}

std::size_t PartiallyDynamic::boundary() const noexcept {
  if (mode_ == DynamicMode::kIncremental) {
    return untouched_.empty() ? seq_.size() : *untouched_.begin() - 1;
  }
  return touched_.empty() ? 1 : *touched_.rbegin() + 1;
}

std::size_t PartiallyDynamic::eta_bar() const noexcept {
  const std::size_t b = boundary();
  if (mode_ == DynamicMode::kIncremental) return touched_.size() - b;
  return b - touched_.size() - 1;
}

Weight PartiallyDynamic::threshold() const noexcept {
  const auto b = static_cast<Weight>(boundary());
  return mode_ == DynamicMode::kIncremental ? b : -b;
}

ErrorStats PartiallyDynamic::error_stats() const {
  ErrorStats stats;
  stats.boundary = boundary();
  stats.eta_bar = eta_bar();
  if (mode_ == DynamicMode::kIncremental) {
    for (auto it = touched_.upper_bound(stats.boundary); it != touched_.end(); ++it)
      stats.out_of_order.push_back(seq_.at_rank(*it));
  } else {
    for (auto it = untouched_.begin(); it != untouched_.end() && *it < stats.boundary; ++it)
      stats.out_of_order.push_back(seq_.at_rank(*it));
  }
  return stats;
}

std::vector<std::size_t> PartiallyDynamic::present_ranks() const {
  const auto& present = mode_ == DynamicMode::kIncremental ? touched_ : untouched_;
  return {present.begin(), present.end()};
}

PartiallyDynamic::AuxGraph PartiallyDynamic::build_aux(std::size_t u, std::size_t v,
                                                       std::set<Edge>& err_edges,
                                                       std::uint64_t& work) const {
  const auto stats = error_stats();
  AuxGraph h;
  h.nodes = {u, v};
  for (const Edge& e : stats.out_of_order) {
    h.nodes.push_back(e.from);
    h.nodes.push_back(e.to);
    err_edges.insert(e);
  }
  work += stats.out_of_order.size() + 1;
  std::sort(h.nodes.begin(), h.nodes.end());
  h.nodes.erase(std::unique(h.nodes.begin(), h.nodes.end()), h.nodes.end());
  h.source = static_cast<std::size_t>(
      std::lower_bound(h.nodes.begin(), h.nodes.end(), u) - h.nodes.begin());
  h.target = static_cast<std::size_t>(
      std::lower_bound(h.nodes.begin(), h.nodes.end(), v) - h.nodes.begin());
  return h;
}

ReachAnswer PartiallyDynamic::query_reachable(std::size_t u, std::size_t v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return {true, 1, 1};
  std::uint64_t work = 0;
  std::set<Edge> err_edges;
  const AuxGraph h = build_aux(u, v, err_edges, work);
  const std::size_t k = h.nodes.size();
  const BottleneckMatrix& full = ladder_.back().bottleneck;
  const Weight limit = threshold();

  std::vector<char> adj(k * k, 0);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const std::size_t x = h.nodes[a], y = h.nodes[b];
      adj[a * k + b] = full(x, y) <= limit || err_edges.count({x, y}) > 0;
    }
  }
  work += k * k;

  std::vector<char> seen(k, 0);
  std::vector<std::size_t> stack{h.source};
  seen[h.source] = 1;
  while (!stack.empty()) {
    const std::size_t a = stack.back();
    stack.pop_back();
    for (std::size_t b = 0; b < k; ++b) {
      if (adj[a * k + b] && !seen[b]) {
        seen[b] = 1;
        stack.push_back(b);
      }
    }
  }
  work += k * k;
  return {seen[h.target] != 0, k, work};
}

DistanceAnswer PartiallyDynamic::query_distance(std::size_t u, std::size_t v) const {
  if (std::isinf(eps_))
    throw ContractViolation("PartiallyDynamic::query_distance: built for reachability only");
  check_vertex(u);
  check_vertex(v);
  if (u == v) return {0, 1, 1};
  std::uint64_t work = 0;
  std::set<Edge> err_edges;
  const AuxGraph h = build_aux(u, v, err_edges, work);
  const std::size_t k = h.nodes.size();
  const Weight limit = threshold();
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::vector<std::size_t> weight(k * k, kNone);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const std::size_t x = h.nodes[a], y = h.nodes[b];
      std::size_t best = err_edges.count({x, y}) > 0 ? 1 : kNone;
      // rungs are monotone in d, so the first satisfying rung is found by bisection
      std::size_t lo = 0, hi = ladder_.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        ++work;
        if (ladder_[mid].bottleneck(x, y) <= limit) {
          hi = mid;
        } else {
          lo = mid + 1;
        }
      }
      if (lo < ladder_.size()) best = std::min(best, ladder_[lo].hops);
      weight[a * k + b] = best;
    }
  }
  work += k * k;

  std::vector<std::size_t> dist(k, kNone);
  std::vector<char> done(k, 0);
  dist[h.source] = 0;
  for (std::size_t round = 0; round < k; ++round) {
    std::size_t a = kNone;
    for (std::size_t i = 0; i < k; ++i)
      if (!done[i] && dist[i] != kNone && (a == kNone || dist[i] < dist[a])) a = i;
    if (a == kNone) break;
    done[a] = 1;
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t w = weight[a * k + b];
      if (w != kNone && !done[b] && (dist[b] == kNone || dist[a] + w < dist[b]))
        dist[b] = dist[a] + w;
    }
  }
  work += k * k;
  DistanceAnswer ans{std::nullopt, k, work};
  if (dist[h.target] != kNone) ans.distance = dist[h.target];
  return ans;
}

}  // namespace dynoracle
