#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <set>

#include "doctest.h"
#include "dynoracle/partial_dynamic.hpp"

using namespace dynoracle;

namespace {

constexpr double kReachOnly = std::numeric_limits<double>::infinity();

// Hop distance over the explicit edge set, or nullopt.
std::optional<std::size_t> bfs(std::size_t n, const std::set<Edge>& edges, std::size_t s, std::size_t t) {
  std::vector<std::size_t> dist(n, n + 1);
  std::deque<std::size_t> queue{s};
  dist[s] = 0;
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (const auto& e : edges)
      if (e.from == x && dist[e.to] > n) {
        dist[e.to] = dist[x] + 1;
        queue.push_back(e.to);
      }
  }
  if (dist[t] > n) return std::nullopt;
  return dist[t];
}

std::vector<Edge> random_edge_list(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  std::set<Edge> seen;
  std::vector<Edge> out;
  while (out.size() < m) {
    const Edge e{rng() % n, rng() % n};
    if (e.from != e.to && seen.insert(e).second) out.push_back(e);
  }
  return out;
}

const std::vector<Edge> kChain{{0, 1}, {1, 2}, {2, 3}};

}  // namespace

TEST_CASE("empty sequence") {
  PartiallyDynamic pd(PredictedEdgeSequence(4, {}), 1.0, DynamicMode::kIncremental);
  CHECK_FALSE(pd.query_reachable(0, 3).reachable);
  CHECK_FALSE(pd.query_distance(1, 2).distance.has_value());
  CHECK(pd.query_reachable(2, 2).reachable);
}

TEST_CASE("ladder on a chain") {
  PartiallyDynamic pd(PredictedEdgeSequence(4, kChain), 1.0, DynamicMode::kIncremental);
  const auto& ladder = pd.ladder();
  REQUIRE(ladder.size() == 3);
  CHECK(ladder[0].hops == 1);
  CHECK(ladder[0].bottleneck(0, 1) == 1);
  CHECK(ladder[1].bottleneck(0, 2) == 2);
  CHECK(ladder[2].hops == 4);
  CHECK(ladder[2].bottleneck(0, 3) == 3);
  CHECK(ladder[1].bottleneck(0, 3) == kPlusInf);
}

TEST_CASE("error stats") {
  const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 0}};

  PartiallyDynamic fresh(PredictedEdgeSequence(4, edges), 1.0, DynamicMode::kIncremental);
  CHECK(fresh.eta_bar() == 0);
  CHECK(fresh.boundary() == 0);
  CHECK(fresh.error_stats().out_of_order.empty());

  PartiallyDynamic first(PredictedEdgeSequence(4, edges), 1.0, DynamicMode::kIncremental);
  first.apply_update(edges[0]);
  CHECK(first.boundary() == 1);
  CHECK(first.eta_bar() == 0);

  PartiallyDynamic second(PredictedEdgeSequence(4, edges), 1.0, DynamicMode::kIncremental);
  second.apply_update(edges[1]);
  const auto stats = second.error_stats();
  CHECK(stats.eta_bar == 1);
  CHECK(stats.boundary == 0);
  CHECK(stats.out_of_order == std::vector<Edge>{edges[1]});

  PartiallyDynamic third(PredictedEdgeSequence(4, edges), 1.0, DynamicMode::kIncremental);
  third.apply_update(edges[2]);
  CHECK(third.boundary() == 0);
  CHECK(third.eta_bar() == 1);

  PartiallyDynamic mixed(PredictedEdgeSequence(4, edges), 1.0, DynamicMode::kIncremental);
  std::vector<std::size_t> seen;
  for (std::size_t idx : {1u, 2u, 0u}) {
    mixed.apply_update(edges[idx]);
    seen.push_back(mixed.eta_bar());
  }
  CHECK(seen == std::vector<std::size_t>{1, 2, 0});

  PartiallyDynamic in_order(PredictedEdgeSequence(4, edges), 1.0, DynamicMode::kDecremental);
  for (const auto& e : edges) {
    in_order.apply_update(e);
    CHECK(in_order.eta_bar() == 0);
  }
}

TEST_CASE("update errors") {
  PartiallyDynamic pd(PredictedEdgeSequence(4, kChain), 1.0, DynamicMode::kIncremental);
  CHECK_THROWS_AS(pd.apply_update({3, 1}), UnpredictedEdge);
  pd.apply_update(kChain[0]);
  CHECK_THROWS_AS(pd.apply_update(kChain[0]), ContractViolation);
  CHECK_THROWS_AS(PredictedEdgeSequence(3, {{0, 1}, {0, 1}}), ContractViolation);
  CHECK_THROWS_AS(PredictedEdgeSequence(3, {{0, 5}}), ContractViolation);
}

TEST_CASE("queries on a chain") {
  PartiallyDynamic pd(PredictedEdgeSequence(4, kChain), 1.0, DynamicMode::kIncremental);
  for (const auto& e : kChain) pd.apply_update(e);
  const auto reach = pd.query_reachable(0, 3);
  CHECK(reach.reachable);
  CHECK(reach.aux_nodes == 2);
  CHECK(pd.query_distance(0, 1).distance == 1u);
  const auto d = pd.query_distance(0, 3).distance;
  REQUIRE(d.has_value());
  CHECK(*d >= 3);
  CHECK(*d <= 4);
  CHECK(pd.query_distance(2, 2).distance == 0u);
  CHECK_FALSE(pd.query_reachable(3, 0).reachable);

  PartiallyDynamic reach_only(PredictedEdgeSequence(4, kChain), kReachOnly, DynamicMode::kIncremental);
  CHECK_THROWS_AS(reach_only.query_distance(0, 1), ContractViolation);
}

TEST_CASE("random instances against BFS") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 4 + rng() % 13;
    const std::size_t m = std::min<std::size_t>(n * (n - 1), 2 * n + rng() % (2 * n));
    const auto predicted = random_edge_list(n, m, rng);
    auto realized = predicted;
    // mostly local disorder with an occasional long jump
    for (std::size_t i = 0; i + 1 < m; ++i)
      if (rng() % 3 == 0) std::swap(realized[i], realized[i + 1]);
    if (rng() % 2 == 0) std::swap(realized[0], realized[m - 1]);

    const DynamicMode mode = trial % 2 == 0 ? DynamicMode::kIncremental : DynamicMode::kDecremental;
    const double eps = trial % 3 == 0 ? 0.5 : 1.0;
    PartiallyDynamic pd(PredictedEdgeSequence(n, predicted), eps, mode);
    std::set<Edge> present;
    if (mode == DynamicMode::kDecremental) present.insert(predicted.begin(), predicted.end());

    for (const auto& e : realized) {
      pd.apply_update(e);
      if (mode == DynamicMode::kIncremental) {
        present.insert(e);
      } else {
        present.erase(e);
      }
      const std::size_t u = rng() % n, v = rng() % n;
      const auto exact = bfs(n, present, u, v);
      CHECK(pd.query_reachable(u, v).reachable == exact.has_value());
      const auto approx = pd.query_distance(u, v);
      REQUIRE(approx.distance.has_value() == exact.has_value());
      if (exact) {
        CHECK(*approx.distance >= *exact);
        CHECK(static_cast<double>(*approx.distance) <= (1 + eps) * static_cast<double>(*exact));
      }
      CHECK(approx.aux_nodes <= 2 * pd.eta_bar() + 2);
    }
  }
}
