#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "dynoracle/harness/workloads.hpp"
#include "dynoracle/predicted_deletions.hpp"

using namespace dynoracle;

namespace {

constexpr std::int64_t kInf = IncrementalApsp::kUnreachable;

// Keeps the inserted sequence so tests can see exactly what was undone.
class TraceBase : public UndoableIncremental {
 public:
  void insert(ElementId e) override {
    live.push_back(e);
    ++inserts;
  }
  void rewind() override {
    live.pop_back();
    ++rewinds;
  }
  std::uint64_t work() const override { return inserts + rewinds; }

  std::vector<ElementId> live;
  std::size_t inserts = 0;
  std::size_t rewinds = 0;
};

struct Declared {
  std::vector<WeightedNeighbour> in, out;
};

// Floyd-Warshall over the present vertices, edges from every declaration.
std::map<std::pair<ElementId, ElementId>, std::int64_t> floyd(const std::set<ElementId>& present,
                                                             const std::map<ElementId, Declared>& decl) {
  std::vector<ElementId> ids(present.begin(), present.end());
  const std::size_t k = ids.size();
  std::vector<std::vector<std::int64_t>> d(k, std::vector<std::int64_t>(k, kInf));
  auto relax = [&](ElementId from, ElementId to, std::int64_t w) {
    if (!present.count(from) || !present.count(to) || from == to) return;
    const auto a = std::lower_bound(ids.begin(), ids.end(), from) - ids.begin();
    const auto b = std::lower_bound(ids.begin(), ids.end(), to) - ids.begin();
    d[a][b] = std::min(d[a][b], w);
  };
  for (const auto& [v, dec] : decl) {
    for (const auto& e : dec.in) relax(e.vertex, v, e.weight);
    for (const auto& e : dec.out) relax(v, e.vertex, e.weight);
  }
  for (std::size_t i = 0; i < k; ++i) d[i][i] = 0;
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (d[i][m] != kInf && d[m][j] != kInf) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  std::map<std::pair<ElementId, ElementId>, std::int64_t> out;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out[{ids[i], ids[j]}] = d[i][j];
  return out;
}

template <class Apsp>
void check_against_floyd(const Apsp& apsp, const std::set<ElementId>& present,
                         const std::map<ElementId, Declared>& decl) {
  for (const auto& [pair, d] : floyd(present, decl)) CHECK(apsp.distance(pair.first, pair.second) == d);
}

}  // namespace

TEST_CASE("incremental apsp") {
  IncrementalApsp apsp;
  apsp.insert(1);
  CHECK(apsp.distance(1, 1) == 0);
  CHECK_THROWS_AS(apsp.distance(1, 2), std::out_of_range);

  apsp.declare(2, {{1, 1}}, {});
  apsp.insert(2);
  apsp.declare(3, {{2, 1}}, {});
  apsp.insert(3);
  CHECK(apsp.distance(1, 3) == 2);
  CHECK(apsp.distance(3, 1) == kInf);

  // a cheaper declaration from the other endpoint wins
  apsp.declare(4, {}, {{1, 0}, {3, 7}});
  apsp.insert(4);
  CHECK(apsp.edge_weight(4, 1) == 0);
  CHECK(apsp.distance(4, 3) == 2);
  CHECK_THROWS_AS(apsp.declare(5, {{1, -1}}, {}), std::invalid_argument);
}

TEST_CASE("rewind restores the previous state") {
  IncrementalApsp apsp;
  apsp.declare(1, {}, {{2, 3}});
  apsp.declare(2, {}, {{3, 4}});
  apsp.declare(3, {}, {{1, 5}});
  apsp.insert(1);
  apsp.insert(2);
  const auto d12 = apsp.distance(1, 2);
  apsp.insert(3);
  CHECK(apsp.distance(2, 1) == 9);
  apsp.rewind();
  CHECK(apsp.size() == 2);
  CHECK(apsp.distance(1, 2) == d12);
  CHECK(apsp.distance(2, 1) == kInf);
  apsp.rewind();
  apsp.rewind();
  CHECK(apsp.size() == 0);
  CHECK_THROWS_AS(apsp.rewind(), std::logic_error);
}

TEST_CASE("insert and rewind fuzz") {
  std::mt19937_64 rng(12);
  IncrementalApsp apsp;
  std::map<ElementId, Declared> decl;
  std::vector<ElementId> stack;
  ElementId next = 0;
  for (int step = 0; step < 400; ++step) {
    if (stack.size() < 24 && (stack.empty() || rng() % 3 != 0)) {
      Declared d;
      for (ElementId u = 0; u < next; ++u) {
        if (rng() % 4 == 0) d.in.push_back({u, static_cast<std::int64_t>(rng() % 10)});
        if (rng() % 4 == 0) d.out.push_back({u, static_cast<std::int64_t>(rng() % 10)});
      }
      apsp.declare(next, d.in, d.out);
      decl[next] = d;
      apsp.insert(next);
      stack.push_back(next++);
    } else {
      apsp.rewind();
      stack.pop_back();
    }
    check_against_floyd(apsp, std::set<ElementId>(stack.begin(), stack.end()), decl);
  }
}

TEST_CASE("rebuild level") {
  CHECK(rebuild_level(1) == 0);
  CHECK(rebuild_level(4) == 2);
  CHECK(rebuild_level(6) == 1);
  CHECK(rebuild_level(8) == 3);
}

TEST_CASE("bucket scheduler placement") {
  TraceBase base;
  BucketScheduler s(base);
  for (ElementId e = 0; e < 8; ++e) {
    s.insert(e, 100 - static_cast<std::int64_t>(e));
    CHECK_FALSE(s.check_invariants().has_value());
    CHECK(s.stack().back() == e);
  }
  CHECK(base.live == s.stack());

  s.insert(99, 1000);
  CHECK_FALSE(s.check_invariants().has_value());
  CHECK(s.stack().back() != 99);

  std::size_t total = 0;
  for (const auto& b : s.buckets()) total += b.size();
  CHECK(total == s.live());
}

TEST_CASE("deletions") {
  TraceBase base;
  BucketScheduler s(base);
  for (ElementId e = 0; e < 6; ++e) s.insert(e, static_cast<std::int64_t>(10 * (6 - e)));

  SUBCASE("predicted next element") {
    const ElementId top = s.stack().back();
    const auto r = s.erase(top);
    CHECK(r.measured_eta == 0);
    CHECK(r.predicted_eta == 0);
    CHECK(r.rewinds == 1);
    CHECK(r.reinserts == 0);
  }

  SUBCASE("third from the top") {
    const ElementId third = s.stack()[s.stack().size() - 3];
    const auto above = std::vector<ElementId>(s.stack().end() - 2, s.stack().end());
    const auto r = s.erase(third);
    CHECK(r.measured_eta == 2);
    CHECK(r.predicted_eta == 2);
    CHECK(r.rewinds == 3);
    CHECK(r.reinserts == 2);
    CHECK_FALSE(s.contains(third));
    for (ElementId e : above) CHECK(s.contains(e));
  }

  CHECK(base.live == s.stack());
  CHECK_FALSE(s.check_invariants().has_value());
  CHECK_THROWS_AS(s.erase(12345), std::out_of_range);
}

TEST_CASE("random scripts with early deletions") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    harness::ApspConfig config;
    config.max_live = 12;
    config.operations = 80;
    config.early_deletion = 0.3;
    config.seed = seed;
    PredictedDeletionApsp apsp;
    std::map<ElementId, Declared> decl;
    std::set<ElementId> present;
    for (const auto& op : harness::random_apsp_script(config)) {
      if (op.kind == harness::ApspOp::Kind::kInsert) {
        apsp.insert(op.vertex, op.key, op.in, op.out);
        decl[op.vertex] = {op.in, op.out};
        present.insert(op.vertex);
      } else if (op.kind == harness::ApspOp::Kind::kDelete) {
        const auto r = apsp.erase(op.vertex);
        CHECK(r.rewinds <= r.measured_eta + 1);
        CHECK(r.reinserts == r.measured_eta);
        decl.erase(op.vertex);
        present.erase(op.vertex);
      } else {
        CHECK(apsp.distance(op.vertex, op.vertex) == 0);
      }
      CHECK_FALSE(apsp.scheduler().check_invariants().has_value());
      check_against_floyd(apsp, present, decl);
    }
  }
}

TEST_CASE("one early deletion") {
  PredictedDeletionApsp apsp;
  std::map<ElementId, Declared> decl;
  std::set<ElementId> present;
  for (ElementId v = 0; v < 5; ++v) {
    Declared d;
    if (v > 0) d.in.push_back({v - 1, 2});
    if (v > 1) d.out.push_back({0, 1});
    apsp.insert(v, static_cast<std::int64_t>(v), d.in, d.out);
    decl[v] = d;
    present.insert(v);
  }
  check_against_floyd(apsp, present, decl);
  // key 3 sits below keys 0, 1 and 2 on the stack
  const ElementId victim = 3;
  const auto r = apsp.erase(victim);
  decl.erase(victim);
  present.erase(victim);
  CHECK(r.predicted_eta == 3);
  CHECK(r.rewinds <= r.measured_eta + 1);
  check_against_floyd(apsp, present, decl);
}
