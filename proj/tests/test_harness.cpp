#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "dynoracle/harness/error_model.hpp"
#include "dynoracle/harness/oracles.hpp"
#include "dynoracle/harness/oumv.hpp"
#include "dynoracle/harness/robust.hpp"
#include "dynoracle/harness/scripts.hpp"
#include "dynoracle/harness/suites.hpp"

using namespace dynoracle;
using namespace dynoracle::harness;

namespace {

bool is_permutation_of_range(std::vector<std::size_t> order) {
  std::sort(order.begin(), order.end());
  for (std::size_t i = 0; i < order.size(); ++i)
    if (order[i] != i) return false;
  return true;
}

std::size_t scan_max_displacement(const std::vector<std::size_t>& order) {
  std::size_t worst = 0;
  for (std::size_t j = 0; j < order.size(); ++j)
    worst = std::max(worst, order[j] > j ? order[j] - j : j - order[j]);
  return worst;
}

// Replays a partial workload through a plain edge set, answering queries by DFS.
std::vector<bool> replay_answers(const PartialWorkload& w) {
  std::set<Edge> present;
  if (w.mode == DynamicMode::kDecremental) present.insert(w.predicted.begin(), w.predicted.end());
  std::vector<bool> out;
  for (const auto& op : w.script) {
    if (op.kind == PartialOp::Kind::kUpdate) {
      if (w.mode == DynamicMode::kIncremental) {
        present.insert(op.edge);
      } else {
        present.erase(op.edge);
      }
      continue;
    }
    std::vector<char> seen(w.n, 0);
    std::vector<std::size_t> stack{op.edge.from};
    seen[op.edge.from] = 1;
    while (!stack.empty()) {
      const std::size_t x = stack.back();
      stack.pop_back();
      for (const auto& e : present)
        if (e.from == x && !seen[e.to]) {
          seen[e.to] = 1;
          stack.push_back(e.to);
        }
    }
    out.push_back(seen[op.edge.to] != 0);
  }
  return out;
}

}  // namespace

TEST_CASE("error models") {
  const auto exact = perturb(50, ErrorModel::exact());
  for (std::size_t j = 0; j < 50; ++j) CHECK(exact.order[j] == j);
  CHECK(exact.eta_inf == 0);

  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto w = perturb(100, ErrorModel::linf_window(4, seed));
    CHECK(is_permutation_of_range(w.order));
    CHECK(scan_max_displacement(w.order) <= 4);
    CHECK(w.eta_inf == scan_max_displacement(w.order));

    const auto s = perturb(100, ErrorModel::swap_count(7, seed));
    CHECK(is_permutation_of_range(s.order));
    CHECK(s.eta_inf <= 7);
    std::size_t parity = 0;  // inversion parity must match 7 transpositions
    for (std::size_t a = 0; a < 100; ++a)
      for (std::size_t b = a + 1; b < 100; ++b) parity += s.order[a] > s.order[b];
    CHECK(parity % 2 == 1);
    CHECK(parity <= 7);
  }

  const auto u = perturb(4000, ErrorModel::unpredicted_rate(0.25, 3));
  const auto marked = static_cast<double>(std::count(u.unpredicted.begin(), u.unpredicted.end(), true));
  CHECK(std::abs(marked / 4000 - 0.25) < 0.05);
  CHECK(u.eta_inf == 0);

  CHECK(max_displacement({2, 0, 1}) == 2);
  CHECK(total_displacement({2, 0, 1}) == 4);

  const auto parsed = parse_error_model("linf:8");
  REQUIRE(parsed.has_value());
  CHECK(parsed->kind == ErrorKind::kLinfWindow);
  CHECK(parsed->param == 8);
  CHECK(parse_error_model("unpredicted:0.1")->rate == doctest::Approx(0.1));
  CHECK_FALSE(parse_error_model("linf:").has_value());
  CHECK_FALSE(parse_error_model("bogus").has_value());
  CHECK(describe(ErrorModel::swap_count(3)) == "swap:3");
}

TEST_CASE("oracles") {
  const auto d = fw_apsp(3, {{0, 1, 1}, {1, 2, 1}, {2, 0, 1}});
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(d[i][j] == static_cast<std::int64_t>((j + 3 - i) % 3));
  CHECK(fw_apsp(2, {})[0][1] == kNoPath);
  CHECK(fw_apsp(2, {{0, 1, 5}, {0, 1, 2}})[0][1] == 2);

  Digraph k4(4);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = a + 1; b < 4; ++b) k4.set_edge(a, b, true);
  CHECK(triangle_cubic(k4) == 4);
  CHECK(matching_exhaustive(k4) == 2);
  CHECK(strongly_connected(k4));

  Digraph two_paths(4);
  two_paths.set_arc(0, 2, true);
  two_paths.set_arc(2, 1, true);
  two_paths.set_arc(0, 3, true);
  two_paths.set_arc(3, 1, true);
  CHECK(maxflow_vertex_disjoint(two_paths, 0, 1) == 2);
  CHECK_FALSE(dfs_cycle(two_paths));
  CHECK(directed_triangles_cubic(two_paths) == 0);
  const auto reach = bfs_reach(two_paths, 2);
  CHECK(reach == std::vector<bool>{false, true, true, false});
  CHECK(bfs_hops(4, {{0, 2}, {2, 1}}, 0)[1] == 2u);

  Digraph cyc(3);
  cyc.set_arc(0, 1, true);
  cyc.set_arc(1, 2, true);
  cyc.set_arc(2, 0, true);
  CHECK(dfs_cycle(cyc));
  CHECK(directed_triangles_cubic(cyc) == 1);

  BoolMatrix m(2);
  m.set(0, 1, true);
  BoolVector v(2), u(2);
  v.set(1, true);
  u.set(0, true);
  CHECK(bool_matvec(m, v).get(0));
  CHECK(bool_quadratic(u, m, v));
}

TEST_CASE("oumv reduction") {
  std::mt19937_64 rng(5);
  for (DynamicMode mode : {DynamicMode::kIncremental, DynamicMode::kDecremental}) {
    for (int trial = 0; trial < 6; ++trial) {
      const std::size_t n = 2 + rng() % 7;
      BoolMatrix m(n);
      const bool zero = trial == 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, !zero && rng() % 3 == 0);
      std::vector<OumvQuery> queries(n, {BoolVector(n), BoolVector(n)});
      for (auto& q : queries)
        for (std::size_t j = 0; j < n; ++j) {
          q.u.set(j, rng() & 1);
          q.v.set(j, rng() & 1);
        }
      const auto w = oumv_workload(m, queries, mode);
      CHECK(w.n == 4 * n);
      const auto answers = replay_answers(w);
      REQUIRE(answers.size() == n);
      for (std::size_t i = 0; i < n; ++i) {
        bool expect = false;
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) expect |= queries[i].u.get(a) && m.get(a, b) && queries[i].v.get(b);
        CHECK(answers[i] == expect);
        if (zero) CHECK_FALSE(answers[i]);
      }
      CHECK(realized_eta_inf(w) <= 2 * n);
      CHECK(run_partial(w).ok());
    }
  }
}

TEST_CASE("partial scripts") {
  PartialConfig config;
  config.n = 6;
  config.m = 12;
  config.errors = ErrorModel::linf_window(2);
  config.seed = 4;
  const auto w = random_partial_workload(config);
  std::stringstream ss;
  write_partial(ss, w);
  const auto back = parse_partial(ss);
  CHECK(back.n == w.n);
  CHECK(back.predicted == w.predicted);
  CHECK(back.script.size() == w.script.size());
  CHECK(back.eps == w.eps);

  std::istringstream bad("# header next\n3 1 incremental 1\n0 1\nU 0 7\n");
  try {
    parse_partial(bad);
    FAIL("expected a parse error");
  } catch (const ScriptError& e) {
    CHECK(e.line() == 4);
  }
  std::istringstream mode("3 0 sideways 1\n");
  CHECK_THROWS_AS(parse_partial(mode), ScriptError);
}

TEST_CASE("graph scripts") {
  const auto w = random_graph_workload(GraphProblem::kReachable, 6, 8, 3);
  std::stringstream ss;
  write_graph_script(ss, w);
  const auto parsed = parse_graph_script(ss);
  const auto direct = to_script(w);
  CHECK(parsed.n == direct.n);
  CHECK(parsed.edges == direct.edges);
  CHECK(parsed.queue == direct.queue);
  REQUIRE(parsed.lines.size() == direct.lines.size());
  for (std::size_t i = 0; i < parsed.lines.size(); ++i) {
    CHECK(parsed.lines[i].eta == direct.lines[i].eta);
    // a realized override takes its vertex from the queue entry it replaces
    REQUIRE(parsed.lines[i].update.has_value() == direct.lines[i].update.has_value());
    if (parsed.lines[i].update) {
      CHECK(parsed.lines[i].update->in == direct.lines[i].update->in);
      CHECK(parsed.lines[i].update->out == direct.lines[i].update->out);
    }
  }

  std::istringstream text("3 1\n0 1\nVU 2 | in: 0 | out: 1\nP 1\nVU 0 | in: | out: 2\nP 1\n");
  const auto g = parse_graph_script(text);
  CHECK(g.queue.size() == 1);
  REQUIRE(g.lines.size() == 3);
  CHECK(g.lines[1].kind == GraphScript::Line::Kind::kAppend);
  CHECK(run_graph(GraphProblem::kReachable, g, {}).ok());

  std::istringstream bad("3 1\n0 1\nVU 9 | in: 0\n");
  try {
    parse_graph_script(bad);
    FAIL("expected a parse error");
  } catch (const ScriptError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("apsp scripts") {
  std::istringstream text(
      "# two vertices and an edge\n"
      "I 0 5 | in: | out:\n"
      "I 1 3 | in: 0:4 | out:\n"
      "Q 0 1\n"
      "D 1\n");
  const auto ops = parse_apsp_script(text);
  REQUIRE(ops.size() == 4);
  CHECK(ops[1].in.size() == 1);
  CHECK(ops[1].in[0].weight == 4);
  CHECK(run_apsp(ops).ok());

  std::stringstream round;
  write_apsp_script(round, ops);
  CHECK(parse_apsp_script(round).size() == 4);

  std::istringstream bad("I 0 5 | in: | out:\nI 1 2 | in: 0:x | out:\n");
  try {
    parse_apsp_script(bad);
    FAIL("expected a parse error");
  } catch (const ScriptError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("interleaved schedule") {
  InterleavedSchedule s(1);
  CHECK(s.request(10, 100) == Side::kPrediction);
  CHECK(s.combined() == 21);
  CHECK(s.request(100, 5) == Side::kBaseline);
  CHECK(s.prediction_total() == 110);
  CHECK(s.baseline_total() == 105);

  std::mt19937_64 rng(8);
  InterleavedSchedule r(1);
  for (int i = 0; i < 500; ++i) r.request(rng() % 50, rng() % 50);
  const auto best = std::min(r.prediction_total(), r.baseline_total());
  CHECK(r.combined() <= 2 * best + r.switch_cost() * r.requests());
}

TEST_CASE("robust reachability") {
  for (DynamicMode mode : {DynamicMode::kIncremental, DynamicMode::kDecremental}) {
    const auto good = [&] {
      PartialConfig c;
      c.n = 10;
      c.m = 30;
      c.mode = mode;
      c.seed = 2;
      return random_partial_workload(c);
    }();
    CHECK(run_robust(good).ok());
    CHECK(run_robust(adversarial_partial_workload(10, 30, mode, 3)).ok());
  }
}

TEST_CASE("fits and csv") {
  const Fit f = least_squares({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.slope == doctest::Approx(2));
  CHECK(loglog_slope({1, 2, 4, 8}, {3, 12, 48, 192}) == doctest::Approx(2));

  std::ostringstream out;
  write_csv(out, {{0, "query", 2, 17, 0, true}});
  CHECK(out.str() == "op_index,op_kind,eta,counted_work,wall_ns,verified\n0,query,2,17,0,true\n");
}

TEST_CASE("suites pass on small seeds") {
  for (const auto& name : suite_names()) {
    CAPTURE(name);
    SuiteConfig config;
    config.seed = 3;
    config.trials = 2;
    config.n = 8;
    const auto rep = run_suite(name, config);
    CHECK(rep.ok());
    CHECK(rep.checks > 0);
  }
}
