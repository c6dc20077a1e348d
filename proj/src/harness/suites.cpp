#include "dynoracle/harness/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dynoracle/harness/oracles.hpp"
#include "dynoracle/harness/oumv.hpp"
#include "dynoracle/harness/robust.hpp"
#include "dynoracle/inverse_hierarchy.hpp"

namespace dynoracle::harness {

namespace {

constexpr std::size_t kMaxNotes = 8;

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  std::uint64_t elapsed_ns() const {
    if (!enabled_) return 0;
    return static_cast<std::uint64_t>(std::chrono::duration_cast<std::chrono::nanoseconds>(
                                          std::chrono::steady_clock::now() - start_)
                                          .count());
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

void record(SuiteReport& rep, const RunOptions& options, std::string kind, std::size_t eta,
            std::uint64_t work, const Stopwatch& watch, bool verified) {
  ++rep.operations;
  if (!options.record_rows) return;
  rep.rows.push_back({rep.rows.size(), std::move(kind), eta, work, watch.elapsed_ns(), verified});
}

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.from) + "," + std::to_string(e.to) + ")";
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows) {
  out << "op_index,op_kind,eta,counted_work,wall_ns,verified\n";
  for (const auto& r : rows) {
    out << r.op_index << ',' << r.op_kind << ',' << r.eta << ',' << r.counted_work << ','
        << r.wall_ns << ',' << (r.verified ? "true" : "false") << '\n';
  }
}

bool SuiteReport::check(bool passed, const std::string& what) {
  ++checks;
  if (!passed) {
    ++failures;
    if (notes.size() < kMaxNotes) notes.push_back(what);
  }
  return passed;
}

void SuiteReport::merge(SuiteReport&& other) {
  operations += other.operations;
  checks += other.checks;
  failures += other.failures;
  for (auto& note : other.notes)
    if (notes.size() < kMaxNotes) notes.push_back(std::move(note));
  const std::size_t base = rows.size();
  for (auto& r : other.rows) {
    r.op_index += base;
    rows.push_back(std::move(r));
  }
}

// ---------------------------------------------------------------------------

SuiteReport run_partial(const PartialWorkload& w, const RunOptions& options) {
  SuiteReport rep;
  rep.name = "partial";
  const PredictedEdgeSequence seq(w.n, w.predicted);
  PartiallyDynamic pd(seq, w.eps, w.mode);
  const std::size_t eta_inf = realized_eta_inf(w);
  std::set<Edge> present;
  if (w.mode == DynamicMode::kDecremental) present.insert(w.predicted.begin(), w.predicted.end());

  for (std::size_t i = 0; i < w.script.size(); ++i) {
    const auto& op = w.script[i];
    const std::string at = "op " + std::to_string(i) + ": ";
    Stopwatch watch(options.wall_time);
    try {
      if (op.kind == PartialOp::Kind::kUpdate) {
        pd.apply_update(op.edge);
        if (w.mode == DynamicMode::kIncremental) {
          present.insert(op.edge);
        } else {
          present.erase(op.edge);
        }
        record(rep, options, "update", 0, 1, watch, true);
        continue;
      }
      const auto [u, v] = std::pair{op.edge.from, op.edge.to};
      const ReachAnswer reach = pd.query_reachable(u, v);
      const auto hops = bfs_hops(w.n, {present.begin(), present.end()}, u);
      const std::size_t eta_bar = pd.eta_bar();
      bool ok = rep.check(reach.reachable == hops[v].has_value(), at + "reachability " + edge_text(op.edge));
      ok &= rep.check(reach.aux_nodes <= 2 * eta_bar + 2, at + "auxiliary graph larger than 2*eta_bar+2");
      ok &= rep.check(eta_bar <= eta_inf, at + "eta_bar above eta_inf");
      std::uint64_t work = reach.work;
      if (!std::isinf(w.eps)) {
        const DistanceAnswer dist = pd.query_distance(u, v);
        work += dist.work;
        ok &= rep.check(dist.distance.has_value() == hops[v].has_value(),
                        at + "distance reachability " + edge_text(op.edge));
        if (dist.distance && hops[v]) {
          const double exact = static_cast<double>(*hops[v]);
          const auto got = static_cast<double>(*dist.distance);
          ok &= rep.check(got >= exact && got <= (1.0 + w.eps) * exact + 1e-9,
                          at + "distance " + std::to_string(*dist.distance) + " vs exact " +
                              std::to_string(*hops[v]));
        }
        ok &= rep.check(dist.aux_nodes <= 2 * eta_bar + 2, at + "distance auxiliary graph too large");
      }
      record(rep, options, "query", eta_bar, work, watch, ok);
    } catch (const std::exception& e) {
      rep.check(false, at + e.what());
      record(rep, options, op.kind == PartialOp::Kind::kUpdate ? "update" : "query", 0, 0, watch, false);
    }
  }
  return rep;
}

SuiteReport run_omv(const OmvSession& s, const RunOptions& options) {
  SuiteReport rep;
  rep.name = "omv";
  OmvState state(s.matrix, s.predicted);
  const std::size_t n = s.matrix.size();
  std::uint64_t expected_total = 0;
  for (std::size_t i = 0; i < s.realized.size(); ++i) {
    Stopwatch watch(options.wall_time);
    const std::string at = "query " + std::to_string(i) + ": ";
    const std::uint64_t before = state.work();
    const BoolVector answer = state.query(s.realized[i]);
    const std::uint64_t work = state.work() - before;
    const std::size_t diff = s.realized[i].hamming(s.predicted[i]);
    expected_total += n * diff;
    bool ok = rep.check(answer == bool_matvec(s.matrix, s.realized[i]), at + "product differs");
    ok &= rep.check(work == n * diff, at + "counted work " + std::to_string(work) + " != n * " +
                                          std::to_string(diff));
    record(rep, options, "query", diff, work, watch, ok);
  }
  rep.check(state.work() == expected_total, "total work differs from n * sum of l1 errors");
  return rep;
}

SuiteReport run_inverse(const InverseWorkload& w, std::size_t identity_every, const RunOptions& options) {
  SuiteReport rep;
  rep.name = "inverse";
  const PrimeField f;
  PredictedInverseOptions pio;
  pio.seed = 0x1234567 ^ w.queue.size();
  PredictedInverse pi(w.initial, w.queue, pio);
  FieldMatrix dense = w.initial;
  const std::size_t n = dense.rows();
  std::mt19937_64 rng(w.queue.size() * 7919 + n);
  std::uniform_int_distribution<Residue> pick(0, f.modulus() - 1);

  for (std::size_t s = 0; s < w.steps.size(); ++s) {
    const auto& step = w.steps[s];
    const std::string at = "step " + std::to_string(s) + ": ";
    Stopwatch watch(options.wall_time);
    try {
      const RankOneUpdate upd = step.realized.value_or(pi.queued(step.eta));
      const auto before_inverse = mat_inverse(dense);
      const Outcome out = pi.perform_update(step.eta, step.realized);
      for (std::size_t r = 0; r < n; ++r) {
        if (upd.u[r] == 0) continue;
        for (std::size_t c = 0; c < n; ++c) dense(r, c) = f.add(dense(r, c), f.mul(upd.u[r], upd.v[c]));
      }
      bool ok = rep.check(out.row.has_value() == before_inverse.has_value(), at + "row availability");
      if (out.row && before_inverse) {
        ok &= rep.check(*out.row == row_times(upd.v, *before_inverse), at + "returned row");
      }
      ok &= rep.check(out.det == determinant(dense), at + "determinant");
      ok &= rep.check(out.rank == rank(dense), at + "rank " + std::to_string(out.rank));
      ok &= rep.check(pi.matrix() == dense, at + "maintained matrix");
      if (s % 4 == 3) {
        std::vector<Residue> probe(n);
        for (auto& x : probe) x = pick(rng);
        const auto got = pi.query_row(probe);
        const auto inv = mat_inverse(dense);
        ok &= rep.check(got.has_value() == inv.has_value(), at + "query availability");
        if (got && inv) ok &= rep.check(*got == row_times(probe, *inv), at + "query row");
      }
      if (identity_every > 0 && (s + 1) % identity_every == 0) {
        const auto direct = mat_inverse(pi.embedded_matrix());
        ok &= rep.check(direct.has_value() && *direct == pi.represented_inverse(),
                        at + "represented inverse");
      }
      record(rep, options, step.realized ? "perform_unpredicted" : "perform", step.eta, out.work, watch, ok);
    } catch (const std::exception& e) {
      rep.check(false, at + e.what());
      record(rep, options, "perform", step.eta, 0, watch, false);
    }
  }
  return rep;
}

SuiteReport run_graph(GraphProblem problem, const GraphScript& script, const GraphOptions& graph_options,
                      const RunOptions& options) {
  SuiteReport rep;
  rep.name = std::string("graphs/") + problem_name(problem);
  const bool undirected = is_undirected(problem);
  Digraph g(script.n);
  for (const auto& e : script.edges) {
    if (undirected) {
      g.set_edge(e.from, e.to, true);
    } else {
      g.set_arc(e.from, e.to, true);
    }
  }
  DynamicGraphOracle oracle(problem, g, script.queue, graph_options);
  Digraph mirror = g;

  auto compare = [&](const std::string& at) {
    const Digraph& cur = oracle.graph();
    bool ok = rep.check(cur == mirror, at + "graph differs from replay");
    switch (problem) {
      case GraphProblem::kTriangles:
        ok &= rep.check(oracle.undirected_triangles() == triangle_cubic(mirror), at + "triangle count");
        break;
      case GraphProblem::kAcyclic:
        ok &= rep.check(oracle.acyclic() == !dfs_cycle(mirror), at + "acyclicity");
        break;
      case GraphProblem::kReachable: {
        const auto seen = bfs_reach(mirror, graph_options.source);
        std::vector<std::size_t> expect;
        for (std::size_t v = 0; v < seen.size(); ++v)
          if (seen[v]) expect.push_back(v);
        ok &= rep.check(oracle.reachable_set() == expect, at + "reachable set");
        break;
      }
      case GraphProblem::kStrong:
        ok &= rep.check(oracle.strongly_connected() == strongly_connected(mirror), at + "strong connectivity");
        break;
      case GraphProblem::kMatching:
        ok &= rep.check(oracle.matching_size() == matching_exhaustive(mirror), at + "matching size");
        break;
      case GraphProblem::kDisjointPaths:
        ok &= rep.check(oracle.disjoint_paths() ==
                            maxflow_vertex_disjoint(mirror, graph_options.source, graph_options.target),
                        at + "disjoint paths");
        break;
    }
    return ok;
  };
  compare("initial: ");

  for (std::size_t i = 0; i < script.lines.size(); ++i) {
    const auto& line = script.lines[i];
    const std::string at = "line " + std::to_string(i) + ": ";
    Stopwatch watch(options.wall_time);
    try {
      if (line.kind == GraphScript::Line::Kind::kAppend) {
        oracle.append_update(*line.update);
        record(rep, options, "append", 0, 0, watch, true);
        continue;
      }
      std::optional<VertexUpdate> realized = line.update;
      if (realized) realized->vertex = oracle.pending_at(line.eta).vertex;
      const VertexUpdate applied = realized.value_or(oracle.pending_at(line.eta));
      const StepReport step = oracle.perform_update(line.eta, realized);
      mirror = apply_vertex_update(mirror, applied, undirected);
      const bool ok = compare(at);
      record(rep, options, "vertex_update", line.eta, step.work, watch, ok);
    } catch (const std::exception& e) {
      rep.check(false, at + e.what());
      record(rep, options, "vertex_update", line.eta, 0, watch, false);
    }
  }
  return rep;
}

SuiteReport run_apsp(const std::vector<ApspOp>& ops, const RunOptions& options) {
  SuiteReport rep;
  rep.name = "apsp-pred";
  PredictedDeletionApsp fd;
  struct Declared {
    std::vector<WeightedNeighbour> in, out;
  };
  std::map<ElementId, Declared> live;

  // Floyd-Warshall over the live vertices and the arcs they declared.
  auto expected = [&] {
    std::vector<ElementId> ids;
    std::map<ElementId, std::size_t> index;
    for (const auto& [id, _] : live) {
      index[id] = ids.size();
      ids.push_back(id);
    }
    std::vector<WeightedArc> arcs;
    for (const auto& [id, decl] : live) {
      for (const auto& e : decl.in)
        if (index.count(e.vertex)) arcs.push_back({index[e.vertex], index[id], e.weight});
      for (const auto& e : decl.out)
        if (index.count(e.vertex)) arcs.push_back({index[id], index[e.vertex], e.weight});
    }
    return std::pair{ids, fw_apsp(ids.size(), arcs)};
  };
  auto full_sweep = [&](const std::string& at) {
    const auto [ids, d] = expected();
    bool ok = true;
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const std::int64_t got = fd.distance(ids[i], ids[j]);
        const std::int64_t want = d[i][j] == kNoPath ? IncrementalApsp::kUnreachable : d[i][j];
        if (got != want) ok = false;
      }
    rep.check(ok, at + "distance matrix differs from Floyd-Warshall");
    if (auto bad = fd.scheduler().check_invariants()) {
      rep.check(false, at + *bad);
      ok = false;
    } else {
      rep.check(true, "");
    }
    return ok;
  };

  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    const std::string at = "op " + std::to_string(i) + ": ";
    Stopwatch watch(options.wall_time);
    try {
      switch (op.kind) {
        case ApspOp::Kind::kInsert: {
          const std::uint64_t before = fd.work();
          fd.insert(op.vertex, op.key, op.in, op.out);
          live[op.vertex] = {op.in, op.out};
          const bool ok = full_sweep(at);
          record(rep, options, "insert", 0, fd.work() - before, watch, ok);
          break;
        }
        case ApspOp::Kind::kDelete: {
          const std::uint64_t before = fd.work();
          const DeletionReport r = fd.erase(op.vertex);
          live.erase(op.vertex);
          bool ok = rep.check(r.rewinds <= r.measured_eta + 1, at + "rewinds above measured eta + 1");
          ok &= rep.check(r.reinserts == r.measured_eta, at + "re-inserts differ from measured eta");
          ok &= full_sweep(at);
          record(rep, options, "delete", r.measured_eta, fd.work() - before, watch, ok);
          break;
        }
        case ApspOp::Kind::kQuery: {
          const auto [ids, d] = expected();
          const auto ia = std::find(ids.begin(), ids.end(), op.vertex) - ids.begin();
          const auto ib = std::find(ids.begin(), ids.end(), op.other) - ids.begin();
          const std::int64_t got = fd.distance(op.vertex, op.other);
          const std::int64_t want = d[ia][ib] == kNoPath ? IncrementalApsp::kUnreachable : d[ia][ib];
          const bool ok = rep.check(got == want, at + "query distance");
          record(rep, options, "query", 0, 1, watch, ok);
          break;
        }
      }
    } catch (const std::exception& e) {
      rep.check(false, at + e.what());
      record(rep, options, "error", 0, 0, watch, false);
    }
  }
  return rep;
}

PartialWorkload adversarial_partial_workload(std::size_t n, std::size_t m, DynamicMode mode,
                                             std::uint64_t seed) {
  PartialConfig config;
  config.n = n;
  config.m = m;
  config.mode = mode;
  config.eps = std::numeric_limits<double>::infinity();
  config.seed = seed;
  PartialWorkload w = random_partial_workload(config);
  std::reverse(w.predicted.begin(), w.predicted.end());
  return w;
}

SuiteReport run_robust(const PartialWorkload& w, const RunOptions& options) {
  SuiteReport rep;
  rep.name = "robust";
  const PredictedEdgeSequence seq(w.n, w.predicted);
  RobustReachability robust(seq, w.mode);
  std::set<Edge> present;
  if (w.mode == DynamicMode::kDecremental) present.insert(w.predicted.begin(), w.predicted.end());

  for (std::size_t i = 0; i < w.script.size(); ++i) {
    const auto& op = w.script[i];
    Stopwatch watch(options.wall_time);
    const std::uint64_t before = robust.schedule().combined();
    if (op.kind == PartialOp::Kind::kUpdate) {
      robust.update(op.edge);
      if (w.mode == DynamicMode::kIncremental) {
        present.insert(op.edge);
      } else {
        present.erase(op.edge);
      }
      record(rep, options, "update", 0, robust.schedule().combined() - before, watch, true);
      continue;
    }
    const RobustAnswer ans = robust.query(op.edge.from, op.edge.to);
    const auto hops = bfs_hops(w.n, {present.begin(), present.end()}, op.edge.from);
    const bool ok = rep.check(ans.reachable == hops[op.edge.to].has_value() && ans.sides_agree,
                              "op " + std::to_string(i) + ": combined answer");
    record(rep, options, ans.answered_by == Side::kPrediction ? "query_pred" : "query_base", 0,
           robust.schedule().combined() - before, watch, ok);
  }
  const auto& sched = robust.schedule();
  const std::uint64_t best = std::min(sched.prediction_total(), sched.baseline_total());
  rep.check(sched.combined() <= 2 * best + sched.switch_cost() * sched.requests(),
            "combined work " + std::to_string(sched.combined()) + " above 2 * " + std::to_string(best) +
                " + overhead");
  return rep;
}

SuiteReport run_identities(std::size_t trials, std::size_t max_n, std::uint64_t seed) {
  SuiteReport rep;
  rep.name = "identities";
  const PrimeField f;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> size(1, max_n);
  std::uniform_int_distribution<Residue> pick(0, f.modulus() - 1);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::string at = "trial " + std::to_string(t) + ": ";
    const std::size_t n = size(rng);
    const std::size_t k = 1 + rng() % n;
    const FieldMatrix m = random_matrix(f, n, n, rng());
    const FieldMatrix u = random_matrix(f, n, k, rng());
    const FieldMatrix v = random_matrix(f, n, k, rng());
    const auto m_inv = mat_inverse(m);
    if (!m_inv) continue;  // probability about n/p

    const auto factors = woodbury_factors(*m_inv, u, v);
    const FieldMatrix updated = mat_add(m, mat_mul(u, v.transposed()));
    if (factors) {
      const FieldMatrix lr = mat_mul(factors->left, factors->right);
      const FieldMatrix correction = mat_sub(FieldMatrix::identity(f, n), lr);
      const FieldMatrix product = mat_mul(updated, mat_mul(*m_inv, correction));
      rep.check(product == FieldMatrix::identity(f, n), at + "Woodbury identity");
    } else {
      rep.check(!mat_inverse(updated).has_value(), at + "factors missing for invertible update");
    }

    // Embedding block against -V'^T (M + U D V^T)^{-1}.
    std::vector<Residue> d(k);
    for (auto& x : d) x = rng() % 3 == 0 ? 0 : pick(rng);
    const FieldMatrix v_query = random_matrix(f, n, k + 1, rng());
    FieldMatrix ud = u;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < k; ++c) ud(r, c) = f.mul(u(r, c), d[c]);
    const auto target = mat_inverse(mat_add(m, mat_mul(ud, v.transposed())));
    const FieldMatrix b = build_formula_embedding(m, u, v, v_query, d);
    const auto b_inv = mat_inverse(b);
    rep.check(b_inv.has_value() == target.has_value(), at + "embedding invertibility");
    if (b_inv && target) {
      FieldMatrix expect = mat_mul(v_query.transposed(), *target);
      for (auto& x : expect.data()) x = f.neg(x);
      const EmbeddingLayout layout{n, k};
      rep.check(formula_block(*b_inv, layout) == expect, at + "embedding block");
    }
    ++rep.operations;
  }
  return rep;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"omv",   "partial",   "oumv",  "inverse",
                                              "graphs", "identities", "apsp-pred", "robust"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  SuiteReport total;
  total.name = name;
  std::mt19937_64 seeds(config.seed);
  const RunOptions& run = config.run;

  if (name == "omv") {
    const std::size_t n = config.n.value_or(64);
    const std::size_t trials = config.trials.value_or(10);
    const ErrorModel models[] = {ErrorModel::exact(), ErrorModel::linf_window(4), ErrorModel::swap_count(n),
                                 ErrorModel::unpredicted_rate(0.2)};
    for (std::size_t t = 0; t < trials; ++t) {
      total.merge(run_omv(random_omv_session(n, n, models[t % 4], seeds()), run));
    }
  } else if (name == "partial") {
    const std::size_t n = config.n.value_or(12);
    const std::size_t trials = config.trials.value_or(20);
    const ErrorModel models[] = {ErrorModel::exact(), ErrorModel::linf_window(2), ErrorModel::linf_window(8)};
    for (std::size_t t = 0; t < trials; ++t) {
      PartialConfig pc;
      pc.n = n;
      pc.m = 3 * n;
      pc.mode = t % 2 == 0 ? DynamicMode::kIncremental : DynamicMode::kDecremental;
      pc.eps = (t / 2) % 2 == 0 ? 0.5 : 1.0;
      pc.errors = models[(t / 4) % 3];
      pc.seed = seeds();
      total.merge(run_partial(random_partial_workload(pc), run));
    }
  } else if (name == "oumv") {
    const std::size_t n = config.n.value_or(16);
    const std::size_t trials = config.trials.value_or(4);
    for (std::size_t t = 0; t < trials; ++t) {
      std::mt19937_64 rng(seeds());
      std::bernoulli_distribution coin(0.3);
      BoolMatrix m(n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.set(i, j, coin(rng));
      std::vector<OumvQuery> queries(n, {BoolVector(n), BoolVector(n)});
      for (auto& q : queries)
        for (std::size_t j = 0; j < n; ++j) {
          q.u.set(j, coin(rng));
          q.v.set(j, coin(rng));
        }
      const DynamicMode mode = t % 2 == 0 ? DynamicMode::kIncremental : DynamicMode::kDecremental;
      const PartialWorkload w = oumv_workload(m, queries, mode);
      SuiteReport rep = run_partial(w, run);
      rep.check(realized_eta_inf(w) <= 2 * n, "eta_inf above 2n");
      // The workload's queries are (a_i, d_i); compare with the quadratic forms too.
      PartiallyDynamic pd(PredictedEdgeSequence(w.n, w.predicted), w.eps, w.mode);
      std::size_t qi = 0;
      for (const auto& op : w.script) {
        if (op.kind == PartialOp::Kind::kUpdate) {
          pd.apply_update(op.edge);
        } else {
          rep.check(pd.query_reachable(op.edge.from, op.edge.to).reachable ==
                        bool_quadratic(queries[qi].u, m, queries[qi].v),
                    "OuMv answer " + std::to_string(qi));
          ++qi;
        }
      }
      total.merge(std::move(rep));
    }
  } else if (name == "inverse") {
    const std::size_t n = config.n.value_or(16);
    const std::size_t trials = config.trials.value_or(4);
    for (std::size_t t = 0; t < trials; ++t) {
      InverseConfig ic;
      ic.n = n;
      ic.steps = 100;
      ic.etas = {1, 4, 16, std::max<std::size_t>(1, n / 2)};
      ic.unpredicted = 0.05;
      ic.seed = seeds();
      total.merge(run_inverse(random_inverse_workload(ic), 16, run));
    }
  } else if (name == "graphs") {
    const std::size_t trials = config.trials.value_or(5);
    std::vector<GraphProblem> problems;
    if (config.problem) {
      problems.push_back(*config.problem);
    } else {
      problems = {GraphProblem::kTriangles, GraphProblem::kAcyclic,  GraphProblem::kReachable,
                  GraphProblem::kStrong,    GraphProblem::kMatching, GraphProblem::kDisjointPaths};
    }
    for (GraphProblem p : problems) {
      const std::size_t cap = p == GraphProblem::kMatching ? 12 : 16;
      const std::size_t n = std::min(config.n.value_or(10), cap);
      for (std::size_t t = 0; t < trials; ++t) {
        const GraphWorkload w = random_graph_workload(p, n, 2 * n, seeds());
        total.merge(run_graph(p, to_script(w), w.options, run));
      }
    }
  } else if (name == "identities") {
    total.merge(run_identities(config.trials.value_or(100), config.n.value_or(8), seeds()));
  } else if (name == "apsp-pred") {
    const std::size_t trials = config.trials.value_or(10);
    for (std::size_t t = 0; t < trials; ++t) {
      ApspConfig ac;
      ac.max_live = config.n.value_or(16);
      ac.operations = 8 * ac.max_live;
      ac.seed = seeds();
      total.merge(run_apsp(random_apsp_script(ac), run));
    }
  } else if (name == "robust") {
    const std::size_t n = config.n.value_or(24);
    const std::size_t trials = config.trials.value_or(4);
    for (std::size_t t = 0; t < trials; ++t) {
      const DynamicMode mode = t % 2 == 0 ? DynamicMode::kIncremental : DynamicMode::kDecremental;
      total.merge(run_robust(adversarial_partial_workload(n, 4 * n, mode, seeds()), run));
    }
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  total.name = name;
  return total;
}

// ---------------------------------------------------------------------------

double mean_query_work(const PartialConfig& config) {
  const PartialWorkload w = random_partial_workload(config);
  PartiallyDynamic pd(PredictedEdgeSequence(w.n, w.predicted), std::numeric_limits<double>::infinity(),
                      w.mode);
  std::uint64_t total = 0;
  std::size_t queries = 0;
  for (const auto& op : w.script) {
    if (op.kind == PartialOp::Kind::kUpdate) {
      pd.apply_update(op.edge);
    } else {
      total += pd.query_reachable(op.edge.from, op.edge.to).work;
      ++queries;
    }
  }
  return queries == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(queries);
}

double mean_perform_work(std::size_t n, std::size_t eta, std::size_t performs, std::uint64_t seed) {
  const PrimeField f;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Residue> pick(0, f.modulus() - 1);
  std::vector<RankOneUpdate> queue(performs + std::max(eta, n));
  for (auto& upd : queue) {
    upd.u.resize(n);
    upd.v.resize(n);
    for (auto& x : upd.u) x = pick(rng);
    for (auto& x : upd.v) x = pick(rng);
  }
  PredictedInverseOptions options;
  options.track_rank = false;
  options.seed = rng();
  PredictedInverse pi(random_matrix(f, n, n, rng()), std::move(queue), options);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < performs; ++i) total += pi.perform_update(eta).work;
  return static_cast<double>(total) / static_cast<double>(performs);
}

Fit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto k = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  Fit fit;
  fit.slope = sxx == 0.0 ? 0.0 : sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0) continue;
    lx.push_back(std::log(xs[i]));
    ly.push_back(std::log(ys[i]));
  }
  if (lx.size() < 2) return 0.0;
  return least_squares(lx, ly).slope;
}

SweepResult run_sweep(const std::string& suite, const std::string& parameter,
                      const std::vector<double>& values, const SuiteConfig& config) {
  SweepResult out;
  out.parameter = parameter;
  auto expect_parameter = [&](const char* name) {
    if (parameter != name)
      throw std::invalid_argument("bench " + suite + " sweeps '" + name + "', not '" + parameter + "'");
  };
  const std::size_t trials = config.trials.value_or(3);

  for (double x : values) {
    std::mt19937_64 seeds(config.seed);
    double sum = 0.0;
    if (suite == "partial") {
      expect_parameter("w");
      const auto w = static_cast<std::size_t>(x);
      for (std::size_t t = 0; t < trials; ++t) {
        PartialConfig pc;
        pc.n = config.n.value_or(64);
        pc.m = 16 * pc.n;
        pc.errors = ErrorModel::linf_window(w);
        pc.placement = QueryPlacement::kPeakDisorder;
        pc.window = w;
        pc.seed = seeds();
        sum += mean_query_work(pc);
        if (config.run.record_rows) {
          pc.eps = std::numeric_limits<double>::infinity();
          SuiteReport rep = run_partial(random_partial_workload(pc), config.run);
          for (auto& r : rep.rows) {
            r.op_index = out.rows.size();
            out.rows.push_back(std::move(r));
          }
        }
      }
    } else if (suite == "inverse") {
      expect_parameter("eta");
      const std::size_t n = config.n.value_or(64);
      const auto eta = static_cast<std::size_t>(x);
      for (std::size_t t = 0; t < trials; ++t) {
        const double mean = mean_perform_work(n, eta, 10 * n, seeds());
        sum += mean;
        out.rows.push_back({out.rows.size(), "perform_mean", eta, static_cast<std::uint64_t>(mean), 0, true});
      }
    } else if (suite == "omv") {
      expect_parameter("rate");
      const std::size_t n = config.n.value_or(64);
      for (std::size_t t = 0; t < trials; ++t) {
        SuiteReport rep = run_omv(random_omv_session(n, n, ErrorModel::unpredicted_rate(x), seeds()),
                                  {true, config.run.wall_time});
        std::uint64_t work = 0;
        for (auto& r : rep.rows) {
          work += r.counted_work;
          r.op_index = out.rows.size();
          out.rows.push_back(std::move(r));
        }
        sum += static_cast<double>(work) / static_cast<double>(n);
      }
    } else if (suite == "apsp-pred") {
      expect_parameter("early");
      for (std::size_t t = 0; t < trials; ++t) {
        ApspConfig ac;
        ac.max_live = config.n.value_or(24);
        ac.operations = 8 * ac.max_live;
        ac.early_deletion = x;
        ac.seed = seeds();
        SuiteReport rep = run_apsp(random_apsp_script(ac), {true, config.run.wall_time});
        std::uint64_t work = 0;
        for (auto& r : rep.rows) {
          work += r.counted_work;
          r.op_index = out.rows.size();
          out.rows.push_back(std::move(r));
        }
        sum += static_cast<double>(work) / static_cast<double>(std::max<std::size_t>(1, rep.operations));
      }
    } else {
      throw std::invalid_argument("no sweep for suite '" + suite + "'");
    }
    out.points.push_back({x, sum / static_cast<double>(trials)});
  }

  // A partial sweep that includes w = 0 fits the work above that floor.
  double floor = 0.0;
  if (suite == "partial") {
    for (const auto& p : out.points)
      if (p.x == 0.0) floor = p.mean_work;
  }
  std::vector<double> xs, ys;
  for (const auto& p : out.points) {
    xs.push_back(p.x);
    ys.push_back(p.mean_work - floor);
  }
  out.exponent = loglog_slope(xs, ys);
  return out;
}

}  // namespace dynoracle::harness
