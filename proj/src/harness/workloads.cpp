#include "dynoracle/harness/workloads.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace dynoracle::harness {

namespace {

std::vector<Edge> random_edges(std::size_t n, std::size_t m, std::mt19937_64& rng) {
  const std::size_t possible = n * (n - 1);
  m = std::min(m, possible);
  std::set<Edge> chosen;
  std::vector<Edge> out;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  while (out.size() < m) {
    const Edge e{pick(rng), pick(rng)};
    if (e.from == e.to || !chosen.insert(e).second) continue;
    out.push_back(e);
  }
  return out;
}

// Out-of-order count after each realized update, for placing queries.
std::vector<std::size_t> disorder_profile(std::size_t m, DynamicMode mode,
                                          const std::vector<std::size_t>& ranks) {
  std::vector<std::size_t> out;
  std::set<std::size_t> touched;
  std::size_t first_missing = 1;
  for (std::size_t r : ranks) {
    touched.insert(r);
    if (mode == DynamicMode::kIncremental) {
      while (touched.count(first_missing) > 0) ++first_missing;
      const std::size_t prefix = std::min(first_missing - 1, m);
      out.push_back(touched.size() - prefix);
    } else {
      const std::size_t boundary = *touched.rbegin() + 1;
      out.push_back(boundary - touched.size() - 1);
    }
  }
  return out;
}

RankOneUpdate random_update(const PrimeField& f, std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<Residue> pick(0, f.modulus() - 1);
  RankOneUpdate upd{std::vector<Residue>(n), std::vector<Residue>(n)};
  for (auto& x : upd.u) x = pick(rng);
  for (auto& x : upd.v) x = pick(rng);
  return upd;
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t skip, double density,
                                       std::mt19937_64& rng) {
  std::bernoulli_distribution coin(density);
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < n; ++x)
    if (x != skip && coin(rng)) out.push_back(x);
  return out;
}

}  // namespace

PartialWorkload random_partial_workload(const PartialConfig& config) {
  std::mt19937_64 rng(config.seed);
  PartialWorkload w;
  w.n = config.n;
  w.mode = config.mode;
  w.eps = config.eps;
  w.predicted = random_edges(config.n, config.m, rng);
  const std::size_t m = w.predicted.size();

  ErrorModel errors = config.errors;
  errors.seed = rng();
  const Perturbation p = perturb(m, errors);
  std::vector<std::size_t> ranks(m);
  for (std::size_t j = 0; j < m; ++j) ranks[j] = p.order[j] + 1;

  std::vector<bool> query_after(m, config.placement == QueryPlacement::kEveryUpdate);
  if (config.placement == QueryPlacement::kPeakDisorder) {
    const auto profile = disorder_profile(m, config.mode, ranks);
    const std::size_t width = config.window + 1;
    for (std::size_t start = 0; start < m; start += width) {
      const std::size_t stop = std::min(m, start + width);
      std::size_t best = start;
      for (std::size_t j = start; j < stop; ++j)
        if (profile[j] > profile[best]) best = j;
      query_after[best] = true;
    }
  }

  std::uniform_int_distribution<std::size_t> vertex(0, config.n - 1);
  for (std::size_t j = 0; j < m; ++j) {
    w.script.push_back({PartialOp::Kind::kUpdate, w.predicted[ranks[j] - 1]});
    if (query_after[j]) w.script.push_back({PartialOp::Kind::kQuery, {vertex(rng), vertex(rng)}});
  }
  return w;
}

std::size_t realized_eta_inf(const PartialWorkload& w) {
  const PredictedEdgeSequence seq(w.n, w.predicted);
  std::size_t pos = 0, worst = 0;
  for (const auto& op : w.script) {
    if (op.kind != PartialOp::Kind::kUpdate) continue;
    ++pos;
    const auto rank = seq.rank_of(op.edge);
    if (!rank) continue;
    worst = std::max(worst, *rank > pos ? *rank - pos : pos - *rank);
  }
  return worst;
}

OmvSession random_omv_session(std::size_t n, std::size_t queries, const ErrorModel& errors,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  auto random_vector = [&] {
    BoolVector v(n);
    for (std::size_t i = 0; i < n; ++i) v.set(i, coin(rng));
    return v;
  };
  OmvSession s;
  s.matrix = BoolMatrix(n);
  std::bernoulli_distribution sparse(0.1);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) s.matrix.set(r, c, sparse(rng));
  for (std::size_t i = 0; i < queries; ++i) s.predicted.push_back(random_vector());

  ErrorModel model = errors;
  model.seed = rng();
  const Perturbation p = perturb(queries, model);
  for (std::size_t j = 0; j < queries; ++j) {
    s.realized.push_back(p.unpredicted[j] ? random_vector() : s.predicted[p.order[j]]);
  }
  return s;
}

InverseWorkload random_inverse_workload(const InverseConfig& config) {
  const PrimeField f;
  std::mt19937_64 rng(config.seed);
  InverseWorkload w;
  w.initial = random_matrix(f, config.n, config.n, rng());
  const std::size_t max_eta = *std::max_element(config.etas.begin(), config.etas.end());
  const std::size_t queue_len = config.steps + std::max(max_eta, config.n);
  for (std::size_t i = 0; i < queue_len; ++i) w.queue.push_back(random_update(f, config.n, rng));

  // Replay the queue order so an unpredicted step can see the current matrix.
  FieldMatrix current = w.initial;
  std::vector<RankOneUpdate> pending = w.queue;
  std::uniform_int_distribution<std::size_t> pick_eta(0, config.etas.size() - 1);
  std::uniform_int_distribution<std::size_t> row(0, config.n - 1);
  std::bernoulli_distribution unpredicted(config.unpredicted);
  for (std::size_t s = 0; s < config.steps; ++s) {
    InverseStep step;
    step.eta = std::min(config.etas[pick_eta(rng)], pending.size());
    RankOneUpdate applied = pending[step.eta - 1];
    if (config.n >= 2 && unpredicted(rng)) {
      const std::size_t dst = row(rng);
      std::size_t src = row(rng);
      while (src == dst) src = row(rng);
      RankOneUpdate upd{std::vector<Residue>(config.n, 0), std::vector<Residue>(config.n, 0)};
      upd.u[dst] = 1;
      for (std::size_t c = 0; c < config.n; ++c) upd.v[c] = f.sub(current(src, c), current(dst, c));
      step.realized = upd;
      applied = upd;
    }
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(step.eta - 1));
    for (std::size_t r = 0; r < config.n; ++r) {
      if (applied.u[r] == 0) continue;
      for (std::size_t c = 0; c < config.n; ++c)
        current(r, c) = f.add(current(r, c), f.mul(applied.u[r], applied.v[c]));
    }
    w.steps.push_back(std::move(step));
  }
  return w;
}

GraphWorkload random_graph_workload(GraphProblem problem, std::size_t n, std::size_t steps,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  GraphWorkload w;
  w.problem = problem;
  w.options.seed = rng() | 1;
  w.options.source = 0;
  w.options.target = n > 1 ? 1 : 0;
  const bool undirected = is_undirected(problem);
  const double density = problem == GraphProblem::kStrong ? 0.3 : 0.2;

  // Acyclicity uses a hidden vertex order so that most updates keep a DAG.
  std::vector<std::size_t> level(n);
  std::iota(level.begin(), level.end(), std::size_t{0});
  std::shuffle(level.begin(), level.end(), rng);
  std::bernoulli_distribution back_arc(0.15);

  auto make_update = [&](std::size_t v) {
    VertexUpdate upd;
    upd.vertex = v;
    upd.in = random_subset(n, v, density, rng);
    upd.out = undirected ? std::vector<std::size_t>{} : random_subset(n, v, density, rng);
    if (problem == GraphProblem::kAcyclic) {
      const bool allow_back = back_arc(rng);
      std::erase_if(upd.in, [&](std::size_t x) { return level[x] > level[v] && !allow_back; });
      std::erase_if(upd.out, [&](std::size_t x) { return level[x] < level[v] && !allow_back; });
    }
    return upd;
  };

  w.initial = Digraph(n);
  for (std::size_t v = 0; v < n; ++v) {
    w.initial = apply_vertex_update(w.initial, make_update(v), undirected);
  }

  std::uniform_int_distribution<std::size_t> vertex(0, n - 1);
  const std::size_t queue_len = steps + n;
  for (std::size_t i = 0; i < queue_len; ++i) w.queue.push_back(make_update(vertex(rng)));

  // Mixed queue positions: mostly near the front, sometimes far back.
  std::size_t pending = queue_len;
  std::uniform_int_distribution<int> kind(0, 9);
  std::bernoulli_distribution override_neighbours(0.1);
  std::vector<VertexUpdate> order = w.queue;
  for (std::size_t s = 0; s < steps; ++s) {
    GraphStep step;
    const int k = kind(rng);
    if (k < 5) {
      step.eta = 1;
    } else if (k < 8) {
      step.eta = std::min<std::size_t>(pending, 2 + rng() % 4);
    } else {
      step.eta = 1 + rng() % pending;
    }
    if (override_neighbours(rng)) {
      VertexUpdate upd = make_update(order[step.eta - 1].vertex);
      step.realized = upd;
    }
    order.erase(order.begin() + static_cast<std::ptrdiff_t>(step.eta - 1));
    --pending;
    w.steps.push_back(std::move(step));
  }
  return w;
}

std::vector<ApspOp> random_apsp_script(const ApspConfig& config) {
  std::mt19937_64 rng(config.seed);
  std::vector<ApspOp> script;
  struct Live {
    ElementId id;
    std::int64_t key;
  };
  std::vector<Live> live;
  ElementId next_id = 0;
  std::int64_t clock = 0;
  std::uniform_int_distribution<std::int64_t> weight(0, config.max_weight);
  std::uniform_int_distribution<std::int64_t> lifetime(1, 3 * static_cast<std::int64_t>(config.max_live));
  std::bernoulli_distribution early(config.early_deletion);
  std::bernoulli_distribution edge(0.3);
  std::uniform_int_distribution<int> action(0, 9);

  for (std::size_t step = 0; step < config.operations; ++step) {
    ++clock;
    const int a = action(rng);
    const bool must_insert = live.size() < 2;
    const bool must_delete = live.size() >= config.max_live;
    if (!must_delete && (must_insert || a < 4)) {
      ApspOp op;
      op.kind = ApspOp::Kind::kInsert;
      op.vertex = next_id++;
      op.key = clock + lifetime(rng);
      for (const auto& x : live) {
        if (edge(rng)) op.in.push_back({x.id, weight(rng)});
        if (edge(rng)) op.out.push_back({x.id, weight(rng)});
      }
      live.push_back({op.vertex, op.key});
      script.push_back(std::move(op));
    } else if (must_delete || a < 7) {
      // Predicted order, unless this is an injected early deletion.
      std::size_t idx = 0;
      if (early(rng)) {
        idx = rng() % live.size();
      } else {
        for (std::size_t i = 1; i < live.size(); ++i)
          if (live[i].key < live[idx].key) idx = i;
      }
      ApspOp op;
      op.kind = ApspOp::Kind::kDelete;
      op.vertex = live[idx].id;
      live.erase(live.begin() + static_cast<std::ptrdiff_t>(idx));
      script.push_back(std::move(op));
    } else {
      ApspOp op;
      op.kind = ApspOp::Kind::kQuery;
      op.vertex = live[rng() % live.size()].id;
      op.other = live[rng() % live.size()].id;
      script.push_back(std::move(op));
    }
  }
  return script;
}

}  // namespace dynoracle::harness
