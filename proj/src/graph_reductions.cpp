#include "dynoracle/graph_reductions.hpp"

#include <algorithm>
#include <functional>
#include <utility>

namespace dynoracle {

void Digraph::set_arc(std::size_t u, std::size_t v, bool present) {
  if (u >= n_ || v >= n_) throw ContractViolation("Digraph: vertex out of range");
  if (u == v) throw ContractViolation("Digraph: self-loops are not allowed");
  adj_[u * n_ + v] = present ? 1 : 0;
}

void Digraph::set_edge(std::size_t u, std::size_t v, bool present) {
  set_arc(u, v, present);
  set_arc(v, u, present);
}

Digraph Digraph::reversed() const {
  Digraph r(n_);
  for (std::size_t u = 0; u < n_; ++u)
    for (std::size_t v = 0; v < n_; ++v) r.adj_[v * n_ + u] = adj_[u * n_ + v];
  return r;
}

std::size_t Digraph::arc_count() const noexcept {
  return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), 1));
}

Digraph apply_vertex_update(const Digraph& g, const VertexUpdate& upd, bool undirected) {
  const std::size_t w = upd.vertex;
  if (w >= g.size()) throw ContractViolation("apply_vertex_update: vertex out of range");
  Digraph out = g;
  for (std::size_t x = 0; x < g.size(); ++x) {
    if (x == w) continue;
    out.set_arc(x, w, false);
    out.set_arc(w, x, false);
  }
  for (std::size_t x : upd.in) {
    if (undirected) {
      out.set_edge(x, w, true);
    } else {
      out.set_arc(x, w, true);
    }
  }
  for (std::size_t x : upd.out) {
    if (undirected) {
      out.set_edge(w, x, true);
    } else {
      out.set_arc(w, x, true);
    }
  }
  return out;
}

const char* problem_name(GraphProblem kind) {
  switch (kind) {
    case GraphProblem::kTriangles: return "triangle";
    case GraphProblem::kAcyclic: return "cycle";
    case GraphProblem::kReachable: return "ssr";
    case GraphProblem::kStrong: return "scc";
    case GraphProblem::kMatching: return "matching";
    case GraphProblem::kDisjointPaths: return "st_paths";
  }
  return "?";
}

std::optional<GraphProblem> parse_problem(const std::string& name) {
  for (auto kind : {GraphProblem::kTriangles, GraphProblem::kAcyclic, GraphProblem::kReachable,
                    GraphProblem::kStrong, GraphProblem::kMatching, GraphProblem::kDisjointPaths}) {
    if (name == problem_name(kind)) return kind;
  }
  return std::nullopt;
}

bool is_undirected(GraphProblem kind) {
  return kind == GraphProblem::kTriangles || kind == GraphProblem::kMatching;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Nonzero field value attached to matrix entry (a, b) under `seed`.
Residue entry_value(const PrimeField& f, std::uint64_t seed, std::size_t a, std::size_t b) {
  const std::uint64_t h = splitmix64(seed ^ splitmix64(a * 0x100000001b3ULL + b));
  return h % (f.modulus() - 1) + 1;
}

struct Encoding {
  std::size_t dim = 0;
  bool gadget = false;
  bool reversed = false;
  std::function<FieldMatrix(const Digraph&, std::uint64_t)> build;
  std::function<std::vector<std::size_t>(std::size_t)> rows;
  std::function<std::vector<std::size_t>(std::size_t)> cols;
};

Encoding triangle_encoding(const PrimeField& f, std::size_t n) {
  Encoding e;
  e.dim = 4 * n;
  e.build = [f, n](const Digraph& g, std::uint64_t) {
    FieldMatrix t = FieldMatrix::identity(f, 4 * n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (g.has_arc(u, v))
          for (std::size_t b = 0; b < 3; ++b) t(b * n + u, (b + 1) * n + v) = 1;
    return t;
  };
  e.rows = [n](std::size_t v) { return std::vector<std::size_t>{v, n + v, 2 * n + v}; };
  e.cols = [n](std::size_t v) { return std::vector<std::size_t>{n + v, 2 * n + v, 3 * n + v}; };
  return e;
}

// I - A with a random nonzero value per arc.
Encoding identity_minus_adjacency(const PrimeField& f, std::size_t n, bool gadget, bool reversed) {
  Encoding e;
  e.dim = n;
  e.gadget = gadget;
  e.reversed = reversed;
  e.build = [f, n](const Digraph& g, std::uint64_t seed) {
    FieldMatrix m = FieldMatrix::identity(f, n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (g.has_arc(u, v)) m(u, v) = f.neg(entry_value(f, seed, u, v));
    return m;
  };
  e.rows = [](std::size_t v) { return std::vector<std::size_t>{v}; };
  e.cols = e.rows;
  return e;
}

Encoding tutte_encoding(const PrimeField& f, std::size_t n) {
  Encoding e;
  e.dim = n;
  e.gadget = true;
  e.build = [f, n](const Digraph& g, std::uint64_t seed) {
    FieldMatrix m(f, n, n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v)
        if (g.has_arc(u, v)) {
          const Residue x = entry_value(f, seed, u, v);
          m(u, v) = x;
          m(v, u) = f.neg(x);
        }
    return m;
  };
  e.rows = [](std::size_t v) { return std::vector<std::size_t>{v}; };
  e.cols = e.rows;
  return e;
}

// Bipartite split for vertex-disjoint s-t paths. Left side: u_out for u != t,
// with s_out repeated n times. Right side: v_in for v != s, with t_in
// repeated n times. Edmonds matrix entries are random per split edge.
Encoding split_encoding(const PrimeField& f, std::size_t n, std::size_t s, std::size_t t) {
  auto left = std::make_shared<std::vector<std::vector<std::size_t>>>(n);
  auto right = std::make_shared<std::vector<std::vector<std::size_t>>>(n);
  std::size_t nl = 0, nr = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (u != t)
      for (std::size_t c = 0; c < (u == s ? n : 1); ++c) (*left)[u].push_back(nl++);
    if (u != s)
      for (std::size_t c = 0; c < (u == t ? n : 1); ++c) (*right)[u].push_back(nr++);
  }
  Encoding e;
  e.dim = nl;
  e.gadget = true;
  e.build = [f, n, s, t, left, right, nl](const Digraph& g, std::uint64_t seed) {
    FieldMatrix m(f, nl, nl);
    auto put = [&](std::size_t a, std::size_t b) { m(a, b) = entry_value(f, seed, a, b); };
    for (std::size_t v = 0; v < n; ++v)
      if (v != s && v != t) put((*left)[v][0], (*right)[v][0]);
    for (std::size_t u = 0; u < n; ++u) {
      if (u == t) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == s || u == v || !g.has_arc(u, v)) continue;
        if (u == s && v == t) {
          // a direct arc carries one path, so it links a single copy pair
          put((*left)[s][0], (*right)[t][0]);
          continue;
        }
        for (std::size_t a : (*left)[u])
          for (std::size_t b : (*right)[v]) put(a, b);
      }
    }
    return m;
  };
  e.rows = [left](std::size_t v) { return (*left)[v]; };
  e.cols = [right](std::size_t v) { return (*right)[v]; };
  return e;
}

RankOneUpdate filler(std::size_t dim) {
  return {std::vector<Residue>(dim, 0), std::vector<Residue>(dim, 0)};
}

}  // namespace

class DynamicGraphOracle::Engine {
 public:
  Engine(Encoding enc, const Digraph& g, const std::vector<VertexUpdate>& predicted,
         bool undirected, std::uint64_t seed, std::size_t c)
      : enc_(std::move(enc)),
        undirected_(undirected),
        seed_(seed),
        c_(c),
        graph_(enc_.reversed ? g.reversed() : g) {
    for (const auto& upd : predicted) pending_.push_back({upd, {}});
    rebuild_until_invertible(0);
  }

  void append(const VertexUpdate& upd) {
    const Digraph next = apply_vertex_update(sim_end_, view(upd), undirected_);
    const auto parts = parts_between(enc_.build(sim_end_, seed_), enc_.build(next, seed_),
                                     upd.vertex);
    Pending item{upd, {}};
    for (const auto& p : parts) item.part_ids.push_back(pi_->append_update(p));
    pending_.push_back(std::move(item));
    sim_end_ = next;
  }

  StepReport perform(std::size_t eta, const VertexUpdate& realized) {
    StepReport report;
    const Pending item = pending_.at(eta - 1);
    const Digraph target = apply_vertex_update(graph_, view(realized), undirected_);
    const auto parts =
        parts_between(pi_->matrix(), enc_.build(target, seed_), realized.vertex);
    pending_.erase(pending_.begin() + static_cast<std::ptrdiff_t>(eta - 1));
    const std::uint64_t before = work();
    try {
      for (std::size_t i = 0; i < parts.size(); ++i) {
        while (pi_->queue_size() < pi_->dim()) pi_->append_update(filler(enc_.dim));
        const auto out = pi_->perform_update(position_of(item.part_ids[i]), parts[i]);
        ++report.parts;
        if (out.predicted_path) ++report.predicted_parts;
      }
      graph_ = target;
    } catch (const SingularUpdate&) {
      graph_ = target;
      report.rebuilds = rebuild_until_invertible(1);
    }
    report.work = work() - before;
    return report;
  }

  std::optional<std::vector<Residue>> row(std::size_t r) {
    std::vector<Residue> e(enc_.dim, 0);
    e[r] = 1;
    return pi_->query_row(e);
  }

  void hint(std::vector<std::size_t> rows) {
    hints_ = std::move(rows);
    pi_->set_query_hints(hints_);
  }

  std::size_t rank() const { return pi_->rank(); }
  Residue det() const { return pi_->det(); }
  std::uint64_t work() const { return retired_work_ + pi_->work(); }
  std::size_t pending() const { return pending_.size(); }
  const VertexUpdate& pending_at(std::size_t pos) const { return pending_.at(pos - 1).upd; }

 private:
  struct Pending {
    VertexUpdate upd;
    std::vector<std::uint64_t> part_ids;
  };

  VertexUpdate view(const VertexUpdate& upd) const {
    if (!enc_.reversed) return upd;
    return {upd.vertex, upd.out, upd.in};
  }

  /// Rank-1 parts turning `cur` into `target`: rows of the vertex first,
  /// then its columns against the partially updated matrix.
  std::vector<RankOneUpdate> parts_between(FieldMatrix cur, const FieldMatrix& target,
                                           std::size_t vertex) const {
    const PrimeField& f = cur.field();
    const std::size_t d = enc_.dim;
    std::vector<RankOneUpdate> parts;
    for (std::size_t r : enc_.rows(vertex)) {
      RankOneUpdate p{std::vector<Residue>(d, 0), std::vector<Residue>(d, 0)};
      p.u[r] = 1;
      for (std::size_t c = 0; c < d; ++c) {
        p.v[c] = f.sub(target(r, c), cur(r, c));
        cur(r, c) = target(r, c);
      }
      parts.push_back(std::move(p));
    }
    for (std::size_t c : enc_.cols(vertex)) {
      RankOneUpdate p{std::vector<Residue>(d, 0), std::vector<Residue>(d, 0)};
      p.v[c] = 1;
      for (std::size_t r = 0; r < d; ++r) {
        p.u[r] = f.sub(target(r, c), cur(r, c));
        cur(r, c) = target(r, c);
      }
      parts.push_back(std::move(p));
    }
    if (!(cur == target)) throw ContractViolation("vertex update touches rows it does not own");
    return parts;
  }

  std::size_t position_of(std::uint64_t id) const {
    for (std::size_t pos = 1; pos <= pi_->queue_size(); ++pos)
      if (pi_->queued_id(pos) == id) return pos;
    throw ContractViolation("DynamicGraphOracle: queued part vanished");
  }

  void rebuild() {
    FieldMatrix m0 = enc_.build(graph_, seed_);
    FieldMatrix cur = m0;
    Digraph sim = graph_;
    std::vector<RankOneUpdate> queue;
    for (auto& item : pending_) {
      const Digraph next = apply_vertex_update(sim, view(item.upd), undirected_);
      FieldMatrix tgt = enc_.build(next, seed_);
      item.part_ids.clear();
      for (auto& p : parts_between(cur, tgt, item.upd.vertex)) {
        item.part_ids.push_back(queue.size());
        queue.push_back(std::move(p));
      }
      cur = std::move(tgt);
      sim = next;
    }
    sim_end_ = sim;
    while (queue.size() < enc_.dim) queue.push_back(filler(enc_.dim));
    if (pi_) retired_work_ += pi_->work();
    pi_ = std::make_unique<PredictedInverse>(std::move(m0), std::move(queue),
                                             PredictedInverseOptions{enc_.gadget, seed_, c_});
    pi_->set_query_hints(hints_);
  }

  // Draws fresh encodings until the matrix is invertible (only matters
  // without the rank gadget). Returns how many draws were needed.
  std::size_t rebuild_until_invertible(std::size_t reseed) {
    for (std::size_t attempt = 0;; ++attempt) {
      if (reseed + attempt > 0) seed_ = splitmix64(seed_);
      try {
        rebuild();
        return reseed + attempt;
      } catch (const SingularUpdate&) {
        if (attempt >= 16) throw;
      }
    }
  }

  Encoding enc_;
  bool undirected_;
  std::uint64_t seed_;
  std::size_t c_;
  Digraph graph_;
  Digraph sim_end_;
  std::vector<Pending> pending_;
  std::vector<std::size_t> hints_;
  std::unique_ptr<PredictedInverse> pi_;
  std::uint64_t retired_work_ = 0;
};

DynamicGraphOracle::DynamicGraphOracle(GraphProblem kind, Digraph initial,
                                       std::vector<VertexUpdate> predicted, GraphOptions options)
    : kind_(kind), options_(options), graph_(std::move(initial)) {
  const PrimeField f;
  const std::size_t n = graph_.size();
  if (n == 0) throw ContractViolation("DynamicGraphOracle: empty graph");
  const bool undirected = is_undirected(kind_);
  for (const auto& upd : predicted)
    if (upd.vertex >= n) throw ContractViolation("DynamicGraphOracle: vertex out of range");
  auto add = [&](Encoding enc, std::uint64_t seed) {
    engines_.push_back(std::make_unique<Engine>(std::move(enc), graph_, predicted, undirected,
                                                seed, options_.size_constant));
  };
  switch (kind_) {
    case GraphProblem::kTriangles:
      add(triangle_encoding(f, n), options_.seed);
      break;
    case GraphProblem::kAcyclic:
      add(identity_minus_adjacency(f, n, true, false), options_.seed);
      break;
    case GraphProblem::kReachable:
      if (options_.source >= n) throw ContractViolation("DynamicGraphOracle: bad source");
      add(identity_minus_adjacency(f, n, false, false), options_.seed);
      engines_[0]->hint({options_.source});
      break;
    case GraphProblem::kStrong:
      add(identity_minus_adjacency(f, n, false, false), options_.seed);
      add(identity_minus_adjacency(f, n, false, true), splitmix64(options_.seed));
      engines_[0]->hint({0});
      engines_[1]->hint({0});
      break;
    case GraphProblem::kMatching:
      add(tutte_encoding(f, n), options_.seed);
      break;
    case GraphProblem::kDisjointPaths:
      if (n < 2 || options_.source >= n || options_.target >= n ||
          options_.source == options_.target)
        throw ContractViolation("DynamicGraphOracle: need distinct s and t");
      add(split_encoding(f, n, options_.source, options_.target), options_.seed);
      break;
  }
  if (kind_ == GraphProblem::kTriangles) {
    for (std::size_t v = 0; v < n; ++v) {
      const auto row = engines_[0]->row(v);
      directed_triangles_ += f.to_signed(f.neg((*row)[3 * n + v]));
    }
    directed_triangles_ /= 3;
  }
  refresh_answers();
}

DynamicGraphOracle::~DynamicGraphOracle() = default;
DynamicGraphOracle::DynamicGraphOracle(DynamicGraphOracle&&) noexcept = default;

void DynamicGraphOracle::append_update(VertexUpdate upd) {
  if (upd.vertex >= graph_.size()) throw ContractViolation("append_update: vertex out of range");
  for (auto& e : engines_) e->append(upd);
}

std::size_t DynamicGraphOracle::pending() const noexcept { return engines_[0]->pending(); }

const VertexUpdate& DynamicGraphOracle::pending_at(std::size_t pos) const {
  return engines_[0]->pending_at(pos);
}

std::uint64_t DynamicGraphOracle::work() const noexcept {
  std::uint64_t total = 0;
  for (const auto& e : engines_) total += e->work();
  return total;
}

StepReport DynamicGraphOracle::perform_update(std::size_t eta,
                                              const std::optional<VertexUpdate>& realized) {
  if (eta == 0 || eta > pending())
    throw ContractViolation("DynamicGraphOracle::perform_update: position out of range");
  const VertexUpdate upd = realized.value_or(pending_at(eta));
  if (upd.vertex != pending_at(eta).vertex)
    throw ContractViolation("DynamicGraphOracle::perform_update: realized update names another vertex");
  const std::size_t n = graph_.size();
  const PrimeField f;

  std::int64_t before = 0;
  if (kind_ == GraphProblem::kTriangles) {
    std::vector<std::size_t> hints{upd.vertex};
    for (std::size_t pos = 1; pos <= std::min<std::size_t>(pending(), 4); ++pos)
      hints.push_back(pending_at(pos).vertex);
    engines_[0]->hint(hints);
    const auto row = engines_[0]->row(upd.vertex);
    before = f.to_signed(f.neg((*row)[3 * n + upd.vertex]));
  }

  StepReport total;
  for (auto& e : engines_) {
    const StepReport r = e->perform(eta, upd);
    total.work += r.work;
    total.parts += r.parts;
    total.predicted_parts += r.predicted_parts;
    total.rebuilds += r.rebuilds;
  }
  graph_ = apply_vertex_update(graph_, upd, is_undirected(kind_));

  if (kind_ == GraphProblem::kTriangles) {
    const std::uint64_t start = work();
    const auto row = engines_[0]->row(upd.vertex);
    directed_triangles_ += f.to_signed(f.neg((*row)[3 * n + upd.vertex])) - before;
    total.work += work() - start;
  }
  const std::uint64_t start = work();
  refresh_answers();
  total.work += work() - start;
  return total;
}

void DynamicGraphOracle::refresh_answers() {
  auto support = [](const std::vector<Residue>& row, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
      if (row[i] != 0) out.push_back(i);
    return out;
  };
  const std::size_t n = graph_.size();
  if (kind_ == GraphProblem::kReachable) {
    reachable_ = support(*engines_[0]->row(options_.source), n);
  } else if (kind_ == GraphProblem::kStrong) {
    reachable_ = support(*engines_[0]->row(0), n);
    reaches_root_ = support(*engines_[1]->row(0), n);
  }
}

bool DynamicGraphOracle::acyclic() const {
  if (kind_ != GraphProblem::kAcyclic) throw ContractViolation("acyclic: wrong problem kind");
  return engines_[0]->rank() == graph_.size() && engines_[0]->det() == 1;
}

bool DynamicGraphOracle::strongly_connected() const {
  if (kind_ != GraphProblem::kStrong) throw ContractViolation("strongly_connected: wrong problem kind");
  return reachable_.size() == graph_.size() && reaches_root_.size() == graph_.size();
}

std::size_t DynamicGraphOracle::matching_size() const {
  if (kind_ != GraphProblem::kMatching) throw ContractViolation("matching_size: wrong problem kind");
  return engines_[0]->rank() / 2;
}

std::size_t DynamicGraphOracle::disjoint_paths() const {
  if (kind_ != GraphProblem::kDisjointPaths)
    throw ContractViolation("disjoint_paths: wrong problem kind");
  return engines_[0]->rank() - (graph_.size() - 2);
}

}  // namespace dynoracle
