#include "dynoracle/harness/oumv.hpp"

#include <stdexcept>

namespace dynoracle::harness {

PartialWorkload oumv_workload(const BoolMatrix& m, const std::vector<OumvQuery>& queries,
                              DynamicMode mode) {
  const std::size_t n = m.size();
  if (queries.size() > n) throw std::invalid_argument("oumv_workload: more queries than rows");
  auto a = [](std::size_t i) { return i; };
  auto b = [n](std::size_t j) { return n + j; };
  auto c = [n](std::size_t j) { return 2 * n + j; };
  auto d = [n](std::size_t i) { return 3 * n + i; };

  PartialWorkload w;
  w.n = 4 * n;
  w.mode = mode;

  std::vector<Edge> matrix_edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (m.get(i, j)) matrix_edges.push_back({b(i), c(j)});
  std::vector<Edge> schedule;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      schedule.push_back({a(i), b(j)});
      schedule.push_back({c(j), d(i)});
    }

  auto update = [&w](Edge e) { w.script.push_back({PartialOp::Kind::kUpdate, e}); };

  if (mode == DynamicMode::kIncremental) {
    w.predicted = matrix_edges;
    w.predicted.insert(w.predicted.end(), schedule.begin(), schedule.end());
    for (const auto& e : matrix_edges) update(e);
  } else {
    w.predicted = schedule;
    w.predicted.insert(w.predicted.end(), matrix_edges.begin(), matrix_edges.end());
  }

  for (std::size_t i = 0; i < queries.size(); ++i) {
    const auto& q = queries[i];
    // Incremental inserts the ones first; decremental deletes the zeros first.
    const bool first_pass = mode == DynamicMode::kIncremental;
    for (bool pass : {first_pass, !first_pass}) {
      for (std::size_t j = 0; j < n; ++j)
        if (q.u.get(j) == pass) update({a(i), b(j)});
      for (std::size_t j = 0; j < n; ++j)
        if (q.v.get(j) == pass) update({c(j), d(i)});
      if (pass == first_pass) w.script.push_back({PartialOp::Kind::kQuery, {a(i), d(i)}});
    }
  }
  return w;
}

}  // namespace dynoracle::harness
