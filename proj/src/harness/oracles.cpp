#include "dynoracle/harness/oracles.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace dynoracle::harness {

std::vector<std::vector<std::int64_t>> fw_apsp(std::size_t n, const std::vector<WeightedArc>& arcs) {
  std::vector<std::vector<std::int64_t>> d(n, std::vector<std::int64_t>(n, kNoPath));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& a : arcs) d[a.from][a.to] = std::min(d[a.from][a.to], a.weight);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kNoPath) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] == kNoPath) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  return d;
}

std::vector<bool> bfs_reach(const Digraph& g, std::size_t source) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{source};
  seen[source] = true;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (g.has_arc(u, v) && !seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  return seen;
}

std::vector<std::optional<std::size_t>> bfs_hops(std::size_t n, const std::vector<Edge>& edges,
                                                  std::size_t source) {
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : edges) adj[e.from].push_back(e.to);
  std::vector<std::optional<std::size_t>> dist(n);
  dist[source] = 0;
  std::deque<std::size_t> queue{source};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v : adj[u]) {
      if (!dist[v]) {
        dist[v] = *dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

bool dfs_cycle(const Digraph& g) {
  const std::size_t n = g.size();
  std::vector<int> colour(n, 0);  // 0 new, 1 on stack, 2 done
  std::function<bool(std::size_t)> visit = [&](std::size_t u) {
    colour[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!g.has_arc(u, v)) continue;
      if (colour[v] == 1) return true;
      if (colour[v] == 0 && visit(v)) return true;
    }
    colour[u] = 2;
    return false;
  };
  for (std::size_t u = 0; u < n; ++u)
    if (colour[u] == 0 && visit(u)) return true;
  return false;
}

bool strongly_connected(const Digraph& g) {
  if (g.size() == 0) return true;
  const auto fwd = bfs_reach(g, 0);
  const auto bwd = bfs_reach(g.reversed(), 0);
  return std::all_of(fwd.begin(), fwd.end(), [](bool b) { return b; }) &&
         std::all_of(bwd.begin(), bwd.end(), [](bool b) { return b; });
}

std::int64_t triangle_cubic(const Digraph& g) {
  const std::size_t n = g.size();
  std::int64_t count = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!g.has_arc(a, b)) continue;
      for (std::size_t c = b + 1; c < n; ++c)
        if (g.has_arc(b, c) && g.has_arc(a, c)) ++count;
    }
  return count;
}

std::int64_t directed_triangles_cubic(const Digraph& g) {
  const std::size_t n = g.size();
  std::int64_t count = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (a != b && b != c && a != c && g.has_arc(a, b) && g.has_arc(b, c) && g.has_arc(c, a))
          ++count;
  return count / 3;
}

std::size_t matching_exhaustive(const Digraph& g) {
  const std::size_t n = g.size();
  // best[mask] = maximum matching using only vertices in mask.
  std::vector<std::uint8_t> best(std::size_t{1} << n, 0);
  for (std::size_t mask = 1; mask < best.size(); ++mask) {
    std::size_t low = 0;
    while (((mask >> low) & 1) == 0) ++low;
    const std::size_t rest = mask & ~(std::size_t{1} << low);
    std::uint8_t value = best[rest];
    for (std::size_t v = low + 1; v < n; ++v) {
      if (((rest >> v) & 1) && g.has_arc(low, v)) {
        value = std::max<std::uint8_t>(value, best[rest & ~(std::size_t{1} << v)] + 1);
      }
    }
    best[mask] = value;
  }
  return best.back();
}

std::size_t maxflow_vertex_disjoint(const Digraph& g, std::size_t s, std::size_t t) {
  // Node v_in = 2v, v_out = 2v+1; capacity 1 on v_in -> v_out except s and t.
  const std::size_t n = g.size();
  const std::size_t nodes = 2 * n;
  std::vector<std::vector<int>> cap(nodes, std::vector<int>(nodes, 0));
  for (std::size_t v = 0; v < n; ++v) cap[2 * v][2 * v + 1] = (v == s || v == t) ? static_cast<int>(n) : 1;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (u != v && g.has_arc(u, v)) cap[2 * u + 1][2 * v] = 1;

  const std::size_t source = 2 * s + 1, sink = 2 * t;
  std::size_t flow = 0;
  for (;;) {
    std::vector<std::size_t> parent(nodes, nodes);
    parent[source] = source;
    std::deque<std::size_t> queue{source};
    while (!queue.empty() && parent[sink] == nodes) {
      const std::size_t x = queue.front();
      queue.pop_front();
      for (std::size_t y = 0; y < nodes; ++y) {
        if (cap[x][y] > 0 && parent[y] == nodes) {
          parent[y] = x;
          queue.push_back(y);
        }
      }
    }
    if (parent[sink] == nodes) break;
    for (std::size_t y = sink; y != source; y = parent[y]) {
      --cap[parent[y]][y];
      ++cap[y][parent[y]];
    }
    ++flow;
  }
  return flow;
}

BoolVector bool_matvec(const BoolMatrix& m, const BoolVector& v) {
  const std::size_t n = m.size();
  BoolVector out(n);
  for (std::size_t i = 0; i < n; ++i) {
    bool bit = false;
    for (std::size_t j = 0; j < n && !bit; ++j) bit = m.get(i, j) && v.get(j);
    out.set(i, bit);
  }
  return out;
}

bool bool_quadratic(const BoolVector& u, const BoolMatrix& m, const BoolVector& v) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (!u.get(i)) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (m.get(i, j) && v.get(j)) return true;
  }
  return false;
}

}  // namespace dynoracle::harness
