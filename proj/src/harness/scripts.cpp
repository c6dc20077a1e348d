#include "dynoracle/harness/scripts.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace dynoracle::harness {

ScriptError::ScriptError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Reads non-comment lines, remembering their numbers.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    std::string raw;
    while (std::getline(in_, raw)) {
      ++number_;
      line = trim(raw);
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  }
  std::size_t number() const noexcept { return number_; }
  [[noreturn]] void fail(const std::string& message) const { throw ScriptError(number_, message); }

  std::uint64_t unsigned_value(const std::string& s) const {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("expected a non-negative integer, got '" + s + "'");
    return v;
  }
  std::int64_t signed_value(const std::string& s) const {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) fail("expected an integer, got '" + s + "'");
    return v;
  }
  std::size_t vertex(const std::string& s, std::size_t n) const {
    const auto v = unsigned_value(s);
    if (v >= n) fail("vertex " + s + " out of range");
    return static_cast<std::size_t>(v);
  }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

// "in: 1,2" or "1,2" (prefix optional). Empty list allowed.
std::string strip_label(const std::string& field, const std::string& label, const LineReader& r) {
  if (field.rfind(label, 0) != 0) return field;
  const std::string rest = trim(field.substr(label.size()));
  if (rest.empty() || rest[0] != ':') r.fail("expected '" + label + ":'");
  return trim(rest.substr(1));
}

std::vector<std::size_t> vertex_list(const std::string& field, const std::string& label,
                                     std::size_t n, const LineReader& r) {
  const std::string body = strip_label(field, label, r);
  std::vector<std::size_t> out;
  if (body.empty()) return out;
  for (const auto& item : split(body, ',')) out.push_back(r.vertex(item, n));
  return out;
}

std::vector<WeightedNeighbour> weighted_list(const std::string& field, const std::string& label,
                                             const LineReader& r) {
  const std::string body = strip_label(field, label, r);
  std::vector<WeightedNeighbour> out;
  if (body.empty()) return out;
  for (const auto& item : split(body, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) r.fail("expected vertex:weight, got '" + item + "'");
    const std::int64_t w = r.signed_value(trim(item.substr(colon + 1)));
    if (w < 0) r.fail("negative weight");
    out.push_back({r.unsigned_value(trim(item.substr(0, colon))), w});
  }
  return out;
}

template <typename T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(xs[i]);
  }
  return s;
}

std::string join_weighted(const std::vector<WeightedNeighbour>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) s += ',';
    s += std::to_string(xs[i].vertex) + ":" + std::to_string(xs[i].weight);
  }
  return s;
}

}  // namespace

PartialWorkload parse_partial(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) r.fail("missing header 'n m mode eps'");
  const auto head = words(line);
  if (head.size() != 4) r.fail("header must be 'n m mode eps'");
  PartialWorkload w;
  w.n = static_cast<std::size_t>(r.unsigned_value(head[0]));
  const auto m = r.unsigned_value(head[1]);
  if (head[2] == "incremental" || head[2] == "inc") {
    w.mode = DynamicMode::kIncremental;
  } else if (head[2] == "decremental" || head[2] == "dec") {
    w.mode = DynamicMode::kDecremental;
  } else {
    r.fail("mode must be incremental or decremental");
  }
  if (head[3] == "inf") {
    w.eps = std::numeric_limits<double>::infinity();
  } else {
    try {
      std::size_t used = 0;
      w.eps = std::stod(head[3], &used);
      if (used != head[3].size() || !(w.eps > 0)) throw std::invalid_argument("eps");
    } catch (const std::exception&) {
      r.fail("eps must be a positive number or inf");
    }
  }
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!r.next(line)) r.fail("expected " + std::to_string(m) + " predicted edges");
    const auto f = words(line);
    if (f.size() != 2) r.fail("predicted edge must be 'u v'");
    w.predicted.push_back({r.vertex(f[0], w.n), r.vertex(f[1], w.n)});
  }
  while (r.next(line)) {
    const auto f = words(line);
    if (f.size() != 3 || (f[0] != "U" && f[0] != "Q")) r.fail("expected 'U u v' or 'Q u v'");
    const auto kind = f[0] == "U" ? PartialOp::Kind::kUpdate : PartialOp::Kind::kQuery;
    w.script.push_back({kind, {r.vertex(f[1], w.n), r.vertex(f[2], w.n)}});
  }
  return w;
}

void write_partial(std::ostream& out, const PartialWorkload& w) {
  out << w.n << ' ' << w.predicted.size() << ' '
      << (w.mode == DynamicMode::kIncremental ? "incremental" : "decremental") << ' ';
  if (std::isinf(w.eps)) {
    out << "inf";
  } else {
    out << w.eps;
  }
  out << '\n';
  for (const auto& e : w.predicted) out << e.from << ' ' << e.to << '\n';
  for (const auto& op : w.script) {
    out << (op.kind == PartialOp::Kind::kUpdate ? 'U' : 'Q') << ' ' << op.edge.from << ' '
        << op.edge.to << '\n';
  }
}

GraphScript parse_graph_script(std::istream& in) {
  LineReader r(in);
  std::string line;
  if (!r.next(line)) r.fail("missing header 'n m'");
  const auto head = words(line);
  if (head.size() != 2) r.fail("header must be 'n m'");
  GraphScript s;
  s.n = static_cast<std::size_t>(r.unsigned_value(head[0]));
  if (s.n == 0) r.fail("graph needs at least one vertex");
  const auto m = r.unsigned_value(head[1]);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!r.next(line)) r.fail("expected " + std::to_string(m) + " edges");
    const auto f = words(line);
    if (f.size() != 2) r.fail("edge must be 'u v'");
    const Edge e{r.vertex(f[0], s.n), r.vertex(f[1], s.n)};
    if (e.from == e.to) r.fail("self-loop");
    s.edges.push_back(e);
  }
  bool performing = false;
  while (r.next(line)) {
    const auto fields = split(line, '|');
    const auto head_words = words(fields[0]);
    if (head_words.size() != 2) r.fail("expected 'VU v | ...' or 'P eta'");
    std::optional<VertexUpdate> upd;
    if (fields.size() == 3) {
      VertexUpdate u;
      u.in = vertex_list(fields[1], "in", s.n, r);
      u.out = vertex_list(fields[2], "out", s.n, r);
      upd = std::move(u);
    } else if (fields.size() != 1) {
      r.fail("expected 'in: ..' and 'out: ..' fields");
    }
    if (head_words[0] == "VU") {
      if (!upd) r.fail("VU needs in and out lists");
      upd->vertex = r.vertex(head_words[1], s.n);
      if (performing) {
        s.lines.push_back({GraphScript::Line::Kind::kAppend, 0, upd});
      } else {
        s.queue.push_back(*upd);
      }
    } else if (head_words[0] == "P") {
      performing = true;
      const auto eta = r.unsigned_value(head_words[1]);
      if (eta == 0) r.fail("eta is 1-based");
      s.lines.push_back({GraphScript::Line::Kind::kPerform, static_cast<std::size_t>(eta), upd});
    } else {
      r.fail("unknown directive '" + head_words[0] + "'");
    }
  }
  return s;
}

GraphScript to_script(const GraphWorkload& w) {
  GraphScript s;
  s.n = w.initial.size();
  for (std::size_t u = 0; u < s.n; ++u)
    for (std::size_t v = 0; v < s.n; ++v)
      if (w.initial.has_arc(u, v) && (!is_undirected(w.problem) || u < v)) s.edges.push_back({u, v});
  s.queue = w.queue;
  for (const auto& step : w.steps) {
    s.lines.push_back({GraphScript::Line::Kind::kPerform, step.eta, step.realized});
  }
  return s;
}

void write_graph_script(std::ostream& out, const GraphWorkload& w) {
  const GraphScript s = to_script(w);
  out << s.n << ' ' << s.edges.size() << '\n';
  for (const auto& e : s.edges) out << e.from << ' ' << e.to << '\n';
  for (const auto& u : s.queue) {
    out << "VU " << u.vertex << " | in: " << join(u.in) << " | out: " << join(u.out) << '\n';
  }
  for (const auto& l : s.lines) {
    if (l.kind == GraphScript::Line::Kind::kAppend) {
      out << "VU " << l.update->vertex << " | in: " << join(l.update->in)
          << " | out: " << join(l.update->out) << '\n';
      continue;
    }
    out << "P " << l.eta;
    if (l.update) out << " | in: " << join(l.update->in) << " | out: " << join(l.update->out);
    out << '\n';
  }
}

std::vector<ApspOp> parse_apsp_script(std::istream& in) {
  LineReader r(in);
  std::vector<ApspOp> ops;
  std::string line;
  while (r.next(line)) {
    const auto fields = split(line, '|');
    const auto head = words(fields[0]);
    if (head.empty()) r.fail("empty directive");
    ApspOp op;
    if (head[0] == "I") {
      if (head.size() != 3 || fields.size() != 3) r.fail("expected 'I v key | in-edges | out-edges'");
      op.kind = ApspOp::Kind::kInsert;
      op.vertex = r.unsigned_value(head[1]);
      op.key = r.signed_value(head[2]);
      op.in = weighted_list(fields[1], "in", r);
      op.out = weighted_list(fields[2], "out", r);
    } else if (head[0] == "D") {
      if (head.size() != 2 || fields.size() != 1) r.fail("expected 'D v'");
      op.kind = ApspOp::Kind::kDelete;
      op.vertex = r.unsigned_value(head[1]);
    } else if (head[0] == "Q") {
      if (head.size() != 3 || fields.size() != 1) r.fail("expected 'Q u v'");
      op.kind = ApspOp::Kind::kQuery;
      op.vertex = r.unsigned_value(head[1]);
      op.other = r.unsigned_value(head[2]);
    } else {
      r.fail("unknown directive '" + head[0] + "'");
    }
    ops.push_back(std::move(op));
  }
  return ops;
}

void write_apsp_script(std::ostream& out, const std::vector<ApspOp>& ops) {
  for (const auto& op : ops) {
    switch (op.kind) {
      case ApspOp::Kind::kInsert:
        out << "I " << op.vertex << ' ' << op.key << " | in: " << join_weighted(op.in)
            << " | out: " << join_weighted(op.out) << '\n';
        break;
      case ApspOp::Kind::kDelete:
        out << "D " << op.vertex << '\n';
        break;
      case ApspOp::Kind::kQuery:
        out << "Q " << op.vertex << ' ' << op.other << '\n';
        break;
    }
  }
}

}  // namespace dynoracle::harness
