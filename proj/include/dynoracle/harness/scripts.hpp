// Plain-text workload files. Blank lines and lines starting with '#' are
// ignored; parse errors carry the 1-based line number.
//
// Partial:  "n m mode eps", m lines "u v", then "U u v" / "Q u v".
// Graph:    "n m", m lines "u v", then queue entries
//           "VU v | in: a,b | out: c" and performs "P eta" or
//           "P eta | in: .. | out: .." (realized neighbourhoods). A VU line
//           after the first P appends an unpredicted update.
// APSP:     "I v key | in: u:w,.. | out: u:w,..", "D v", "Q u v".
#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynoracle/harness/workloads.hpp"

namespace dynoracle::harness {

class ScriptError : public std::runtime_error {
 public:
  ScriptError(std::size_t line, const std::string& message);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

PartialWorkload parse_partial(std::istream& in);
void write_partial(std::ostream& out, const PartialWorkload& w);

/// Initial edges, the predicted queue, then appends and performs in file order.
struct GraphScript {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<VertexUpdate> queue;
  struct Line {
    enum class Kind { kAppend, kPerform };
    Kind kind = Kind::kPerform;
    std::size_t eta = 1;
    std::optional<VertexUpdate> update;  // appended, or realized override
  };
  std::vector<Line> lines;
};

GraphScript parse_graph_script(std::istream& in);
void write_graph_script(std::ostream& out, const GraphWorkload& w);
/// Builds the script view of a generated workload.
GraphScript to_script(const GraphWorkload& w);

std::vector<ApspOp> parse_apsp_script(std::istream& in);
void write_apsp_script(std::ostream& out, const std::vector<ApspOp>& ops);

}  // namespace dynoracle::harness
