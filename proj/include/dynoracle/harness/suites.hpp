// Verification runners (structure vs. oracle after every operation),
// counted-work sweeps and CSV output.
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "dynoracle/harness/scripts.hpp"
#include "dynoracle/harness/workloads.hpp"

namespace dynoracle::harness {

struct CsvRow {
  std::size_t op_index = 0;
  std::string op_kind;
  std::size_t eta = 0;
  std::uint64_t counted_work = 0;
  std::uint64_t wall_ns = 0;
  bool verified = true;
};

void write_csv(std::ostream& out, const std::vector<CsvRow>& rows);

struct RunOptions {
  bool record_rows = false;
  bool wall_time = false;  // off: wall_ns stays 0 so output is reproducible
};

struct SuiteReport {
  std::string name;
  std::size_t operations = 0;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;  // first few failures
  std::vector<CsvRow> rows;

  bool ok() const noexcept { return failures == 0; }
  /// Counts a check; records `what` when it failed.
  bool check(bool passed, const std::string& what);
  void merge(SuiteReport&& other);
};

// ---- single-workload runners ----

SuiteReport run_partial(const PartialWorkload& w, const RunOptions& options = {});
SuiteReport run_omv(const OmvSession& s, const RunOptions& options = {});
/// Compares rows, determinant and rank with dense recomputation at every
/// step and the represented inverse every `identity_every` steps (0 = never).
SuiteReport run_inverse(const InverseWorkload& w, std::size_t identity_every,
                        const RunOptions& options = {});
SuiteReport run_graph(GraphProblem problem, const GraphScript& script, const GraphOptions& graph_options,
                      const RunOptions& options = {});
SuiteReport run_apsp(const std::vector<ApspOp>& ops, const RunOptions& options = {});
/// Answers and the best-of-both work bound for reachability queries.
SuiteReport run_robust(const PartialWorkload& w, const RunOptions& options = {});
/// Woodbury and embedding identities on random instances of size <= max_n.
SuiteReport run_identities(std::size_t trials, std::size_t max_n, std::uint64_t seed);

/// Prediction reversed against the realized order.
PartialWorkload adversarial_partial_workload(std::size_t n, std::size_t m, DynamicMode mode,
                                             std::uint64_t seed);

// ---- randomised suites by name ----

struct SuiteConfig {
  std::uint64_t seed = 1;
  std::optional<std::size_t> n;
  std::optional<std::size_t> trials;
  std::optional<GraphProblem> problem;  // graphs suite: one problem or all
  RunOptions run;
};

const std::vector<std::string>& suite_names();
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

// ---- counted-work sweeps ----

/// Mean counted work of reachability queries on one workload.
double mean_query_work(const PartialConfig& config);
/// Mean counted work per perform_update at a fixed queue position.
double mean_perform_work(std::size_t n, std::size_t eta, std::size_t performs, std::uint64_t seed);

struct Fit {
  double intercept = 0.0;
  double slope = 0.0;
};
Fit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);
/// Slope of log y against log x; points with non-positive values are skipped.
double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct SweepPoint {
  double x = 0.0;
  double mean_work = 0.0;
};

struct SweepResult {
  std::string parameter;
  std::vector<SweepPoint> points;
  std::vector<CsvRow> rows;
  double exponent = 0.0;
};

/// Bench suites: partial (w), inverse (eta), omv (rate), apsp-pred (early).
SweepResult run_sweep(const std::string& suite, const std::string& parameter,
                      const std::vector<double>& values, const SuiteConfig& config);

}  // namespace dynoracle::harness
