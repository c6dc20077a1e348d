// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dynoracle/harness/oumv.hpp"
#include "dynoracle/harness/suites.hpp"

using namespace dynoracle;
using namespace dynoracle::harness;

namespace {

// Pinned tolerances.
constexpr double kQueryExponentLow = 1.5;
constexpr double kQueryExponentHigh = 2.3;
constexpr double kUpdateExponentLow = 0.8;
constexpr double kUpdateExponentHigh = 1.2;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string summary(const SuiteReport& rep) {
  std::ostringstream out;
  out << rep.operations << " ops, " << rep.checks << " checks, " << rep.failures << " failures";
  if (!rep.notes.empty()) out << "; first: " << rep.notes.front();
  return out.str();
}

Verdict from_report(const SuiteReport& rep) { return {rep.ok() && rep.checks > 0, summary(rep)}; }

Verdict omv_exactness() {
  const std::size_t n = 64;
  const ErrorModel models[] = {ErrorModel::exact(), ErrorModel::linf_window(4), ErrorModel::swap_count(16),
                               ErrorModel::unpredicted_rate(0.1), ErrorModel::unpredicted_rate(0.5)};
  std::mt19937_64 seeds(101);
  SuiteReport total;
  for (std::size_t s = 0; s < 50; ++s) total.merge(run_omv(random_omv_session(n, n, models[s % 5], seeds())));
  return from_report(total);
}

Verdict partial_dynamic() {
  const ErrorModel models[] = {ErrorModel::exact(), ErrorModel::linf_window(2), ErrorModel::linf_window(8)};
  const double eps_values[] = {0.5, 1.0};
  std::mt19937_64 seeds(202);
  SuiteReport total;
  for (DynamicMode mode : {DynamicMode::kIncremental, DynamicMode::kDecremental}) {
    for (std::size_t t = 0; t < 200; ++t) {
      PartialConfig pc;
      pc.n = 4 + t % 13;
      pc.m = 3 * pc.n;
      pc.mode = mode;
      pc.eps = eps_values[t % 2];
      pc.errors = models[(t / 2) % 3];
      pc.seed = seeds();
      total.merge(run_partial(random_partial_workload(pc)));
    }
  }
  return from_report(total);
}

// Queries are placed where the realized order is furthest from the prediction,
// one per window of w + 1 updates. The w = 0 cost (no disorder) is the
// additive floor every query pays and is subtracted before fitting.
Verdict query_trend() {
  const std::vector<std::size_t> windows{1, 2, 4, 8, 16};
  const std::size_t seeds_per_point = 4;
  auto mean_at = [&](std::size_t w) {
    double sum = 0.0;
    std::size_t count = 0;
    for (DynamicMode mode : {DynamicMode::kIncremental, DynamicMode::kDecremental}) {
      std::mt19937_64 seeds(303);
      for (std::size_t s = 0; s < seeds_per_point; ++s) {
        PartialConfig pc;
        pc.n = 64;
        pc.m = 16 * pc.n;
        pc.mode = mode;
        pc.errors = ErrorModel::linf_window(w);
        pc.placement = QueryPlacement::kPeakDisorder;
        pc.window = w;
        pc.seed = seeds();
        sum += mean_query_work(pc);
        ++count;
      }
    }
    return sum / static_cast<double>(count);
  };
  const double floor = mean_at(0);
  std::vector<double> xs, raw, excess;
  for (std::size_t w : windows) {
    const double mean = mean_at(w);
    xs.push_back(static_cast<double>(w));
    raw.push_back(mean);
    excess.push_back(mean - floor);
  }
  const double exponent = loglog_slope(xs, excess);
  std::ostringstream out;
  out.precision(4);
  out << "exponent " << exponent << " in [" << kQueryExponentLow << ", " << kQueryExponentHigh
      << "]; raw exponent " << loglog_slope(xs, raw) << ", floor " << floor << "; mean work";
  for (double y : raw) out << ' ' << y;
  return {exponent >= kQueryExponentLow && exponent <= kQueryExponentHigh, out.str()};
}

Verdict oumv_faithfulness() {
  SuiteReport total;
  std::uint64_t seed = 404;
  for (std::size_t n : {2u, 5u, 8u, 16u, 32u}) {
    SuiteConfig config;
    config.seed = seed++;
    config.n = n;
    config.trials = 4;  // alternates incremental and decremental
    total.merge(run_suite("oumv", config));
  }
  // All-zero M: every answer must be 0.
  const std::size_t n = 12;
  std::mt19937_64 rng(405);
  std::vector<OumvQuery> queries(n, {BoolVector(n), BoolVector(n)});
  for (auto& q : queries)
    for (std::size_t j = 0; j < n; ++j) {
      q.u.set(j, rng() & 1);
      q.v.set(j, rng() & 1);
    }
  for (DynamicMode mode : {DynamicMode::kIncremental, DynamicMode::kDecremental}) {
    const PartialWorkload w = oumv_workload(BoolMatrix(n), queries, mode);
    SuiteReport rep = run_partial(w);
    PartiallyDynamic pd(PredictedEdgeSequence(w.n, w.predicted), w.eps, w.mode);
    for (const auto& op : w.script) {
      if (op.kind == PartialOp::Kind::kUpdate) {
        pd.apply_update(op.edge);
      } else {
        rep.check(!pd.query_reachable(op.edge.from, op.edge.to).reachable, "zero matrix answered 1");
      }
    }
    rep.check(realized_eta_inf(w) <= 2 * n, "eta_inf above 2n");
    total.merge(std::move(rep));
  }
  return from_report(total);
}

Verdict inverse_exactness() {
  std::mt19937_64 seeds(505);
  SuiteReport total;
  for (std::size_t s = 0; s < 100; ++s) {
    InverseConfig ic;
    ic.n = 32;
    ic.steps = 300;
    ic.etas = {1, 4, 16, ic.n / 2};
    ic.unpredicted = 0.05;
    ic.seed = seeds();
    total.merge(run_inverse(random_inverse_workload(ic), 16));
  }
  return from_report(total);
}

// Work per perform_update at a fixed queue position, fitted as a + b * eta.
// Positions up to n/2 are swept; the exponent is that of the part above the
// fitted intercept.
Verdict update_trend() {
  const std::size_t n = 64;
  const std::vector<std::size_t> etas{1, 2, 4, 8, 16, 32};
  std::vector<double> xs, ys;
  for (std::size_t eta : etas) {
    xs.push_back(static_cast<double>(eta));
    ys.push_back(mean_perform_work(n, eta, 10 * n, 606));
  }
  const Fit fit = least_squares(xs, ys);
  std::vector<double> above;
  for (double y : ys) above.push_back(y - fit.intercept);
  const double exponent = loglog_slope(xs, above);
  std::ostringstream out;
  out.precision(6);
  out << "fit " << fit.intercept << " + " << fit.slope << " * eta; exponent ";
  out.precision(4);
  out << exponent << " in [" << kUpdateExponentLow << ", " << kUpdateExponentHigh << "]; mean work";
  out.precision(7);
  for (double y : ys) out << ' ' << y;
  return {fit.slope > 0 && exponent >= kUpdateExponentLow && exponent <= kUpdateExponentHigh, out.str()};
}

Verdict graph_reductions() {
  SuiteConfig config;
  config.seed = 707;
  config.n = 16;  // matching is capped at 12
  config.trials = 100;
  return from_report(run_suite("graphs", config));
}

Verdict identities() { return from_report(run_identities(500, 8, 808)); }

Verdict predicted_deletions() {
  std::mt19937_64 seeds(909);
  SuiteReport total;
  for (std::size_t s = 0; s < 100; ++s) {
    ApspConfig ac;
    ac.max_live = 8 + s % 17;  // 8..24
    ac.operations = 8 * ac.max_live;
    ac.early_deletion = 0.15;
    ac.seed = seeds();
    total.merge(run_apsp(random_apsp_script(ac)));
  }
  return from_report(total);
}

Verdict robustness() {
  std::mt19937_64 seeds(1010);
  SuiteReport total;
  for (std::size_t t = 0; t < 20; ++t) {
    const std::size_t n = 8 + 4 * (t % 5);
    const DynamicMode mode = t % 2 == 0 ? DynamicMode::kIncremental : DynamicMode::kDecremental;
    total.merge(run_robust(adversarial_partial_workload(n, 4 * n, mode, seeds())));
  }
  return from_report(total);
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
      {"omv exactness and work accounting", omv_exactness},
      {"partially dynamic reachability and distances", partial_dynamic},
      {"query work grows quadratically with disorder", query_trend},
      {"oumv reduction faithfulness", oumv_faithfulness},
      {"matrix inverse with predicted updates", inverse_exactness},
      {"update work affine in queue position", update_trend},
      {"graph problems under vertex updates", graph_reductions},
      {"woodbury and embedding identities", identities},
      {"apsp with predicted deletions", predicted_deletions},
      {"best-of-both combination", robustness},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::printf("criterion %zu: %s  %s (%s) [%.1fs]\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].name,
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
