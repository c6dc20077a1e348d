// dynoracle: verify, bench and generate workloads from the command line.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dynoracle/harness/oumv.hpp"
#include "dynoracle/harness/scripts.hpp"
#include "dynoracle/harness/suites.hpp"

namespace {

using namespace dynoracle;
using namespace dynoracle::harness;

struct Common {
  std::uint64_t seed = 1;
  std::size_t n = 0;
  std::size_t trials = 0;
  std::string problem;
  bool wall_time = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed")->envname("DYNORACLE_SEED");
  cmd->add_option("--n", c.n, "Instance size");
  cmd->add_option("--trials", c.trials, "Number of random instances");
  cmd->add_option("--problem", c.problem, "Graph problem: triangle, cycle, ssr, scc, matching, st_paths");
  cmd->add_flag("--wall-time", c.wall_time, "Fill the wall_ns CSV column");
}

SuiteConfig to_config(const Common& c) {
  SuiteConfig config;
  config.seed = c.seed;
  if (c.n > 0) config.n = c.n;
  if (c.trials > 0) config.trials = c.trials;
  if (!c.problem.empty()) {
    config.problem = parse_problem(c.problem);
    if (!config.problem) throw CLI::ValidationError("--problem", "unknown problem '" + c.problem + "'");
  }
  config.run.wall_time = c.wall_time;
  return config;
}

void write_rows(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_csv(out, rows);
}

int report(const SuiteReport& rep) {
  std::cout << rep.name << ": " << rep.operations << " operations, " << rep.checks << " checks, "
            << rep.failures << " failures\n";
  for (const auto& note : rep.notes) std::cout << "  " << note << '\n';
  std::cout << (rep.ok() ? "OK" : "FAILED") << '\n';
  return rep.ok() ? 0 : 1;
}

SuiteReport verify_file(const std::string& suite, const std::string& path, const SuiteConfig& config) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  if (suite == "partial") return run_partial(parse_partial(in), config.run);
  if (suite == "robust") return run_robust(parse_partial(in), config.run);
  if (suite == "apsp-pred") return run_apsp(parse_apsp_script(in), config.run);
  if (suite == "graphs") {
    if (!config.problem) throw std::runtime_error("graphs --input needs --problem");
    GraphOptions options;
    options.seed = config.seed | 1;
    return run_graph(*config.problem, parse_graph_script(in), options, config.run);
  }
  throw std::runtime_error("suite '" + suite + "' does not read input files");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic graph and matrix structures with predictions"};
  app.require_subcommand(1);

  Common common;

  std::string verify_suite, input, verify_csv;
  auto* verify = app.add_subcommand("verify", "Run a suite against brute-force oracles");
  verify->add_option("suite", verify_suite, "Suite name")->required();
  verify->add_option("--input", input, "Replay a workload file instead of random instances");
  verify->add_option("--csv", verify_csv, "Write per-operation CSV");
  add_common(verify, common);

  std::string bench_suite, sweep, bench_csv;
  auto* bench = app.add_subcommand("bench", "Counted-work sweep over one parameter");
  bench->add_option("suite", bench_suite, "partial, inverse, omv or apsp-pred")->required();
  bench->add_option("--sweep", sweep, "param=v1,v2,...")->required();
  bench->add_option("--csv", bench_csv, "Output CSV")->required();
  add_common(bench, common);

  std::string workload, out_path, mode = "incremental", errors = "linf:2";
  double eps = 1.0;
  auto* generate = app.add_subcommand("generate", "Write a random workload file");
  generate->add_option("workload", workload, "partial, oumv, graphs or apsp-pred")->required();
  generate->add_option("--out", out_path, "Output file")->required();
  generate->add_option("--mode", mode, "incremental or decremental");
  generate->add_option("--errors", errors, "exact, linf:W, swap:K or unpredicted:Q");
  generate->add_option("--eps", eps, "Distance approximation (0 for reachability only)");
  add_common(generate, common);

  CLI11_PARSE(app, argc, argv);

  try {
    const SuiteConfig config = to_config(common);

    if (verify->parsed()) {
      SuiteConfig c = config;
      c.run.record_rows = !verify_csv.empty();
      const SuiteReport rep = input.empty() ? run_suite(verify_suite, c) : verify_file(verify_suite, input, c);
      if (!verify_csv.empty()) write_rows(verify_csv, rep.rows);
      return report(rep);
    }

    if (bench->parsed()) {
      const auto eq = sweep.find('=');
      if (eq == std::string::npos) throw std::runtime_error("--sweep expects param=list");
      SuiteConfig c = config;
      c.run.record_rows = true;
      const SweepResult res = run_sweep(bench_suite, sweep.substr(0, eq), parse_list(sweep.substr(eq + 1)), c);
      write_rows(bench_csv, res.rows);
      std::cout << res.parameter << ",mean_work\n";
      for (const auto& p : res.points) {
        std::cout << std::defaultfloat << std::setprecision(6) << p.x << ',' << std::fixed << std::setprecision(1)
                  << p.mean_work << '\n';
      }
      std::cout << std::defaultfloat << "fitted exponent: " << std::setprecision(4) << res.exponent << '\n';
      return 0;
    }

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    const std::size_t n = common.n;
    if (workload == "partial") {
      PartialConfig pc;
      pc.n = n > 0 ? n : 16;
      pc.m = 3 * pc.n;
      if (mode == "decremental" || mode == "dec") {
        pc.mode = DynamicMode::kDecremental;
      } else if (mode != "incremental" && mode != "inc") {
        throw std::runtime_error("unknown mode '" + mode + "'");
      }
      pc.eps = eps > 0 ? eps : std::numeric_limits<double>::infinity();
      const auto model = parse_error_model(errors);
      if (!model) throw std::runtime_error("unknown error model '" + errors + "'");
      pc.errors = *model;
      pc.seed = common.seed;
      write_partial(out, random_partial_workload(pc));
    } else if (workload == "oumv") {
      const std::size_t size = n > 0 ? n : 8;
      std::mt19937_64 rng(common.seed);
      std::bernoulli_distribution coin(0.3);
      BoolMatrix m(size);
      std::vector<OumvQuery> queries(size, {BoolVector(size), BoolVector(size)});
      for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) m.set(i, j, coin(rng));
      for (auto& q : queries)
        for (std::size_t j = 0; j < size; ++j) {
          q.u.set(j, coin(rng));
          q.v.set(j, coin(rng));
        }
      const bool dec = mode == "decremental" || mode == "dec";
      write_partial(out, oumv_workload(m, queries, dec ? DynamicMode::kDecremental : DynamicMode::kIncremental));
    } else if (workload == "graphs") {
      const GraphProblem p = config.problem.value_or(GraphProblem::kReachable);
      const std::size_t size = n > 0 ? n : 10;
      write_graph_script(out, random_graph_workload(p, size, 2 * size, common.seed));
    } else if (workload == "apsp-pred") {
      ApspConfig ac;
      ac.max_live = n > 0 ? n : 16;
      ac.operations = 8 * ac.max_live;
      ac.seed = common.seed;
      write_apsp_script(out, random_apsp_script(ac));
    } else {
      throw std::runtime_error("unknown workload '" + workload + "'");
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
