// Command-line front end: computes limiting moments, cross-validates the
// recurrence against walk enumeration, runs Monte Carlo experiments, and
// emits machine-readable reports.
//
// Exit codes: 0 success, 2 configuration error, 3 enumeration cap exceeded,
// 4 comparison failure.

#include <CLI11.hpp>

#include "hgmom/moment_core.hpp"
#include "hgmom/report.hpp"
#include "hgmom/simulation.hpp"
#include "hgmom/walk_oracle.hpp"
#include "hgmom/weights.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace hgmom;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCap = 3;
constexpr int kExitCompare = 4;
constexpr int kDefaultCap = 6;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("HGMOM_SEED")) {
    char* end = nullptr;
    const auto value = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return value;
    throw std::invalid_argument("HGMOM_SEED is not an unsigned integer");
  }
  return 1;
}

void write_text(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file: " + path);
  file << content;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(std::stoi(item));
  return values;
}

struct Options {
  std::string p = "1";
  int q = 3;
  std::string dist = "const:1";
  int k_max = 6;
  std::string out = "-";
  std::string format = "json";
  int cap = kDefaultCap;
  int unsafe_cap = 0;
  std::string dump_classes;
  int N = 200;
  int trials = 200;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int workers = 1;
  std::string hist;
  int bins = 60;
  std::string range;
  std::string grid = "50,100,200,400";
  int cor_k = 2;
  int cor_m = 2;
  int bootstrap = 200;
};

int effective_cap(const Options& opt) {
  return opt.unsafe_cap > 0 ? opt.unsafe_cap : opt.cap;
}

SimConfig make_sim_config(const Options& opt) {
  SimConfig cfg;
  cfg.N = opt.N;
  cfg.q = opt.q;
  cfg.p = parse_rational(opt.p);
  cfg.dist = WeightDistribution::parse(opt.dist);
  cfg.trials = opt.trials;
  cfg.k_max = opt.k_max;
  cfg.seed = opt.seed_given ? opt.seed : default_seed();
  cfg.workers = opt.workers;
  return cfg;
}

int run_moments(const Options& opt) {
  const ModelParams params{parse_rational(opt.p), opt.q};
  params.validate();
  const auto dist = WeightDistribution::parse(opt.dist);
  MomentEngine engine(params, dist.exact_moments(opt.k_max));
  const auto moments = engine.moments(opt.k_max);
  if (opt.format == "csv") {
    write_text(opt.out, moment_table_csv(moments));
  } else if (opt.format == "json") {
    write_text(opt.out,
               moment_table_json(params, dist.describe(), moments).dump(2) + "\n");
  } else {
    throw std::invalid_argument("unknown output format: " + opt.format);
  }
  return kExitOk;
}

int run_oracle(const Options& opt) {
  const ModelParams params{parse_rational(opt.p), opt.q};
  params.validate();
  if (opt.k_max > effective_cap(opt))
    throw std::length_error("kmax " + std::to_string(opt.k_max) +
                            " exceeds the enumeration cap " +
                            std::to_string(effective_cap(opt)) +
                            " (raise it explicitly with --unsafe-cap)");
  const auto dist = WeightDistribution::parse(opt.dist);
  const auto weights = dist.exact_moments(opt.k_max);
  MomentEngine engine(params, weights);
  const auto moments = engine.moments(opt.k_max);

  std::ofstream dump;
  if (!opt.dump_classes.empty()) {
    dump.open(opt.dump_classes, std::ios::binary);
    if (!dump)
      throw std::invalid_argument("cannot open dump file: " + opt.dump_classes);
  }

  std::vector<OracleRow> rows;
  for (int k = 0; k <= opt.k_max; ++k) {
    Rat total = 0;
    enumerate_walk_classes(k, params.q, true, [&](const WalkClass& w) {
      const Rat weight = limiting_class_weight(w, params, weights);
      total += weight;
      if (dump.is_open()) dump << walk_class_json(w, weight).dump() << "\n";
    });
    rows.push_back(OracleRow{k, moments[static_cast<std::size_t>(k)], total,
                             moments[static_cast<std::size_t>(k)] == total});
  }
  const auto report = oracle_report_json(params, dist.describe(), rows);
  write_text(opt.out, report.dump(2) + "\n");
  return report["pass"].get<bool>() ? kExitOk : kExitCompare;
}

int run_simulate(const Options& opt) {
  SimConfig cfg = make_sim_config(opt);
  cfg.with_eigenvalues = !opt.hist.empty();
  const SimRun run = run_trials(cfg);
  write_text(opt.out, sim_run_json(run).dump(2) + "\n");
  if (!opt.hist.empty()) {
    HistogramSpec spec;
    spec.bins = opt.bins;
    if (!opt.range.empty()) {
      const auto colon = opt.range.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("range must look like lo:hi");
      spec.has_range = true;
      spec.lo = std::stod(opt.range.substr(0, colon));
      spec.hi = std::stod(opt.range.substr(colon + 1));
      if (spec.lo >= spec.hi) throw std::invalid_argument("empty histogram range");
    }
    write_text(opt.hist,
               histogram_text(histogram_from_values(run.pooled_eigenvalues, spec)));
  }
  return kExitOk;
}

int run_correlators(const Options& opt) {
  SimConfig cfg = make_sim_config(opt);
  const auto grid = parse_int_list(opt.grid);
  const auto study =
      correlator_decay_study(cfg, grid, opt.cor_k, opt.cor_m, opt.bootstrap);
  if (study.degenerate)
    std::cerr << "warning: correlator estimates are statistically degenerate; "
                 "no slope fit reported\n";
  write_text(opt.out, decay_study_json(cfg, grid, study).dump(2) + "\n");
  return kExitOk;
}

int run_compare(const Options& opt) {
  if (opt.k_max > effective_cap(opt))
    throw std::length_error("kmax " + std::to_string(opt.k_max) +
                            " exceeds the enumeration cap " +
                            std::to_string(effective_cap(opt)) +
                            " (raise it explicitly with --unsafe-cap)");
  const ModelParams params{parse_rational(opt.p), opt.q};
  params.validate();
  const auto dist = WeightDistribution::parse(opt.dist);
  const auto weights = dist.exact_moments(opt.k_max);  // validates the sequence
  SimConfig cfg = make_sim_config(opt);

  MomentEngine engine(params, weights);
  const auto moments = engine.moments(opt.k_max);
  const SimRun run = run_trials(cfg);

  bool pass = true;
  std::vector<CompareRow> rows;
  for (int k = 0; k <= opt.k_max; ++k) {
    CompareRow row;
    row.k = k;
    row.recurrence = moments[static_cast<std::size_t>(k)];
    row.oracle = oracle_moment(k, params, weights);
    row.match = row.recurrence == row.oracle;
    if (k >= 1) {
      row.has_mc = true;
      row.mc_mean = run.mean[static_cast<std::size_t>(k - 1)];
      row.mc_se = run.se[static_cast<std::size_t>(k - 1)];
      const double dev = row.mc_mean - to_double(row.recurrence);
      row.z = row.mc_se > 0 ? dev / row.mc_se : (dev == 0.0 ? 0.0 : INFINITY);
      pass = pass && std::abs(row.z) <= 3.0;
    }
    pass = pass && row.match;
    rows.push_back(row);
  }
  write_text(opt.out, compare_report_json(cfg, rows, pass).dump(2) + "\n");
  return pass ? kExitOk : kExitCompare;
}

void add_model_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--q", opt.q, "hyperedge size (vertices per edge)")
      ->capture_default_str();
  cmd->add_option("--p", opt.p, "sparsity parameter (rational)")
      ->capture_default_str();
  cmd->add_option("--dist", opt.dist,
                  "weight law: const:c | sign | twopoint:a,b,pi | gauss:sigma "
                  "| moments:x1,x2,...")
      ->capture_default_str();
  cmd->add_option("--kmax", opt.k_max, "highest moment order")
      ->capture_default_str();
  cmd->add_option("--out", opt.out, "output path ('-' for stdout)")
      ->capture_default_str();
}

void add_sim_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--N", opt.N, "matrix size")->capture_default_str();
  cmd->add_option("--trials", opt.trials, "number of Monte Carlo trials")
      ->capture_default_str();
  cmd->add_option("--seed", opt.seed, "master seed (default $HGMOM_SEED or 1)")
      ->each([&opt](const std::string&) { opt.seed_given = true; });
  cmd->add_option("--workers", opt.workers, "worker threads")
      ->capture_default_str();
}

void add_cap_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--cap", opt.cap, "walk enumeration cap")->capture_default_str();
  cmd->add_option("--unsafe-cap", opt.unsafe_cap,
                  "acknowledge long enumerations by raising the cap");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment engine and Monte Carlo laboratory for sparse random "
               "weighted uniform hypergraph spectra"};
  app.require_subcommand(1);

  Options opt;

  auto* moments_cmd =
      app.add_subcommand("moments", "limiting moments via the recurrence");
  add_model_flags(moments_cmd, opt);
  moments_cmd->add_option("--format", opt.format, "json or csv")
      ->capture_default_str();

  auto* oracle_cmd = app.add_subcommand(
      "oracle", "enumerate walk classes and cross-check the recurrence");
  add_model_flags(oracle_cmd, opt);
  add_cap_flags(oracle_cmd, opt);
  oracle_cmd->add_option("--dump-classes", opt.dump_classes,
                         "write enumerated classes as JSON lines");

  auto* simulate_cmd =
      app.add_subcommand("simulate", "Monte Carlo trace-power moments");
  add_model_flags(simulate_cmd, opt);
  add_sim_flags(simulate_cmd, opt);
  simulate_cmd->add_option("--hist", opt.hist,
                           "write pooled eigenvalue histogram to this file");
  simulate_cmd->add_option("--bins", opt.bins, "histogram bins")
      ->capture_default_str();
  simulate_cmd->add_option("--range", opt.range, "histogram range lo:hi");

  auto* correlators_cmd = app.add_subcommand(
      "correlators", "correlator decay study across a size grid");
  add_model_flags(correlators_cmd, opt);
  add_sim_flags(correlators_cmd, opt);
  correlators_cmd->add_option("--N-grid", opt.grid, "comma-separated sizes")
      ->capture_default_str();
  correlators_cmd->add_option("--k", opt.cor_k, "first correlator order")
      ->capture_default_str();
  correlators_cmd->add_option("--m", opt.cor_m, "second correlator order")
      ->capture_default_str();
  correlators_cmd->add_option("--bootstrap", opt.bootstrap, "bootstrap rounds")
      ->capture_default_str();

  auto* compare_cmd = app.add_subcommand(
      "compare", "recurrence vs enumeration vs Monte Carlo at shared parameters");
  add_model_flags(compare_cmd, opt);
  add_sim_flags(compare_cmd, opt);
  add_cap_flags(compare_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (moments_cmd->parsed()) return run_moments(opt);
    if (oracle_cmd->parsed()) return run_oracle(opt);
    if (simulate_cmd->parsed()) return run_simulate(opt);
    if (correlators_cmd->parsed()) return run_correlators(opt);
    if (compare_cmd->parsed()) return run_compare(opt);
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
