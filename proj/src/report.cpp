#include "hgmom/report.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

namespace hgmom {
namespace {

Json config_json(const SimConfig& c) {
  return Json{{"N", c.N},
              {"q", c.q},
              {"p", to_fraction_string(c.p)},
              {"dist", c.dist.describe()},
              {"trials", c.trials},
              {"kmax", c.k_max},
              {"seed", c.seed}};
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*g",
                std::numeric_limits<double>::max_digits10, value);
  return buffer;
}

Json moment_table_json(const ModelParams& params, const std::string& dist,
                       const std::vector<Rat>& moments) {
  Json rows = Json::array();
  for (std::size_t k = 0; k < moments.size(); ++k) {
    rows.push_back(Json{{"k", k},
                        {"exact", to_fraction_string(moments[k])},
                        {"decimal", to_double(moments[k])}});
  }
  return Json{{"schema", 1},
              {"kind", "moments"},
              {"config", Json{{"q", params.q},
                              {"p", to_fraction_string(params.p)},
                              {"dist", dist},
                              {"kmax", moments.empty() ? 0 : moments.size() - 1}}},
              {"moments", rows}};
}

std::string moment_table_csv(const std::vector<Rat>& moments) {
  std::ostringstream out;
  out << "k,exact,decimal\n";
  for (std::size_t k = 0; k < moments.size(); ++k)
    out << k << ',' << to_fraction_string(moments[k]) << ','
        << format_double(to_double(moments[k])) << '\n';
  return out.str();
}

Json oracle_report_json(const ModelParams& params, const std::string& dist,
                        const std::vector<OracleRow>& rows) {
  Json out_rows = Json::array();
  bool pass = true;
  for (const auto& row : rows) {
    pass = pass && row.match;
    out_rows.push_back(Json{{"k", row.k},
                            {"recurrence", to_fraction_string(row.recurrence)},
                            {"oracle", to_fraction_string(row.oracle)},
                            {"match", row.match}});
  }
  return Json{{"schema", 1},
              {"kind", "oracle"},
              {"config", Json{{"q", params.q},
                              {"p", to_fraction_string(params.p)},
                              {"dist", dist}}},
              {"rows", out_rows},
              {"pass", pass}};
}

Json walk_class_json(const WalkClass& w, const Rat& weight) {
  Json steps = Json::array();
  for (const auto& s : w.steps) steps.push_back(Json::array({s.from, s.edge, s.to}));
  Json edges = Json::array();
  for (std::size_t i = 0; i < w.edges.size(); ++i)
    edges.push_back(Json{{"id", i},
                         {"vertices", w.edges[i].visited},
                         {"anonymous", w.edges[i].anonymous},
                         {"traversals", w.edges[i].traversals}});
  Json overlap = Json::array();
  for (const auto& [ids, size] : w.overlap)
    overlap.push_back(Json{{"edges", ids}, {"size", size}});
  return Json{{"schema", 1},
              {"kind", "walk-class"},
              {"q", w.q},
              {"length", w.length()},
              {"steps", steps},
              {"visited", w.visited_count},
              {"edges", edges},
              {"overlap", overlap},
              {"root_departures", w.root_departures()},
              {"essential", is_essential(w)},
              {"weight", to_fraction_string(weight)},
              {"weight_decimal", to_double(weight)}};
}

Json sim_run_json(const SimRun& run) {
  Json trials = Json::array();
  for (std::size_t t = 0; t < run.trial_moments.size(); ++t)
    trials.push_back(Json{{"trial", t},
                          {"seed", run.trial_seeds[t]},
                          {"moments", run.trial_moments[t]}});
  Json aggregate{{"mean", run.mean}, {"se", run.se}};
  if (run.has_correlators) aggregate["correlators"] = run.correlators;
  return Json{{"schema", 1},
              {"kind", "simulate"},
              {"config", config_json(run.config)},
              {"trials", trials},
              {"aggregate", aggregate}};
}

Json compare_report_json(const SimConfig& config,
                         const std::vector<CompareRow>& rows, bool pass) {
  Json out_rows = Json::array();
  for (const auto& row : rows) {
    Json r{{"k", row.k},
           {"recurrence", to_fraction_string(row.recurrence)},
           {"recurrence_decimal", to_double(row.recurrence)},
           {"oracle", to_fraction_string(row.oracle)},
           {"match", row.match}};
    if (row.has_mc) {
      r["mc_mean"] = row.mc_mean;
      r["mc_se"] = row.mc_se;
      r["z"] = row.z;
    }
    out_rows.push_back(std::move(r));
  }
  return Json{{"schema", 1},
              {"kind", "compare"},
              {"config", config_json(config)},
              {"rows", out_rows},
              {"pass", pass}};
}

Json decay_study_json(const SimConfig& base, const std::vector<int>& grid,
                      const DecayStudy& study) {
  Json points = Json::array();
  for (const auto& point : study.points)
    points.push_back(Json{{"N", point.N},
                          {"correlator", point.correlator},
                          {"se_boot", point.se_boot}});
  Json fit{{"degenerate", study.degenerate}};
  if (!study.degenerate) {
    fit["slope"] = study.slope;
    fit["intercept"] = study.intercept;
    fit["slope_lo"] = study.slope_lo;
    fit["slope_hi"] = study.slope_hi;
  }
  Json cfg = config_json(base);
  cfg["grid"] = grid;
  cfg["k"] = study.k;
  cfg["m"] = study.m;
  return Json{{"schema", 1},
              {"kind", "correlators"},
              {"config", cfg},
              {"points", points},
              {"fit", fit}};
}

std::string histogram_text(const std::vector<std::pair<double, double>>& bins) {
  std::ostringstream out;
  for (const auto& [center, mass] : bins)
    out << format_double(center) << ' ' << format_double(mass) << '\n';
  return out.str();
}

}  // namespace hgmom
