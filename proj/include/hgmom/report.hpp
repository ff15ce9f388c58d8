#pragma once

#include "hgmom/model.hpp"
#include "hgmom/simulation.hpp"
#include "hgmom/walk_oracle.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace hgmom {

using Json = nlohmann::json;

// All JSON documents carry a top-level "schema": 1 field.  Rationals are
// serialized as "numerator/denominator" strings; companion decimals are
// plain JSON doubles and re-parse bit-identically.

Json moment_table_json(const ModelParams& params, const std::string& dist,
                       const std::vector<Rat>& moments);

// Header row "k,exact,decimal"; decimals printed with max_digits10.
std::string moment_table_csv(const std::vector<Rat>& moments);

struct OracleRow {
  int k = 0;
  Rat recurrence;
  Rat oracle;
  bool match = false;
};

Json oracle_report_json(const ModelParams& params, const std::string& dist,
                        const std::vector<OracleRow>& rows);

Json walk_class_json(const WalkClass& w, const Rat& weight);

Json sim_run_json(const SimRun& run);

struct CompareRow {
  int k = 0;
  Rat recurrence;
  Rat oracle;
  bool match = false;
  bool has_mc = false;
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double z = 0.0;
};

Json compare_report_json(const SimConfig& config,
                         const std::vector<CompareRow>& rows, bool pass);

Json decay_study_json(const SimConfig& base, const std::vector<int>& grid,
                      const DecayStudy& study);

// Two whitespace-separated columns: bin center, mass.
std::string histogram_text(const std::vector<std::pair<double, double>>& bins);

std::string format_double(double value);

}  // namespace hgmom
