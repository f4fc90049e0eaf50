#pragma once

// CSV and JSON encodings of the library's result types.

#include "metasense/empirical.hpp"
#include "metasense/scenario.hpp"
#include "metasense/simulator.hpp"
#include "metasense/team_accuracy.hpp"

#include "json.hpp"

#include <iosfwd>
#include <span>

namespace metasense {

// Header `theta_m,auc,combined`, one row per cell, six decimals.
void write_grid_csv(std::ostream& out, std::span<const GridCell> cells);

// Header `y_h,c_h,y_m,c_m,action,y_final`; action is H or M.
void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records);

void to_json(nlohmann::json& j, const CombinedAccuracy& c);
void to_json(nlohmann::json& j, const InversionPair& p);
void to_json(nlohmann::json& j, const ComplementarityReport& r);
void to_json(nlohmann::json& j, const SimSummary& s);
void to_json(nlohmann::json& j, const EstimateReport& r);

}  // namespace metasense
