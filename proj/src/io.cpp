#include "metasense/io.hpp"

#include <cstdio>
#include <ostream>

namespace metasense {

namespace {

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

nlohmann::json optional_number(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void write_grid_csv(std::ostream& out, std::span<const GridCell> cells) {
    out << "theta_m,auc,combined\n";
    for (const auto& c : cells) {
        out << fixed6(c.theta_m) << ',' << fixed6(c.auc) << ',' << fixed6(c.combined) << '\n';
    }
}

void write_trials_csv(std::ostream& out, std::span<const TrialRecord> records) {
    out << "y_h,c_h,y_m,c_m,action,y_final\n";
    char buf[128];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g,%s,%d\n", r.y_h ? 1 : 0, r.c_h,
                      r.y_m ? 1 : 0, r.c_m, r.action == Action::human ? "H" : "M",
                      r.y_final ? 1 : 0);
        out << buf;
    }
}

void to_json(nlohmann::json& j, const CombinedAccuracy& c) {
    j = {{"value", c.value}, {"method", to_string(c.method)}, {"error_bound", c.error_bound}};
}

void to_json(nlohmann::json& j, const InversionPair& p) {
    j = {{"model_a", {{"theta_m", p.model_a.theta_m}, {"auc", p.model_a.auc}}},
         {"model_b", {{"theta_m", p.model_b.theta_m}, {"auc", p.model_b.auc}}},
         {"combined_a", p.combined_a},
         {"combined_b", p.combined_b},
         {"margin", p.margin}};
}

void to_json(nlohmann::json& j, const ComplementarityReport& r) {
    j = {{"joint", r.joint},
         {"human_alone", r.human_alone},
         {"ai_alone", r.ai_alone},
         {"incidence", r.incidence},
         {"magnitude", r.magnitude}};
}

void to_json(nlohmann::json& j, const SimSummary& s) {
    j = {{"label", s.label},
         {"n_trials", s.n_trials},
         {"accuracy_before", s.accuracy_before},
         {"accuracy_after", s.accuracy_after},
         {"ai_accuracy_observed", s.ai_accuracy_observed},
         {"ai_auc_observed", optional_number(s.ai_auc_observed)},
         {"reliance_rate", s.reliance_rate},
         {"standard_error", s.standard_error}};
}

void to_json(nlohmann::json& j, const EstimateReport& r) {
    j = {{"source_label", r.source_label},
         {"n", r.n},
         {"n_correct", r.n_correct},
         {"accuracy", r.accuracy},
         {"auc_hat", optional_number(r.auc_hat)},
         {"d_hat", optional_number(r.d_hat)},
         {"clamp_warnings", r.clamp_warnings},
         {"flags", r.flags}};
}

}  // namespace metasense
