#pragma once

// Cross-checks of the analytic formulas against their numerical references,
// swept over documented parameter grids.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace metasense {

// Grid on which the bivariate-normal approximation is checked against
// quadrature. Every axis is evenly spaced, mu_h in logit space.
struct ApproximationGrid {
    double mu_lo_confidence = 0.2;  // mu_h from logit(0.2) ...
    double mu_hi_confidence = 0.9;  // ... to logit(0.9)
    double sigma_lo = 0.1;
    double sigma_hi = 1.5;
    double theta_lo = 0.3;
    double theta_hi = 0.9;
    double auc_lo = 0.55;
    double auc_hi = 0.995;
    std::size_t mu_points = 5;
    std::size_t sigma_points = 5;
    std::size_t theta_points = 5;
    std::size_t auc_points = 5;

    std::size_t cells() const { return mu_points * sigma_points * theta_points * auc_points; }
};

// Constant-confidence grid for the closed form vs. its quadrature and
// Monte Carlo references.
struct ConstantGrid {
    std::vector<double> c_h = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> theta_m = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> d = {0.0, 0.5, 1.0, 2.0, 4.0};
};

struct ValidationConfig {
    ApproximationGrid approx_grid;
    ConstantGrid constant_grid;
    double tol_approx_relative = 0.01;
    double tol_closed_absolute = 1e-8;
    double tol_mc_standard_errors = 3.0;
    // 0 skips the Monte Carlo check.
    std::size_t mc_trials = 100000;
    std::uint64_t seed = 1;
};

struct ValidationCell {
    std::vector<std::pair<std::string, double>> params;
    double reference = 0.0;
    double candidate = 0.0;
    double error = 0.0;
};

struct ValidationCheck {
    std::string name;
    std::string error_kind;  // "relative", "absolute" or "standard-errors"
    std::size_t cells = 0;
    double tolerance = 0.0;
    double max_error = 0.0;
    std::size_t violations = 0;
    ValidationCell worst;
    bool pass() const { return violations == 0; }
};

std::vector<ValidationCheck> run_validation(const ValidationConfig& config);

}  // namespace metasense
