#include "metasense/validation.hpp"

#include "metasense/scenario.hpp"
#include "metasense/simulator.hpp"
#include "metasense/team_accuracy.hpp"

#include <cmath>

namespace metasense {

namespace {

void record(ValidationCheck& check, ValidationCell cell) {
    ++check.cells;
    if (cell.error > check.tolerance) ++check.violations;
    if (check.cells == 1 || cell.error > check.max_error) {
        check.max_error = cell.error;
        check.worst = std::move(cell);
    }
}

ValidationCheck make_check(std::string name, std::string kind, double tolerance) {
    ValidationCheck c;
    c.name = std::move(name);
    c.error_kind = std::move(kind);
    c.tolerance = tolerance;
    return c;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    return GridRange{lo, hi, n}.values();
}

}  // namespace

std::vector<ValidationCheck> run_validation(const ValidationConfig& config) {
    std::vector<ValidationCheck> checks;

    const ApproximationGrid& g = config.approx_grid;
    ValidationCheck approx = make_check("probit-approx-vs-quadrature", "relative", config.tol_approx_relative);
    for (double mu : linspace(logit(g.mu_lo_confidence), logit(g.mu_hi_confidence), g.mu_points)) {
        for (double sigma : linspace(g.sigma_lo, g.sigma_hi, g.sigma_points)) {
            for (double theta : linspace(g.theta_lo, g.theta_hi, g.theta_points)) {
                for (double auc : linspace(g.auc_lo, g.auc_hi, g.auc_points)) {
                    const double d = d_from_auc(auc);
                    const LogitNormalParams human{mu, sigma};
                    const Probability t(theta);
                    const double exact = combined_variable_exact(human, t, d).value;
                    const double approx_value = combined_variable_approx(human, t, d).value;
                    record(approx, {{{"mu_h", mu}, {"sigma_h", sigma}, {"theta_m", theta}, {"auc", auc}},
                                    exact,
                                    approx_value,
                                    std::abs(approx_value - exact) / exact});
                }
            }
        }
    }
    checks.push_back(std::move(approx));

    const ConstantGrid& cg = config.constant_grid;
    ValidationCheck closed = make_check("closed-form-vs-quadrature", "absolute", config.tol_closed_absolute);
    ValidationCheck mc =
        make_check("closed-form-vs-monte-carlo", "standard-errors", config.tol_mc_standard_errors);
    std::uint64_t cell_index = 0;
    for (double c_h : cg.c_h) {
        for (double theta : cg.theta_m) {
            for (double d : cg.d) {
                const Probability ch(c_h);
                const Probability t(theta);
                const double closed_value = combined_constant(ch, t, d).value;
                const double quad = combined_constant_quadrature(ch, canonical_spec(t, d)).value;
                record(closed, {{{"c_h", c_h}, {"theta_m", theta}, {"d", d}},
                                quad,
                                closed_value,
                                std::abs(closed_value - quad)});
                if (config.mc_trials > 0) {
                    const CombinedAccuracy sim =
                        combined_monte_carlo(ConstantConfidence{ch}, t, d, config.mc_trials,
                                             derive_seed(config.seed, cell_index));
                    const double se = sim.error_bound > 0.0 ? sim.error_bound
                                                            : 1.0 / static_cast<double>(config.mc_trials);
                    record(mc, {{{"c_h", c_h}, {"theta_m", theta}, {"d", d}},
                                closed_value,
                                sim.value,
                                std::abs(sim.value - closed_value) / se});
                }
                ++cell_index;
            }
        }
    }
    checks.push_back(std::move(closed));
    if (config.mc_trials > 0) checks.push_back(std::move(mc));
    return checks;
}

}  // namespace metasense
