#include "metasense/team_accuracy.hpp"

#include "metasense/policy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace metasense {

namespace {

void check_d(double d) {
    if (!std::isfinite(d) || d < 0.0) {
        std::ostringstream msg;
        msg << "sensitivity d must be finite and >= 0, got " << d;
        throw std::domain_error(msg.str());
    }
}

// sqrt(pi / 8)
constexpr double kProbitScale = 0.626657068657750125603941321203;

// Integrates f over the real line in pieces: a half-line below cuts.front(),
// finite segments between sorted cuts, a half-line above cuts.back(). Cuts
// bracket the bulk so the finite pieces carry almost all of the mass.
QuadratureResult piecewise(const RealFunction& f, std::vector<double> cuts, QuadratureOptions opts) {
    std::sort(cuts.begin(), cuts.end());
    opts.abs_tol /= static_cast<double>(cuts.size() + 1);
    QuadratureResult total;
    total.converged = true;
    auto add = [&](const QuadratureResult& r) {
        total.value += r.value;
        total.abs_error += r.abs_error;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    };
    add(integrate_1d(f, Domain::below, opts, 0.0, cuts.front()));
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i]) add(integrate_1d(f, Domain::finite, opts, cuts[i], cuts[i + 1]));
    }
    add(integrate_1d(f, Domain::above, opts, cuts.back(), 0.0));
    return total;
}

}  // namespace

void validate(const HumanSpec& human) {
    if (const auto* ln = std::get_if<LogitNormalParams>(&human)) {
        ln->validate();
    }
}

bool is_constant(const HumanSpec& human) {
    return std::holds_alternative<ConstantConfidence>(human);
}

double human_accuracy(const HumanSpec& human) {
    if (const auto* c = std::get_if<ConstantConfidence>(&human)) {
        return c->c_h;
    }
    const auto& ln = std::get<LogitNormalParams>(human);
    ln.validate();
    QuadratureOptions opts;
    opts.abs_tol = 1e-12;
    return logit_normal_expectation([](double l) { return sigmoid(l); }, ln.mu, ln.sigma, opts)
        .value;
}

std::string_view to_string(Method m) {
    switch (m) {
        case Method::closed_form:
            return "closed-form";
        case Method::probit_approx:
            return "probit-approx";
        case Method::quadrature:
            return "quadrature";
        case Method::monte_carlo:
            return "monte-carlo";
    }
    return "unknown";
}

double combined_constant_from_logit(double logit_c_h, Probability theta_m, double d) {
    check_d(d);
    const double c_h = sigmoid(logit_c_h);
    if (d == 0.0) {
        return std::max(c_h, theta_m.value());
    }
    const double r = (logit_c_h - logit(theta_m)) / d - 0.5 * d;
    const double below_correct = std_normal_cdf(r);
    const double below_incorrect = std_normal_cdf(r + d);
    return c_h * (theta_m * below_correct + (1.0 - theta_m) * below_incorrect) +
           theta_m * std_normal_cdf(-r);
}

CombinedAccuracy combined_constant(Probability c_h, Probability theta_m, double d) {
    return {combined_constant_from_logit(logit(c_h), theta_m, d), Method::closed_form, 0.0};
}

CombinedAccuracy combined_constant_quadrature(Probability c_h, const AiSpec& spec,
                                              double abs_tol) {
    spec.validate();
    const SwitchPoint sp = switch_point(c_h, spec);
    if (sp.degenerate == Degenerate::always_model) {
        return {spec.theta_m, Method::quadrature, 0.0};
    }
    if (sp.degenerate == Degenerate::always_human) {
        return {c_h, Method::quadrature, 0.0};
    }

    // Work in z = logit(c_m); the Jacobian cancels against the logit-normal
    // density, leaving Gaussian branch densities in z.
    auto marginal = [&spec](double z) {
        return (spec.theta_m * std_normal_pdf((z - spec.mu1) / spec.sigma) +
                (1.0 - spec.theta_m) * std_normal_pdf((z - spec.mu0) / spec.sigma)) /
               spec.sigma;
    };
    // Below c* the human answers, above it the AI; the integrand jumps at c*.
    auto integrand = [&](double z) {
        return (z < sp.logit_c_star ? c_h.value() : calibration_from_logit(spec, z)) * marginal(z);
    };
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    const QuadratureResult r =
        piecewise(integrand, {spec.mu0 - 10.0 * spec.sigma, sp.logit_c_star, spec.mu1 + 10.0 * spec.sigma}, opts);
    if (!r.converged) {
        throw QuadratureError("switch-point quadrature did not converge", r);
    }
    return {r.value, Method::quadrature, r.abs_error};
}

CombinedAccuracy combined_variable_exact(const LogitNormalParams& human, Probability theta_m,
                                         double d, double abs_tol) {
    human.validate();
    check_d(d);

    // The integrand has a kink at c_h = theta_m when d is near zero; split
    // there so both sides are smooth.
    const double kink = (logit(theta_m) - human.mu) / human.sigma;
    auto integrand = [&](double z) {
        return std_normal_pdf(z) * combined_constant_from_logit(human.mu + human.sigma * z,
                                                                theta_m, d);
    };
    QuadratureOptions opts;
    opts.abs_tol = abs_tol;
    opts.max_subdivisions = 4000;
    const QuadratureResult r = piecewise(integrand, {-10.0, kink, 10.0}, opts);
    if (!r.converged) {
        std::ostringstream msg;
        msg << "quadrature over human confidence did not converge (mu_h=" << human.mu
            << ", sigma_h=" << human.sigma << ", theta_m=" << theta_m.value() << ", d=" << d
            << ")";
        throw QuadratureError(msg.str(), r);
    }
    return {r.value, Method::quadrature, r.abs_error};
}

CombinedAccuracy combined_variable_approx(const LogitNormalParams& human, Probability theta_m,
                                          double d) {
    human.validate();
    check_d(d);
    if (d == 0.0) {
        throw std::domain_error(
            "bivariate-normal approximation needs d > 0; use quadrature or the constant limit");
    }
    const double a = (human.mu - logit(theta_m)) / d - 0.5 * d;
    const double b = human.sigma / d;
    const double s = kProbitScale * human.mu;
    const double t = kProbitScale * human.sigma;

    const double scale_ab = std::sqrt(1.0 + b * b);
    const double scale_st = std::sqrt(1.0 + t * t);
    const Correlation rho(b * t / (scale_ab * scale_st));
    const double k = s / scale_st;

    const double value = theta_m * bivariate_normal_cdf(a / scale_ab, k, rho) +
                         (1.0 - theta_m) * bivariate_normal_cdf((a + d) / scale_ab, k, rho) +
                         theta_m * std_normal_cdf(-a / scale_ab);
    return {value, Method::probit_approx, kProbitMaxError};
}

CombinedAccuracy combined_accuracy(const HumanSpec& human, Probability theta_m, double d,
                                   Method method) {
    validate(human);
    if (const auto* c = std::get_if<ConstantConfidence>(&human)) {
        switch (method) {
            case Method::closed_form:
                return combined_constant(c->c_h, theta_m, d);
            case Method::quadrature:
                return combined_constant_quadrature(c->c_h, canonical_spec(theta_m, d));
            case Method::probit_approx:
                throw std::invalid_argument(
                    "probit approximation applies to logit-normal human confidence only");
            case Method::monte_carlo:
                break;
        }
        throw std::invalid_argument("monte-carlo estimates come from the simulator");
    }
    const auto& ln = std::get<LogitNormalParams>(human);
    switch (method) {
        case Method::closed_form:
        case Method::probit_approx:
            if (d == 0.0) {
                return combined_variable_exact(ln, theta_m, d);
            }
            return combined_variable_approx(ln, theta_m, d);
        case Method::quadrature:
            return combined_variable_exact(ln, theta_m, d);
        case Method::monte_carlo:
            break;
    }
    throw std::invalid_argument("monte-carlo estimates come from the simulator");
}

double conditional_correctness(Probability c_h, Probability c_m, const AiSpec& spec) {
    const SwitchPoint sp = switch_point(c_h, spec);
    if (decide(sp, c_m) == Action::human) {
        return c_h;
    }
    return calibration_curve(spec, c_m);
}

}  // namespace metasense
