#pragma once

// Expected accuracy of an ideal-observer human aided by a logit-normal AI.
//
// Constant human confidence has an exact closed form. For logit-normal human
// confidence there is a probit-based approximation in terms of bivariate
// normal CDFs, checked against direct quadrature of the constant-case
// formula over the human confidence distribution.

#include "metasense/confidence_model.hpp"

#include <string_view>
#include <variant>

namespace metasense {

struct ConstantConfidence {
    Probability c_h;
};

// Human confidence is either fixed or c_h ~ LogitNormal(mu, sigma).
// In both cases the human is assumed perfectly calibrated.
using HumanSpec = std::variant<ConstantConfidence, LogitNormalParams>;

void validate(const HumanSpec& human);
bool is_constant(const HumanSpec& human);

// E[c_h], i.e. the unaided human accuracy.
double human_accuracy(const HumanSpec& human);

enum class Method { closed_form, probit_approx, quadrature, monte_carlo };

std::string_view to_string(Method m);

struct CombinedAccuracy {
    double value = 0.0;
    Method method = Method::closed_form;
    double error_bound = 0.0;
};

// Largest absolute gap between sigmoid(x) and Phi(x * sqrt(pi / 8)), rounded
// up. It bounds the error of combined_variable_approx.
inline constexpr double kProbitMaxError = 0.01768;

// c_h [theta_m Phi(r) + (1 - theta_m) Phi(r + d)] + theta_m [1 - Phi(r)],
// r = (logit c_h - logit theta_m) / d - d / 2. d = 0 gives max(c_h, theta_m).
CombinedAccuracy combined_constant(Probability c_h, Probability theta_m, double d);

// Same closed form, parameterised by logit(c_h) so it can be evaluated where
// c_h itself rounds to 0 or 1.
double combined_constant_from_logit(double logit_c_h, Probability theta_m, double d);

// Integrates c_h p(c_m) below the switch point and p(y_m = 1 | c_m) p(c_m)
// above it, numerically. Independent of the closed-form algebra.
CombinedAccuracy combined_constant_quadrature(Probability c_h, const AiSpec& spec,
                                              double abs_tol = 1e-10);

// Quadrature of E[combined_constant(c_h, theta_m, d)] over c_h ~ LogitNormal.
// Throws QuadratureError when the tolerance cannot be met.
CombinedAccuracy combined_variable_exact(const LogitNormalParams& human, Probability theta_m,
                                         double d, double abs_tol = 1e-10);

// Bivariate-normal approximation. Requires d > 0.
CombinedAccuracy combined_variable_approx(const LogitNormalParams& human, Probability theta_m,
                                          double d);

// Dispatches on human kind: closed_form means the exact formula for a
// constant human and the probit approximation for a logit-normal one.
// monte_carlo is not handled here (see the simulator).
CombinedAccuracy combined_accuracy(const HumanSpec& human, Probability theta_m, double d,
                                   Method method);

// c_h when the policy keeps the human answer, p(y_m = 1 | c_m) otherwise.
double conditional_correctness(Probability c_h, Probability c_m, const AiSpec& spec);

}  // namespace metasense
