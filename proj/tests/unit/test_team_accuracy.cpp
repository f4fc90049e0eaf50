#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "metasense/confidence_model.hpp"
#include "metasense/team_accuracy.hpp"
#include "oracles/oracles.hpp"

#include <cmath>
#include <vector>

using namespace metasense;

namespace {

const double kD89 = 1.734572701988;
const double kD99 = 3.289952714266;

std::vector<double> steps(double lo, double hi, double step) {
    std::vector<double> v;
    for (int i = 0; lo + i * step <= hi + 1e-12; ++i) v.push_back(lo + i * step);
    return v;
}

}  // namespace

TEST_CASE("combined_constant limits and examples") {
    const Probability ch(0.55), th(0.66);
    CHECK(std::abs(combined_constant(ch, th, 1e-9).value - 0.66) < 1e-6);
    CHECK(combined_constant(ch, th, 0.0).value == 0.66);
    CHECK(combined_constant(Probability(0.7), th, 0.0).value == 0.7);
    CHECK(std::abs(combined_constant(ch, th, 40.0).value - 0.847) < 1e-6);
    CHECK(std::abs(combined_constant(ch, th, kD89).value - 0.757616357250) < 1e-10);
    CHECK(std::abs(combined_constant(ch, Probability(0.55), kD99).value - 0.77275626500) < 1e-10);
    CHECK(combined_constant(ch, th, kD89).method == Method::closed_form);
    CHECK(combined_constant(ch, th, kD89).error_bound == 0.0);
    CHECK_THROWS(combined_constant(ch, th, -1.0));
    CHECK_THROWS(combined_constant(ch, th, std::nan("")));
}

TEST_CASE("combined_constant against independent oracles") {
    for (double ch : {0.1, 0.45, 0.9}) {
        for (double th : {0.2, 0.66, 0.95}) {
            for (double d : {0.0, 0.3, 1.7, 4.0}) {
                const double v = combined_constant(Probability(ch), Probability(th), d).value;
                CHECK(std::abs(v - oracle::combined_constant_brute(ch, th, d)) < 1e-7);
                const auto q = combined_constant_quadrature(Probability(ch), canonical_spec(Probability(th), d));
                CHECK(std::abs(v - q.value) < 1e-9);
            }
        }
    }
    // quadrature with a non-canonical parameterisation gives the same answer
    const AiSpec odd{Probability(0.66), -3.0, 0.4690, 2.0};
    CHECK(std::abs(combined_constant_quadrature(Probability(0.55), odd).value -
                   combined_constant(Probability(0.55), Probability(0.66), odd.d()).value) < 1e-9);
}

TEST_CASE("combined_constant dominance and monotonicity") {
    const auto grid = steps(0.05, 0.95, 0.05);
    const auto ds = steps(0.0, 5.0, 0.1);
    int dominance = 0, in_d = 0, in_ch = 0, in_th = 0;
    for (double ch : grid) {
        for (double th : grid) {
            double prev = -1.0;
            for (double d : ds) {
                const double v = combined_constant(Probability(ch), Probability(th), d).value;
                dominance += v < std::max(ch, th) - 1e-9;
                in_d += v < prev - 1e-12;
                prev = v;
                if (ch + 0.05 < 0.96) in_ch += combined_constant(Probability(ch + 0.05), Probability(th), d).value < v - 1e-12;
                if (th + 0.05 < 0.96) in_th += combined_constant(Probability(ch), Probability(th + 0.05), d).value < v - 1e-12;
                CHECK(v > 0.0);
                CHECK(v < 1.0);
            }
        }
    }
    CHECK(dominance == 0);
    CHECK(in_d == 0);
    CHECK(in_ch == 0);
    CHECK(in_th == 0);
}

TEST_CASE("chance-level human stays within c_h (1 - theta_m) of the AI alone") {
    // combined - theta_m <= c_h (1 - theta_m) holds analytically; for the
    // stricter 0.004 band see the acceptance suite.
    for (double th : steps(0.3, 0.95, 0.05)) {
        for (double d : steps(0.0, 5.0, 0.05)) {
            const double gap = combined_constant(Probability(0.01), Probability(th), d).value - th;
            CHECK(gap >= -1e-12);
            CHECK(gap <= 0.01 * (1 - th) + 1e-12);
        }
    }
    // frozen: max over d of the gap at theta = 0.7 is 0.00265
    double worst = 0.0;
    for (double d : steps(0.0, 5.0, 0.001)) {
        worst = std::max(worst, combined_constant(Probability(0.01), Probability(0.7), d).value - 0.7);
    }
    CHECK(worst <= 0.004);
    CHECK(std::abs(worst - 0.00265) < 5e-5);
}

TEST_CASE("combined_variable_exact") {
    const LogitNormalParams h{oracle::logit(0.55), 0.5};
    const auto e = combined_variable_exact(h, Probability(0.66), kD89);
    CHECK(e.method == Method::quadrature);
    CHECK(std::abs(e.value - 0.760801476514) < 1e-8);
    // independent: Gaussian expectation of the constant formula in the oracle
    const double ref = oracle::gaussian_expectation(
        [](double z) { return oracle::combined_constant_brute(oracle::sigmoid(z), 0.66, kD89, 4000); }, h.mu, h.sigma,
        400);
    CHECK(std::abs(e.value - ref) < 1e-6);

    // point-mass limit
    for (double th : {0.3, 0.66, 0.9}) {
        for (double d : {0.5, kD89, 4.0}) {
            const double v = combined_variable_exact({oracle::logit(0.55), 1e-4}, Probability(th), d).value;
            CHECK(std::abs(v - combined_constant(Probability(0.55), Probability(th), d).value) < 1e-4);
        }
    }

    // d -> 0: E[max(c_h, theta_m)], frozen 0.669835509140, then Monte Carlo
    const double flat = combined_variable_exact(h, Probability(0.66), 1e-9).value;
    CHECK(std::abs(flat - 0.669835509140) < 1e-6);
    std::normal_distribution<double> z;
    const auto mc = oracle::monte_carlo(
        [&](std::mt19937_64& g) { return std::max(oracle::sigmoid(h.mu + h.sigma * z(g)), 0.66); }, 10'000'000, 3);
    CHECK(std::abs(flat - mc.mean) < 3 * mc.se);
    CHECK(std::abs(combined_variable_exact(h, Probability(0.66), 0.0).value - 0.669835509140) < 1e-9);

    // floor: never below max(theta_m, E[c_h])
    for (double mu : {-1.5, 0.0, 2.0}) {
        for (double s : {0.2, 1.0, 2.5}) {
            for (double th : {0.3, 0.8}) {
                const LogitNormalParams p{mu, s};
                const double v = combined_variable_exact(p, Probability(th), 1.2).value;
                CHECK(v >= std::max(th, human_accuracy(HumanSpec{p})) - 1e-9);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("combined_variable_approx") {
    const LogitNormalParams h{oracle::logit(0.55), 0.5};
    const auto a = combined_variable_approx(h, Probability(0.66), kD89);
    CHECK(a.method == Method::probit_approx);
    CHECK(a.error_bound == kProbitMaxError);
    CHECK(std::abs(a.value - 0.7610812748) < 1e-9);
    CHECK(std::abs(a.value - 0.760801476514) / 0.760801476514 <= 0.01);

    const double point = combined_variable_approx({oracle::logit(0.55), 1e-3}, Probability(0.66), kD89).value;
    const double constant = combined_constant(Probability(0.55), Probability(0.66), kD89).value;
    CHECK(std::abs(point - constant) / constant <= 0.01);

    CHECK_THROWS_AS(combined_variable_approx(h, Probability(0.66), 0.0), std::domain_error);

    // the stated absolute error bound holds everywhere we look
    double worst = 0.0;
    for (double mu : {-2.0, -0.5, 0.2, 1.0, 2.5}) {
        for (double s : {0.05, 0.3, 1.0, 2.0}) {
            for (double th : {0.2, 0.5, 0.9}) {
                for (double d : {0.1, 0.8, 2.0, 4.0}) {
                    const double ex = combined_variable_exact({mu, s}, Probability(th), d).value;
                    const double ap = combined_variable_approx({mu, s}, Probability(th), d).value;
                    worst = std::max(worst, std::abs(ex - ap));
                }
            }
        }
    }
    CHECK(worst <= kProbitMaxError);
    CHECK(std::abs(kProbitMaxError - 0.0176711886) < 1e-5);
}

TEST_CASE("combined_accuracy dispatch") {
    const HumanSpec c = ConstantConfidence{Probability(0.55)};
    const HumanSpec v = LogitNormalParams{0.2, 0.5};
    const Probability th(0.66);
    CHECK(combined_accuracy(c, th, kD89, Method::closed_form).method == Method::closed_form);
    CHECK(combined_accuracy(c, th, kD89, Method::quadrature).method == Method::quadrature);
    CHECK_THROWS(combined_accuracy(c, th, kD89, Method::probit_approx));
    CHECK_THROWS(combined_accuracy(c, th, kD89, Method::monte_carlo));
    CHECK(combined_accuracy(v, th, kD89, Method::closed_form).method == Method::probit_approx);
    CHECK(combined_accuracy(v, th, kD89, Method::quadrature).method == Method::quadrature);
    CHECK(combined_accuracy(v, th, 0.0, Method::closed_form).method == Method::quadrature);
    CHECK_THROWS(combined_accuracy(HumanSpec{LogitNormalParams{0.0, 0.0}}, th, 1.0, Method::quadrature));
    CHECK(human_accuracy(c) == 0.55);
    CHECK(std::abs(human_accuracy(HumanSpec{LogitNormalParams{0.0, 1.0}}) - 0.5) < 1e-12);
    CHECK(to_string(Method::closed_form) == "closed-form");
    CHECK(to_string(Method::monte_carlo) == "monte-carlo");
}

TEST_CASE("conditional_correctness") {
    const auto spec = canonical_spec(Probability(0.66), kD89);
    const Probability ch(0.55);
    CHECK(conditional_correctness(ch, Probability(0.2), spec) == 0.55);
    const double hi = conditional_correctness(ch, Probability(0.99), spec);
    CHECK(hi == calibration_curve(spec, Probability(0.99)));
    CHECK(hi > 0.55);

    // averaging over sampled AI confidences reproduces the closed form
    std::normal_distribution<double> z;
    std::bernoulli_distribution y(0.66);
    const auto mc = oracle::monte_carlo(
        [&](std::mt19937_64& g) {
            const double logit_c = (y(g) ? spec.mu1 : spec.mu0) + z(g);
            return conditional_correctness(ch, Probability(oracle::sigmoid(logit_c)), spec);
        },
        1'000'000, 21);
    CHECK(std::abs(mc.mean - 0.757616357250) < 0.003);
}
