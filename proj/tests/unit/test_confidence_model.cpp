#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "metasense/confidence_model.hpp"
#include "metasense/empirical.hpp"
#include "oracles/oracles.hpp"

#include <cmath>
#include <vector>

using namespace metasense;

TEST_CASE("sensitivity_from_params") {
    const auto s = sensitivity_from_params(AiSpec{Probability(0.6), -0.5, 0.5, 1.0});
    CHECK(s.d == 1.0);
    CHECK(std::abs(s.auc - 0.760249938907) < 1e-11);
    const auto z = sensitivity_from_params(AiSpec{Probability(0.6), 0.0, 0.0, 1.0});
    CHECK(z.d == 0.0);
    CHECK(z.auc == 0.5);
    CHECK(sensitivity_from_params(AiSpec{Probability(0.6), 0.0, 2.0, 2.0}).d == 1.0);
    CHECK_THROWS_AS(sensitivity_from_params(AiSpec{Probability(0.6), 0.0, 1.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(sensitivity_from_params(AiSpec{Probability(0.6), 0.0, 1.0, -1.0}), std::domain_error);
    CHECK_THROWS_AS(sensitivity_from_params(AiSpec{Probability(0.6), 1.0, 0.0, 1.0}), std::domain_error);
}

TEST_CASE("d_from_auc") {
    CHECK(d_from_auc(0.5) == 0.0);
    CHECK(std::abs(d_from_auc(0.89) - 1.734572701988) < 1e-10);
    CHECK(std::abs(d_from_auc(0.99) - 3.289952714266) < 1e-10);
    CHECK(std::abs(d_from_auc(0.76) - 0.998862663507) < 1e-10);
    CHECK(std::abs(d_from_auc(0.99) - std::sqrt(2.0) * oracle::quantile(0.99)) < 1e-10);
    CHECK_THROWS_AS(d_from_auc(0.49), std::domain_error);
    CHECK_THROWS_AS(d_from_auc(1.0), std::domain_error);
    CHECK_THROWS_AS(d_from_auc(std::nan("")), std::domain_error);

    for (double auc : {0.5, 0.55, 0.76, 0.89, 0.99, 0.999}) {
        const double d = d_from_auc(auc);
        CHECK(std::abs(sensitivity_from_params(canonical_spec(Probability(0.7), d)).auc - auc) < 1e-9);
    }
    double prev = -1.0;
    for (double d = 0.0; d <= 5.0; d += 0.01) {
        const double auc = auc_from_d(d);
        CHECK(auc > prev);
        prev = auc;
        CHECK(std::abs(d_from_auc(auc) - d) < 1e-8);
    }
}

TEST_CASE("canonical_spec") {
    const auto a = canonical_spec(Probability(0.66), 1.7345);
    CHECK(a.theta_m.value() == 0.66);
    CHECK(a.mu0 == -0.86725);
    CHECK(a.mu1 == 0.86725);
    CHECK(a.sigma == 1.0);
    const auto e = canonical_spec(Probability(0.55), 3.2897);
    CHECK(e.mu0 == -1.64485);
    CHECK(e.mu1 == 1.64485);
    for (double d : {0.0, 0.3, 1.7345, 3.2897, 7.1}) {
        CHECK(sensitivity_from_params(canonical_spec(Probability(0.5), d)).d == d);
    }
    const auto z = canonical_spec(Probability(0.5), 0.0);
    CHECK(z.mu0 == 0.0);
    CHECK(z.mu1 == 0.0);
    CHECK_THROWS(canonical_spec(Probability(0.5), -0.1));
}

TEST_CASE("confidence_density") {
    const auto spec = canonical_spec(Probability(0.66), 1.7345);
    for (auto b : {Branch::correct, Branch::incorrect, Branch::marginal}) {
        const double total = integrate_1d([&](double c) { return confidence_density(spec, Probability(c), b); },
                                          Domain::unit_interval)
                                 .value;
        CHECK(std::abs(total - 1.0) < 1e-8);
    }
    const auto flat = canonical_spec(Probability(0.66), 0.0);
    for (double c = 0.01; c < 1.0; c += 0.01) {
        CHECK(confidence_density(flat, Probability(c), Branch::correct) ==
              confidence_density(flat, Probability(c), Branch::incorrect));
        const double m = confidence_density(spec, Probability(c), Branch::marginal);
        const double mix = 0.66 * confidence_density(spec, Probability(c), Branch::correct) +
                           0.34 * confidence_density(spec, Probability(c), Branch::incorrect);
        CHECK(std::abs(m - mix) < 1e-13);
    }
    // density over c is phi(0) / (1 * 0.25); times the Jacobian c(1-c) it is phi(0) in logit space
    CHECK(std::abs(logit_normal_pdf({0.0, 1.0}, 0.5) - 0.398942280401 / 0.25) < 1e-11);
    CHECK(std::abs(logit_normal_pdf({0.0, 1.0}, 0.5) * 0.25 - 0.398942280401) < 1e-11);
    CHECK(std::abs(logit_normal_cdf({0.3, 0.8}, oracle::sigmoid(0.3)) - 0.5) < 1e-14);
}

TEST_CASE("calibration_curve") {
    const auto flat = canonical_spec(Probability(0.66), 0.0);
    for (double c = 0.001; c < 1.0; c += 0.037) CHECK(calibration_curve(flat, Probability(c)) == doctest::Approx(0.66).epsilon(1e-15));

    const AiSpec shifted{Probability(0.3), 0.4, 2.0, 1.0};
    CHECK(std::abs(calibration_curve(shifted, Probability(oracle::sigmoid(1.2))) - 0.3) < 1e-14);

    const auto spec = canonical_spec(Probability(0.66), d_from_auc(0.89));
    // frozen: direct Bayes rule, 0.988732930520
    CHECK(std::abs(calibration_curve(spec, Probability(0.9)) - 0.988732930520) < 1e-10);

    // Monte Carlo binning oracle, 10^7 samples around c = 0.9
    std::normal_distribution<double> z;
    std::bernoulli_distribution y(0.66);
    std::size_t in_bin = 0, correct_in_bin = 0;
    std::mt19937_64 g(11);
    for (int i = 0; i < 10'000'000; ++i) {
        const bool yc = y(g);
        const double c = oracle::sigmoid((yc ? spec.mu1 : spec.mu0) + z(g));
        if (c > 0.898 && c < 0.902) {
            ++in_bin;
            correct_in_bin += yc;
        }
    }
    const double p = static_cast<double>(correct_in_bin) / static_cast<double>(in_bin);
    const double se = std::sqrt(p * (1 - p) / static_cast<double>(in_bin));
    CHECK(std::abs(p - 0.988732930520) < 3 * se);

    for (double d : {0.2, 1.0, 3.3}) {
        const auto s = canonical_spec(Probability(0.4), d);
        double prev = -1.0;
        int non_increasing = 0;
        for (int i = 1; i <= 1000; ++i) {
            const double v = calibration_curve(s, Probability(i / 1001.0));
            non_increasing += !(v > prev);
            prev = v;
        }
        CHECK(non_increasing == 0);
        // law of total probability
        const double total = integrate_1d(
            [&](double c) {
                return calibration_curve(s, Probability(c)) * confidence_density(s, Probability(c), Branch::marginal);
            },
            Domain::unit_interval).value;
        CHECK(std::abs(total - 0.4) < 1e-6);
    }
    // no overflow far into the tails of the logit
    CHECK(calibration_from_logit(spec, 800.0) == 1.0);
    CHECK(calibration_from_logit(spec, -800.0) == 0.0);
}

namespace {

std::vector<double> logits_of(const AiSpec& spec, int n, std::uint64_t seed, std::vector<double>& wrong,
                              int& n_correct) {
    RandomStream s(seed, 0);
    std::vector<double> right;
    n_correct = 0;
    for (int i = 0; i < n; ++i) {
        const auto t = sample_ai_trial(spec, s);
        (t.correct ? right : wrong).push_back(t.logit_confidence);
        n_correct += t.correct;
    }
    return right;
}

}  // namespace

TEST_CASE("sample_ai_trial moments and meta-AUC") {
    const int n = 1'000'000;
    {
        std::vector<double> wrong;
        int k = 0;
        logits_of(canonical_spec(Probability(0.66), 1.0), n, 5, wrong, k);
        CHECK(std::abs(static_cast<double>(k) / n - 0.66) < 0.0015);
    }
    {
        std::vector<double> wrong;
        int k = 0;
        const auto right = logits_of(canonical_spec(Probability(0.55), d_from_auc(0.99)), n, 6, wrong, k);
        CHECK(std::abs(meta_auc(right, wrong) - 0.99) < 0.002);
    }
    {
        std::vector<double> wrong;
        int k = 0;
        const auto right = logits_of(canonical_spec(Probability(0.66), 0.0), n, 7, wrong, k);
        CHECK(std::abs(meta_auc(right, wrong) - 0.5) < 0.002);
    }
    RandomStream s(1, 1);
    const auto t = sample_ai_trial(canonical_spec(Probability(0.5), 1.0), s);
    CHECK(t.confidence == doctest::Approx(oracle::sigmoid(t.logit_confidence)).epsilon(1e-15));
}

TEST_CASE("sampled confidences follow the analytic density") {
    // chi-square goodness of fit, 50 equiprobable bins, 10^6 draws
    const auto spec = canonical_spec(Probability(0.66), d_from_auc(0.89));
    const int bins = 50;
    const int n = 1'000'000;
    for (auto branch : {Branch::correct, Branch::incorrect}) {
        const LogitNormalParams p = branch == Branch::correct ? spec.correct_branch() : spec.incorrect_branch();
        RandomStream s(17, branch == Branch::correct ? 0 : 1);
        std::vector<int> counts(bins, 0);
        for (int i = 0; i < n; ++i) {
            const double c = sample_logit_normal(p, s);
            const int b = std::min(bins - 1, static_cast<int>(logit_normal_cdf(p, c) * bins));
            ++counts[b];
        }
        double chi2 = 0.0;
        const double expected = static_cast<double>(n) / bins;
        for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
        // upper 0.001 point of chi-square with 49 degrees of freedom
        CHECK(chi2 < 85.35);
    }
}
