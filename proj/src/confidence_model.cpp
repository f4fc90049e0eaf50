#include "metasense/confidence_model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace metasense {

void LogitNormalParams::validate() const {
    if (!std::isfinite(mu) || !std::isfinite(sigma) || !(sigma > 0.0)) {
        std::ostringstream msg;
        msg << "logit-normal parameters need finite mu and sigma > 0, got mu=" << mu
            << " sigma=" << sigma;
        throw std::domain_error(msg.str());
    }
}

double logit_normal_pdf(const LogitNormalParams& p, double c) {
    if (!(c > 0.0 && c < 1.0)) return 0.0;
    const double z = (logit(c) - p.mu) / p.sigma;
    return std_normal_pdf(z) / (p.sigma * c * (1.0 - c));
}

double logit_normal_cdf(const LogitNormalParams& p, double c) {
    if (c <= 0.0) return 0.0;
    if (c >= 1.0) return 1.0;
    return std_normal_cdf((logit(c) - p.mu) / p.sigma);
}

double sample_logit_normal(const LogitNormalParams& p, RandomStream& stream) {
    return sigmoid(p.mu + p.sigma * stream.normal());
}

void AiSpec::validate() const {
    if (!std::isfinite(mu0) || !std::isfinite(mu1) || !std::isfinite(sigma) || !(sigma > 0.0)) {
        std::ostringstream msg;
        msg << "AI confidence model needs finite means and sigma > 0, got mu0=" << mu0
            << " mu1=" << mu1 << " sigma=" << sigma;
        throw std::domain_error(msg.str());
    }
    if (mu1 < mu0) {
        throw std::domain_error("AI confidence model needs mu1 >= mu0 (non-negative sensitivity)");
    }
}

Sensitivity sensitivity_from_params(const AiSpec& spec) {
    spec.validate();
    const double d = spec.d();
    return {d, auc_from_d(d)};
}

double auc_from_d(double d) { return std_normal_cdf(d / kSqrt2); }

double d_from_auc(double auc) {
    if (!(auc >= 0.5 && auc < 1.0)) {
        std::ostringstream msg;
        msg << "meta-AUC must lie in [0.5, 1), got " << auc;
        throw std::domain_error(msg.str());
    }
    if (auc == 0.5) return 0.0;
    return kSqrt2 * std_normal_quantile(auc);
}

AiSpec canonical_spec(Probability theta_m, double d) {
    if (!std::isfinite(d) || d < 0.0) {
        std::ostringstream msg;
        msg << "sensitivity d must be finite and >= 0, got " << d;
        throw std::domain_error(msg.str());
    }
    return AiSpec{theta_m, -0.5 * d, 0.5 * d, 1.0};
}

double confidence_density(const AiSpec& spec, Probability c, Branch branch) {
    spec.validate();
    switch (branch) {
        case Branch::correct:
            return logit_normal_pdf(spec.correct_branch(), c);
        case Branch::incorrect:
            return logit_normal_pdf(spec.incorrect_branch(), c);
        case Branch::marginal:
            return spec.theta_m * logit_normal_pdf(spec.correct_branch(), c) +
                   (1.0 - spec.theta_m) * logit_normal_pdf(spec.incorrect_branch(), c);
    }
    throw std::logic_error("unknown branch");
}

double calibration_from_logit(const AiSpec& spec, double logit_c) {
    // log likelihood ratio of the equal-variance branches is linear in logit(c)
    const double log_lr = (spec.mu1 - spec.mu0) * (2.0 * logit_c - spec.mu0 - spec.mu1) /
                          (2.0 * spec.sigma * spec.sigma);
    return sigmoid(logit(spec.theta_m) + log_lr);
}

double calibration_curve(const AiSpec& spec, Probability c) {
    spec.validate();
    return calibration_from_logit(spec, logit(c));
}

AiTrial sample_ai_trial(const AiSpec& spec, RandomStream& stream) {
    const bool correct = stream.bernoulli(spec.theta_m);
    const double mean = correct ? spec.mu1 : spec.mu0;
    const double z = mean + spec.sigma * stream.normal();
    return {correct, sigmoid(z), z};
}

}  // namespace metasense
