#pragma once

// Logit-normal model of AI confidence and the two sensitivity metrics
// (Cohen's d between logit confidences, and meta-AUC).

#include "metasense/numerics.hpp"

namespace metasense {

struct LogitNormalParams {
    double mu = 0.0;
    double sigma = 1.0;

    // Throws std::domain_error unless sigma > 0 and both are finite.
    void validate() const;
};

double logit_normal_pdf(const LogitNormalParams& p, double c);
double logit_normal_cdf(const LogitNormalParams& p, double c);
double sample_logit_normal(const LogitNormalParams& p, RandomStream& stream);

// AI assistant: accuracy theta_m, and confidence | correct ~ LogitNormal(mu1, sigma),
// confidence | incorrect ~ LogitNormal(mu0, sigma).
struct AiSpec {
    Probability theta_m;
    double mu0;
    double mu1;
    double sigma;

    void validate() const;
    LogitNormalParams correct_branch() const { return {mu1, sigma}; }
    LogitNormalParams incorrect_branch() const { return {mu0, sigma}; }
    double d() const { return (mu1 - mu0) / sigma; }
};

struct Sensitivity {
    double d;
    double auc;
};

Sensitivity sensitivity_from_params(const AiSpec& spec);

// meta-AUC = Phi(d / sqrt 2)
double auc_from_d(double d);

// Inverse of auc_from_d. Accepts auc in [0.5, 1).
double d_from_auc(double auc);

// mu0 = -d/2, mu1 = +d/2, sigma = 1.
AiSpec canonical_spec(Probability theta_m, double d);

enum class Branch { correct, incorrect, marginal };

double confidence_density(const AiSpec& spec, Probability c, Branch branch);

// p(y_m = 1 | c_m = c) by Bayes rule over the two branches.
double calibration_curve(const AiSpec& spec, Probability c);

// Same, taking the logit of the confidence. Usable when c rounds to 0 or 1.
double calibration_from_logit(const AiSpec& spec, double logit_c);

struct AiTrial {
    bool correct;
    double confidence;
    double logit_confidence;
};

AiTrial sample_ai_trial(const AiSpec& spec, RandomStream& stream);

}  // namespace metasense
