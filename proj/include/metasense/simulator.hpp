#pragma once

// Trial-level Monte Carlo of a human deciding whether to take an AI's advice.
//
// Trials are generated in fixed-size blocks, block b drawing from
// RandomStream(seed, b). Results are identical for any thread count.

#include "metasense/policy.hpp"
#include "metasense/team_accuracy.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace metasense {

struct IdealObserver {};
// Adopt the AI answer whenever its confidence is at least `threshold`.
struct FixedThreshold {
    double threshold;
};
struct AlwaysSelf {};
struct AlwaysAi {};

using HumanPolicy = std::variant<IdealObserver, FixedThreshold, AlwaysSelf, AlwaysAi>;

std::string to_string(const HumanPolicy& policy);

struct TrialRecord {
    bool y_h;
    double c_h;
    bool y_m;
    double c_m;
    Action action;
    bool y_final;
};

struct SimSummary {
    std::string label;
    std::size_t n_trials = 0;
    double accuracy_before = 0.0;
    double accuracy_after = 0.0;
    double ai_accuracy_observed = 0.0;
    // Undefined when every simulated AI answer was right (or every one wrong).
    std::optional<double> ai_auc_observed;
    double reliance_rate = 0.0;
    // sqrt(p (1 - p) / n) for accuracy_after.
    double standard_error = 0.0;
};

struct SimOptions {
    bool keep_records = false;
    bool compute_auc = true;
    std::size_t block_size = 1 << 16;
    // 0 = std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct SimResult {
    std::vector<TrialRecord> records;
    SimSummary summary;
};

SimResult run_trials(const AiSpec& ai, const HumanSpec& human, const HumanPolicy& policy,
                     std::size_t n, std::uint64_t seed, const SimOptions& options = {});

// Ideal-observer Monte Carlo estimate, error bound = one standard error.
CombinedAccuracy combined_monte_carlo(const HumanSpec& human, Probability theta_m, double d,
                                      std::size_t n, std::uint64_t seed,
                                      const SimOptions& options = {});

struct ExperimentCondition {
    char label;
    double ai_accuracy;
    double ai_auc;
};

// AI assistants of the five-condition behavioural design.
inline constexpr std::array<ExperimentCondition, 5> kExperimentConditions = {{
    {'A', 0.66, 0.50},
    {'B', 0.66, 0.76},
    {'C', 0.66, 0.89},
    {'D', 0.66, 0.99},
    {'E', 0.55, 0.99},
}};

inline constexpr double kExperimentHumanAccuracy = 0.55;

// One ideal-observer summary per condition, with a logit-normal human
// centred on logit(0.55). Condition i uses seed derive_seed(seed, i).
std::vector<SimSummary> replicate_experiment_conditions(std::uint64_t seed,
                                                        std::size_t n_per_condition,
                                                        double sigma_h = 0.5,
                                                        const SimOptions& options = {});

}  // namespace metasense
