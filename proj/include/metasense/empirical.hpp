#pragma once

// Estimation of accuracy, logit-space Cohen's d and meta-AUC from per-item
// (correct, confidence) logs exported by a model evaluation.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace metasense {

// Confidences of exactly 0 or 1 are moved this far inside the interval.
inline constexpr double kConfidenceClamp = 1e-6;

struct PredictionRecord {
    bool correct;
    double confidence;
};

struct PredictionLog {
    std::vector<PredictionRecord> records;
    std::string source_label;
    std::size_t clamp_warnings = 0;
};

enum class LogFormat { csv, json };

LogFormat parse_log_format(std::string_view name);

// A malformed input row. line() is 1-based: the physical line for CSV, the
// array position for JSON.
class LogFormatError : public std::runtime_error {
public:
    LogFormatError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// An estimator that is undefined for the given data (single class,
// zero variance, ...).
class EstimationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// CSV: optional header naming `correct` and `confidence` columns (other
// columns ignored); without a header the first two columns are used.
// JSON: array of objects with `correct` (0/1 or bool) and `confidence`.
PredictionLog parse_log(std::istream& in, LogFormat format, std::string source_label = {});
PredictionLog load_log(const std::filesystem::path& path, LogFormat format);

PredictionLog concatenate(const PredictionLog& a, const PredictionLog& b);

// Mann-Whitney probability that a correct item outranks an incorrect one,
// ties counted as one half. O(n log n), exact integer pair counts.
double meta_auc(std::span<const double> correct, std::span<const double> incorrect);

double estimate_meta_auc(const PredictionLog& log);

// (mean logit c | correct - mean logit c | incorrect) / pooled SD.
double estimate_d(const PredictionLog& log);

struct EstimateReport {
    std::string source_label;
    std::size_t n = 0;
    std::size_t n_correct = 0;
    double accuracy = 0.0;
    std::optional<double> auc_hat;
    std::optional<double> d_hat;
    std::size_t clamp_warnings = 0;
    // One entry per estimator that could not be computed.
    std::vector<std::string> flags;
};

EstimateReport report(const PredictionLog& log);

}  // namespace metasense
