#include "metasense/empirical.hpp"

#include "metasense/numerics.hpp"

#include "json.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>

namespace metasense {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& text, double& out) {
    if (text.empty()) return false;
    char* end = nullptr;
    errno = 0;
    out = std::strtod(text.c_str(), &end);
    return errno == 0 && end == text.c_str() + text.size();
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
    std::ostringstream msg;
    msg << "line " << line << ": " << what;
    throw LogFormatError(msg.str(), line);
}

void add_record(PredictionLog& log, std::size_t line, bool correct, double confidence) {
    if (!std::isfinite(confidence) || confidence < 0.0 || confidence > 1.0) {
        std::ostringstream msg;
        msg << "confidence must lie in [0,1], got " << confidence;
        fail(line, msg.str());
    }
    if (confidence == 0.0) {
        confidence = kConfidenceClamp;
        ++log.clamp_warnings;
    } else if (confidence == 1.0) {
        confidence = 1.0 - kConfidenceClamp;
        ++log.clamp_warnings;
    }
    log.records.push_back({correct, confidence});
}

void parse_csv(std::istream& in, PredictionLog& log) {
    std::string raw;
    std::size_t line_no = 0;
    std::size_t correct_col = 0;
    std::size_t confidence_col = 1;
    bool first = true;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_csv(line);

        if (first) {
            first = false;
            double probe;
            if (!parse_double(fields.front(), probe)) {
                auto find = [&](std::string_view name) {
                    const auto it = std::find(fields.begin(), fields.end(), name);
                    if (it == fields.end()) {
                        fail(line_no, "header lacks a `" + std::string(name) + "` column");
                    }
                    return static_cast<std::size_t>(it - fields.begin());
                };
                correct_col = find("correct");
                confidence_col = find("confidence");
                continue;
            }
        }

        const std::size_t needed = std::max(correct_col, confidence_col) + 1;
        if (fields.size() < needed) {
            fail(line_no, "expected at least " + std::to_string(needed) + " fields");
        }
        const std::string& flag = fields[correct_col];
        if (flag != "0" && flag != "1") {
            fail(line_no, "`correct` must be 0 or 1, got '" + flag + "'");
        }
        double confidence;
        if (!parse_double(fields[confidence_col], confidence)) {
            fail(line_no, "unparseable confidence '" + fields[confidence_col] + "'");
        }
        add_record(log, line_no, flag == "1", confidence);
    }
}

void parse_json(std::istream& in, PredictionLog& log) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw LogFormatError(std::string("invalid JSON: ") + e.what(), 0);
    }
    if (!doc.is_array()) {
        throw LogFormatError("JSON log must be an array of records", 0);
    }
    std::size_t index = 0;
    for (const auto& item : doc) {
        ++index;
        if (!item.is_object() || !item.contains("correct") || !item.contains("confidence")) {
            fail(index, "record needs `correct` and `confidence` keys");
        }
        const auto& flag = item["correct"];
        bool correct;
        if (flag.is_boolean()) {
            correct = flag.get<bool>();
        } else if (flag.is_number_integer() && (flag.get<long long>() == 0 || flag.get<long long>() == 1)) {
            correct = flag.get<long long>() == 1;
        } else {
            fail(index, "`correct` must be 0, 1, true or false, got " + flag.dump());
        }
        if (!item["confidence"].is_number()) {
            fail(index, "`confidence` must be a number");
        }
        add_record(log, index, correct, item["confidence"].get<double>());
    }
}

struct Split {
    std::vector<double> correct;
    std::vector<double> incorrect;
};

Split split_by_class(const PredictionLog& log) {
    Split s;
    for (const auto& r : log.records) {
        (r.correct ? s.correct : s.incorrect).push_back(r.confidence);
    }
    return s;
}

}  // namespace

LogFormat parse_log_format(std::string_view name) {
    if (name == "csv") return LogFormat::csv;
    if (name == "json") return LogFormat::json;
    throw std::invalid_argument("unknown log format '" + std::string(name) + "' (csv or json)");
}

PredictionLog parse_log(std::istream& in, LogFormat format, std::string source_label) {
    PredictionLog log;
    log.source_label = std::move(source_label);
    if (format == LogFormat::csv) {
        parse_csv(in, log);
    } else {
        parse_json(in, log);
    }
    if (log.records.empty()) {
        throw LogFormatError("log contains no records", 0);
    }
    return log;
}

PredictionLog load_log(const std::filesystem::path& path, LogFormat format) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open log file " + path.string());
    }
    return parse_log(in, format, path.filename().string());
}

PredictionLog concatenate(const PredictionLog& a, const PredictionLog& b) {
    PredictionLog out;
    out.records.reserve(a.records.size() + b.records.size());
    out.records.insert(out.records.end(), a.records.begin(), a.records.end());
    out.records.insert(out.records.end(), b.records.begin(), b.records.end());
    out.source_label = a.source_label + "+" + b.source_label;
    out.clamp_warnings = a.clamp_warnings + b.clamp_warnings;
    return out;
}

double meta_auc(std::span<const double> correct, std::span<const double> incorrect) {
    if (correct.empty() || incorrect.empty()) {
        throw EstimationError("meta-AUC is undefined without both correct and incorrect items");
    }
    struct Item {
        double value;
        bool correct;
    };
    std::vector<Item> items;
    items.reserve(correct.size() + incorrect.size());
    for (double v : correct) items.push_back({v, true});
    for (double v : incorrect) items.push_back({v, false});
    std::sort(items.begin(), items.end(),
              [](const Item& a, const Item& b) { return a.value < b.value; });

    // Walk tie groups in ascending order, counting incorrect items strictly below.
    std::uint64_t incorrect_below = 0;
    std::uint64_t wins = 0;
    std::uint64_t ties = 0;
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        std::uint64_t group_correct = 0;
        std::uint64_t group_incorrect = 0;
        while (j < items.size() && items[j].value == items[i].value) {
            (items[j].correct ? group_correct : group_incorrect) += 1;
            ++j;
        }
        wins += group_correct * incorrect_below;
        ties += group_correct * group_incorrect;
        incorrect_below += group_incorrect;
        i = j;
    }
    const double pairs = static_cast<double>(correct.size()) * static_cast<double>(incorrect.size());
    return (static_cast<double>(wins) + 0.5 * static_cast<double>(ties)) / pairs;
}

double estimate_meta_auc(const PredictionLog& log) {
    const Split s = split_by_class(log);
    return meta_auc(s.correct, s.incorrect);
}

double estimate_d(const PredictionLog& log) {
    const Split s = split_by_class(log);
    if (s.correct.size() < 2 || s.incorrect.size() < 2) {
        throw EstimationError("Cohen's d needs at least two items in each class");
    }
    auto moments = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += logit(x);
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) {
            const double dev = logit(x) - mean;
            ss += dev * dev;
        }
        return std::pair{mean, ss};
    };
    const auto [mean1, ss1] = moments(s.correct);
    const auto [mean0, ss0] = moments(s.incorrect);
    if (ss1 == 0.0 || ss0 == 0.0) {
        throw EstimationError("Cohen's d is undefined when a class has zero variance");
    }
    const double dof = static_cast<double>(s.correct.size() + s.incorrect.size() - 2);
    return (mean1 - mean0) / std::sqrt((ss1 + ss0) / dof);
}

EstimateReport report(const PredictionLog& log) {
    if (log.records.empty()) {
        throw EstimationError("cannot report on an empty log");
    }
    EstimateReport r;
    r.source_label = log.source_label;
    r.n = log.records.size();
    r.n_correct = static_cast<std::size_t>(std::count_if(
        log.records.begin(), log.records.end(), [](const auto& x) { return x.correct; }));
    r.accuracy = static_cast<double>(r.n_correct) / static_cast<double>(r.n);
    r.clamp_warnings = log.clamp_warnings;
    try {
        r.auc_hat = estimate_meta_auc(log);
    } catch (const EstimationError& e) {
        r.flags.push_back(std::string("auc_undefined: ") + e.what());
    }
    try {
        r.d_hat = estimate_d(log);
    } catch (const EstimationError& e) {
        r.flags.push_back(std::string("d_undefined: ") + e.what());
    }
    return r;
}

}  // namespace metasense
