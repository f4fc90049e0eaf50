#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "metasense/confidence_model.hpp"
#include "metasense/empirical.hpp"
#include "oracles/oracles.hpp"

#include <cmath>
#include <sstream>

using namespace metasense;

namespace {

PredictionLog csv(const std::string& text) {
    std::istringstream in(text);
    return parse_log(in, LogFormat::csv, "test");
}

PredictionLog synthetic(double theta, double d, std::size_t n, std::uint64_t seed) {
    const auto spec = canonical_spec(Probability(theta), d);
    RandomStream s(seed, 0);
    PredictionLog log;
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = sample_ai_trial(spec, s);
        log.records.push_back({t.correct, t.confidence});
    }
    return log;
}

}  // namespace

TEST_CASE("parse CSV") {
    auto two = csv("1,0.9\n0,0.4\n");
    CHECK(two.records.size() == 2);
    CHECK(two.records[0].correct);
    CHECK(two.records[1].confidence == 0.4);
    CHECK(two.clamp_warnings == 0);

    auto with_header = csv("id,confidence,correct\n# note\na,0.3,1\n\nb,0.6,0\n");
    REQUIRE(with_header.records.size() == 2);
    CHECK(with_header.records[0].correct);
    CHECK(with_header.records[0].confidence == 0.3);

    auto clamped = csv("1,1.0\n0,0\n");
    CHECK(clamped.clamp_warnings == 2);
    CHECK(clamped.records[0].confidence == 1.0 - kConfidenceClamp);
    CHECK(clamped.records[1].confidence == kConfidenceClamp);

    try {
        csv("1,0.5\n2,0.5\n");
        FAIL("expected LogFormatError");
    } catch (const LogFormatError& e) {
        CHECK(e.line() == 2);
    }
    try {
        csv("correct,confidence\n1,0.5\n0,1.5\n");
        FAIL("expected LogFormatError");
    } catch (const LogFormatError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(csv(""), LogFormatError);
    CHECK_THROWS_AS(csv("correct,confidence\n"), LogFormatError);
    CHECK_THROWS_AS(csv("1\n"), LogFormatError);
    CHECK_THROWS_AS(csv("1,abc\n"), LogFormatError);
    CHECK_THROWS_AS(csv("1,nan\n"), LogFormatError);
    CHECK_THROWS_AS(csv("x,y\n1,0.5\n"), LogFormatError);
}

TEST_CASE("parse JSON and files") {
    std::istringstream in(R"([{"correct": 1, "confidence": 0.9}, {"correct": false, "confidence": 0.0}])");
    auto log = parse_log(in, LogFormat::json);
    REQUIRE(log.records.size() == 2);
    CHECK_FALSE(log.records[1].correct);
    CHECK(log.clamp_warnings == 1);
    std::istringstream bad(R"([{"correct": 1}])");
    CHECK_THROWS_AS(parse_log(bad, LogFormat::json), LogFormatError);
    std::istringstream not_array(R"({"correct": 1, "confidence": 0.5})");
    CHECK_THROWS_AS(parse_log(not_array, LogFormat::json), LogFormatError);
    std::istringstream empty("[]");
    CHECK_THROWS_AS(parse_log(empty, LogFormat::json), LogFormatError);

    const auto a = load_log(METASENSE_FIXTURES "/sample.csv", LogFormat::csv);
    const auto b = load_log(METASENSE_FIXTURES "/sample.json", LogFormat::json);
    CHECK(a.records.size() == 4);
    CHECK(estimate_meta_auc(a) == 0.875);
    CHECK(estimate_meta_auc(b) == 0.875);
    CHECK_THROWS(load_log(METASENSE_FIXTURES "/does-not-exist.csv", LogFormat::csv));
    CHECK(parse_log_format("json") == LogFormat::json);
    CHECK_THROWS(parse_log_format("xml"));
}

TEST_CASE("meta-AUC") {
    CHECK(meta_auc(std::vector<double>{0.9, 0.7}, std::vector<double>{0.6, 0.4}) == 1.0);
    CHECK(meta_auc(std::vector<double>{0.8, 0.5}, std::vector<double>{0.5, 0.2}) == 0.875);
    CHECK(meta_auc(std::vector<double>{0.1}, std::vector<double>{0.9}) == 0.0);
    CHECK(meta_auc(std::vector<double>{0.5, 0.5}, std::vector<double>{0.5}) == 0.5);
    CHECK_THROWS_AS(estimate_meta_auc(csv("1,0.5\n1,0.7\n")), EstimationError);

    // rank statistic equals exhaustive pair enumeration, with heavy ties
    std::mt19937_64 g(5);
    std::uniform_int_distribution<int> level(1, 9);
    std::bernoulli_distribution coin(0.6);
    for (int rep = 0; rep < 300; ++rep) {
        const int n = 2 + rep % 199;
        std::vector<double> pos, neg;
        for (int i = 0; i < n; ++i) (coin(g) ? pos : neg).push_back(level(g) / 10.0);
        if (pos.empty() || neg.empty()) continue;
        CHECK(meta_auc(pos, neg) == oracle::pairwise_auc(pos, neg));
    }
}

TEST_CASE("meta-AUC is a rank statistic") {
    auto log = synthetic(0.66, 1.2, 2000, 3);
    const double base = estimate_meta_auc(log);
    for (auto& r : log.records) r.confidence = std::pow(r.confidence, 3.0) * 0.5 + 0.1;
    CHECK(estimate_meta_auc(log) == base);
}

TEST_CASE("estimate_d") {
    const auto big = synthetic(0.66, 1.734572701988, 1'000'000, 8);
    CHECK(std::abs(estimate_d(big) - 1.7345) < 0.01);
    CHECK(estimate_d(csv("1,0.2\n1,0.7\n0,0.7\n0,0.2\n")) == 0.0);
    CHECK_THROWS_AS(estimate_d(csv("1,0.2\n0,0.7\n0,0.2\n")), EstimationError);
    CHECK_THROWS_AS(estimate_d(csv("1,0.5\n1,0.5\n0,0.7\n0,0.2\n")), EstimationError);

    for (double d : {0.5, 1.5, 3.0}) {
        const auto log = synthetic(0.6, d, 100'000, 9);
        CHECK(std::abs(std_normal_cdf(estimate_d(log) / std::sqrt(2.0)) - estimate_meta_auc(log)) < 0.02);
    }
}

TEST_CASE("generative round trip") {
    std::uint64_t seed = 100;
    for (double d : {0.0, 1.0, 2.0, 3.29}) {
        for (double th : {0.3, 0.55, 0.66, 0.9}) {
            const auto r = report(synthetic(th, d, 100'000, ++seed));
            REQUIRE(r.auc_hat.has_value());
            CHECK(std::abs(*r.auc_hat - auc_from_d(d)) <= 0.01);
            CHECK(std::abs(r.accuracy - th) <= 0.005);
        }
    }
    const auto r = report(synthetic(0.66, d_from_auc(0.89), 100'000, 1));
    CHECK(std::abs(r.accuracy - 0.66) <= 0.005);
    CHECK(std::abs(*r.auc_hat - 0.89) <= 0.005);
}

TEST_CASE("report") {
    auto one = report(csv("1,0.8\n"));
    CHECK(one.n == 1);
    CHECK(one.accuracy == 1.0);
    CHECK_FALSE(one.auc_hat.has_value());
    CHECK_FALSE(one.d_hat.has_value());
    CHECK(one.flags.size() == 2);

    const auto a = csv("1,0.8\n1,0.5\n0,0.5\n0,0.2\n");
    const auto b = csv("1,0.9\n1,0.6\n1,0.3\n0,0.1\n0,0.4\n1,0.7\n");
    const auto ab = report(concatenate(a, b));
    CHECK(ab.n == 10);
    CHECK(ab.n_correct == 6);
    CHECK(std::abs(ab.accuracy - (4 * 0.5 + 6 * (4.0 / 6.0)) / 10) < 1e-15);
    const auto ra = report(a);
    CHECK(ra.auc_hat == 0.875);
    CHECK(ra.accuracy == 0.5);
}
