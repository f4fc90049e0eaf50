#include "metasense/simulator.hpp"

#include "metasense/empirical.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace metasense {

std::string to_string(const HumanPolicy& policy) {
    struct Visitor {
        std::string operator()(const IdealObserver&) const { return "ideal-observer"; }
        std::string operator()(const FixedThreshold& f) const {
            std::ostringstream s;
            s << "fixed-threshold(" << f.threshold << ")";
            return s.str();
        }
        std::string operator()(const AlwaysSelf&) const { return "always-self"; }
        std::string operator()(const AlwaysAi&) const { return "always-ai"; }
    };
    return std::visit(Visitor{}, policy);
}

namespace {

struct BlockTally {
    std::size_t human_correct = 0;
    std::size_t final_correct = 0;
    std::size_t model_correct = 0;
    std::size_t relied = 0;
};

struct TrialContext {
    const AiSpec& ai;
    const HumanSpec& human;
    const HumanPolicy& policy;
    std::optional<SwitchPoint> fixed_switch;  // constant human + ideal observer
};

Action choose(const TrialContext& ctx, double logit_c_h, double logit_c_m) {
    struct Visitor {
        const TrialContext& ctx;
        double logit_c_h;
        double logit_c_m;
        Action operator()(const IdealObserver&) const {
            if (ctx.fixed_switch) return decide_logit(*ctx.fixed_switch, logit_c_m);
            // c_h itself may round to 0 or 1; build the switch point in logit space.
            const double spread = ctx.ai.mu1 - ctx.ai.mu0;
            if (spread == 0.0) {
                return ctx.ai.theta_m >= sigmoid(logit_c_h) ? Action::model : Action::human;
            }
            const double z_star = ctx.ai.sigma * ctx.ai.sigma *
                                      (logit_c_h - logit(ctx.ai.theta_m)) / spread +
                                  0.5 * (ctx.ai.mu1 + ctx.ai.mu0);
            return logit_c_m < z_star ? Action::human : Action::model;
        }
        Action operator()(const FixedThreshold& f) const {
            return logit_c_m < logit(f.threshold) ? Action::human : Action::model;
        }
        Action operator()(const AlwaysSelf&) const { return Action::human; }
        Action operator()(const AlwaysAi&) const { return Action::model; }
    };
    return std::visit(Visitor{ctx, logit_c_h, logit_c_m}, ctx.policy);
}

void validate_policy(const HumanPolicy& policy) {
    if (const auto* f = std::get_if<FixedThreshold>(&policy)) {
        if (!(f->threshold > 0.0 && f->threshold < 1.0)) {
            throw std::domain_error("fixed-threshold policy needs a threshold in (0,1)");
        }
    }
}

}  // namespace

SimResult run_trials(const AiSpec& ai, const HumanSpec& human, const HumanPolicy& policy,
                     std::size_t n, std::uint64_t seed, const SimOptions& options) {
    if (n == 0) {
        throw std::invalid_argument("run_trials needs at least one trial");
    }
    if (options.block_size == 0) {
        throw std::invalid_argument("block size must be positive");
    }
    ai.validate();
    validate(human);
    validate_policy(policy);

    TrialContext ctx{ai, human, policy, std::nullopt};
    const auto* constant = std::get_if<ConstantConfidence>(&human);
    if (constant && std::holds_alternative<IdealObserver>(policy)) {
        ctx.fixed_switch = switch_point(constant->c_h, ai);
    }

    const std::size_t blocks = (n + options.block_size - 1) / options.block_size;
    std::vector<BlockTally> tallies(blocks);
    SimResult result;
    if (options.keep_records) result.records.resize(n);
    std::vector<double> ai_logit;
    std::vector<unsigned char> ai_correct;
    if (options.compute_auc) {
        ai_logit.resize(n);
        ai_correct.resize(n);
    }

    auto run_block = [&](std::size_t b) {
        RandomStream stream(seed, b);
        BlockTally tally;
        const std::size_t begin = b * options.block_size;
        const std::size_t end = std::min(n, begin + options.block_size);
        for (std::size_t i = begin; i < end; ++i) {
            double c_h;
            double logit_c_h;
            if (constant) {
                c_h = constant->c_h;
                logit_c_h = logit(c_h);
            } else {
                const auto& ln = std::get<LogitNormalParams>(human);
                logit_c_h = ln.mu + ln.sigma * stream.normal();
                c_h = sigmoid(logit_c_h);
            }
            const bool y_h = stream.bernoulli(c_h);
            const AiTrial t = sample_ai_trial(ai, stream);
            const Action action = choose(ctx, logit_c_h, t.logit_confidence);
            const bool y_final = utility(action, y_h, t.correct) == 1;

            tally.human_correct += y_h;
            tally.model_correct += t.correct;
            tally.final_correct += y_final;
            tally.relied += action == Action::model;
            if (options.keep_records) {
                result.records[i] = {y_h, c_h, t.correct, t.confidence, action, y_final};
            }
            if (options.compute_auc) {
                ai_logit[i] = t.logit_confidence;
                ai_correct[i] = t.correct;
            }
        }
        tallies[b] = tally;
    };

    detail::parallel_for(blocks, options.threads, run_block);

    BlockTally total;
    for (const auto& t : tallies) {
        total.human_correct += t.human_correct;
        total.final_correct += t.final_correct;
        total.model_correct += t.model_correct;
        total.relied += t.relied;
    }
    const double count = static_cast<double>(n);
    SimSummary& s = result.summary;
    s.n_trials = n;
    s.accuracy_before = total.human_correct / count;
    s.accuracy_after = total.final_correct / count;
    s.ai_accuracy_observed = total.model_correct / count;
    s.reliance_rate = total.relied / count;
    s.standard_error = std::sqrt(s.accuracy_after * (1.0 - s.accuracy_after) / count);

    if (options.compute_auc && total.model_correct > 0 && total.model_correct < n) {
        std::vector<double> right;
        std::vector<double> wrong;
        right.reserve(total.model_correct);
        wrong.reserve(n - total.model_correct);
        for (std::size_t i = 0; i < n; ++i) {
            (ai_correct[i] ? right : wrong).push_back(ai_logit[i]);
        }
        s.ai_auc_observed = meta_auc(right, wrong);
    }
    return result;
}

CombinedAccuracy combined_monte_carlo(const HumanSpec& human, Probability theta_m, double d,
                                      std::size_t n, std::uint64_t seed,
                                      const SimOptions& options) {
    SimOptions opts = options;
    opts.keep_records = false;
    opts.compute_auc = false;
    const SimResult r = run_trials(canonical_spec(theta_m, d), human, IdealObserver{}, n, seed, opts);
    return {r.summary.accuracy_after, Method::monte_carlo, r.summary.standard_error};
}

std::vector<SimSummary> replicate_experiment_conditions(std::uint64_t seed,
                                                        std::size_t n_per_condition,
                                                        double sigma_h,
                                                        const SimOptions& options) {
    const HumanSpec human = LogitNormalParams{logit(kExperimentHumanAccuracy), sigma_h};
    validate(human);
    std::vector<SimSummary> out;
    for (std::size_t i = 0; i < kExperimentConditions.size(); ++i) {
        const auto& cond = kExperimentConditions[i];
        const AiSpec ai = canonical_spec(Probability(cond.ai_accuracy), d_from_auc(cond.ai_auc));
        SimOptions opts = options;
        opts.keep_records = false;
        SimResult r = run_trials(ai, human, IdealObserver{}, n_per_condition,
                                 derive_seed(seed, i), opts);
        r.summary.label = std::string(1, cond.label);
        out.push_back(std::move(r.summary));
    }
    return out;
}

}  // namespace metasense
