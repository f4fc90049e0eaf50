#include "metasense/cli.hpp"

#include "metasense/empirical.hpp"
#include "metasense/io.hpp"
#include "metasense/scenario.hpp"
#include "metasense/simulator.hpp"
#include "metasense/team_accuracy.hpp"
#include "metasense/validation.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace metasense::cli {

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnvVar)) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0') return v;
    }
    return 1;
}

struct AiFlags {
    std::optional<double> theta;
    std::optional<double> auc;
    std::optional<double> d;

    void attach(CLI::App* app) {
        app->add_option("--theta", theta, "AI accuracy theta_m in (0,1)")->required();
        auto* a = app->add_option("--auc", auc, "AI meta-AUC in [0.5,1)");
        auto* dd = app->add_option("--d", d, "AI sensitivity d >= 0 (instead of --auc)");
        a->excludes(dd);
    }

    Probability theta_m() const { return Probability(*theta); }

    double sensitivity() const {
        if (auc) return d_from_auc(*auc);
        if (d) {
            if (!(*d >= 0.0) || !std::isfinite(*d)) throw UsageError("--d must be finite and >= 0");
            return *d;
        }
        throw UsageError("one of --auc or --d is required");
    }
};

struct HumanFlags {
    std::optional<double> c_h;
    std::optional<double> mu_h;
    std::optional<double> sigma_h;

    void attach(CLI::App* app) {
        auto* c = app->add_option("--c-h", c_h, "constant human confidence in (0,1)");
        auto* m = app->add_option("--mu-h", mu_h, "logit-space mean of human confidence");
        auto* s = app->add_option("--sigma-h", sigma_h, "logit-space SD of human confidence (> 0)");
        c->excludes(m)->excludes(s);
    }

    HumanSpec spec() const {
        if (c_h) return ConstantConfidence{Probability(*c_h)};
        if (mu_h && sigma_h) {
            HumanSpec h = LogitNormalParams{*mu_h, *sigma_h};
            validate(h);
            return h;
        }
        throw UsageError("give either --c-h, or both --mu-h and --sigma-h");
    }
};

struct GridFlags {
    std::string theta_range;
    std::string auc_range;
    std::string method = "closed";
    std::size_t refine = 1;

    void attach(CLI::App* app) {
        app->add_option("--theta-range", theta_range, "AI accuracy grid lo:hi:n")->required();
        app->add_option("--auc-range", auc_range, "meta-AUC grid lo:hi:n")->required();
        app->add_option("--method", method, "closed or quadrature")
            ->check(CLI::IsMember({"closed", "quadrature"}))
            ->capture_default_str();
        app->add_option("--refine", refine, "insert refine-1 points between grid neighbours")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    }

    std::vector<GridCell> sweep(const HumanSpec& human) const {
        const GridRange theta = GridRange::parse(theta_range).refined(refine);
        const GridRange auc = GridRange::parse(auc_range).refined(refine);
        return sweep_grid(human, theta, auc, method == "closed" ? Method::closed_form : Method::quadrature);
    }
};

void write_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

// Opens `path` for writing, or returns nullptr to mean stdout.
std::unique_ptr<std::ofstream> open_output(const std::string& path) {
    if (path.empty() || path == "-") return nullptr;
    auto f = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*f) throw std::runtime_error("cannot open " + path + " for writing");
    return f;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Human-AI decision accuracy under AI metacognitive sensitivity", "metasense"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    // Each subcommand fills `configure` (flag resolution, usage errors) and
    // `execute` (the work itself) so that usage errors map to exit 2.
    std::function<std::function<int()>()> configure;

    // expected-utility ---------------------------------------------------
    AiFlags eu_ai;
    HumanFlags eu_human;
    std::string eu_method = "closed";
    std::optional<std::uint64_t> eu_seed;
    std::size_t eu_n = 1000000;
    auto* eu = app.add_subcommand("expected-utility", "Combined human-AI accuracy for one setting");
    eu_ai.attach(eu);
    eu_human.attach(eu);
    eu->add_option("--method", eu_method, "closed, approx, quadrature or mc")
        ->check(CLI::IsMember({"closed", "approx", "quadrature", "mc"}))
        ->capture_default_str();
    eu->add_option("--seed", eu_seed, std::string("seed for mc (default $") + kSeedEnvVar + " or 1)");
    eu->add_option("--n", eu_n, "trials for mc")->check(CLI::PositiveNumber)->capture_default_str();
    eu->callback([&] {
        configure = [&]() -> std::function<int()> {
            const Probability theta = eu_ai.theta_m();
            const double d = eu_ai.sensitivity();
            const HumanSpec human = eu_human.spec();
            Method method = Method::closed_form;
            if (eu_method == "approx") {
                if (is_constant(human)) throw UsageError("--method approx needs --mu-h/--sigma-h");
                if (d == 0.0) throw UsageError("--method approx needs d > 0");
                method = Method::probit_approx;
            } else if (eu_method == "quadrature") {
                method = Method::quadrature;
            } else if (eu_method == "mc") {
                method = Method::monte_carlo;
            }
            const std::uint64_t seed = eu_seed.value_or(default_seed());
            return [&out, human, theta, d, method, seed, n = eu_n] {
                CombinedAccuracy c = method == Method::monte_carlo
                                         ? combined_monte_carlo(human, theta, d, n, seed)
                                         : combined_accuracy(human, theta, d, method);
                nlohmann::json j = c;
                j["theta_m"] = theta.value();
                j["d"] = d;
                j["auc"] = auc_from_d(d);
                j["human_accuracy"] = human_accuracy(human);
                write_json(out, j);
                return kExitOk;
            };
        };
    });

    // grid ---------------------------------------------------------------
    GridFlags grid_flags;
    HumanFlags grid_human;
    std::string grid_out;
    auto* grid = app.add_subcommand("grid", "Combined accuracy over a (theta_m, AUC) grid as CSV");
    grid_flags.attach(grid);
    grid_human.attach(grid);
    grid->add_option("--out", grid_out, "output CSV path (default stdout)");
    grid->callback([&] {
        configure = [&]() -> std::function<int()> {
            const HumanSpec human = grid_human.spec();
            std::vector<GridCell> cells = grid_flags.sweep(human);
            return [&out, &grid_out, cells = std::move(cells)] {
                auto file = open_output(grid_out);
                write_grid_csv(file ? *file : out, cells);
                return kExitOk;
            };
        };
    });

    // invert -------------------------------------------------------------
    GridFlags inv_flags;
    HumanFlags inv_human;
    double inv_margin = kDefaultMinMargin;
    std::size_t inv_limit = 0;
    auto* inv = app.add_subcommand("invert", "Find less accurate but more sensitive AIs that do better");
    inv_flags.attach(inv);
    inv_human.attach(inv);
    inv->add_option("--min-margin", inv_margin, "smallest combined-accuracy advantage to report")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    inv->add_option("--limit", inv_limit, "report at most this many pairs (0 = all)")
        ->capture_default_str();
    inv->callback([&] {
        configure = [&]() -> std::function<int()> {
            const HumanSpec human = inv_human.spec();
            std::vector<GridCell> cells = inv_flags.sweep(human);
            return [&out, cells = std::move(cells), margin = inv_margin, limit = inv_limit] {
                auto pairs = find_inversions(cells, margin);
                if (limit > 0 && pairs.size() > limit) pairs.resize(limit);
                write_json(out, nlohmann::json(pairs));
                return kExitOk;
            };
        };
    });

    // simulate -----------------------------------------------------------
    std::optional<double> sim_theta;
    std::optional<double> sim_auc;
    std::optional<double> sim_d;
    HumanFlags sim_human;
    std::string sim_policy = "ideal";
    std::optional<double> sim_threshold;
    std::size_t sim_n = 100000;
    std::optional<std::uint64_t> sim_seed;
    bool sim_table1 = false;
    std::string sim_trials_out;
    auto* sim = app.add_subcommand("simulate", "Trial-level Monte Carlo of the human-AI team");
    sim->add_option("--theta", sim_theta, "AI accuracy theta_m in (0,1)");
    sim->add_option("--auc", sim_auc, "AI meta-AUC in [0.5,1)");
    sim->add_option("--d", sim_d, "AI sensitivity d >= 0");
    sim_human.attach(sim);
    sim->add_option("--policy", sim_policy, "ideal, threshold, self or ai")
        ->check(CLI::IsMember({"ideal", "threshold", "self", "ai"}))
        ->capture_default_str();
    sim->add_option("--threshold", sim_threshold, "AI confidence threshold for --policy threshold");
    sim->add_option("--n", sim_n, "trials (per condition with --table1)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sim->add_option("--seed", sim_seed, std::string("seed (default $") + kSeedEnvVar + " or 1)");
    sim->add_flag("--table1", sim_table1,
                  "run the five AI conditions (A-E) with a logit-normal human at logit(0.55)");
    sim->add_option("--trials-out", sim_trials_out, "write per-trial CSV here");
    sim->callback([&] {
        configure = [&]() -> std::function<int()> {
            const std::uint64_t seed = sim_seed.value_or(default_seed());
            if (sim_table1) {
                if (sim_theta || sim_auc || sim_d || sim_human.c_h || sim_human.mu_h) {
                    throw UsageError("--table1 fixes the AI and human; only --sigma-h, --n, --seed apply");
                }
                if (!sim_trials_out.empty()) throw UsageError("--trials-out is not available with --table1");
                const double sigma_h = sim_human.sigma_h.value_or(0.5);
                if (!(sigma_h > 0.0)) throw UsageError("--sigma-h must be > 0");
                return [&out, seed, sigma_h, n = sim_n] {
                    write_json(out, nlohmann::json(replicate_experiment_conditions(seed, n, sigma_h)));
                    return kExitOk;
                };
            }
            if (!sim_theta) throw UsageError("--theta is required (or use --table1)");
            AiFlags ai{sim_theta, sim_auc, sim_d};
            const AiSpec spec = canonical_spec(ai.theta_m(), ai.sensitivity());
            const HumanSpec human = sim_human.spec();
            HumanPolicy policy = IdealObserver{};
            if (sim_policy == "threshold") {
                if (!sim_threshold) throw UsageError("--policy threshold needs --threshold");
                policy = FixedThreshold{Probability(*sim_threshold)};
            } else if (sim_policy == "self") {
                policy = AlwaysSelf{};
            } else if (sim_policy == "ai") {
                policy = AlwaysAi{};
            } else if (sim_threshold) {
                throw UsageError("--threshold only applies to --policy threshold");
            }
            return [&out, &sim_trials_out, spec, human, policy, seed, n = sim_n] {
                SimOptions opts;
                opts.keep_records = !sim_trials_out.empty();
                SimResult r = run_trials(spec, human, policy, n, seed, opts);
                r.summary.label = to_string(policy);
                if (opts.keep_records) {
                    auto file = open_output(sim_trials_out);
                    write_trials_csv(file ? *file : out, r.records);
                }
                write_json(out, nlohmann::json(r.summary));
                return kExitOk;
            };
        };
    });

    // analyze ------------------------------------------------------------
    std::string an_log;
    std::string an_format = "csv";
    auto* an = app.add_subcommand("analyze", "Accuracy, Cohen's d and meta-AUC of a prediction log");
    an->add_option("--log", an_log, "path to a CSV or JSON prediction log")->required();
    an->add_option("--format", an_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    an->callback([&] {
        configure = [&]() -> std::function<int()> {
            const LogFormat format = parse_log_format(an_format);
            return [&out, &err, &an_log, format] {
                try {
                    const PredictionLog log = load_log(an_log, format);
                    if (log.clamp_warnings > 0) {
                        err << "warning: clamped " << log.clamp_warnings
                            << " confidence value(s) of exactly 0 or 1\n";
                    }
                    write_json(out, nlohmann::json(report(log)));
                    return kExitOk;
                } catch (const LogFormatError& e) {
                    err << "error: " << an_log << ": " << e.what() << '\n';
                    return kExitFailure;
                }
            };
        };
    });

    // validate -----------------------------------------------------------
    ValidationConfig vc;
    std::optional<std::uint64_t> val_seed;
    auto* val = app.add_subcommand("validate",
                                   "Check the analytic formulas against quadrature and Monte Carlo");
    val->add_option("--tol-approx", vc.tol_approx_relative,
                    "relative tolerance, bivariate approximation vs quadrature")
        ->capture_default_str();
    val->add_option("--tol-closed", vc.tol_closed_absolute,
                    "absolute tolerance, closed form vs quadrature")
        ->capture_default_str();
    val->add_option("--tol-mc-se", vc.tol_mc_standard_errors,
                    "tolerance in standard errors, closed form vs Monte Carlo")
        ->capture_default_str();
    val->add_option("--mc-n", vc.mc_trials, "Monte Carlo trials per cell (0 skips)")
        ->capture_default_str();
    val->add_option("--seed", val_seed, std::string("seed (default $") + kSeedEnvVar + " or 1)");
    val->add_option("--mu-points", vc.approx_grid.mu_points, "mu_h grid points")
        ->check(CLI::PositiveNumber)->capture_default_str();
    val->add_option("--sigma-points", vc.approx_grid.sigma_points, "sigma_h grid points")
        ->check(CLI::PositiveNumber)->capture_default_str();
    val->add_option("--theta-points", vc.approx_grid.theta_points, "theta_m grid points")
        ->check(CLI::PositiveNumber)->capture_default_str();
    val->add_option("--auc-points", vc.approx_grid.auc_points, "AUC grid points")
        ->check(CLI::PositiveNumber)->capture_default_str();
    val->callback([&] {
        configure = [&]() -> std::function<int()> {
            if (!(vc.tol_approx_relative >= 0.0 && vc.tol_closed_absolute >= 0.0 &&
                  vc.tol_mc_standard_errors >= 0.0)) {
                throw UsageError("tolerances must be >= 0");
            }
            vc.seed = val_seed.value_or(default_seed());
            return [&out, &err, &vc] {
                const auto checks = run_validation(vc);
                nlohmann::json j = nlohmann::json::array();
                bool all_pass = true;
                for (const auto& c : checks) {
                    nlohmann::json worst = nlohmann::json::object();
                    for (const auto& [k, v] : c.worst.params) worst[k] = v;
                    worst["reference"] = c.worst.reference;
                    worst["candidate"] = c.worst.candidate;
                    worst["error"] = c.worst.error;
                    j.push_back({{"check", c.name},
                                 {"error_kind", c.error_kind},
                                 {"cells", c.cells},
                                 {"tolerance", c.tolerance},
                                 {"max_error", c.max_error},
                                 {"violations", c.violations},
                                 {"worst", worst},
                                 {"pass", c.pass()}});
                    if (!c.pass()) {
                        all_pass = false;
                        err << "FAIL " << c.name << ": " << c.violations << '/' << c.cells
                            << " cells over tolerance " << c.tolerance << "; worst " << worst.dump()
                            << '\n';
                    }
                }
                write_json(out, {{"checks", j}, {"pass", all_pass}});
                return all_pass ? kExitOk : kExitFailure;
            };
        };
    });

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    std::function<int()> execute;
    try {
        execute = configure();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    try {
        return execute();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace metasense::cli
