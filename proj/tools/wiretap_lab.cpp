#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wiretap/capacity_engine.hpp"
#include "wiretap/codec_sim.hpp"
#include "wiretap/csv.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/leakage_lab.hpp"
#include "wiretap/run_config.hpp"
#include "wiretap/verify_suite.hpp"

namespace fs = std::filesystem;
using namespace wiretap;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "csv";
};

RunConfig load(const Common& c, ConfigEntries* entries = nullptr) {
    if (c.config.empty()) throw ConfigError("--config", 0, "a configuration file is required");
    RunConfig cfg = load_config(c.config, entries);
    if (c.seed) cfg.sim.seed = *c.seed;
    if (c.format != "csv") throw ConfigError("--format", 0, "only 'csv' is supported");
    return cfg;
}

fs::path out_dir(const Common& c, const RunConfig& cfg) {
    fs::path dir = c.out.empty() ? fs::path(cfg.output.dir) : fs::path(c.out);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> capacity_header(bool feedback) {
    std::vector<std::string> h{"structure", "power",   "sigma_w_sq", "sigma_v_sq", "sigma_dw_sq", "correlation",
                               "placement", "rate_rh", "rate_rh1",   "rate_rh2",   "secure",      "c0",
                               "c2",        "cs0",     "cs_lower",   "cs_upper",   "exact",       "leakage_bound_phase2",
                               "discontinuity_notes"};
    if (feedback) {
        h.push_back("feedback_rate");
        h.push_back("c_snf");
        h.push_back("c_sf");
    }
    return h;
}

std::vector<std::string> capacity_row(const RunConfig& cfg, const CapacityReport& r, bool feedback) {
    using csv::number;
    const auto& p = cfg.channel;
    const auto& h = cfg.help;
    std::vector<std::string> row{std::string(to_string(p.structure)), number(p.power_limit), number(p.sigma_w_sq),
                                 number(p.sigma_v_sq), number(p.sigma_dw_sq), number(p.correlation),
                                 std::string(to_string(h.placement)), number(h.rate_rh), number(h.rate_rh1),
                                 number(h.rate_rh2), csv::boolean(h.secure), number(r.c0), number(r.c2),
                                 number(r.cs0), number(r.cs_lower), number(r.cs_upper), csv::boolean(r.exact),
                                 number(r.leakage_bound_phase2), csv::join(r.discontinuity_notes)};
    if (feedback) {
        const double rf = cfg.feedback_rate.value_or(0.0);
        row.push_back(number(rf));
        try {
            const FeedbackRates fr = feedback_comparison(p, rf);
            row.push_back(number(fr.c_snf));
            row.push_back(number(fr.c_sf));
        } catch (const std::exception&) {
            row.push_back("");
            row.push_back("");
        }
    }
    return row;
}

void print_report(std::ostream& os, const CapacityReport& r) {
    auto line = [&](const char* k, const std::string& v) { os << "  " << std::left << std::setw(22) << k << v << '\n'; };
    line("c0", csv::number(r.c0));
    line("c2", csv::number(r.c2));
    line("cs0", csv::number(r.cs0));
    line("cs_lower", csv::number(r.cs_lower));
    line("cs_upper", csv::number(r.cs_upper));
    line("exact", csv::boolean(r.exact));
    line("leakage_bound_phase2", csv::number(r.leakage_bound_phase2));
    line("discontinuity_notes", r.discontinuity_notes.empty() ? "-" : csv::join(r.discontinuity_notes));
}

int cmd_capacity(const Common& c) {
    const RunConfig cfg = load(c);
    const CapacityReport r = secrecy_capacity_with_help(cfg.channel, cfg.help);
    std::cout << "capacity report (" << to_string(cfg.channel.structure) << ", help " << to_string(cfg.help.placement)
              << ")\n";
    print_report(std::cout, r);
    const bool fb = cfg.feedback_rate.has_value();
    if (fb) {
        try {
            const FeedbackRates fr = feedback_comparison(cfg.channel, *cfg.feedback_rate);
            std::cout << "  c_snf                 " << csv::number(fr.c_snf) << "\n  c_sf                  "
                      << csv::number(fr.c_sf) << '\n';
        } catch (const InvalidParams& ex) {
            std::cout << "  feedback              " << ex.what() << '\n';
        }
    }
    const fs::path path = out_dir(c, cfg) / "capacity.csv";
    std::ofstream f(path, std::ios::binary);
    csv::write_row(f, capacity_header(fb));
    csv::write_row(f, capacity_row(cfg, r, fb));
    std::cout << "wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_sweep(const Common& c, const std::string& axis, double from, double to, std::size_t steps) {
    ConfigEntries entries;
    const RunConfig base = load(c, &entries);
    const auto keys = known_config_keys();
    if (std::find(keys.begin(), keys.end(), axis) == keys.end()) throw ConfigError(axis, 0, "unknown sweep axis");
    if (steps < 1) throw ConfigError("--steps", 0, "must be >= 1");
    if (!std::isfinite(from) || !std::isfinite(to)) throw ConfigError("--from/--to", 0, "must be finite");
    const bool fb = base.feedback_rate.has_value() || axis == "feedback.rate";
    const fs::path path = out_dir(c, base) / "sweep.csv";
    std::ofstream f(path, std::ios::binary);
    auto header = capacity_header(fb);
    header.insert(header.begin(), "axis_value");
    csv::write_row(f, header);
    for (std::size_t i = 0; i < steps; ++i) {
        const double v = steps == 1 ? from : from + (to - from) * static_cast<double>(i) / static_cast<double>(steps - 1);
        ConfigEntries e = entries;
        std::ostringstream os;
        os << std::setprecision(17) << v;
        const int line = e.count(axis) ? e.at(axis).line : 0;
        e[axis] = {os.str(), line};
        RunConfig cfg = build_config(e);
        if (c.seed) cfg.sim.seed = *c.seed;
        auto row = capacity_row(cfg, secrecy_capacity_with_help(cfg.channel, cfg.help), fb);
        row.insert(row.begin(), csv::number(v));
        csv::write_row(f, row);
    }
    std::cout << "swept " << axis << " over " << steps << " points; wrote " << path.string() << '\n';
    return kExitOk;
}

int cmd_simulate(const Common& c) {
    const RunConfig cfg = load(c);
    TimeSharingSettings ts;
    ts.n = cfg.sim.n;
    ts.code_rate_factor = cfg.sim.code_rate_factor;
    ts.delta = cfg.sim.delta;
    ts.sim.trials = cfg.sim.trials;
    ts.sim.seed = cfg.sim.seed;
    ts.sim.decoder = cfg.sim.decoder;
    ts.sim.power_mode = cfg.sim.power_mode;
    ts.sim.clip_mult = cfg.schedule.clip_mult;
    ts.sim.causal = cfg.help.causal;
    ts.sim.workers = cfg.sim.workers;
    const TimeSharingReport rep = run_time_sharing(cfg.channel, cfg.help, cfg.schedule.tau_grid, ts);

    const bool leak_ok = cfg.help.placement != HelpPlacement::None &&
                         cfg.help.placement != HelpPlacement::TxAndRxIndependent;
    const fs::path dir = out_dir(c, cfg);
    std::ofstream f(dir / "simulate.csv", std::ios::binary);
    csv::write_row(f, {"tau", "phase", "side", "levels", "predicted_rate", "code_rate", "decoder", "trials", "seed",
                       "error_prob", "error_ci_lo", "error_ci_hi", "achieved_rate", "residual_power",
                       "predicted_residual_power", "mean_tx_power", "leakage_estimate", "leakage_bound"});
    std::ofstream g(dir / "convergence.csv", std::ios::binary);
    csv::write_row(g, {"tau", "phase1_fraction", "phase1_rate", "composite_rate", "target", "composite_leakage_bound",
                       "reliable"});
    std::cout << std::left << std::setw(12) << "tau" << std::setw(16) << "composite" << std::setw(20) << "max P_e"
              << "reliable\n";
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
        const auto& row = rep.rows[k];
        double worst = 0.0;
        for (std::size_t j = 0; j < row.phases.size(); ++j) {
            const auto& ph = row.phases[j];
            const auto& o = ph.outcome;
            worst = std::max(worst, o.error_prob);
            std::string leak = "", bound = "";
            if (leak_ok && ph.levels <= 64) {
                try {
                    const Codebook cb = generate_codebook(cfg.sim.leak_n,
                                                          std::log2(static_cast<double>(cfg.sim.leak_messages)) /
                                                              static_cast<double>(cfg.sim.leak_n),
                                                          ph.side == HelpPlacement::TxOnly
                                                              ? cfg.channel.power_limit
                                                              : cfg.channel.power_limit,
                                                          derive_seed(cfg.sim.seed, 1000 + k));
                    LeakageOptions lo;
                    lo.levels = ph.levels;
                    lo.clip_mult = cfg.schedule.clip_mult;
                    lo.bins = cfg.sim.leak_bins;
                    lo.power_mode = cfg.sim.power_mode;
                    const LeakageEstimate le = estimate_leakage_discrete(cfg.channel, cfg.help, cb, lo);
                    leak = csv::number(le.value);
                    bound = csv::number(le.bound);
                } catch (const std::exception& ex) {
                    std::cerr << "leakage estimate skipped at tau=" << row.tau << ": " << ex.what() << '\n';
                }
            }
            csv::write_row(f, {csv::number(row.tau), std::to_string(j + 2), std::string(to_string(ph.side)),
                               std::to_string(ph.levels), csv::number(ph.predicted_rate), csv::number(ph.code_rate),
                               std::string(to_string(o.decoder_used)), std::to_string(o.trials),
                               std::to_string(o.seed), csv::number(o.error_prob), csv::number(o.error_ci.lo),
                               csv::number(o.error_ci.hi), csv::number(o.achieved_rate), csv::number(o.residual_power),
                               csv::number(o.predicted_residual_power), csv::number(o.mean_tx_power), leak, bound});
        }
        csv::write_row(g, {csv::number(row.tau), csv::number(row.phase1_fraction), csv::number(row.phase1_rate),
                           csv::number(row.composite_rate), csv::number(rep.target),
                           csv::number(row.composite_leakage_bound), csv::boolean(row.reliable)});
        std::cout << std::setw(12) << csv::number(row.tau) << std::setw(16) << csv::number(row.composite_rate)
                  << std::setw(20) << csv::number(worst) << csv::boolean(row.reliable) << '\n';
    }
    std::cout << "target " << csv::number(rep.target) << ", monotone " << csv::boolean(rep.monotone)
              << ", final relative gap " << csv::number(rep.final_relative_gap) << '\n';
    std::cout << "wrote " << (dir / "simulate.csv").string() << " and " << (dir / "convergence.csv").string() << '\n';
    return kExitOk;
}

int cmd_verify(const Common& c, const std::string& target, std::size_t tables) {
    VerifyOptions opt;
    opt.tables_per_model = tables;
    if (c.seed) opt.seed = *c.seed;
    std::vector<VerifyItem> items;
    if (target == "all") {
        items = run_verify_all(opt);
    } else if (target.empty()) {
        const RunConfig cfg = load(c);
        if (!c.seed) opt.seed = cfg.sim.seed;
        items = run_verify_config(cfg, opt);
    } else {
        throw ConfigError("verify", 0, "expected 'all' or --config PATH");
    }
    bool ok = true;
    for (const auto& it : items) {
        ok = ok && it.passed;
        std::cout << (it.passed ? "PASS " : "FAIL ") << std::left << std::setw(52) << it.id << " checks=" << it.checks
                  << " violations=" << it.violations << "  [" << it.anchor << "]";
        if (!it.detail.empty()) std::cout << "  " << it.detail;
        std::cout << '\n';
    }
    std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
    return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gaussian wiretap channel with rate-limited help: capacity, sweeps, simulation, verification"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config, "configuration file (section.key = value)");
        sub->add_option("--seed", common.seed, "override sim.seed");
        sub->add_option("--out", common.out, "output directory (default: output.dir)");
        sub->add_option("--format", common.format, "output format")->check(CLI::IsMember({"csv"}));
    };
    auto* cap = app.add_subcommand("capacity", "closed-form secrecy capacity report");
    add_common(cap);
    auto* sweep = app.add_subcommand("sweep", "capacity report over a parameter grid");
    add_common(sweep);
    std::string axis;
    double from = 0.0, to = 1.0;
    std::size_t steps = 11;
    sweep->add_option("--axis", axis, "config key to vary, e.g. help.rate")->required();
    sweep->add_option("--from", from, "first grid value")->required();
    sweep->add_option("--to", to, "last grid value")->required();
    sweep->add_option("--steps", steps, "number of grid points (inclusive)");
    auto* sim = app.add_subcommand("simulate", "Monte-Carlo flash-signaling simulation over the tau grid");
    add_common(sim);
    auto* ver = app.add_subcommand("verify", "proof-step and closed-form verification suite");
    add_common(ver);
    std::string target;
    std::size_t tables = 200;
    ver->add_option("target", target, "'all' or empty to verify --config");
    ver->add_option("--tables", tables, "random tables per oracle model");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*cap) return cmd_capacity(common);
        if (*sweep) return cmd_sweep(common, axis, from, to, steps);
        if (*sim) return cmd_simulate(common);
        if (*ver) return cmd_verify(common, target, tables);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const InvalidParams& e) {
        std::cerr << "invalid parameters: " << e.what() << '\n';
        return kExitConfig;
    } catch (const Unsupported& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitVerifyFailed;
    }
    return kExitOk;
}
