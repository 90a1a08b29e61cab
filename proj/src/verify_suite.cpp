#include "wiretap/verify_suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "wiretap/discrete_oracle.hpp"
#include "wiretap/leakage_lab.hpp"

namespace wiretap {

namespace {

constexpr double kFormulaTol = 1e-12;

void absorb(VerifyItem& item, const std::vector<ChainStep>& steps) {
    for (const auto& s : steps) {
        ++item.checks;
        if (!s.ok) {
            ++item.violations;
            if (item.detail.empty()) item.detail = s.label;
        }
        item.worst_slack = std::min(item.worst_slack, s.slack);
    }
}

void finish(VerifyItem& item) { item.passed = item.violations == 0 && item.checks > 0; }

template <class F>
VerifyItem guarded_item(std::string id, std::string anchor, F&& body) {
    VerifyItem item;
    item.id = std::move(id);
    item.anchor = std::move(anchor);
    try {
        body(item);
    } catch (const std::exception& ex) {
        ++item.violations;
        item.detail = ex.what();
    }
    finish(item);
    return item;
}

VerifyItem leakage_item(const ChannelParams& p, LeakageChain chain, const VerifyOptions& opt) {
    return guarded_item("leakage_chain." + std::string(to_string(chain)), "Phase-2 leakage chain", [&](VerifyItem& it) {
        ChainOptions co;
        co.samples = 20000;
        co.seed = opt.seed;
        const auto rep = verify_leakage_chain(p, chain, co);
        absorb(it, rep.steps);
        if (!rep.steps.empty()) it.anchor = rep.steps.back().anchor;
    });
}

VerifyItem oracle_item(oracle::Model model, const VerifyOptions& opt) {
    return guarded_item("converse_oracle." + std::string(oracle::to_string(model)), "converse steps on random tables",
                        [&](VerifyItem& it) {
                            Rng rng = make_rng(opt.seed, 77);
                            std::uniform_int_distribution<std::size_t> small(2, 3), mid(1, 3);
                            for (std::size_t k = 0; k < opt.tables_per_model; ++k) {
                                oracle::AlphabetSizes sz{mid(rng) + 1, small(rng), mid(rng)};
                                if (model == oracle::Model::DegradedMemoryless) sz.symbol = 2;
                                const auto table = oracle::random_consistent_table(model, sz, derive_seed(opt.seed, k));
                                const auto rep = oracle::check_converse_chain(table, model);
                                absorb(it, rep.steps);
                            }
                        });
}

double rate_draw(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 3.0)(rng); }

}  // namespace

ChannelParams random_channel(Structure s, Rng& rng) {
    std::uniform_real_distribution<double> pos(0.05, 10.0), corr(-0.95, 0.95);
    switch (s) {
        case Structure::Degraded: return ChannelParams::degraded(pos(rng), pos(rng), pos(rng));
        case Structure::ReverselyDegraded: return ChannelParams::reversely_degraded(pos(rng), pos(rng), pos(rng));
        case Structure::NonDegraded: return ChannelParams::non_degraded(pos(rng), pos(rng), pos(rng), corr(rng));
    }
    return {};
}

FormulaSuiteResult formula_suite(std::size_t samples, std::uint64_t seed) {
    FormulaSuiteResult res;
    Rng rng = make_rng(seed, 11);
    auto expect = [&](const char* what, const CapacityReport& r, double target) {
        ++res.checks;
        const double err = std::max(std::abs(r.cs_lower - target), std::abs(r.cs_upper - target));
        res.max_abs_error = std::max(res.max_abs_error, err);
        if (!r.exact || !(err <= kFormulaTol)) {
            ++res.failures;
            if (res.failed.size() < 8) res.failed.push_back(std::string(what) + ": error " + std::to_string(err));
        }
    };
    auto identical = [&](const char* what, const CapacityReport& a, const CapacityReport& b) {
        ++res.checks;
        if (!(a == b)) {
            ++res.failures;
            if (res.failed.size() < 8) res.failed.push_back(std::string(what) + ": reports differ");
        }
    };
    for (std::size_t i = 0; i < samples; ++i) {
        const ChannelParams d = random_channel(Structure::Degraded, rng);
        const ChannelParams rd = random_channel(Structure::ReverselyDegraded, rng);
        const ChannelParams nd = random_channel(Structure::NonDegraded, rng);
        const double r = rate_draw(rng), r1 = rate_draw(rng), r2 = rate_draw(rng);

        expect("degraded rx", secrecy_capacity_with_help(d, HelpSpec::rx(r)), no_help_secrecy_capacity(d) + r);
        expect("non-degraded rx", secrecy_capacity_with_help(nd, HelpSpec::rx(r)), no_help_secrecy_capacity(nd) + r);
        expect("degraded tx", secrecy_capacity_with_help(d, HelpSpec::tx(r)), no_help_secrecy_capacity(d) + r);
        expect("reversely degraded rx", secrecy_capacity_with_help(rd, HelpSpec::rx(r)), r);
        expect("reversely degraded tx", secrecy_capacity_with_help(rd, HelpSpec::tx(r)), r);
        expect("degraded independent", secrecy_capacity_with_help(d, HelpSpec::independent(r1, r2)),
               no_help_secrecy_capacity(d) + r1 + r2);
        expect("reversely degraded independent", secrecy_capacity_with_help(rd, HelpSpec::independent(r1, r2)), r1 + r2);

        for (const ChannelParams* p : {&d, &rd, &nd}) {
            identical("secure vs public rx", secrecy_capacity_with_help(*p, HelpSpec::rx(r, true)),
                      secrecy_capacity_with_help(*p, HelpSpec::rx(r, false)));
        }
        for (const ChannelParams* p : {&d, &rd}) {
            HelpSpec aware = HelpSpec::rx(r);
            aware.message_aware = true;
            identical("message-aware rx", secrecy_capacity_with_help(*p, aware),
                      secrecy_capacity_with_help(*p, HelpSpec::rx(r)));
        }
    }
    return res;
}

FeedbackSweepResult feedback_sweep(const ChannelParams& params, std::size_t points) {
    FeedbackSweepResult res;
    const double c0 = awgn_capacity(params.power_limit, params.sigma_w_sq);
    const double cs0 = no_help_secrecy_capacity(params);
    res.breakpoint = c0 - cs0;
    res.points = points;
    for (std::size_t i = 0; i < points; ++i) {
        const double rf = 2.0 * res.breakpoint * static_cast<double>(i) / static_cast<double>(points - 1);
        const FeedbackRates fr = feedback_comparison(params, rf);
        const double expected = std::min(c0, cs0 + rf);
        const double err = std::max(std::abs(fr.c_sf - expected), std::abs(fr.c_snf - c0));
        res.max_abs_error = std::max(res.max_abs_error, err);
        const bool saturated_ok = rf >= res.breakpoint ? std::abs(fr.c_sf - c0) <= kFormulaTol : fr.c_sf < c0;
        if (!(err <= kFormulaTol) || !saturated_ok) ++res.failures;
    }
    return res;
}

std::vector<VerifyItem> run_verify_all(const VerifyOptions& opt) {
    std::vector<VerifyItem> out;
    out.push_back(guarded_item("capacity.formulas", "secrecy capacity with rate-limited help", [&](VerifyItem& it) {
        const auto r = formula_suite(opt.formula_samples, opt.seed);
        it.checks = r.checks;
        it.violations = r.failures;
        if (!r.failed.empty()) it.detail = r.failed.front();
    }));
    out.push_back(guarded_item("capacity.feedback", "saturates at C_sf = C_0", [&](VerifyItem& it) {
        const auto r = feedback_sweep(ChannelParams::degraded(1.0, 1.0, 1.0), 100);
        it.checks = r.points;
        it.violations = r.failures;
    }));
    out.push_back(guarded_item("capacity.discontinuity", "more noise at the legitimate Rx is actually better",
                               [&](VerifyItem& it) {
                                   auto chk = [&](bool ok, const char* what) {
                                       ++it.checks;
                                       if (!ok) {
                                           ++it.violations;
                                           if (it.detail.empty()) it.detail = what;
                                       }
                                   };
                                   const HelpSpec h = HelpSpec::rx(0.5);
                                   chk(secrecy_capacity_with_help(ChannelParams::degraded(1, 1, 1e-6), h).cs_lower >= 0.499,
                                       "degraded sigma_v_sq = 1e-6");
                                   chk(secrecy_capacity_with_help(ChannelParams::degraded(1, 1, 0), h).cs_upper == 0.0,
                                       "degraded sigma_v_sq = 0");
                                   chk(std::abs(secrecy_capacity_with_help(ChannelParams::reversely_degraded(1, 1, 1e-6), h)
                                                    .cs_lower - 0.5) <= kFormulaTol,
                                       "reversely degraded sigma_dw_sq = 1e-6");
                                   chk(secrecy_capacity_with_help(ChannelParams::reversely_degraded(1, 1, 0), h).cs_upper == 0.0,
                                       "reversely degraded sigma_dw_sq = 0");
                               }));

    const ChannelParams d = ChannelParams::degraded(1.0, 1.0, 1.0);
    const ChannelParams d_tx = ChannelParams::degraded(2.0, 0.5, 1.0);
    const ChannelParams rd = ChannelParams::reversely_degraded(1.0, 1.0, 1.0);
    const ChannelParams rd_tx = ChannelParams::reversely_degraded(2.0, 0.25, 0.25);
    const ChannelParams rd0 = ChannelParams::reversely_degraded(1.0, 1.0, 0.0);
    const ChannelParams nd = ChannelParams::non_degraded(1.0, 1.0, 1.0, 0.5);
    const ChannelParams nd_tx = ChannelParams::non_degraded(2.0, 0.5, 1.0, 0.5);
    out.push_back(leakage_item(d, LeakageChain::DegradedRx, opt));
    out.push_back(leakage_item(rd, LeakageChain::ReverselyDegradedRx, opt));
    out.push_back(leakage_item(rd0, LeakageChain::ReverselyDegradedSecureCoinciding, opt));
    out.push_back(leakage_item(nd, LeakageChain::NonDegradedRx, opt));
    out.push_back(leakage_item(d_tx, LeakageChain::DegradedTx, opt));
    out.push_back(leakage_item(rd_tx, LeakageChain::ReverselyDegradedTx, opt));
    out.push_back(leakage_item(nd_tx, LeakageChain::NonDegradedTx, opt));
    out.push_back(leakage_item(d, LeakageChain::EntropyGap, opt));

    for (oracle::Model m : oracle::converse_models()) out.push_back(oracle_item(m, opt));

    out.push_back(guarded_item("oracle.discretized_gaussian", "discretized channel reproduces C_s0", [&](VerifyItem& it) {
        const auto r = oracle::discretized_secrecy_capacity(d, opt.discretized_points);
        it.checks = 1;
        if (!(r.relative_error <= 0.02)) {
            it.violations = 1;
            std::ostringstream os;
            os << "relative error " << r.relative_error;
            it.detail = os.str();
        }
    }));
    return out;
}

std::vector<VerifyItem> run_verify_config(const RunConfig& cfg, const VerifyOptions& opt) {
    std::vector<VerifyItem> out;
    const ChannelParams& p = cfg.channel;
    out.push_back(guarded_item("capacity.report", "closed-form report is self-consistent", [&](VerifyItem& it) {
        const CapacityReport r = secrecy_capacity_with_help(p, cfg.help);
        it.checks = 2;
        if (!(r.cs_lower <= r.cs_upper)) ++it.violations;
        if (r.exact && r.cs_lower != r.cs_upper) ++it.violations;
    }));
    if (cfg.help.placement != HelpPlacement::None && cfg.help.placement != HelpPlacement::TxAndRxIndependent) {
        out.push_back(guarded_item("leakage_chain.config", "Phase-2 leakage chain", [&](VerifyItem& it) {
            const LeakageChain chain = chain_for(p, cfg.help);
            it.id = "leakage_chain." + std::string(to_string(chain));
            ChainOptions co;
            co.seed = opt.seed;
            absorb(it, verify_leakage_chain(p, chain, co).steps);
        }));
    }
    if (p.structure == Structure::Degraded && p.sigma_v_sq > 0.0)
        out.push_back(leakage_item(p, LeakageChain::EntropyGap, opt));
    if (p.structure != Structure::NonDegraded && cfg.help.placement != HelpPlacement::None) {
        const bool rd = p.structure == Structure::ReverselyDegraded;
        oracle::Model m;
        if (cfg.help.message_aware)
            m = rd ? oracle::Model::ReverselyDegradedMessageAware : oracle::Model::DegradedMessageAware;
        else if (cfg.help.uses_tx() && cfg.help.placement != HelpPlacement::TxAndRxSame)
            m = rd ? oracle::Model::ReverselyDegradedTx : oracle::Model::DegradedTx;
        else
            m = rd ? oracle::Model::ReverselyDegradedRx : oracle::Model::DegradedRx;
        out.push_back(oracle_item(m, opt));
    }
    return out;
}

}  // namespace wiretap
