#include "wiretap/capacity_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wiretap/errors.hpp"

namespace wiretap {

namespace {

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

double half_log2(double v) { return 0.5 * std::log2(v); }

// Y^n and Z^n coincide: degraded with sigma_v_sq = 0, or reversely degraded with sigma_dw_sq = 0.
bool receivers_coincide(const ChannelParams& p) {
    return (p.structure == Structure::Degraded && p.sigma_v_sq == 0.0) ||
           (p.structure == Structure::ReverselyDegraded && p.sigma_dw_sq == 0.0);
}

std::string_view coincide_note(const ChannelParams& p, bool secure) {
    if (p.structure == Structure::Degraded) return secure ? kNoteSigmaVZero : kNoteSigmaVZeroNonSecure;
    return secure ? kNoteSigmaDwZeroSecure : kNoteSigmaDwZeroNonSecure;
}

void require_nondegraded_regular(const ChannelParams& p) {
    if (p.structure != Structure::NonDegraded) return;
    if (!(std::abs(p.correlation) < 1.0))
        throw InvalidParams("non-degraded formulas need |correlation| < 1 (singular noise covariance)");
    if (p.sigma_v_sq <= 0.0 || p.sigma_w_sq <= 0.0)
        throw InvalidParams("non-degraded formulas need sigma_w_sq > 0 and sigma_v_sq > 0");
}

double help_boost(const HelpSpec& h) {
    if (h.placement == HelpPlacement::TxAndRxIndependent) return h.rate_rh1 + h.rate_rh2;
    if (h.placement == HelpPlacement::None) return 0.0;
    return h.rate_rh;
}

void set_exact(CapacityReport& r, double value) {
    r.cs_lower = value;
    r.cs_upper = value;
    r.exact = true;
}

void set_lower_only(CapacityReport& r, double value) {
    r.cs_lower = value;
    r.cs_upper = kUnboundedRate;
    r.exact = false;
    r.discontinuity_notes.emplace_back(kNoteUpperBoundOpen);
}

// C0, C2, C_s0 for a validated channel. Reversely degraded with sigma_v_sq = 0 gives an
// unbounded Tx-Ev link, reported as +inf rather than thrown.
void fill_link_capacities(const ChannelParams& p, CapacityReport& r) {
    r.c0 = awgn_capacity(p.power_limit, p.sigma_w_sq);
    if (p.structure == Structure::ReverselyDegraded && p.sigma_v_sq == 0.0) {
        r.c2 = p.power_limit > 0.0 ? kUnboundedRate : 0.0;
        r.cs0 = 0.0;
        return;
    }
    r.c2 = awgn_capacity(p.power_limit, p.eavesdropper_noise_var());
    r.cs0 = no_help_secrecy_capacity(p);
}

}  // namespace

std::string_view to_string(HelpPlacement p) {
    switch (p) {
        case HelpPlacement::None: return "none";
        case HelpPlacement::RxOnly: return "rx";
        case HelpPlacement::TxOnly: return "tx";
        case HelpPlacement::TxAndRxSame: return "tx_rx_same";
        case HelpPlacement::TxAndRxIndependent: return "tx_rx_independent";
    }
    return "unknown";
}

HelpPlacement parse_placement(std::string_view text) {
    if (text == "none") return HelpPlacement::None;
    if (text == "rx") return HelpPlacement::RxOnly;
    if (text == "tx") return HelpPlacement::TxOnly;
    if (text == "tx_rx_same") return HelpPlacement::TxAndRxSame;
    if (text == "tx_rx_independent") return HelpPlacement::TxAndRxIndependent;
    throw InvalidParams("unknown help placement '" + std::string(text) + "'");
}

HelpSpec HelpSpec::none() { return {}; }

HelpSpec HelpSpec::rx(double rate, bool secure) {
    HelpSpec h;
    h.placement = HelpPlacement::RxOnly;
    h.rate_rh = rate;
    h.secure = secure;
    return h;
}

HelpSpec HelpSpec::tx(double rate, bool secure, bool causal) {
    HelpSpec h;
    h.placement = HelpPlacement::TxOnly;
    h.rate_rh = rate;
    h.secure = secure;
    h.causal = causal;
    return h;
}

HelpSpec HelpSpec::tx_rx_same(double rate, bool secure) {
    HelpSpec h;
    h.placement = HelpPlacement::TxAndRxSame;
    h.rate_rh = rate;
    h.secure = secure;
    return h;
}

HelpSpec HelpSpec::independent(double rate_tx, double rate_rx, bool secure) {
    HelpSpec h;
    h.placement = HelpPlacement::TxAndRxIndependent;
    h.rate_rh1 = rate_tx;
    h.rate_rh2 = rate_rx;
    h.rate_rh = rate_tx + rate_rx;
    h.secure = secure;
    return h;
}

void HelpSpec::validate() const {
    if (!finite_nonneg(rate_rh) || !finite_nonneg(rate_rh1) || !finite_nonneg(rate_rh2))
        throw InvalidParams("help rates must be finite and >= 0");
    if (placement == HelpPlacement::TxAndRxIndependent) {
        const double sum = rate_rh1 + rate_rh2;
        if (std::abs(rate_rh - sum) > 1e-12 * std::max(1.0, sum))
            throw InvalidParams("independent help links require rate_rh == rate_rh1 + rate_rh2");
    }
    if (message_aware && placement != HelpPlacement::RxOnly)
        throw Unsupported("message-aware help is only characterized for Rx-only help");
}

bool HelpSpec::uses_tx() const {
    return placement == HelpPlacement::TxOnly || placement == HelpPlacement::TxAndRxSame ||
           placement == HelpPlacement::TxAndRxIndependent;
}

bool HelpSpec::uses_rx() const {
    return placement == HelpPlacement::RxOnly || placement == HelpPlacement::TxAndRxSame ||
           placement == HelpPlacement::TxAndRxIndependent;
}

bool CapacityReport::has_note(std::string_view note) const {
    return std::find(discontinuity_notes.begin(), discontinuity_notes.end(), note) !=
           discontinuity_notes.end();
}

double awgn_capacity(double power, double noise_var) {
    if (!finite_nonneg(power)) throw InvalidParams("awgn_capacity: power must be finite and >= 0");
    if (!(noise_var >= 0.0)) throw InvalidParams("awgn_capacity: noise variance must be >= 0");
    if (noise_var == 0.0) {
        if (power == 0.0) return 0.0;
        throw InfiniteCapacity("awgn_capacity: zero noise variance gives unbounded capacity");
    }
    return 0.5 * std::log1p(power / noise_var) / std::log(2.0);
}

double no_help_secrecy_capacity(const ChannelParams& p) {
    p.validate();
    switch (p.structure) {
        case Structure::Degraded: {
            const double c1 = awgn_capacity(p.power_limit, p.sigma_w_sq);
            const double c2 = awgn_capacity(p.power_limit, p.sigma_w_sq + p.sigma_v_sq);
            return std::max(0.0, c1 - c2);
        }
        case Structure::ReverselyDegraded:
            return 0.0;
        case Structure::NonDegraded: {
            if (p.sigma_v_sq <= 0.0) throw InvalidParams("non-degraded C_s0 needs sigma_v_sq > 0");
            const double c1 = awgn_capacity(p.power_limit, p.sigma_w_sq);
            const double c2 = awgn_capacity(p.power_limit, p.sigma_v_sq);
            return std::max(0.0, c1 - c2);
        }
    }
    return 0.0;
}

CapacityReport secrecy_capacity_with_help(const ChannelParams& p, const HelpSpec& help) {
    p.validate();
    help.validate();
    require_nondegraded_regular(p);

    CapacityReport r;
    fill_link_capacities(p, r);
    const double boost = help_boost(help);

    try {
        r.leakage_bound_phase2 = phase2_leakage_bound(p, help);
    } catch (const InfiniteCapacity&) {
        r.leakage_bound_phase2 = kUnboundedRate;
        r.discontinuity_notes.emplace_back(kNoteNoLeakageBound);
    }

    if (p.power_limit == 0.0) {
        r.discontinuity_notes.emplace_back("zero_power");
        set_exact(r, 0.0);
        return r;
    }
    if (p.structure == Structure::ReverselyDegraded && p.sigma_v_sq == 0.0) {
        // Eavesdropper sees X noiselessly.
        r.discontinuity_notes.emplace_back(kNoteSigmaVZero);
        set_exact(r, 0.0);
        return r;
    }
    if (help.placement == HelpPlacement::None) {
        set_exact(r, r.cs0);
        return r;
    }

    if (receivers_coincide(p)) {
        // Rx and Ev observe the same channel output; only help hidden from the Ev and
        // delivered to the Rx can create an advantage.
        r.discontinuity_notes.emplace_back(coincide_note(p, help.secure));
        if (!help.secure || help.placement == HelpPlacement::TxOnly) {
            set_exact(r, 0.0);
        } else if (help.placement == HelpPlacement::RxOnly) {
            set_exact(r, help.rate_rh);
        } else if (help.placement == HelpPlacement::TxAndRxSame) {
            set_lower_only(r, help.rate_rh);
        } else {
            set_lower_only(r, help.rate_rh2);
        }
        return r;
    }

    const bool nondegraded = p.structure == Structure::NonDegraded;
    switch (help.placement) {
        case HelpPlacement::RxOnly:
            set_exact(r, r.cs0 + boost);
            break;
        case HelpPlacement::TxOnly:
        case HelpPlacement::TxAndRxSame:
        case HelpPlacement::TxAndRxIndependent:
            if (!help.secure && !nondegraded)
                set_exact(r, r.cs0 + boost);
            else
                set_lower_only(r, r.cs0 + boost);
            break;
        case HelpPlacement::None:
            break;
    }
    return r;
}

CapacityReport dependent_help_bounds(const ChannelParams& p, double rate_tx, double rate_rx,
                                     double rate_total) {
    if (!finite_nonneg(rate_tx) || !finite_nonneg(rate_rx) || !finite_nonneg(rate_total))
        throw InvalidParams("dependent_help_bounds: rates must be finite and >= 0");
    const double lo = std::max(rate_tx, rate_rx);
    if (rate_total < lo - 1e-12 || rate_total > rate_tx + rate_rx + 1e-12)
        throw InvalidParams("dependent_help_bounds: need max(R_h1, R_h2) <= R_h <= R_h1 + R_h2");
    if (p.structure == Structure::NonDegraded)
        throw Unsupported("dependent composite help is characterized for degraded and reversely degraded channels");
    HelpSpec h = HelpSpec::independent(rate_tx, rate_rx, false);
    CapacityReport r = secrecy_capacity_with_help(p, h);
    if (r.exact && !receivers_coincide(p) && p.power_limit > 0.0) {
        r.cs_lower = r.cs0 + lo;
        r.cs_upper = r.cs0 + rate_total;
        r.exact = r.cs_lower == r.cs_upper;
    }
    return r;
}

FeedbackRates feedback_comparison(const ChannelParams& p, double feedback_rate) {
    p.validate();
    if (p.structure != Structure::Degraded)
        throw InvalidParams("feedback_comparison: rate-limited feedback result is for the degraded channel");
    if (p.sigma_v_sq <= 0.0) throw InvalidParams("feedback_comparison: needs sigma_v_sq > 0");
    if (!finite_nonneg(feedback_rate)) throw InvalidParams("feedback_comparison: R_f must be >= 0");
    FeedbackRates f;
    f.c_snf = awgn_capacity(p.power_limit, p.sigma_w_sq);
    f.c_sf = std::min(f.c_snf, no_help_secrecy_capacity(p) + feedback_rate);
    return f;
}

double phase2_leakage_bound(const ChannelParams& p, const HelpSpec& help) {
    p.validate();
    help.validate();
    if (help.placement == HelpPlacement::None || p.power_limit == 0.0) return 0.0;

    if (receivers_coincide(p)) {
        if (!help.secure)
            throw InfiniteCapacity("no uniform Phase-2 leakage bound: Rx and Ev outputs coincide and help is public");
        return awgn_capacity(p.power_limit, p.eavesdropper_noise_var());
    }
    switch (p.structure) {
        case Structure::Degraded:
            return awgn_capacity(p.power_limit, p.sigma_v_sq);
        case Structure::ReverselyDegraded:
            if (p.sigma_v_sq == 0.0) throw InfiniteCapacity("sigma_v_sq = 0: eavesdropper sees X noiselessly");
            return awgn_capacity(p.power_limit, p.sigma_v_sq) +
                   half_log2(1.0 + p.sigma_v_sq / p.sigma_dw_sq);
        case Structure::NonDegraded: {
            require_nondegraded_regular(p);
            const double r = p.correlation;
            return awgn_capacity(p.power_limit, p.sigma_v_sq) - half_log2(1.0 - r * r);
        }
    }
    return 0.0;
}

double entropy_gap_bound(const ChannelParams& p) {
    p.validate();
    if (p.structure != Structure::Degraded) throw InvalidParams("entropy_gap_bound: degraded channel only");
    const double num = p.sigma_w_sq + p.power_limit;
    if (num <= 0.0) throw InvalidParams("entropy_gap_bound: needs sigma_w_sq + P > 0");
    return half_log2(num / (num + p.sigma_v_sq));
}

}  // namespace wiretap
