#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/channel_model.hpp"

namespace wiretap {

enum class HelpPlacement { None, RxOnly, TxOnly, TxAndRxSame, TxAndRxIndependent };

std::string_view to_string(HelpPlacement p);
HelpPlacement parse_placement(std::string_view text);

struct HelpSpec {
    HelpPlacement placement = HelpPlacement::None;
    double rate_rh = 0.0;   // single link, or the same help on both links
    double rate_rh1 = 0.0;  // Tx link (independent links)
    double rate_rh2 = 0.0;  // Rx link (independent links)
    bool secure = false;    // hidden from the eavesdropper
    bool causal = true;     // Tx help only; irrelevant for Rx help
    bool message_aware = false;

    static HelpSpec none();
    static HelpSpec rx(double rate, bool secure = false);
    static HelpSpec tx(double rate, bool secure = false, bool causal = true);
    static HelpSpec tx_rx_same(double rate, bool secure = false);
    // rate_rh is set to rate_tx + rate_rx.
    static HelpSpec independent(double rate_tx, double rate_rx, bool secure = false);

    void validate() const;
    bool uses_tx() const;
    bool uses_rx() const;
};

inline constexpr double kUnboundedRate = std::numeric_limits<double>::infinity();

// Stable identifiers so CSV consumers can match on them.
inline constexpr std::string_view kNoteSigmaVZeroNonSecure = "sigma_v_zero_nonsecure";
inline constexpr std::string_view kNoteSigmaDwZeroNonSecure = "sigma_dw_zero_nonsecure";
inline constexpr std::string_view kNoteSigmaVZero = "sigma_v_zero";
inline constexpr std::string_view kNoteSigmaDwZeroSecure = "sigma_dw_zero_secure";
inline constexpr std::string_view kNoteUpperBoundOpen = "upper_bound_open";
inline constexpr std::string_view kNoteNoLeakageBound = "no_phase2_leakage_bound";

struct CapacityReport {
    double c0 = 0.0;  // Tx-Rx capacity without eavesdropper (= C1)
    double c2 = 0.0;  // Tx-Ev capacity without help
    double cs0 = 0.0;
    double cs_lower = 0.0;
    double cs_upper = 0.0;  // kUnboundedRate where no converse is known
    bool exact = false;
    // kUnboundedRate when no finite bound exists (then kNoteNoLeakageBound is set).
    double leakage_bound_phase2 = 0.0;
    std::vector<std::string> discontinuity_notes;

    bool has_note(std::string_view note) const;
    friend bool operator==(const CapacityReport&, const CapacityReport&) = default;
};

// 0.5 * log2(1 + power / noise_var). noise_var == 0 throws InfiniteCapacity.
double awgn_capacity(double power, double noise_var);

double no_help_secrecy_capacity(const ChannelParams& params);

CapacityReport secrecy_capacity_with_help(const ChannelParams& params, const HelpSpec& help);

// Composite help T = (T1, T2) with dependent but non-identical components, non-secure:
// C_s0 + max(R_h1, R_h2) <= C_s <= C_s0 + R_h, where max(R_h1, R_h2) <= R_h <= R_h1 + R_h2.
CapacityReport dependent_help_bounds(const ChannelParams& params, double rate_tx,
                                     double rate_rx, double rate_total);

struct FeedbackRates {
    double c_snf = 0.0;  // noiseless feedback secrecy capacity (= C0)
    double c_sf = 0.0;   // secure rate-limited feedback: min(C0, C_s0 + R_f)
};

FeedbackRates feedback_comparison(const ChannelParams& params, double feedback_rate);

double phase2_leakage_bound(const ChannelParams& params, const HelpSpec& help);

// Per-symbol bound on [h(Y^n|T) - h(Z^n|T)] / n for the degraded channel (negative).
double entropy_gap_bound(const ChannelParams& params);

}  // namespace wiretap
