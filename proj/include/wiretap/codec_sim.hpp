#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wiretap/capacity_engine.hpp"
#include "wiretap/channel_model.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/quantizer_help.hpp"

namespace wiretap {

// Desk-scale guards. An explicit codebook is limited to n*R <= 24 bits and to
// 2^26 stored reals.
inline constexpr double kMaxCodebookBits = 24.0;
inline constexpr std::size_t kMaxCodebookReals = std::size_t{1} << 26;

// i.i.d. Gaussian codewords at power P, each renormalized to (1/n)|x|^2 = P exactly.
// A renormalized Gaussian vector is uniform on the sphere of radius sqrt(nP), so an
// ensemble codebook (no stored words) describes the same random-coding ensemble.
struct Codebook {
    std::size_t n = 0;
    double rate = 0.0;
    double power = 0.0;
    std::uint64_t seed = 0;
    double log2_size = 0.0;      // log2 |M|, |M| = floor(2^(nR))
    std::uint64_t size = 0;      // |M| when explicit, 0 for an ensemble book
    std::vector<double> codewords;  // row-major |M| x n; empty for an ensemble book

    bool is_explicit() const { return !codewords.empty(); }
    std::span<const double> word(std::uint64_t m) const;
};

Codebook generate_codebook(std::size_t n, double rate, double power, std::uint64_t seed);
Codebook ensemble_codebook(std::size_t n, double rate, double power);

enum class DecoderKind {
    Auto,        // exhaustive when the explicit search is cheap enough, otherwise ensemble
    Exhaustive,  // minimum Euclidean distance over the stored codebook, lowest index on ties
    Ensemble,    // exact nearest-neighbour error averaged over the spherical random-code ensemble
};
enum class PowerMode {
    Renormalize,  // send a*X - W-hat with a chosen so the expected power is exactly P
    Account,      // send X - W-hat as is; the measured power is checked against P
};

std::string_view to_string(DecoderKind d);
DecoderKind parse_decoder(std::string_view text);
std::string_view to_string(PowerMode m);
PowerMode parse_power_mode(std::string_view text);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Wilson score interval at 95% for a proportion p_hat observed over `trials`.
Interval wilson_interval(double p_hat, std::size_t trials);

struct SimSettings {
    std::size_t trials = 1000;
    std::uint64_t seed = 1;
    DecoderKind decoder = DecoderKind::Auto;
    PowerMode power_mode = PowerMode::Renormalize;
    std::optional<double> clip_mult;  // empty: MSE-optimal clip for the level count
    bool causal = true;               // Tx help: quantize inside the per-symbol loop
    bool record_trace = false;
    unsigned workers = 1;
};

struct SimOutcome {
    double error_prob = 0.0;
    Interval error_ci;
    double code_rate = 0.0;
    double achieved_rate = 0.0;  // code_rate * (1 - error_prob)
    double leakage_estimate = 0.0;
    Interval leakage_ci;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    DecoderKind decoder_used = DecoderKind::Exhaustive;
    std::uint64_t levels = 1;
    double clip_mult = 0.0;
    // (1/n)|W - W-hat|^2 averaged over trials, and the quantizer's analytic value.
    double residual_power = 0.0;
    double predicted_residual_power = 0.0;
    // Transmitted power (1/n)|s|^2: average over blocks and the largest block.
    double mean_tx_power = 0.0;
    double max_tx_power = 0.0;
    double tx_scale = 1.0;
    // Per trial: transmitted block, processed received block, decoded index or error probability.
    std::vector<double> trace;

    friend bool operator==(const SimOutcome&, const SimOutcome&) = default;
};

// Thrown when Tx pre-subtraction cannot meet the power budget.
class PowerViolation : public InvalidParams {
public:
    PowerViolation(const std::string& what, SimOutcome report)
        : InvalidParams(what), report_(std::move(report)) {}
    const SimOutcome& report() const { return report_; }

private:
    SimOutcome report_;
};

// Quantizer used by the simulations for one help phase.
Quantizer phase_quantizer(const ChannelParams& params, const FlashPhase& phase,
                          std::optional<double> clip_mult);

// Rx adds nothing to the channel input; it subtracts W-hat from Y and decodes.
SimOutcome simulate_phase2_rx(const ChannelParams& params, const FlashPhase& phase,
                              const Codebook& codebook, const SimSettings& settings);

// Tx pre-subtracts W-hat; Y = a X + (W - W-hat).
SimOutcome simulate_phase2_tx(const ChannelParams& params, const FlashPhase& phase,
                              const Codebook& codebook, const SimSettings& settings);

// log P(cos angle >= c) for a direction uniform on the unit sphere in R^n.
double log_spherical_cap_prob(std::size_t n, double c);

struct PhaseResult {
    HelpPlacement side = HelpPlacement::RxOnly;  // RxOnly or TxOnly
    double tau = 0.0;
    double help_rate = 0.0;
    std::uint64_t levels = 1;
    double predicted_rate = 0.0;
    double code_rate = 0.0;
    SimOutcome outcome;
};

struct TimeSharingRow {
    double tau = 0.0;          // duration of each help phase
    double phase1_fraction = 0.0;
    double phase1_rate = 0.0;  // analytic C_s0, or 0 when Phase 1 is silent
    std::vector<PhaseResult> phases;
    double composite_rate = 0.0;
    double composite_leakage_bound = 0.0;  // (1 - sum tau) delta + sum tau * phase-2 bound
    bool reliable = true;                  // every phase met the P_e target
};

struct TimeSharingSettings {
    SimSettings sim;
    std::size_t n = 64;
    double code_rate_factor = 0.5;
    double delta = 0.0;              // Phase-1 leakage rate
    double error_target = 1e-2;
};

struct TimeSharingReport {
    std::vector<TimeSharingRow> rows;  // in tau-grid order
    double target = 0.0;               // C_s0 + factor * R_h, or factor * R_h when Phase 1 is silent
    bool monotone = false;             // composite rate non-decreasing along the grid
    double final_relative_gap = 0.0;   // |last - target| / target
};

// Two-phase (Rx or Tx help) or three-phase (independent Tx and Rx links) flash signaling.
// tau_grid is traversed in the given order, normally decreasing.
TimeSharingReport run_time_sharing(const ChannelParams& params, const HelpSpec& help,
                                   std::span<const double> tau_grid,
                                   const TimeSharingSettings& settings);

}  // namespace wiretap
