#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wiretap/channel_model.hpp"

namespace wiretap {

inline constexpr double kDefaultClipMult = 4.0;

// Uniform midpoint quantizer on [-clip, clip], clip = clip_mult * sigma_w, saturating outside.
// Immutable after construction.
class Quantizer {
public:
    Quantizer(double sigma_w_sq, std::uint64_t levels, double clip_mult = kDefaultClipMult);

    std::uint64_t levels() const { return levels_; }
    double clip() const { return clip_; }
    double step() const { return step_; }
    double sigma_w_sq() const { return sigma_w_sq_; }

    std::uint64_t index(double w) const;
    double reconstruction(std::uint64_t idx) const;
    double operator()(double w) const { return reconstruction(index(w)); }
    bool clipped(double w) const { return w < -clip_ || w > clip_; }

    // Cell [lo, hi] of an index; outermost cells extend to -inf / +inf.
    double cell_lo(std::uint64_t idx) const;
    double cell_hi(std::uint64_t idx) const;

    // Gaussian expectations for W ~ N(0, sigma_w_sq): exact per-cell sums up to 4096 levels,
    // high-resolution form (uniform granular error, exact saturation tails) beyond.
    double expected_mse() const;
    double expected_output_power() const;

private:
    double sigma_w_sq_;
    std::uint64_t levels_;
    double clip_;
    double step_;
};

// Clip multiple minimizing the expected MSE of an L-level quantizer on a Gaussian
// (L = 1 returns the default; the optimum grows roughly like sqrt(2 ln L)).
double mse_optimal_clip_mult(std::uint64_t levels);

Quantizer build_quantizer(double sigma_w_sq, std::uint64_t levels,
                          double clip_mult = kDefaultClipMult);

struct HelpMessage {
    std::vector<std::uint64_t> indices;
    std::vector<double> reconstruction;  // W-hat
    double side_info_bits = 0.0;         // n * log2(L), upper bound on H(T)
    double empirical_entropy_bits = 0.0; // n * plug-in entropy of the index histogram
    // Residual statistics of W - Q(W): all samples, and only samples inside the clip range.
    double residual_power = 0.0;
    double granular_residual_power = 0.0;
    std::size_t clipped_count = 0;
};

HelpMessage quantize_noise(const Quantizer& q, std::span<const double> w_seq);

// Largest level count whose per-phase rate fits, floor(2^(rate / tau)), at most 2^48
// so reconstruction points stay distinct in double precision (ResourceCap otherwise).
std::uint64_t flash_levels(double help_rate, double tau);

struct FlashPhase {
    double tau = 1.0;
    double help_rate = 0.0;  // long-run help rate spent in this phase
    std::uint64_t levels = 1;
    double code_rate = 0.0;  // bits/symbol, filled by the caller
};

struct FlashSchedule {
    std::vector<FlashPhase> phases;  // help-using phases only
    double help_budget = 0.0;        // n * R_h for the whole block
    std::size_t block_length = 0;

    double total_tau() const;
    // Sum of tau_k * log2(L_k): help bits per channel symbol actually used.
    double help_rate_used() const;
    void validate(double help_rate_total) const;
};

FlashSchedule make_two_phase_schedule(double help_rate, double tau, std::size_t block_length = 1);
// Phase 2 (Tx link, rate_tx over tau_tx) and Phase 3 (Rx link, rate_rx over tau_rx).
FlashSchedule make_three_phase_schedule(double rate_tx, double tau_tx, double rate_rx,
                                        double tau_rx, std::size_t block_length = 1);

struct Phase2Prediction {
    double rate = 0.0;     // the expression with o(1) terms set to 0
    double leading = 0.0;  // R_h / tau
};

double gaussian_input_entropy_bits(double power);

// Rx help: h(X) - 0.5 log2(2 pi e sigma_w^2) + R_h / tau. rate may be negative; callers
// scheduling a code rate should floor it at 0.
Phase2Prediction phase2_rate_rx(const ChannelParams& params, const FlashPhase& phase,
                                double input_entropy_bits);

// Tx help (pre-subtraction): R + 0.5 log2(2^(-2R) + alpha_W P (1 - 2^(-R))^2), R = R_h / tau,
// alpha_W = 2 / (pi sqrt(3) sigma_w^2).
Phase2Prediction phase2_rate_tx(const ChannelParams& params, const FlashPhase& phase);

double alpha_w(double sigma_w_sq);

}  // namespace wiretap
