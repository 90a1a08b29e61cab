#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wiretap/capacity_engine.hpp"
#include "wiretap/chain_step.hpp"
#include "wiretap/channel_model.hpp"
#include "wiretap/codec_sim.hpp"

namespace wiretap {

inline constexpr double kLeakageSlack = 0.05;  // bits/symbol, estimator slack against bounds
inline constexpr std::size_t kMaxLeakageBlock = 8;
inline constexpr std::size_t kMaxLeakageMessages = 16;

enum class LeakageMethod { PlugInDiscrete, GaussianClosedForm };
std::string_view to_string(LeakageMethod m);

struct RefinementPoint {
    std::size_t bins = 0;
    double value = 0.0;
};

struct LeakageEstimate {
    double value = 0.0;  // bits/symbol, at the finest grid reached
    LeakageMethod method = LeakageMethod::PlugInDiscrete;
    double bound = 0.0;  // phase2_leakage_bound for the configuration (may be +inf)
    std::size_t n = 0;
    std::size_t message_count = 0;
    std::uint64_t levels = 1;
    std::vector<RefinementPoint> refinement;
};

struct LeakageOptions {
    std::uint64_t levels = 1;         // help quantizer levels (1: no information in T)
    std::optional<double> clip_mult;  // empty: MSE-optimal clip
    std::size_t bins = 24;            // Z bins inside the central range; doubled until stable
    std::size_t max_bins = 768;
    double range_sd = 8.0;            // central range half-width in noise standard deviations
    PowerMode power_mode = PowerMode::Renormalize;
    double stability = 0.05;          // relative refinement tolerance
    double abs_floor = 1e-3;          // absolute refinement tolerance for near-zero leakage
    std::size_t max_outcomes = std::size_t{1} << 24;  // joint (Z^n, T^n) alphabet cap
};

// Plug-in n^-1 I(M; Z^n, T^n) on the discretized eavesdropper output (T dropped for
// secure help). The law of each (Z_i, T_i) given M is exact: bivariate Gaussian cell
// probabilities, no sampling. Rx help, Tx pre-subtraction and same-help placements.
LeakageEstimate estimate_leakage_discrete(const ChannelParams& params, const HelpSpec& help,
                                          const Codebook& codebook, const LeakageOptions& options);

enum class LeakageChain {
    DegradedRx,
    ReverselyDegradedRx,
    ReverselyDegradedSecureCoinciding,
    NonDegradedRx,
    DegradedTx,
    ReverselyDegradedTx,
    NonDegradedTx,
    EntropyGap,
};
std::string_view to_string(LeakageChain c);
std::span<const LeakageChain> all_leakage_chains();

struct ChainReport {
    LeakageChain chain = LeakageChain::DegradedRx;
    std::vector<ChainStep> steps;
    bool passed() const;
    std::size_t violations() const;
};

struct ChainOptions {
    std::vector<std::uint64_t> levels{2, 4, 8, 16};
    std::size_t samples = 0;  // > 0 adds a Monte-Carlo cross-check of I(X; Z, T)
    std::uint64_t seed = 1;
};

// Single-letter evaluation with Gaussian X of power P and T = Q(W).
ChainReport verify_leakage_chain(const ChannelParams& params, LeakageChain chain,
                                 const ChainOptions& options = {});
// Chain matching a configuration (structure and help placement).
LeakageChain chain_for(const ChannelParams& params, const HelpSpec& help);

// h(V | V + dW) for independent Gaussians, three independent routes plus a 2-D quadrature.
struct ConditionalEntropyRoutes {
    double closed_form = 0.0;
    double entropy_difference = 0.0;   // h(V) + h(dW) - h(V + dW)
    double conditional_variance = 0.0; // 0.5 log2(2 pi e Var(V | V + dW))
    double quadrature = 0.0;
};
ConditionalEntropyRoutes conditional_entropy_routes(double sigma_v_sq, double sigma_dw_sq);

// h(Y|T) - h(Z|T), degraded channel, X | T Gaussian with variance x_var and T = Q(W).
// Also returns the per-cell entropies used by the EPI step.
struct EntropyGapEval {
    double difference = 0.0;
    double h_y_given_t = 0.0;
    double h_z_given_t = 0.0;
    std::vector<double> cell_prob, cell_h_y, cell_h_z;
};
EntropyGapEval entropy_gap_evaluate(const ChannelParams& params, std::uint64_t levels, double x_var,
                           std::optional<double> clip_mult = std::nullopt);

struct CompositeLeakageRow {
    double tau = 0.0;
    double phase1 = 0.0;  // R_l1 (delta, or 0 when Phase 1 is silent)
    double phase2 = 0.0;  // R_l2
    double composite = 0.0;
};
struct CompositeLeakageTable {
    std::vector<CompositeLeakageRow> rows;
    double r0 = 0.0;          // per-symbol cap on the Phase-2 leakage
    bool limit_ok = true;     // composite <= 2 delta on every row with tau <= delta / r0
    double slope = 0.0;       // least-squares slope of composite against tau
};

// (1 - tau) R_l1 + tau R_l2 over the grid. Phase 1 is silent for reversely degraded channels.
CompositeLeakageTable composite_leakage(const ChannelParams& params, const HelpSpec& help,
                                        std::span<const double> tau_grid,
                                        std::span<const double> phase2_estimates, double delta);

double least_squares_slope(std::span<const double> x, std::span<const double> y);

}  // namespace wiretap
