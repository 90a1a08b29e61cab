#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace wiretap {

enum class Structure { Degraded, ReverselyDegraded, NonDegraded };

std::string_view to_string(Structure s);
Structure parse_structure(std::string_view text);

// Real-valued Gaussian wiretap channel.
//
//   Degraded:           Y = X + W,  Z = Y + V          (V independent of W)
//   ReverselyDegraded:  Z = X + V,  Y = Z + dW         (W = V + dW, sigma_w_sq = sigma_v_sq + sigma_dw_sq)
//   NonDegraded:        Y = X + W,  Z = X + V          (corr(W, V) = correlation)
struct ChannelParams {
    double power_limit = 1.0;
    double sigma_w_sq = 1.0;
    double sigma_v_sq = 1.0;
    double sigma_dw_sq = 0.0;
    double correlation = 0.0;
    Structure structure = Structure::Degraded;

    static ChannelParams degraded(double power, double sigma_w_sq, double sigma_v_sq);
    // sigma_w_sq is derived so the reversely degraded invariant holds exactly.
    static ChannelParams reversely_degraded(double power, double sigma_v_sq, double sigma_dw_sq);
    static ChannelParams non_degraded(double power, double sigma_w_sq, double sigma_v_sq,
                                      double correlation);

    // Throws InvalidParams when an invariant is broken.
    void validate() const;

    // Correlation is meaningful only for NonDegraded.
    std::optional<double> correlation_if_applicable() const;

    // |r| = 1: the (W, V) covariance is singular.
    bool singular() const;

    // Variance of the noise the eavesdropper sees on top of X when no help is used.
    double eavesdropper_noise_var() const;
};

struct NoiseDraw {
    std::vector<double> w_seq;
    std::vector<double> v_seq;
    std::optional<std::vector<double>> dw_seq;

    std::size_t size() const { return w_seq.size(); }
};

struct SampleOptions {
    // Reject singular NonDegraded draws instead of producing W, V perfectly (anti)correlated.
    bool require_nonsingular = false;
};

NoiseDraw sample_noise(const ChannelParams& params, std::size_t n, std::uint64_t seed,
                       SampleOptions options = {});

struct ChannelOutput {
    std::vector<double> y_seq;
    std::vector<double> z_seq;
};

ChannelOutput transmit(const ChannelParams& params, std::span<const double> x_seq,
                       const NoiseDraw& noise);

}  // namespace wiretap
