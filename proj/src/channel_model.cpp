#include "wiretap/channel_model.hpp"

#include <cmath>
#include <random>
#include <string>

#include "wiretap/errors.hpp"
#include "wiretap/rng.hpp"

namespace wiretap {

std::string_view to_string(Structure s) {
    switch (s) {
        case Structure::Degraded: return "degraded";
        case Structure::ReverselyDegraded: return "reversely_degraded";
        case Structure::NonDegraded: return "non_degraded";
    }
    return "unknown";
}

Structure parse_structure(std::string_view text) {
    if (text == "degraded") return Structure::Degraded;
    if (text == "reversely_degraded") return Structure::ReverselyDegraded;
    if (text == "non_degraded") return Structure::NonDegraded;
    throw InvalidParams("unknown channel structure '" + std::string(text) + "'");
}

ChannelParams ChannelParams::degraded(double power, double sigma_w_sq, double sigma_v_sq) {
    ChannelParams p;
    p.power_limit = power;
    p.sigma_w_sq = sigma_w_sq;
    p.sigma_v_sq = sigma_v_sq;
    p.structure = Structure::Degraded;
    return p;
}

ChannelParams ChannelParams::reversely_degraded(double power, double sigma_v_sq,
                                                double sigma_dw_sq) {
    ChannelParams p;
    p.power_limit = power;
    p.sigma_v_sq = sigma_v_sq;
    p.sigma_dw_sq = sigma_dw_sq;
    p.sigma_w_sq = sigma_v_sq + sigma_dw_sq;
    p.structure = Structure::ReverselyDegraded;
    return p;
}

ChannelParams ChannelParams::non_degraded(double power, double sigma_w_sq, double sigma_v_sq,
                                          double correlation) {
    ChannelParams p;
    p.power_limit = power;
    p.sigma_w_sq = sigma_w_sq;
    p.sigma_v_sq = sigma_v_sq;
    p.correlation = correlation;
    p.structure = Structure::NonDegraded;
    return p;
}

void ChannelParams::validate() const {
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (!finite_nonneg(power_limit)) throw InvalidParams("power_limit must be finite and >= 0");
    if (!finite_nonneg(sigma_w_sq)) throw InvalidParams("sigma_w_sq must be finite and >= 0");
    if (!finite_nonneg(sigma_v_sq)) throw InvalidParams("sigma_v_sq must be finite and >= 0");
    if (!finite_nonneg(sigma_dw_sq)) throw InvalidParams("sigma_dw_sq must be finite and >= 0");
    switch (structure) {
        case Structure::ReverselyDegraded:
            if (sigma_w_sq != sigma_v_sq + sigma_dw_sq)
                throw InvalidParams("reversely degraded channel requires sigma_w_sq == sigma_v_sq + sigma_dw_sq");
            break;
        case Structure::NonDegraded:
            if (!(std::abs(correlation) <= 1.0))
                throw InvalidParams("correlation must lie in [-1, 1]");
            break;
        case Structure::Degraded:
            break;
    }
}

std::optional<double> ChannelParams::correlation_if_applicable() const {
    if (structure == Structure::NonDegraded) return correlation;
    return std::nullopt;
}

bool ChannelParams::singular() const {
    return structure == Structure::NonDegraded && std::abs(correlation) == 1.0;
}

double ChannelParams::eavesdropper_noise_var() const {
    return structure == Structure::Degraded ? sigma_w_sq + sigma_v_sq : sigma_v_sq;
}

NoiseDraw sample_noise(const ChannelParams& params, std::size_t n, std::uint64_t seed,
                       SampleOptions options) {
    params.validate();
    if (n == 0) throw InvalidParams("sample_noise: n must be >= 1");
    if (options.require_nonsingular && params.singular())
        throw InvalidParams("sample_noise: |correlation| = 1 gives a singular noise covariance");

    Rng rng = make_rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    NoiseDraw d;
    d.w_seq.resize(n);
    d.v_seq.resize(n);

    const double sw = std::sqrt(params.sigma_w_sq);
    const double sv = std::sqrt(params.sigma_v_sq);
    switch (params.structure) {
        case Structure::Degraded:
            for (std::size_t i = 0; i < n; ++i) {
                d.w_seq[i] = sw * gauss(rng);
                d.v_seq[i] = sv * gauss(rng);
            }
            break;
        case Structure::ReverselyDegraded: {
            const double sdw = std::sqrt(params.sigma_dw_sq);
            std::vector<double> dw(n);
            for (std::size_t i = 0; i < n; ++i) {
                d.v_seq[i] = sv * gauss(rng);
                dw[i] = sdw * gauss(rng);
                d.w_seq[i] = d.v_seq[i] + dw[i];
            }
            d.dw_seq = std::move(dw);
            break;
        }
        case Structure::NonDegraded: {
            const double r = params.correlation;
            const double r_perp = std::sqrt(std::max(0.0, 1.0 - r * r));
            for (std::size_t i = 0; i < n; ++i) {
                const double g1 = gauss(rng);
                const double g2 = gauss(rng);
                d.w_seq[i] = sw * g1;
                d.v_seq[i] = sv * (r * g1 + r_perp * g2);
            }
            break;
        }
    }
    return d;
}

ChannelOutput transmit(const ChannelParams& params, std::span<const double> x_seq,
                       const NoiseDraw& noise) {
    const std::size_t n = x_seq.size();
    if (noise.w_seq.size() != n || noise.v_seq.size() != n)
        throw InvalidParams("transmit: input and noise lengths differ");
    ChannelOutput out;
    out.y_seq.resize(n);
    out.z_seq.resize(n);
    switch (params.structure) {
        case Structure::Degraded:
            for (std::size_t i = 0; i < n; ++i) {
                out.y_seq[i] = x_seq[i] + noise.w_seq[i];
                out.z_seq[i] = out.y_seq[i] + noise.v_seq[i];
            }
            break;
        case Structure::ReverselyDegraded: {
            if (!noise.dw_seq || noise.dw_seq->size() != n)
                throw InvalidParams("transmit: reversely degraded channel needs dw_seq of matching length");
            const auto& dw = *noise.dw_seq;
            for (std::size_t i = 0; i < n; ++i) {
                out.z_seq[i] = x_seq[i] + noise.v_seq[i];
                out.y_seq[i] = out.z_seq[i] + dw[i];
            }
            break;
        }
        case Structure::NonDegraded:
            for (std::size_t i = 0; i < n; ++i) {
                out.y_seq[i] = x_seq[i] + noise.w_seq[i];
                out.z_seq[i] = x_seq[i] + noise.v_seq[i];
            }
            break;
    }
    return out;
}

}  // namespace wiretap
