#include "wiretap/quantizer_help.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include <boost/math/tools/minima.hpp>

#include "wiretap/errors.hpp"
#include "wiretap/gaussian_entropy.hpp"

namespace wiretap {

namespace {

constexpr std::uint64_t kExactExpectationLevels = std::uint64_t{1} << 12;
constexpr double kMaxBitsPerSample = 48.0;

double std_pdf(double x) {
    return std::isfinite(x) ? std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) : 0.0;
}
double x_pdf(double x) { return std::isfinite(x) ? x * std_pdf(x) : 0.0; }

// Truncated moments of W ~ N(0, s^2) over [a, b]: E[1], E[W], E[W^2] restricted to the cell.
struct CellMoments {
    double m0, m1, m2;
};

CellMoments cell_moments(double sigma, double a, double b) {
    const double al = a / sigma, be = b / sigma;
    const double m0 = numeric::normal_interval(al, be);
    const double m1 = sigma * (std_pdf(al) - std_pdf(be));
    const double m2 = sigma * sigma * (m0 + x_pdf(al) - x_pdf(be));
    return {m0, m1, m2};
}

}  // namespace

Quantizer::Quantizer(double sigma_w_sq, std::uint64_t levels, double clip_mult)
    : sigma_w_sq_(sigma_w_sq), levels_(levels) {
    if (!(sigma_w_sq > 0.0) || !std::isfinite(sigma_w_sq))
        throw InvalidParams("Quantizer: sigma_w_sq must be finite and > 0");
    if (levels < 1) throw InvalidParams("Quantizer: levels must be >= 1");
    if (!(clip_mult > 0.0) || !std::isfinite(clip_mult))
        throw InvalidParams("Quantizer: clip_mult must be finite and > 0");
    clip_ = clip_mult * std::sqrt(sigma_w_sq);
    step_ = 2.0 * clip_ / static_cast<double>(levels);
}

std::uint64_t Quantizer::index(double w) const {
    if (levels_ == 1) return 0;
    const double t = std::floor((w + clip_) / step_);
    if (!(t > 0.0)) return 0;  // also catches NaN
    if (t >= static_cast<double>(levels_ - 1)) return levels_ - 1;
    return static_cast<std::uint64_t>(t);
}

double Quantizer::reconstruction(std::uint64_t idx) const {
    if (idx >= levels_) throw InvalidParams("Quantizer: index out of range");
    return -clip_ + (static_cast<double>(idx) + 0.5) * step_;
}

double Quantizer::cell_lo(std::uint64_t idx) const {
    if (idx == 0) return -numeric::kInf;
    return -clip_ + static_cast<double>(idx) * step_;
}

double Quantizer::cell_hi(std::uint64_t idx) const {
    if (idx + 1 >= levels_) return numeric::kInf;
    return -clip_ + static_cast<double>(idx + 1) * step_;
}

double Quantizer::expected_mse() const {
    const double s = std::sqrt(sigma_w_sq_);
    auto cell_mse = [&](std::uint64_t i) {
        const auto m = cell_moments(s, cell_lo(i), cell_hi(i));
        const double r = reconstruction(i);
        return m.m2 - 2.0 * r * m.m1 + r * r * m.m0;
    };
    if (levels_ <= kExactExpectationLevels) {
        double acc = 0.0;
        for (std::uint64_t i = 0; i < levels_; ++i) acc += cell_mse(i);
        return acc;
    }
    // High resolution: uniform error inside the clip range plus exact saturation tails.
    const double inner = numeric::normal_interval(-clip_ / s, clip_ / s);
    const double r = reconstruction(levels_ - 1);
    const auto tail = cell_moments(s, clip_, numeric::kInf);
    const double tail_mse = tail.m2 - 2.0 * r * tail.m1 + r * r * tail.m0;
    return step_ * step_ / 12.0 * inner + 2.0 * tail_mse;
}

double Quantizer::expected_output_power() const {
    const double s = std::sqrt(sigma_w_sq_);
    if (levels_ <= kExactExpectationLevels) {
        double acc = 0.0;
        for (std::uint64_t i = 0; i < levels_; ++i) {
            const double r = reconstruction(i);
            acc += r * r * numeric::normal_interval(cell_lo(i) / s, cell_hi(i) / s);
        }
        return acc;
    }
    const auto inner = cell_moments(s, -clip_, clip_);
    const double r = reconstruction(levels_ - 1);
    return inner.m2 + step_ * step_ / 12.0 * inner.m0 +
           r * r * (1.0 - inner.m0);
}

double mse_optimal_clip_mult(std::uint64_t levels) {
    if (levels <= 1) return kDefaultClipMult;
    auto mse = [levels](double c) { return Quantizer(1.0, levels, c).expected_mse(); };
    std::uintmax_t iters = 200;
    return boost::math::tools::brent_find_minima(mse, 0.1, 16.0, 40, iters).first;
}

Quantizer build_quantizer(double sigma_w_sq, std::uint64_t levels, double clip_mult) {
    return Quantizer(sigma_w_sq, levels, clip_mult);
}

HelpMessage quantize_noise(const Quantizer& q, std::span<const double> w_seq) {
    HelpMessage msg;
    const std::size_t n = w_seq.size();
    msg.indices.resize(n);
    msg.reconstruction.resize(n);
    std::unordered_map<std::uint64_t, std::size_t> hist;
    double res = 0.0, gran = 0.0;
    std::size_t inside = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto idx = q.index(w_seq[i]);
        const double r = q.reconstruction(idx);
        msg.indices[i] = idx;
        msg.reconstruction[i] = r;
        ++hist[idx];
        const double e = w_seq[i] - r;
        res += e * e;
        if (q.clipped(w_seq[i])) {
            ++msg.clipped_count;
        } else {
            gran += e * e;
            ++inside;
        }
    }
    msg.side_info_bits = static_cast<double>(n) * std::log2(static_cast<double>(q.levels()));
    if (n > 0) {
        double h = 0.0;
        for (const auto& [idx, count] : hist) {
            const double p = static_cast<double>(count) / static_cast<double>(n);
            h -= p * std::log2(p);
        }
        msg.empirical_entropy_bits = static_cast<double>(n) * h;
        msg.residual_power = res / static_cast<double>(n);
    }
    if (inside > 0) msg.granular_residual_power = gran / static_cast<double>(inside);
    return msg;
}

std::uint64_t flash_levels(double help_rate, double tau) {
    if (!(tau > 0.0 && tau <= 1.0)) throw InvalidParams("flash_levels: tau must lie in (0, 1]");
    if (!(help_rate >= 0.0) || !std::isfinite(help_rate))
        throw InvalidParams("flash_levels: help rate must be finite and >= 0");
    const double bits = help_rate / tau;
    if (bits > kMaxBitsPerSample)
        throw ResourceCap("flash_levels: more than 48 bits per noise sample exceeds double resolution");
    return static_cast<std::uint64_t>(std::floor(std::exp2(bits)));
}

double FlashSchedule::total_tau() const {
    double t = 0.0;
    for (const auto& p : phases) t += p.tau;
    return t;
}

double FlashSchedule::help_rate_used() const {
    double r = 0.0;
    for (const auto& p : phases) r += p.tau * std::log2(static_cast<double>(p.levels));
    return r;
}

void FlashSchedule::validate(double help_rate_total) const {
    for (const auto& p : phases) {
        if (!(p.tau > 0.0 && p.tau <= 1.0)) throw InvalidParams("FlashSchedule: tau must lie in (0, 1]");
        if (p.levels < 1) throw InvalidParams("FlashSchedule: levels must be >= 1");
        if (p.tau * std::log2(static_cast<double>(p.levels)) > p.help_rate + 1e-12)
            throw InvalidParams("FlashSchedule: tau * log2(L) exceeds the phase help rate");
    }
    if (total_tau() > 1.0 + 1e-12) throw InvalidParams("FlashSchedule: phase fractions exceed 1");
    if (help_rate_used() > help_rate_total + 1e-12)
        throw InvalidParams("FlashSchedule: help bits exceed the help-link budget");
}

FlashSchedule make_two_phase_schedule(double help_rate, double tau, std::size_t block_length) {
    FlashSchedule s;
    s.phases.push_back({tau, help_rate, flash_levels(help_rate, tau), 0.0});
    s.block_length = block_length;
    s.help_budget = static_cast<double>(block_length) * help_rate;
    s.validate(help_rate);
    return s;
}

FlashSchedule make_three_phase_schedule(double rate_tx, double tau_tx, double rate_rx,
                                        double tau_rx, std::size_t block_length) {
    FlashSchedule s;
    s.phases.push_back({tau_tx, rate_tx, flash_levels(rate_tx, tau_tx), 0.0});
    s.phases.push_back({tau_rx, rate_rx, flash_levels(rate_rx, tau_rx), 0.0});
    s.block_length = block_length;
    s.help_budget = static_cast<double>(block_length) * (rate_tx + rate_rx);
    s.validate(rate_tx + rate_rx);
    return s;
}

double gaussian_input_entropy_bits(double power) { return numeric::gaussian_entropy_bits(power); }

double alpha_w(double sigma_w_sq) {
    return 2.0 / (std::numbers::pi * std::sqrt(3.0) * sigma_w_sq);
}

Phase2Prediction phase2_rate_rx(const ChannelParams& params, const FlashPhase& phase,
                                double input_entropy_bits) {
    if (!(phase.tau > 0.0 && phase.tau <= 1.0)) throw InvalidParams("phase2_rate_rx: tau must lie in (0, 1]");
    if (!(params.sigma_w_sq > 0.0)) throw InvalidParams("phase2_rate_rx: sigma_w_sq must be > 0");
    Phase2Prediction p;
    p.leading = phase.help_rate / phase.tau;
    p.rate = input_entropy_bits - numeric::gaussian_entropy_bits(params.sigma_w_sq) + p.leading;
    return p;
}

Phase2Prediction phase2_rate_tx(const ChannelParams& params, const FlashPhase& phase) {
    if (!(phase.tau > 0.0 && phase.tau <= 1.0)) throw InvalidParams("phase2_rate_tx: tau must lie in (0, 1]");
    if (!(params.sigma_w_sq > 0.0)) throw InvalidParams("phase2_rate_tx: sigma_w_sq must be > 0");
    Phase2Prediction p;
    const double r = phase.help_rate / phase.tau;
    p.leading = r;
    const double g = 1.0 - std::exp2(-r);
    p.rate = r + 0.5 * std::log2(std::exp2(-2.0 * r) + alpha_w(params.sigma_w_sq) *
                                                           params.power_limit * g * g);
    return p;
}

}  // namespace wiretap
