#include "wiretap/codec_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include <boost/math/special_functions/beta.hpp>

#include "wiretap/errors.hpp"
#include "wiretap/rng.hpp"

namespace wiretap {

namespace {

constexpr double kPowerRelTol = 1e-9;
constexpr double kExhaustiveWorkCap = 2147483648.0;  // trials * |M| * n

std::uint64_t message_count(double bits) {
    return static_cast<std::uint64_t>(std::floor(std::exp2(bits)));
}

double log2_message_count(double bits) {
    if (bits > 60.0) return bits;
    return std::log2(static_cast<double>(message_count(bits)));
}

void check_n_rate(std::size_t n, double rate, double power) {
    if (n < 1) throw InvalidParams("codebook: n must be >= 1");
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw InvalidParams("codebook: rate must be finite and >= 0");
    if (!(power >= 0.0) || !std::isfinite(power)) throw InvalidParams("codebook: power must be finite and >= 0");
}

void fill_sphere(Rng& rng, std::span<double> out, double radius) {
    std::normal_distribution<double> g(0.0, 1.0);
    double ss = 0.0;
    for (double& v : out) {
        v = g(rng);
        ss += v * v;
    }
    const double scale = ss > 0.0 ? radius / std::sqrt(ss) : 0.0;
    for (double& v : out) v *= scale;
}

// log P(B <= x), B ~ Beta(a, a). Falls back to the hypergeometric series when the
// regularized incomplete beta underflows.
double log_ibeta_symmetric(double a, double x) {
    if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
    if (x >= 1.0) return 0.0;
    const double p = boost::math::ibeta(a, a, x);
    if (p > 1e-280) return std::log(p);
    const double lbeta = 2.0 * std::lgamma(a) - std::lgamma(2.0 * a);
    const double lpre = a * std::log(x) + a * std::log1p(-x) - std::log(a) - lbeta;
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 100000; ++k) {
        term *= (2.0 * a + k) / (a + 1.0 + k) * x;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return lpre + std::log(sum);
}

// Probability that at least one of |M| - 1 independent competitors beats the true codeword.
double ensemble_error(double log2_size, double log_p) {
    if (log2_size <= 0.0) return 0.0;
    double ln_m1;
    if (log2_size <= 60.0) {
        const double m = std::round(std::exp2(log2_size));
        if (m <= 1.0) return 0.0;
        ln_m1 = std::log(m - 1.0);
    } else {
        ln_m1 = log2_size * std::numbers::ln2;
    }
    if (log_p == -std::numeric_limits<double>::infinity()) return 0.0;
    if (log_p >= 0.0) return 1.0;
    const double p = std::exp(log_p);
    const double lq = p > 1e-8 ? std::log(-std::log1p(-p)) : log_p + std::log1p(0.5 * p);
    return -std::expm1(-std::exp(ln_m1 + lq));
}

struct TrialResult {
    double error = 0.0;
    double residual = 0.0;
    double tx_power = 0.0;
    std::vector<double> trace;
};

template <class F>
std::vector<TrialResult> run_trials(std::size_t trials, unsigned workers, F&& trial) {
    std::vector<TrialResult> out(trials);
    const unsigned w = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(trials)));
    if (w == 1) {
        for (std::size_t t = 0; t < trials; ++t) out[t] = trial(t);
        return out;
    }
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < w; ++k) {
        pool.emplace_back([&, k] {
            for (std::size_t t = k; t < trials; t += w) out[t] = trial(t);
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

DecoderKind resolve_decoder(const Codebook& cb, const SimSettings& s) {
    if (s.decoder == DecoderKind::Exhaustive) {
        if (!cb.is_explicit()) throw InvalidParams("exhaustive decoding needs an explicit codebook");
        return DecoderKind::Exhaustive;
    }
    if (s.decoder == DecoderKind::Ensemble) return DecoderKind::Ensemble;
    const double work = static_cast<double>(s.trials) * static_cast<double>(cb.size) *
                        static_cast<double>(cb.n);
    return cb.is_explicit() && work <= kExhaustiveWorkCap ? DecoderKind::Exhaustive
                                                          : DecoderKind::Ensemble;
}

SimOutcome simulate_phase2(const ChannelParams& params, const FlashPhase& phase,
                           const Codebook& cb, const SimSettings& settings, bool tx) {
    params.validate();
    if (settings.trials < 1) throw InvalidParams("simulation: trials must be >= 1");
    if (cb.n < 1) throw InvalidParams("simulation: empty codebook");
    const Quantizer q = phase_quantizer(params, phase, settings.clip_mult);
    const DecoderKind decoder = resolve_decoder(cb, settings);
    if (decoder == DecoderKind::Ensemble && cb.n < 2)
        throw InvalidParams("ensemble decoding needs n >= 2");

    SimOutcome out;
    out.trials = settings.trials;
    out.seed = settings.seed;
    out.decoder_used = decoder;
    out.code_rate = cb.rate;
    out.levels = q.levels();
    out.clip_mult = q.clip() / std::sqrt(q.sigma_w_sq());
    out.predicted_residual_power = q.expected_mse();

    const double budget = params.power_limit;
    double a = 1.0;
    if (tx) {
        const double what_power = q.expected_output_power();
        if (settings.power_mode == PowerMode::Renormalize) {
            if (what_power >= budget) {
                out.tx_scale = 0.0;
                out.mean_tx_power = what_power;
                throw PowerViolation("pre-subtraction: E[W-hat^2] leaves no power for the codeword", out);
            }
            a = cb.power > 0.0 ? std::sqrt((budget - what_power) / cb.power) : 0.0;
        } else if (cb.power + what_power > budget * (1.0 + kPowerRelTol)) {
            out.mean_tx_power = cb.power + what_power;
            throw PowerViolation("pre-subtraction: codeword power plus E[W-hat^2] exceeds the budget", out);
        }
    } else if (cb.power > budget * (1.0 + kPowerRelTol)) {
        out.mean_tx_power = cb.power;
        throw PowerViolation("codebook power exceeds the budget", out);
    }
    out.tx_scale = a;

    const std::size_t n = cb.n;
    const double rho = a * std::sqrt(static_cast<double>(n) * cb.power);
    const double half_dim = 0.5 * static_cast<double>(n - 1);

    auto trial = [&](std::size_t t) {
        TrialResult r;
        Rng rng = make_rng(settings.seed, 2 * static_cast<std::uint64_t>(t) + 1);
        const NoiseDraw noise = sample_noise(params, n, derive_seed(settings.seed, 2 * t));

        std::vector<double> x(n);
        std::uint64_t m = 0;
        if (decoder == DecoderKind::Exhaustive) {
            m = std::uniform_int_distribution<std::uint64_t>(0, cb.size - 1)(rng);
            const auto w = cb.word(m);
            std::copy(w.begin(), w.end(), x.begin());
        } else {
            fill_sphere(rng, x, std::sqrt(static_cast<double>(n) * cb.power));
        }

        std::vector<double> s(n), what(n);
        if (tx && settings.causal) {
            for (std::size_t i = 0; i < n; ++i) {
                what[i] = q(noise.w_seq[i]);
                s[i] = a * x[i] - what[i];
            }
        } else {
            const HelpMessage msg = quantize_noise(q, noise.w_seq);
            what = msg.reconstruction;
            for (std::size_t i = 0; i < n; ++i) s[i] = tx ? a * x[i] - what[i] : x[i];
        }
        const ChannelOutput ch = transmit(params, s, noise);
        std::vector<double> y = ch.y_seq;
        if (!tx)
            for (std::size_t i = 0; i < n; ++i) y[i] -= what[i];

        double res = 0.0, pw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double e = noise.w_seq[i] - what[i];
            res += e * e;
            pw += s[i] * s[i];
        }
        r.residual = res / static_cast<double>(n);
        r.tx_power = pw / static_cast<double>(n);

        double decision = 0.0;
        if (decoder == DecoderKind::Exhaustive) {
            std::uint64_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::uint64_t j = 0; j < cb.size; ++j) {
                const auto w = cb.word(j);
                double d = 0.0;
                for (std::size_t i = 0; i < n && d < best_d; ++i) {
                    const double u = y[i] - a * w[i];
                    d += u * u;
                }
                if (d < best_d) {
                    best_d = d;
                    best = j;
                }
            }
            r.error = best != m ? 1.0 : 0.0;
            decision = static_cast<double>(best);
        } else if (rho == 0.0) {
            r.error = 1.0 - std::exp2(-cb.log2_size);
            decision = r.error;
        } else {
            // Competitor on the radius-rho sphere wins iff its angle to y is below the
            // angle whose chord distance equals |y - c|. Computed from e = y - c to keep
            // 1 - cos accurate when the residual is tiny.
            double ce = 0.0, ee = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = y[i] - a * x[i];
                ce += a * x[i] * e;
                ee += e * e;
            }
            const double excess = 2.0 * ce + ee;  // |y|^2 - rho^2
            const double ny = std::sqrt(std::max(0.0, rho * rho + excess));
            double one_minus_c;
            if (ny == 0.0) {
                one_minus_c = 1.0;
            } else {
                const double diff = excess / (ny + rho);
                one_minus_c = (ee - diff * diff) / (2.0 * rho * ny);
            }
            const double x_beta = std::clamp(0.5 * one_minus_c, 0.0, 1.0);
            r.error = ensemble_error(cb.log2_size, log_ibeta_symmetric(half_dim, x_beta));
            decision = r.error;
        }

        if (settings.record_trace) {
            r.trace.reserve(2 * n + 1);
            r.trace.insert(r.trace.end(), s.begin(), s.end());
            r.trace.insert(r.trace.end(), y.begin(), y.end());
            r.trace.push_back(decision);
        }
        return r;
    };

    const auto results = run_trials(settings.trials, settings.workers, trial);
    double err = 0.0, res = 0.0, pw = 0.0, pmax = 0.0;
    for (const auto& r : results) {
        err += r.error;
        res += r.residual;
        pw += r.tx_power;
        pmax = std::max(pmax, r.tx_power);
        if (settings.record_trace) out.trace.insert(out.trace.end(), r.trace.begin(), r.trace.end());
    }
    const double N = static_cast<double>(settings.trials);
    out.error_prob = err / N;
    out.error_ci = wilson_interval(out.error_prob, settings.trials);
    out.achieved_rate = cb.rate * (1.0 - out.error_prob);
    out.residual_power = res / N;
    out.mean_tx_power = pw / N;
    out.max_tx_power = pmax;
    return out;
}

}  // namespace

std::span<const double> Codebook::word(std::uint64_t m) const {
    if (m >= size || !is_explicit()) throw InvalidParams("Codebook::word: index out of range");
    return {codewords.data() + m * n, n};
}

Codebook generate_codebook(std::size_t n, double rate, double power, std::uint64_t seed) {
    check_n_rate(n, rate, power);
    const double bits = static_cast<double>(n) * rate;
    if (bits > kMaxCodebookBits) throw ResourceCap("codebook: n*R exceeds 24 bits");
    const std::uint64_t m = message_count(bits);
    if (m * n > kMaxCodebookReals) throw ResourceCap("codebook: explicit codebook exceeds memory cap");
    Codebook cb;
    cb.n = n;
    cb.rate = rate;
    cb.power = power;
    cb.seed = seed;
    cb.size = m;
    cb.log2_size = std::log2(static_cast<double>(m));
    cb.codewords.resize(m * n);
    Rng rng = make_rng(seed, 0);
    const double radius = std::sqrt(static_cast<double>(n) * power);
    for (std::uint64_t j = 0; j < m; ++j)
        fill_sphere(rng, std::span<double>(cb.codewords.data() + j * n, n), radius);
    return cb;
}

Codebook ensemble_codebook(std::size_t n, double rate, double power) {
    check_n_rate(n, rate, power);
    Codebook cb;
    cb.n = n;
    cb.rate = rate;
    cb.power = power;
    cb.log2_size = log2_message_count(static_cast<double>(n) * rate);
    return cb;
}

std::string_view to_string(DecoderKind d) {
    switch (d) {
        case DecoderKind::Auto: return "auto";
        case DecoderKind::Exhaustive: return "exhaustive";
        case DecoderKind::Ensemble: return "ensemble";
    }
    return "?";
}

DecoderKind parse_decoder(std::string_view text) {
    if (text == "auto") return DecoderKind::Auto;
    if (text == "exhaustive") return DecoderKind::Exhaustive;
    if (text == "ensemble") return DecoderKind::Ensemble;
    throw InvalidParams("unknown decoder '" + std::string(text) + "'");
}

std::string_view to_string(PowerMode m) {
    return m == PowerMode::Renormalize ? "renormalize" : "account";
}

PowerMode parse_power_mode(std::string_view text) {
    if (text == "renormalize") return PowerMode::Renormalize;
    if (text == "account") return PowerMode::Account;
    throw InvalidParams("unknown power mode '" + std::string(text) + "'");
}

Interval wilson_interval(double p_hat, std::size_t trials) {
    if (trials == 0) return {0.0, 1.0};
    const double z = 1.959963984540054;
    const double N = static_cast<double>(trials);
    const double p = std::clamp(p_hat, 0.0, 1.0);
    const double denom = 1.0 + z * z / N;
    const double centre = (p + z * z / (2.0 * N)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / N + z * z / (4.0 * N * N)) / denom;
    return {p == 0.0 ? 0.0 : std::max(0.0, centre - half), p == 1.0 ? 1.0 : std::min(1.0, centre + half)};
}

Quantizer phase_quantizer(const ChannelParams& params, const FlashPhase& phase,
                          std::optional<double> clip_mult) {
    const double c = clip_mult ? *clip_mult : mse_optimal_clip_mult(phase.levels);
    return Quantizer(params.sigma_w_sq, phase.levels, c);
}

SimOutcome simulate_phase2_rx(const ChannelParams& params, const FlashPhase& phase,
                              const Codebook& codebook, const SimSettings& settings) {
    return simulate_phase2(params, phase, codebook, settings, false);
}

SimOutcome simulate_phase2_tx(const ChannelParams& params, const FlashPhase& phase,
                              const Codebook& codebook, const SimSettings& settings) {
    return simulate_phase2(params, phase, codebook, settings, true);
}

double log_spherical_cap_prob(std::size_t n, double c) {
    if (n < 2) throw InvalidParams("log_spherical_cap_prob: n must be >= 2");
    return log_ibeta_symmetric(0.5 * static_cast<double>(n - 1), std::clamp(0.5 * (1.0 - c), 0.0, 1.0));
}

TimeSharingReport run_time_sharing(const ChannelParams& params, const HelpSpec& help,
                                   std::span<const double> tau_grid,
                                   const TimeSharingSettings& settings) {
    params.validate();
    help.validate();
    if (tau_grid.empty()) throw InvalidParams("run_time_sharing: empty tau grid");
    const bool silent_phase1 = params.structure == Structure::ReverselyDegraded;
    const double cs0 = no_help_secrecy_capacity(params);
    const double phase1_rate = silent_phase1 ? 0.0 : cs0;

    std::vector<std::pair<HelpPlacement, double>> links;
    switch (help.placement) {
        case HelpPlacement::None: break;
        case HelpPlacement::RxOnly:
        case HelpPlacement::TxAndRxSame: links.push_back({HelpPlacement::RxOnly, help.rate_rh}); break;
        case HelpPlacement::TxOnly: links.push_back({HelpPlacement::TxOnly, help.rate_rh}); break;
        case HelpPlacement::TxAndRxIndependent:
            links.push_back({HelpPlacement::TxOnly, help.rate_rh1});
            links.push_back({HelpPlacement::RxOnly, help.rate_rh2});
            break;
    }
    double leak_bound;
    try {
        leak_bound = phase2_leakage_bound(params, help);
    } catch (const InfiniteCapacity&) {
        leak_bound = kUnboundedRate;
    }

    TimeSharingReport rep;
    double total_help = 0.0;
    for (const auto& l : links) total_help += l.second;
    rep.target = phase1_rate + settings.code_rate_factor * total_help;

    const double h_x = gaussian_input_entropy_bits(params.power_limit);
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        const double tau = tau_grid[k];
        TimeSharingRow row;
        row.tau = tau;
        row.phase1_fraction = 1.0 - tau * static_cast<double>(links.size());
        if (row.phase1_fraction < -1e-12) throw InvalidParams("run_time_sharing: phase fractions exceed 1");
        row.phase1_fraction = std::max(0.0, row.phase1_fraction);
        row.phase1_rate = phase1_rate;
        double composite = row.phase1_fraction * phase1_rate;
        for (std::size_t j = 0; j < links.size(); ++j) {
            PhaseResult pr;
            pr.side = links[j].first;
            pr.tau = tau;
            pr.help_rate = links[j].second;
            FlashPhase fp{tau, pr.help_rate, flash_levels(pr.help_rate, tau), 0.0};
            pr.levels = fp.levels;
            const bool tx = pr.side == HelpPlacement::TxOnly;
            pr.predicted_rate = tx ? phase2_rate_tx(params, fp).rate : phase2_rate_rx(params, fp, h_x).rate;
            pr.code_rate = std::max(0.0, settings.code_rate_factor * pr.predicted_rate);
            fp.code_rate = pr.code_rate;
            if (pr.code_rate > 0.0) {
                SimSettings sim = settings.sim;
                sim.seed = derive_seed(settings.sim.seed, 16 * k + j);
                double cb_power = params.power_limit;
                if (tx && sim.power_mode == PowerMode::Account)
                    cb_power = std::max(0.0, params.power_limit -
                                                 phase_quantizer(params, fp, sim.clip_mult).expected_output_power());
                const double bits = static_cast<double>(settings.n) * pr.code_rate;
                const double words = std::floor(std::exp2(std::min(bits, 60.0)));
                const bool explicit_ok =
                    sim.decoder != DecoderKind::Ensemble && bits <= kMaxCodebookBits &&
                    words * static_cast<double>(settings.n) <= static_cast<double>(kMaxCodebookReals) &&
                    (sim.decoder == DecoderKind::Exhaustive ||
                     words * static_cast<double>(settings.n) * static_cast<double>(sim.trials) <=
                         kExhaustiveWorkCap);
                const Codebook cb = explicit_ok
                                        ? generate_codebook(settings.n, pr.code_rate, cb_power, sim.seed)
                                        : ensemble_codebook(settings.n, pr.code_rate, cb_power);
                pr.outcome = tx ? simulate_phase2_tx(params, fp, cb, sim) : simulate_phase2_rx(params, fp, cb, sim);
            } else {
                pr.outcome.trials = settings.sim.trials;
                pr.outcome.seed = settings.sim.seed;
            }
            if (!(pr.outcome.error_prob < settings.error_target)) row.reliable = false;
            composite += tau * pr.outcome.achieved_rate;
            row.phases.push_back(std::move(pr));
        }
        row.composite_rate = composite;
        row.composite_leakage_bound =
            row.phase1_fraction * settings.delta + tau * static_cast<double>(links.size()) * leak_bound;
        rep.rows.push_back(std::move(row));
    }
    rep.monotone = true;
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
        if (rep.rows[k].composite_rate < rep.rows[k - 1].composite_rate - 1e-12) rep.monotone = false;
    const double last = rep.rows.back().composite_rate;
    rep.final_relative_gap = rep.target != 0.0 ? std::abs(last - rep.target) / std::abs(rep.target)
                                               : std::abs(last);
    return rep;
}

}  // namespace wiretap
