#include "wiretap/leakage_lab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "wiretap/errors.hpp"
#include "wiretap/gaussian_entropy.hpp"
#include "wiretap/quantizer_help.hpp"
#include "wiretap/rng.hpp"

namespace wiretap {

namespace {

using numeric::gaussian_entropy_bits;
using numeric::kInf;

// Eavesdropper noise N (Z = X + N) written as beta * W + S, S independent of W.
struct EvKernel {
    double beta = 1.0;
    double s_var = 0.0;
};

EvKernel ev_kernel(const ChannelParams& p) {
    switch (p.structure) {
        case Structure::Degraded: return {1.0, p.sigma_v_sq};
        case Structure::ReverselyDegraded:
            return {p.sigma_v_sq / p.sigma_w_sq, p.sigma_v_sq * p.sigma_dw_sq / p.sigma_w_sq};
        case Structure::NonDegraded: {
            const double r = p.correlation;
            return {r * std::sqrt(p.sigma_v_sq / p.sigma_w_sq), p.sigma_v_sq * (1.0 - r * r)};
        }
    }
    return {};
}

double tx_scale(const ChannelParams& p, const Quantizer& q, double codebook_power, PowerMode mode) {
    if (mode == PowerMode::Account) return 1.0;
    const double ew = q.expected_output_power();
    if (ew >= p.power_limit) throw InvalidParams("pre-subtraction: E[W-hat^2] exceeds the power budget");
    return codebook_power > 0.0 ? std::sqrt((p.power_limit - ew) / codebook_power) : 0.0;
}

double mi_rec(const std::vector<std::vector<std::vector<double>>>& per_dim,
              const std::vector<std::vector<std::size_t>>& support, std::size_t dim,
              std::vector<std::vector<double>>& prod) {
    const std::size_t n = per_dim.size();
    const std::size_t m_count = prod[0].size();
    double acc = 0.0;
    for (std::size_t a : support[dim]) {
        auto& cur = prod[dim + 1];
        bool any = false;
        for (std::size_t m = 0; m < m_count; ++m) {
            cur[m] = prod[dim][m] * per_dim[dim][m][a];
            any = any || cur[m] > 0.0;
        }
        if (!any) continue;
        if (dim + 1 < n) {
            acc += mi_rec(per_dim, support, dim + 1, prod);
        } else {
            double mix = 0.0;
            for (double v : cur) mix += v;
            mix /= static_cast<double>(m_count);
            for (double v : cur)
                if (v > 0.0) acc += v * std::log2(v / mix);
        }
    }
    return acc;
}

double leakage_at(const ChannelParams& p, const HelpSpec& help, const Codebook& cb,
                  const LeakageOptions& opt, const Quantizer& q, std::size_t bins) {
    const std::size_t n = cb.n;
    const std::size_t m_count = cb.size;
    const bool tx = help.uses_tx();
    const bool sees_t = help.placement != HelpPlacement::None && !help.secure;
    const bool needs_cells = sees_t || tx;
    const std::uint64_t cells = needs_cells ? q.levels() : 1;
    const std::size_t t_axis = sees_t ? q.levels() : 1;
    const EvKernel k = ev_kernel(p);
    const double sd_n = std::sqrt(k.beta * k.beta * p.sigma_w_sq + k.s_var);
    const double a = tx ? tx_scale(p, q, cb.power, opt.power_mode) : 1.0;

    auto offset = [&](std::uint64_t m, std::size_t i, std::uint64_t t) {
        return a * cb.word(m)[i] - (tx ? q.reconstruction(t) : 0.0);
    };
    double lo = kInf, hi = -kInf;
    for (std::uint64_t m = 0; m < m_count; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::uint64_t t = 0; t < cells; ++t) {
                lo = std::min(lo, offset(m, i, t));
                hi = std::max(hi, offset(m, i, t));
            }
    lo -= opt.range_sd * sd_n;
    hi += opt.range_sd * sd_n;
    std::vector<double> edges(bins + 1);
    for (std::size_t j = 0; j <= bins; ++j)
        edges[j] = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(bins);

    const std::size_t z_axis = bins + 2;
    const std::size_t outcomes = t_axis * z_axis;
    std::vector<std::vector<std::vector<double>>> per_dim(
        n, std::vector<std::vector<double>>(m_count, std::vector<double>(outcomes, 0.0)));
    const double sw = std::sqrt(p.sigma_w_sq);
    for (std::size_t i = 0; i < n; ++i)
        for (std::uint64_t m = 0; m < m_count; ++m)
            for (std::uint64_t t = 0; t < cells; ++t) {
                const double wlo = cells == 1 ? -kInf : q.cell_lo(t);
                const double whi = cells == 1 ? kInf : q.cell_hi(t);
                const double pt = numeric::normal_interval(wlo / sw, whi / sw);
                if (!(pt > 0.0)) continue;
                const double off = offset(m, i, t);
                auto& row = per_dim[i][m];
                const std::size_t base = (sees_t ? t : 0) * z_axis;
                double prev = 0.0;
                for (std::size_t j = 0; j <= bins; ++j) {
                    const double g = numeric::rectangle_probability(p.sigma_w_sq, k.beta, k.s_var, wlo, whi,
                                                                    -kInf, edges[j] - off);
                    row[base + j] += std::max(0.0, g - prev);
                    prev = std::max(prev, g);
                }
                row[base + bins + 1] += std::max(0.0, pt - prev);
            }

    std::vector<std::vector<std::size_t>> support(n);
    double total = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t o = 0; o < outcomes; ++o) {
            double mx = 0.0;
            for (std::uint64_t m = 0; m < m_count; ++m) mx = std::max(mx, per_dim[i][m][o]);
            if (mx > 0.0) support[i].push_back(o);
        }
        total *= static_cast<double>(support[i].size());
    }
    if (total > static_cast<double>(opt.max_outcomes))
        throw ResourceCap("estimate_leakage_discrete: joint outcome alphabet exceeds the cap");

    std::vector<std::vector<double>> prod(n + 1, std::vector<double>(m_count, 1.0));
    const double mi = mi_rec(per_dim, support, 0, prod) / static_cast<double>(m_count);
    return std::max(0.0, mi) / static_cast<double>(n);
}

Quantizer chain_quantizer(const ChannelParams& p, std::uint64_t levels, std::optional<double> clip) {
    return Quantizer(p.sigma_w_sq, levels, clip ? *clip : mse_optimal_clip_mult(levels));
}

// Sum over cells of p_t [h(aX + N | t) - h(N | t)] with aX ~ N(0, x_var): I(X; Z + W-hat, T).
double cell_mi(const ChannelParams& p, const Quantizer& q, double x_var) {
    const EvKernel k = ev_kernel(p);
    double acc = 0.0;
    for (std::uint64_t t = 0; t < q.levels(); ++t) {
        const numeric::CellConditionedGaussian z(p.sigma_w_sq, k.beta, k.s_var + x_var, q.cell_lo(t), q.cell_hi(t));
        const numeric::CellConditionedGaussian nz(p.sigma_w_sq, k.beta, k.s_var, q.cell_lo(t), q.cell_hi(t));
        acc += z.cell_probability() * (z.entropy_bits() - nz.entropy_bits());
    }
    return acc;
}

// Same quantity, but with the shift -q_t kept inside the density before integration.
double cell_mi_shifted(const ChannelParams& p, const Quantizer& q, double x_var) {
    const EvKernel k = ev_kernel(p);
    double acc = 0.0;
    const double sw = std::sqrt(p.sigma_w_sq);
    for (std::uint64_t t = 0; t < q.levels(); ++t) {
        const numeric::CellConditionedGaussian z(p.sigma_w_sq, k.beta, k.s_var + x_var, q.cell_lo(t), q.cell_hi(t));
        const numeric::CellConditionedGaussian nz(p.sigma_w_sq, k.beta, k.s_var, q.cell_lo(t), q.cell_hi(t));
        const double shift = q.reconstruction(t);
        const double e1 = k.beta * std::max(q.cell_lo(t), -12.0 * sw) - shift;
        const double e2 = k.beta * std::min(q.cell_hi(t), 12.0 * sw) - shift;
        const double sd = std::sqrt(k.s_var + x_var);
        const double lo = std::min(e1, e2) - 12.0 * sd, hi = std::max(e1, e2) + 12.0 * sd;
        std::vector<double> br{e1, e2, e1 - sd, e1 + sd, e2 - sd, e2 + sd};
        const double hz = numeric::density_entropy_bits([&](double v) { return z.density(v + shift); }, lo, hi, br);
        acc += z.cell_probability() * (hz - nz.entropy_bits());
    }
    return acc;
}

// Covariance of (X, W, Z) with Z = a X + N, X ~ N(0, P).
numeric::Matrix xwz_cov(const ChannelParams& p, double a) {
    const double P = p.power_limit;
    double wz = 0.0, zz = 0.0;
    switch (p.structure) {
        case Structure::Degraded:
            wz = p.sigma_w_sq;
            zz = p.sigma_w_sq + p.sigma_v_sq;
            break;
        case Structure::ReverselyDegraded:
            wz = p.sigma_v_sq;
            zz = p.sigma_v_sq;
            break;
        case Structure::NonDegraded:
            wz = p.correlation * std::sqrt(p.sigma_w_sq * p.sigma_v_sq);
            zz = p.sigma_v_sq;
            break;
    }
    return {{P, 0.0, a * P}, {0.0, p.sigma_w_sq, wz}, {a * P, wz, a * a * P + zz}};
}

constexpr int kX = 0, kW = 1, kZ = 2;

std::string level_tag(std::uint64_t levels) { return " [L=" + std::to_string(levels) + "]"; }

void monte_carlo_step(ChainReport& rep, const ChannelParams& p, const Quantizer& q, double a,
                      double exact, const ChainOptions& opt) {
    if (opt.samples == 0) return;
    const EvKernel k = ev_kernel(p);
    const NoiseDraw noise = sample_noise(p, opt.samples, derive_seed(opt.seed, 1));
    Rng rng = make_rng(opt.seed, 2);
    std::normal_distribution<double> g(0.0, std::sqrt(p.power_limit));
    std::vector<numeric::CellConditionedGaussian> cond_x, marg;
    for (std::uint64_t t = 0; t < q.levels(); ++t) {
        cond_x.emplace_back(p.sigma_w_sq, k.beta, k.s_var, q.cell_lo(t), q.cell_hi(t));
        marg.emplace_back(p.sigma_w_sq, k.beta, k.s_var + a * a * p.power_limit, q.cell_lo(t), q.cell_hi(t));
    }
    double s1 = 0.0, s2 = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < opt.samples; ++i) {
        const double x = a * g(rng);
        const double w = noise.w_seq[i];
        const double nv = p.structure == Structure::Degraded ? w + noise.v_seq[i] : noise.v_seq[i];
        const auto t = q.index(w);
        const double num = cond_x[t].density(nv), den = marg[t].density(x + nv);
        if (!(num > 0.0) || !(den > 0.0)) continue;
        const double v = std::log2(num / den);
        s1 += v;
        s2 += v * v;
        ++used;
    }
    const double N = static_cast<double>(std::max<std::size_t>(used, 1));
    const double mean = s1 / N;
    const double se = std::sqrt(std::max(0.0, s2 / N - mean * mean) / N);
    rep.steps.push_back(make_step("Monte-Carlo I(X;Z,T) vs quadrature" + level_tag(q.levels()),
                                  "sampled log-likelihood ratio", mean, Relation::Near, exact,
                                  5.0 * se + 1e-3));
}

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParams(what);
}

void data_processing_steps(ChainReport& rep, const ChannelParams& p, bool tx, const ChainOptions& opt,
                           double& worst_power_scale) {
    const double P = p.power_limit;
    worst_power_scale = 0.0;
    bool first = true;
    for (std::uint64_t L : opt.levels) {
        const Quantizer q = chain_quantizer(p, L, std::nullopt);
        double a = 1.0;
        if (tx) {
            const double ew = q.expected_output_power();
            a = ew < P ? std::sqrt((P - ew) / P) : 0.0;
            rep.steps.push_back(make_step("a^2 P + E[W-hat^2] = P" + level_tag(L), "power constraint with pre-subtraction",
                                          a * a * P + std::min(ew, P), Relation::Equal, P, 1e-12));
        }
        const double i_zt_shift = tx ? cell_mi_shifted(p, q, a * a * P) : 0.0;
        const double i_zt = cell_mi(p, q, a * a * P);
        if (tx)
            rep.steps.push_back(make_step("I(X;Z,T) = I(X;Z+W-hat,T)" + level_tag(L),
                                          "W-hat is a function of T", i_zt_shift, Relation::Equal, i_zt, 1e-7));
        const double i_zw = numeric::gaussian_cmi_bits(xwz_cov(p, a), std::vector<int>{kX}, std::vector<int>{kZ, kW});
        rep.steps.push_back(make_step("I(X;Z,T) <= I(X;Z,W)" + level_tag(L), "T = f(W): data processing", i_zt,
                                      Relation::LessEq, i_zw, 1e-9));
        rep.steps.push_back(make_step("I(X;T) = 0" + level_tag(L), "X independent of (W, W-hat)",
                                      numeric::gaussian_cmi_bits(xwz_cov(p, a), std::vector<int>{kX}, std::vector<int>{kW}),
                                      Relation::Equal, 0.0, 1e-12));
        if (first) monte_carlo_step(rep, p, q, a, i_zt, opt);
        first = false;
        worst_power_scale = std::max(worst_power_scale, a);
    }
}

void bound_step(ChainReport& rep, const ChannelParams& p, double value, const HelpSpec& help) {
    rep.steps.push_back(make_step("chain end = Phase-2 leakage bound", "closed-form bound", value, Relation::Equal,
                                  phase2_leakage_bound(p, help), 1e-12));
}

ChainReport gaussian_chain(const ChannelParams& p, LeakageChain chain, const ChainOptions& opt) {
    ChainReport rep;
    rep.chain = chain;
    const double P = p.power_limit;
    const bool tx = chain == LeakageChain::DegradedTx || chain == LeakageChain::ReverselyDegradedTx ||
                    chain == LeakageChain::NonDegradedTx;
    const HelpSpec help = tx ? HelpSpec::tx(0.5) : HelpSpec::rx(0.5);
    double a_max = 0.0;
    data_processing_steps(rep, p, tx, opt, a_max);
    const double h_v = gaussian_entropy_bits(p.sigma_v_sq);

    const auto cov = xwz_cov(p, 1.0);
    const double i_zw = numeric::gaussian_cmi_bits(cov, std::vector<int>{kX}, std::vector<int>{kZ, kW});
    if (tx)
        rep.steps.push_back(make_step("I(X;aX+N,W) <= I(X;X+N,W)", "power constraint, a <= 1",
                                      numeric::gaussian_cmi_bits(xwz_cov(p, a_max), std::vector<int>{kX},
                                                                 std::vector<int>{kZ, kW}),
                                      Relation::LessEq, i_zw, 1e-12));
    switch (p.structure) {
        case Structure::Degraded: {
            const double form = gaussian_entropy_bits(P + p.sigma_v_sq) - h_v;
            rep.steps.push_back(make_step("I(X;Z,W) = h(X+V) - h(V)", "independence of the message and (W, W-hat)",
                                          i_zw, Relation::Equal, form, 1e-10));
            bound_step(rep, p, form, help);
            break;
        }
        case Structure::ReverselyDegraded: {
            require(p.sigma_dw_sq > 0.0 && p.sigma_v_sq > 0.0, "reversely degraded chain needs sigma_v_sq, sigma_dw_sq > 0");
            const double i_z = numeric::gaussian_cmi_bits(cov, std::vector<int>{kX}, std::vector<int>{kZ});
            const double i_w_z = numeric::gaussian_cmi_bits(cov, std::vector<int>{kX}, std::vector<int>{kW},
                                                            std::vector<int>{kZ});
            rep.steps.push_back(make_step("I(X;Z,W) = I(X;Z) + I(X;W|Z)", "chain rule", i_zw, Relation::Equal,
                                          i_z + i_w_z, 1e-10));
            const double h_w_given_z = numeric::gaussian_entropy_bits(numeric::sub_matrix(cov, std::vector<int>{kW, kZ})) -
                                       gaussian_entropy_bits(cov[kZ][kZ]);
            const double h_dw = gaussian_entropy_bits(p.sigma_dw_sq);
            rep.steps.push_back(make_step("I(X;W|Z) = h(W|Z) - h(dW)", "W = V + dW, dW independent of (X, V)", i_w_z,
                                          Relation::Equal, h_w_given_z - h_dw, 1e-10));
            rep.steps.push_back(make_step("h(W|Z) <= h(W)", "conditioning cannot increase the entropy", h_w_given_z,
                                          Relation::LessEq, gaussian_entropy_bits(p.sigma_w_sq), 1e-12));
            const auto routes = conditional_entropy_routes(p.sigma_v_sq, p.sigma_dw_sq);
            rep.steps.push_back(make_step("h(V|V+dW): closed form = h(V)+h(dW)-h(V+dW)", "h(V^n|V^n + dW^n)",
                                          routes.closed_form, Relation::Equal, routes.entropy_difference, 1e-12));
            rep.steps.push_back(make_step("h(V|V+dW): closed form = conditional variance", "h(V^n|V^n + dW^n)",
                                          routes.closed_form, Relation::Equal, routes.conditional_variance, 1e-12));
            rep.steps.push_back(make_step("h(V|V+dW): closed form = 2-D quadrature", "h(V^n|V^n + dW^n)",
                                          routes.closed_form, Relation::Equal, routes.quadrature, 1e-7));
            const double h_v_given_w = routes.closed_form;
            rep.steps.push_back(make_step("h(W) - h(dW) = h(V) - h(V|W)", "h(V^n|V^n + dW^n)",
                                          gaussian_entropy_bits(p.sigma_w_sq) - h_dw, Relation::Equal,
                                          h_v - h_v_given_w, 1e-12));
            const double form = (gaussian_entropy_bits(P + p.sigma_v_sq) - h_v) + (h_v - h_v_given_w);
            rep.steps.push_back(make_step("I(X;Z) + I(X;W|Z) <= I(X;Z) + h(V) - h(V|W)", "conditioning cannot increase the entropy",
                                          i_z + i_w_z, Relation::LessEq, form, 1e-10));
            bound_step(rep, p, form, help);
            break;
        }
        case Structure::NonDegraded: {
            require(!p.singular(), "non-degraded chain needs |r| < 1");
            const double h_z_given_w = numeric::gaussian_entropy_bits(numeric::sub_matrix(cov, std::vector<int>{kW, kZ})) -
                                       gaussian_entropy_bits(p.sigma_w_sq);
            const double r = p.correlation;
            const double h_v_given_w = gaussian_entropy_bits(p.sigma_v_sq * (1.0 - r * r));
            rep.steps.push_back(make_step("I(X;Z,W) = h(Z|W) - h(V|W)", "X independent of (W, V)", i_zw,
                                          Relation::Equal, h_z_given_w - h_v_given_w, 1e-10));
            rep.steps.push_back(make_step("h(Z|W) <= h(Z)", "conditioning cannot increase the entropy", h_z_given_w,
                                          Relation::LessEq, gaussian_entropy_bits(P + p.sigma_v_sq), 1e-12));
            const double form = gaussian_entropy_bits(P + p.sigma_v_sq) - h_v_given_w;
            rep.steps.push_back(make_step("h(Z) - h(V|W) = C2' - 0.5 log2(1 - r^2)", "correlated noises",
                                          form, Relation::Equal,
                                          awgn_capacity(P, p.sigma_v_sq) - 0.5 * std::log2(1.0 - r * r), 1e-12));
            bound_step(rep, p, form, help);
            break;
        }
    }
    return rep;
}

ChainReport secure_coinciding_chain(const ChannelParams& p, const ChainOptions& opt) {
    require(p.structure == Structure::ReverselyDegraded && p.sigma_dw_sq == 0.0 && p.sigma_v_sq > 0.0,
            "secure coinciding chain needs a reversely degraded channel with sigma_dw_sq = 0");
    ChainReport rep;
    rep.chain = LeakageChain::ReverselyDegradedSecureCoinciding;
    const double P = p.power_limit;
    const auto cov = xwz_cov(p, 1.0);
    const double i_z = numeric::gaussian_cmi_bits(cov, std::vector<int>{kX}, std::vector<int>{kZ});
    rep.steps.push_back(make_step("I(X;Z) = 0.5 log2(1 + P/sigma_v^2)", "Ev observes Z = X + V only", i_z,
                                  Relation::Equal, awgn_capacity(P, p.sigma_v_sq), 1e-12));
    for (std::uint64_t L : opt.levels) {
        const Quantizer q = chain_quantizer(p, L, std::nullopt);
        rep.steps.push_back(make_step("I(X;Z) <= I(X;Z,T)" + level_tag(L), "hiding T from the Ev can only help", i_z,
                                      Relation::LessEq, cell_mi(p, q, P), 1e-9));
    }
    rep.steps.push_back(make_step("I(X;Z) = secure Phase-2 bound", "closed-form bound", i_z, Relation::Equal,
                                  phase2_leakage_bound(p, HelpSpec::rx(0.5, true)), 1e-12));
    return rep;
}

ChainReport entropy_gap_chain(const ChannelParams& p, const ChainOptions& opt) {
    require(p.structure == Structure::Degraded && p.sigma_v_sq > 0.0, "entropy-gap chain needs a degraded channel with sigma_v_sq > 0");
    ChainReport rep;
    rep.chain = LeakageChain::EntropyGap;
    const double bound = entropy_gap_bound(p);
    const double P = p.power_limit;
    const double epi_term = 2.0 * std::numbers::pi * std::numbers::e * p.sigma_v_sq;
    for (std::uint64_t L : opt.levels) {
        const Quantizer q = chain_quantizer(p, L, std::nullopt);
        const double ew = std::min(q.expected_output_power(), P);
        const std::pair<const char*, double> variants[] = {{"zero-mean X", P}, {"pre-subtracted X", P - ew}};
        for (const auto& [name, x_var] : variants) {
            const EntropyGapEval ev = entropy_gap_evaluate(p, L, x_var);
            const std::string tag = std::string(" [") + name + ", L=" + std::to_string(L) + "]";
            rep.steps.push_back(make_step("h(Y|T) - h(Z|T) <= entropy-gap bound" + tag, "entropy power inequality",
                                          ev.difference, Relation::LessEq, bound, 1e-6));
            rep.steps.push_back(make_step("h(Y|T) <= h(Y)" + tag, "conditioning cannot increase the entropy",
                                          ev.h_y_given_t, Relation::LessEq, gaussian_entropy_bits(P + p.sigma_w_sq), 1e-9));
            for (std::size_t t = 0; t < ev.cell_prob.size(); ++t)
                rep.steps.push_back(make_step("EPI cell " + std::to_string(t) + tag, "entropy power inequality",
                                              std::exp2(2.0 * ev.cell_h_z[t]), Relation::GreaterEq,
                                              std::exp2(2.0 * ev.cell_h_y[t]) + epi_term,
                                              1e-9 * std::exp2(2.0 * ev.cell_h_z[t])));
        }
    }
    return rep;
}

}  // namespace

std::string_view to_string(LeakageMethod m) {
    return m == LeakageMethod::PlugInDiscrete ? "plug_in_discrete" : "gaussian_closed_form";
}

std::string_view to_string(LeakageChain c) {
    switch (c) {
        case LeakageChain::DegradedRx: return "degraded_rx";
        case LeakageChain::ReverselyDegradedRx: return "reversely_degraded_rx";
        case LeakageChain::ReverselyDegradedSecureCoinciding: return "reversely_degraded_secure_coinciding";
        case LeakageChain::NonDegradedRx: return "non_degraded_rx";
        case LeakageChain::DegradedTx: return "degraded_tx";
        case LeakageChain::ReverselyDegradedTx: return "reversely_degraded_tx";
        case LeakageChain::NonDegradedTx: return "non_degraded_tx";
        case LeakageChain::EntropyGap: return "entropy_gap";
    }
    return "?";
}

std::span<const LeakageChain> all_leakage_chains() {
    static constexpr LeakageChain all[] = {
        LeakageChain::DegradedRx, LeakageChain::ReverselyDegradedRx, LeakageChain::ReverselyDegradedSecureCoinciding,
        LeakageChain::NonDegradedRx, LeakageChain::DegradedTx, LeakageChain::ReverselyDegradedTx,
        LeakageChain::NonDegradedTx, LeakageChain::EntropyGap};
    return all;
}

bool ChainReport::passed() const { return violations() == 0; }

std::size_t ChainReport::violations() const {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const ChainStep& s) { return !s.ok; }));
}

LeakageChain chain_for(const ChannelParams& params, const HelpSpec& help) {
    const bool tx = help.uses_tx() && help.placement != HelpPlacement::TxAndRxSame;
    switch (params.structure) {
        case Structure::Degraded: return tx ? LeakageChain::DegradedTx : LeakageChain::DegradedRx;
        case Structure::ReverselyDegraded:
            if (params.sigma_dw_sq == 0.0) {
                if (!help.secure) throw InvalidParams("no leakage chain: coinciding outputs with public help");
                return LeakageChain::ReverselyDegradedSecureCoinciding;
            }
            return tx ? LeakageChain::ReverselyDegradedTx : LeakageChain::ReverselyDegradedRx;
        case Structure::NonDegraded: return tx ? LeakageChain::NonDegradedTx : LeakageChain::NonDegradedRx;
    }
    return LeakageChain::DegradedRx;
}

ChainReport verify_leakage_chain(const ChannelParams& params, LeakageChain chain, const ChainOptions& options) {
    params.validate();
    require(params.power_limit > 0.0 && params.sigma_w_sq > 0.0, "leakage chains need P > 0 and sigma_w_sq > 0");
    switch (chain) {
        case LeakageChain::EntropyGap: return entropy_gap_chain(params, options);
        case LeakageChain::ReverselyDegradedSecureCoinciding: return secure_coinciding_chain(params, options);
        case LeakageChain::DegradedRx:
        case LeakageChain::DegradedTx:
            require(params.structure == Structure::Degraded && params.sigma_v_sq > 0.0,
                    "degraded chain needs a degraded channel with sigma_v_sq > 0");
            break;
        case LeakageChain::ReverselyDegradedRx:
        case LeakageChain::ReverselyDegradedTx:
            require(params.structure == Structure::ReverselyDegraded, "chain needs a reversely degraded channel");
            break;
        case LeakageChain::NonDegradedRx:
        case LeakageChain::NonDegradedTx:
            require(params.structure == Structure::NonDegraded && params.sigma_v_sq > 0.0,
                    "chain needs a non-degraded channel with sigma_v_sq > 0");
            break;
    }
    return gaussian_chain(params, chain, options);
}

ConditionalEntropyRoutes conditional_entropy_routes(double sv, double sdw) {
    if (!(sv > 0.0) || !(sdw > 0.0)) throw InvalidParams("conditional_entropy_routes: variances must be > 0");
    ConditionalEntropyRoutes r;
    const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
    r.closed_form = 0.5 * std::log2(sv / (sv + sdw)) + 0.5 * std::log2(two_pi_e * sdw);
    r.entropy_difference = gaussian_entropy_bits(sv) + gaussian_entropy_bits(sdw) - gaussian_entropy_bits(sv + sdw);
    const double cond_var = sv - sv * sv / (sv + sdw);
    r.conditional_variance = gaussian_entropy_bits(cond_var);

    // -E[log2 f(V | U)], U = V + dW, integrated over the joint density.
    const double su = std::sqrt(sv + sdw), k = sv / (sv + sdw), sc = std::sqrt(cond_var);
    auto inner = [&](double u) {
        const double m = k * u;
        auto g = [&](double v) {
            const double f = numeric::normal_pdf(v - m, cond_var);
            return f > 0.0 ? -f * std::log2(f) : 0.0;
        };
        return numeric::normal_pdf(u, sv + sdw) * numeric::integrate(g, m - 12.0 * sc, m + 12.0 * sc, std::vector<double>{m}, 1e-12);
    };
    r.quadrature = numeric::integrate(inner, -12.0 * su, 12.0 * su, std::vector<double>{0.0}, 1e-11);
    return r;
}

EntropyGapEval entropy_gap_evaluate(const ChannelParams& p, std::uint64_t levels, double x_var, std::optional<double> clip) {
    p.validate();
    require(p.structure == Structure::Degraded, "entropy_gap_evaluate: degraded channel only");
    require(x_var > 0.0 || p.sigma_v_sq > 0.0, "entropy_gap_evaluate: degenerate outputs");
    const Quantizer q = chain_quantizer(p, levels, clip);
    EntropyGapEval ev;
    for (std::uint64_t t = 0; t < q.levels(); ++t) {
        const numeric::CellConditionedGaussian y(p.sigma_w_sq, 1.0, x_var, q.cell_lo(t), q.cell_hi(t));
        const numeric::CellConditionedGaussian z(p.sigma_w_sq, 1.0, x_var + p.sigma_v_sq, q.cell_lo(t), q.cell_hi(t));
        const double pt = y.cell_probability();
        const double hy = y.entropy_bits(), hz = z.entropy_bits();
        ev.cell_prob.push_back(pt);
        ev.cell_h_y.push_back(hy);
        ev.cell_h_z.push_back(hz);
        ev.h_y_given_t += pt * hy;
        ev.h_z_given_t += pt * hz;
    }
    ev.difference = ev.h_y_given_t - ev.h_z_given_t;
    return ev;
}

LeakageEstimate estimate_leakage_discrete(const ChannelParams& params, const HelpSpec& help,
                                          const Codebook& codebook, const LeakageOptions& options) {
    params.validate();
    help.validate();
    if (help.placement == HelpPlacement::TxAndRxIndependent)
        throw Unsupported("estimate_leakage_discrete: independent help links are not modeled");
    if (!codebook.is_explicit()) throw InvalidParams("estimate_leakage_discrete: needs an explicit codebook");
    if (codebook.n > kMaxLeakageBlock) throw ResourceCap("estimate_leakage_discrete: n > 8");
    if (codebook.size > kMaxLeakageMessages) throw ResourceCap("estimate_leakage_discrete: |M| > 16");
    if (options.bins < 2) throw InvalidParams("estimate_leakage_discrete: at least 2 bins");
    if (!(params.sigma_w_sq > 0.0)) throw InvalidParams("estimate_leakage_discrete: sigma_w_sq must be > 0");

    LeakageEstimate est;
    est.n = codebook.n;
    est.message_count = codebook.size;
    est.levels = help.placement == HelpPlacement::None ? 1 : options.levels;
    try {
        est.bound = phase2_leakage_bound(params, help);
    } catch (const InfiniteCapacity&) {
        est.bound = kInf;
    }
    if (codebook.size <= 1) {
        est.refinement = {{options.bins, 0.0}, {2 * options.bins, 0.0}};
        return est;
    }
    const Quantizer q = chain_quantizer(params, est.levels, options.clip_mult);
    double prev = leakage_at(params, help, codebook, options, q, options.bins);
    est.refinement = {{options.bins, prev}};
    for (std::size_t bins = 2 * options.bins;; bins *= 2) {
        const double cur = leakage_at(params, help, codebook, options, q, bins);
        est.refinement.push_back({bins, cur});
        est.value = cur;
        if (std::abs(cur - prev) <= std::max(options.stability * std::abs(cur), options.abs_floor)) break;
        if (2 * bins > options.max_bins) {
            std::ostringstream os;
            os << "estimate_leakage_discrete: refinement " << prev << " -> " << cur << " at " << bins
               << " bins not stable";
            throw GridTooCoarse(os.str());
        }
        prev = cur;
    }
    return est;
}

double least_squares_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidParams("least_squares_slope: need >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx == 0.0) throw InvalidParams("least_squares_slope: x values are all equal");
    return sxy / sxx;
}

CompositeLeakageTable composite_leakage(const ChannelParams& params, const HelpSpec& help,
                                        std::span<const double> tau_grid, std::span<const double> phase2_estimates,
                                        double delta) {
    if (tau_grid.size() != phase2_estimates.size())
        throw InvalidParams("composite_leakage: one Phase-2 estimate per tau is required");
    const bool silent = params.structure == Structure::ReverselyDegraded;
    CompositeLeakageTable tab;
    double r0;
    try {
        r0 = phase2_leakage_bound(params, help);
    } catch (const InfiniteCapacity&) {
        r0 = 0.0;
    }
    for (double e : phase2_estimates) r0 = std::max(r0, e);
    tab.r0 = r0;
    const double r_l1 = silent ? 0.0 : delta;
    for (std::size_t k = 0; k < tau_grid.size(); ++k) {
        const double tau = tau_grid[k];
        if (!(tau >= 0.0 && tau <= 1.0)) throw InvalidParams("composite_leakage: tau must lie in [0, 1]");
        CompositeLeakageRow row{tau, r_l1, phase2_estimates[k], (1.0 - tau) * r_l1 + tau * phase2_estimates[k]};
        if (delta > 0.0 && tau * r0 <= delta && row.composite > 2.0 * delta + 1e-15) tab.limit_ok = false;
        tab.rows.push_back(row);
    }
    if (tau_grid.size() >= 2) {
        std::vector<double> c;
        for (const auto& r : tab.rows) c.push_back(r.composite);
        tab.slope = least_squares_slope(tau_grid, c);
    }
    return tab;
}

}  // namespace wiretap
