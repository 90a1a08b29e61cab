#include "wiretap/discrete_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

#include "wiretap/capacity_engine.hpp"
#include "wiretap/errors.hpp"
#include "wiretap/gaussian_entropy.hpp"
#include "wiretap/rng.hpp"

namespace wiretap::oracle {

namespace {

using Names = std::vector<std::string>;

double plogp_sum(const std::vector<double>& p) {
    double h = 0.0;
    for (double v : p)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

struct Sampler {
    Rng rng;
    bool deterministic = false;

    std::vector<double> pmf(std::size_t n) {
        std::vector<double> p(n, 0.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        if (deterministic || u(rng) < 0.15) {
            p[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 1.0;
            return p;
        }
        std::exponential_distribution<double> e(1.0);
        for (double& v : p) v = e(rng);
        if (n > 2 && u(rng) < 0.2) p[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)] = 0.0;
        const double s = std::accumulate(p.begin(), p.end(), 0.0);
        for (double& v : p) v /= s;
        return p;
    }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
};

void check_sizes(const AlphabetSizes& s) {
    auto ok = [](std::size_t v) { return v >= 1 && v <= kMaxAlphabet; };
    if (!ok(s.message) || !ok(s.help) || s.symbol < 2 || s.symbol > kMaxAlphabet)
        throw InvalidParams("alphabet sizes must lie in [1, 6] (symbol alphabet in [2, 6])");
}

JointTable build(Model model, const AlphabetSizes& sz, std::uint64_t seed, bool deterministic) {
    check_sizes(sz);
    Sampler smp{make_rng(seed), deterministic};
    const std::size_t k = sz.symbol, nm = sz.message, nt = sz.help;
    const auto pm = smp.pmf(nm);
    auto u16 = [](std::size_t v) { return static_cast<std::uint16_t>(v); };

    switch (model) {
        case Model::DegradedRx:
        case Model::DegradedTx:
        case Model::DegradedMessageAware: {
            const auto pw = smp.pmf(k), pv = smp.pmf(k);
            const bool tx = model == Model::DegradedTx, aware = model == Model::DegradedMessageAware;
            std::vector<std::vector<double>> px(tx ? nm * nt : nm);
            for (auto& v : px) v = smp.pmf(k);
            std::vector<std::size_t> f(aware ? k * nm : k);
            for (auto& v : f) v = smp.index(nt);
            JointTable t(model, {{"M", nm}, {"X", k}, {"W", k}, {"V", k}, {"Y", k}, {"Z", k}, {"T", nt}});
            for (std::size_t m = 0; m < nm; ++m)
                for (std::size_t w = 0; w < k; ++w)
                    for (std::size_t v = 0; v < k; ++v)
                        for (std::size_t x = 0; x < k; ++x) {
                            const std::size_t tt = aware ? f[w * nm + m] : f[w];
                            const double p = pm[m] * pw[w] * pv[v] * (tx ? px[m * nt + tt][x] : px[m][x]);
                            if (p <= 0.0) continue;
                            const std::size_t y = (x + w) % k, z = (y + v) % k;
                            const std::uint16_t row[] = {u16(m), u16(x), u16(w), u16(v), u16(y), u16(z), u16(tt)};
                            t.add(row, p);
                        }
            t.normalize();
            if (tx) {
                t.declare({{"M"}, {"X", "T"}, {"Y", "Z", "W", "V"}});
                t.declare({{"M"}, {}, {"W", "T"}});
            } else if (aware) {
                t.declare({{"M"}, {"X"}, {"Y", "Z"}});
            } else {
                t.declare({{"M"}, {"X"}, {"Y", "Z", "T", "W", "V"}});
                t.declare({{"M", "X"}, {}, {"W", "T"}});
            }
            t.declare({{"X"}, {"Y"}, {"Z"}});
            if (!aware) t.declare({{"M"}, {"Y", "T"}, {"Z"}});
            return t;
        }
        case Model::ReverselyDegradedRx:
        case Model::ReverselyDegradedTx:
        case Model::ReverselyDegradedMessageAware: {
            const auto pv = smp.pmf(k), pdw = smp.pmf(k);
            const bool tx = model == Model::ReverselyDegradedTx;
            const bool aware = model == Model::ReverselyDegradedMessageAware;
            std::vector<std::vector<double>> px(tx ? nm * nt : nm);
            for (auto& v : px) v = smp.pmf(k);
            std::vector<std::size_t> f(aware ? k * nm : k);
            for (auto& v : f) v = smp.index(nt);
            JointTable t(model, {{"M", nm}, {"X", k}, {"V", k}, {"DW", k}, {"W", k}, {"Y", k}, {"Z", k}, {"T", nt}});
            for (std::size_t m = 0; m < nm; ++m)
                for (std::size_t v = 0; v < k; ++v)
                    for (std::size_t d = 0; d < k; ++d)
                        for (std::size_t x = 0; x < k; ++x) {
                            const std::size_t w = (v + d) % k;
                            const std::size_t tt = aware ? f[w * nm + m] : f[w];
                            const double p = pm[m] * pv[v] * pdw[d] * (tx ? px[m * nt + tt][x] : px[m][x]);
                            if (p <= 0.0) continue;
                            const std::size_t z = (x + v) % k, y = (z + d) % k;
                            const std::uint16_t row[] = {u16(m), u16(x), u16(v), u16(d), u16(w), u16(y), u16(z), u16(tt)};
                            t.add(row, p);
                        }
            t.normalize();
            if (tx) {
                t.declare({{"M"}, {"X", "T"}, {"Y", "Z", "V", "DW"}});
                t.declare({{"M"}, {}, {"V", "DW", "W", "T"}});
                t.declare({{"V"}, {}, {"DW"}});
            } else {
                t.declare({{"M"}, {"X"}, aware ? Names{"Y", "Z"} : Names{"Y", "Z", "T"}});
                t.declare({{"X"}, {"Z"}, {"Y"}});
                if (!aware) t.declare({{"M", "X"}, {}, {"W", "T"}});
            }
            return t;
        }
        case Model::DegradedMemoryless: {
            const auto pw = smp.pmf(k), pv = smp.pmf(k);
            std::vector<std::vector<double>> px(nm);
            for (auto& v : px) v = smp.pmf(k * k);
            JointTable t(model, {{"M", nm}, {"X1", k}, {"X2", k}, {"W1", k}, {"W2", k}, {"V1", k}, {"V2", k},
                                 {"Y1", k}, {"Y2", k}, {"Z1", k}, {"Z2", k}});
            for (std::size_t m = 0; m < nm; ++m)
                for (std::size_t xx = 0; xx < k * k; ++xx) {
                    const double pxm = pm[m] * px[m][xx];
                    if (pxm <= 0.0) continue;
                    const std::size_t x1 = xx / k, x2 = xx % k;
                    for (std::size_t w1 = 0; w1 < k; ++w1)
                        for (std::size_t w2 = 0; w2 < k; ++w2)
                            for (std::size_t v1 = 0; v1 < k; ++v1)
                                for (std::size_t v2 = 0; v2 < k; ++v2) {
                                    const double p = pxm * pw[w1] * pw[w2] * pv[v1] * pv[v2];
                                    if (p <= 0.0) continue;
                                    const std::size_t y1 = (x1 + w1) % k, y2 = (x2 + w2) % k;
                                    const std::uint16_t row[] = {u16(m),  u16(x1), u16(x2), u16(w1),
                                                                 u16(w2), u16(v1), u16(v2), u16(y1),
                                                                 u16(y2), u16((y1 + v1) % k), u16((y2 + v2) % k)};
                                    t.add(row, p);
                                }
                }
            t.normalize();
            t.declare({{"M"}, {"X1", "X2"}, {"Y1", "Y2", "Z1", "Z2"}});
            t.declare({{"X1"}, {"Y1"}, {"Z1"}});
            t.declare({{"X2"}, {"Y2"}, {"Z2"}});
            t.declare({{"M", "X1", "Y1", "Z1"}, {"X2"}, {"Y2", "Z2"}});
            t.declare({{"M", "X2", "Y2", "Z2"}, {"X1"}, {"Y1", "Z1"}});
            t.declare({{"M"}, {"Y1", "Y2"}, {"Z1", "Z2"}});
            return t;
        }
        case Model::DiscretizedGaussian: break;
    }
    throw InvalidParams("random tables are not defined for this model");
}

void verify_declared(const JointTable& t) {
    for (const auto& c : t.declared_chains()) {
        const double r = t.chain_residual(c);
        if (!(r < 1e-10)) throw std::logic_error("declared chain " + c.describe() + " violated: residual " + std::to_string(r));
    }
}

class StepList {
public:
    explicit StepList(StepReport& rep) : rep_(rep) {}
    void eq(std::string label, std::string anchor, double lhs, double rhs) {
        rep_.steps.push_back(make_step(std::move(label), std::move(anchor), lhs, Relation::Equal, rhs, kEqualityTol));
    }
    void le(std::string label, std::string anchor, double lhs, double rhs) {
        rep_.steps.push_back(make_step(std::move(label), std::move(anchor), lhs, Relation::LessEq, rhs, kInequalityTol));
    }

private:
    StepReport& rep_;
};

double fano_bound(const JointTable& t, const Names& observed) {
    Names names{"M"};
    names.insert(names.end(), observed.begin(), observed.end());
    const auto joint = t.marginal(names);
    const std::size_t nm = t.axes()[t.axis_index("M")].size;
    const std::size_t rest = joint.size() / nm;
    double correct = 0.0;
    for (std::size_t o = 0; o < rest; ++o) {
        double best = 0.0;
        for (std::size_t m = 0; m < nm; ++m) best = std::max(best, joint[m * rest + o]);
        correct += best;
    }
    const double pe = std::clamp(1.0 - correct, 0.0, 1.0);
    return binary_entropy(pe) + (nm > 1 ? pe * std::log2(static_cast<double>(nm - 1)) : 0.0);
}

Names cat(Names a, const Names& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double cond_entropy(const JointTable& t, const Names& a, const Names& given) {
    return t.entropy(cat(a, given)) - t.entropy(given);
}

double mi(const JointTable& t, const Names& a, const Names& b, const Names& c = {}) {
    return t.mutual_information(a, b, c);
}

// Reliability/secrecy skeleton shared by every chain: returns the Fano term and the
// leakage I(M; Z, T), and records the decomposition of H(M) and Fano's inequality.
struct Prefix {
    double hm = 0.0, fano = 0.0, leak = 0.0, gap = 0.0;  // gap = I(M;Y,T) - I(M;Z,T)
};

Prefix common_prefix(const JointTable& t, StepList& s, const Names& yobs, const Names& zobs) {
    Prefix p;
    p.hm = t.entropy(Names{"M"});
    const double iy = mi(t, {"M"}, yobs), iz = mi(t, {"M"}, zobs);
    p.leak = iz;
    p.gap = iy - iz;
    const double h_m_y = cond_entropy(t, {"M"}, yobs);
    p.fano = fano_bound(t, yobs);
    s.eq("H(M) = [I(M;Y,T) - I(M;Z,T)] + I(M;Z,T) + H(M|Y,T)", "chain rule", p.hm, p.gap + iz + h_m_y);
    s.le("H(M|Y,T) <= h2(Pe) + Pe log2(|M|-1)", "follows from Fano inequality", h_m_y, p.fano);
    return p;
}

void require_model(const JointTable& t, Model chain) {
    if (t.model() != chain)
        throw InvalidParams("check_converse_chain: table built for " + std::string(to_string(t.model())) +
                            " cannot run chain " + std::string(to_string(chain)));
    if (t.declared_chains().empty()) throw InvalidParams("check_converse_chain: table declares no Markov chain");
}

void degraded_rx_steps(const JointTable& t, StepList& s, bool degraded) {
    const Names Y{"Y", "T"}, Z{"Z", "T"};
    const Prefix p = common_prefix(t, s, Y, Z);
    const double i_m_y_zt = mi(t, {"M"}, {"Y"}, {"Z", "T"});
    if (degraded) {
        s.eq("I(M;Z|Y,T) = 0", "Markov chain M - (Y,T) - Z", mi(t, {"M"}, {"Z"}, {"Y", "T"}), 0.0);
        s.eq("I(M;Y,T) - I(M;Z,T) = I(M;Y|Z,T)", "Markov chain M - (Y,T) - Z", p.gap, i_m_y_zt);
    }
    s.le("I(M;Y,T) - I(M;Z,T) <= I(M;Y|Z,T)", "I(M;Y,T) <= I(M;Y,Z,T)", p.gap, i_m_y_zt);
    s.le("I(M;Z,T) <= I(M;Z,W)", "T = f(W): data processing", p.leak, mi(t, {"M"}, {"Z", "W"}));
    s.eq("I(M;Y|X,Z,T) = 0", "Markov chain M - X - (Y,Z,T)", mi(t, {"M"}, {"Y"}, {"X", "Z", "T"}), 0.0);
    const double i_x_y_zt = mi(t, {"X"}, {"Y"}, {"Z", "T"});
    s.le("I(M;Y|Z,T) <= I(X;Y|Z,T)", "Markov chain M - X - (Y,Z,T)", i_m_y_zt, i_x_y_zt);
    const double i_x_y_z = mi(t, {"X"}, {"Y"}, {"Z"});
    const double i_x_t_yz = mi(t, {"X"}, {"T"}, {"Y", "Z"});
    s.le("I(X;Y|Z,T) <= I(X;Y|Z) + I(X;T|Y,Z)", "I(X;Y|Z,T) = I(X;Y,T|Z) - I(X;T|Z)", i_x_y_zt, i_x_y_z + i_x_t_yz);
    const double ht = t.entropy(Names{"T"});
    s.le("I(X;T|Y,Z) <= H(T)", "I(X^n;T|Y^nZ^n) <= H(T)", i_x_t_yz, ht);
    s.le("H(T) <= log2|T|", "rate-limited help link", ht,
         std::log2(static_cast<double>(t.axes()[t.axis_index("T")].size)));
    double single_letter;
    if (degraded) {
        single_letter = mi(t, {"X"}, {"Y"}) - mi(t, {"X"}, {"Z"});
        s.le("I(X;Y|Z) <= I(X;Y) - I(X;Z)", "follows from Markov chain X - Y - Z", i_x_y_z, single_letter);
        s.eq("I(X;Y|Z) = I(X;Y) - I(X;Z)", "follows from Markov chain X - Y - Z", i_x_y_z, single_letter);
    } else {
        single_letter = 0.0;
        s.eq("I(X;Y|Z) = 0", "I(X^n;Y^n|Z^n)=0, which in turn follows from Markov chain X - Z - Y", i_x_y_z, 0.0);
    }
    s.le("H(M) <= [I(X;Y) - I(X;Z)]^+ + H(T) + Fano + I(M;Z,T)", "converse", p.hm,
         single_letter + ht + p.fano + p.leak);
}

void degraded_tx_steps(const JointTable& t, StepList& s) {
    const Names Y{"Y", "T"}, Z{"Z", "T"};
    const Prefix p = common_prefix(t, s, Y, Z);
    s.eq("I(M;T) = 0", "help depends on the noise only", mi(t, {"M"}, {"T"}), 0.0);
    const double i_m_y_zt = mi(t, {"M"}, {"Y"}, {"Z", "T"});
    s.eq("I(M;Y,T) - I(M;Z,T) = I(M;Y|Z,T)", "Markov chain M - (Y,T) - Z", p.gap, i_m_y_zt);
    s.eq("I(M;Y|X,Z,T) = 0", "Markov chain M - (X,T) - (Y,Z)", mi(t, {"M"}, {"Y"}, {"X", "Z", "T"}), 0.0);
    const double i_x_y_zt = mi(t, {"X"}, {"Y"}, {"Z", "T"});
    s.le("I(M;Y|Z,T) <= I(X;Y|Z,T)", "Markov chain M - (X,T) - (Y,Z)", i_m_y_zt, i_x_y_zt);
    const double i_xt_y_z = mi(t, {"X", "T"}, {"Y"}, {"Z"});
    s.le("I(X;Y|Z,T) <= I(X,T;Y|Z)", "chain rule", i_x_y_zt, i_xt_y_z);
    const double i_x_y_z = mi(t, {"X"}, {"Y"}, {"Z"});
    const double i_t_y_xz = mi(t, {"T"}, {"Y"}, {"X", "Z"});
    s.eq("I(X,T;Y|Z) = I(X;Y|Z) + I(T;Y|X,Z)", "chain rule", i_xt_y_z, i_x_y_z + i_t_y_xz);
    const double ht = t.entropy(Names{"T"});
    s.le("I(T;Y|X,Z) <= H(T)", "I(T;Y|X,Z) <= H(T)", i_t_y_xz, ht);
    s.le("H(Y|Z,T) <= H(Y|Z)", "conditioning cannot increase entropy", cond_entropy(t, {"Y"}, {"Z", "T"}),
         cond_entropy(t, {"Y"}, {"Z"}));
    const double single_letter = mi(t, {"X"}, {"Y"}) - mi(t, {"X"}, {"Z"});
    s.eq("I(X;Y|Z) = I(X;Y) - I(X;Z)", "follows from Markov chain X - Y - Z", i_x_y_z, single_letter);
    s.le("H(M) <= I(X;Y) - I(X;Z) + H(T) + Fano + I(M;Z,T)", "converse", p.hm, single_letter + ht + p.fano + p.leak);
}

void rd_tx_steps(const JointTable& t, StepList& s) {
    const Names Y{"Y", "T"}, Z{"Z", "T"};
    const Prefix p = common_prefix(t, s, Y, Z);
    const double i_m_y_zt = mi(t, {"M"}, {"Y"}, {"Z", "T"});
    s.le("I(M;Y,T) - I(M;Z,T) <= I(M;Y|Z,T)", "I(M;Y,T) <= I(M;Y,Z,T)", p.gap, i_m_y_zt);
    s.eq("I(M;Y|X,Z,T) = 0", "Markov chain M - (X,T) - (Y,Z)", mi(t, {"M"}, {"Y"}, {"X", "Z", "T"}), 0.0);
    const double i_x_y_zt = mi(t, {"X"}, {"Y"}, {"Z", "T"});
    s.le("I(M;Y|Z,T) <= I(X;Y|Z,T)", "Markov chain M - (X,T) - (Y,Z)", i_m_y_zt, i_x_y_zt);
    const double i_x_dw_zt = mi(t, {"X"}, {"DW"}, {"Z", "T"});
    s.eq("I(X;Y|Z,T) = I(X;dW|Z,T)", "Y = Z + dW", i_x_y_zt, i_x_dw_zt);
    const double i_xv_dw_t = mi(t, {"X", "V"}, {"DW"}, {"T"});
    s.le("I(X;dW|Z,T) <= I(X,V;dW|T)", "(X, Z) and (X, V) are in one-to-one correspondence", i_x_dw_zt, i_xv_dw_t);
    const double i_x_dw_vt = mi(t, {"X"}, {"DW"}, {"V", "T"});
    s.eq("I(X;dW|V,T) = 0", "X depends on (M, T) only", i_x_dw_vt, 0.0);
    const double i_v_dw_t = mi(t, {"V"}, {"DW"}, {"T"});
    s.eq("I(X,V;dW|T) = I(V;dW|T) + I(X;dW|V,T)", "chain rule", i_xv_dw_t, i_v_dw_t + i_x_dw_vt);
    s.eq("I(V;dW) = 0", "independent noises", mi(t, {"V"}, {"DW"}), 0.0);
    const double i_dw_t_v = mi(t, {"DW"}, {"T"}, {"V"});
    s.le("I(V;dW|T) <= I(dW;T|V)", "I(dW^n;T|V^n) <= H(T)", i_v_dw_t, i_dw_t_v);
    const double ht = t.entropy(Names{"T"});
    s.le("I(dW;T|V) <= H(T)", "I(dW^n;T|V^n) <= H(T)", i_dw_t_v, ht);
    s.le("H(M) <= H(T) + Fano + I(M;Z,T)", "converse", p.hm, ht + p.fano + p.leak);
}

void message_aware_steps(const JointTable& t, StepList& s, bool degraded) {
    const Names Y{"Y", "T"}, Z{"Z", "T"};
    const Prefix p = common_prefix(t, s, Y, Z);
    const double i_m_yt_z = mi(t, {"M"}, {"Y", "T"}, {"Z"});
    s.le("I(M;Y,T) - I(M;Z,T) <= I(M;Y,T|Z)", "I(M;Z,T) >= I(M;Z)", p.gap, i_m_yt_z);
    const double i_m_y_z = mi(t, {"M"}, {"Y"}, {"Z"});
    const double i_m_t_yz = mi(t, {"M"}, {"T"}, {"Y", "Z"});
    s.eq("I(M;Y,T|Z) = I(M;Y|Z) + I(M;T|Y,Z)", "chain rule", i_m_yt_z, i_m_y_z + i_m_t_yz);
    const double ht = t.entropy(Names{"T"});
    s.le("I(M;T|Y,Z) <= H(T)", "I(M;T|Y,Z) <= H(T)", i_m_t_yz, ht);
    s.eq("I(M;Y|X,Z) = 0", "independence of M and Y^n given X^n and Z^n", mi(t, {"M"}, {"Y"}, {"X", "Z"}), 0.0);
    const double i_x_y_z = mi(t, {"X"}, {"Y"}, {"Z"});
    s.le("I(M;Y|Z) <= I(X;Y|Z)", "independence of M and Y^n given X^n and Z^n", i_m_y_z, i_x_y_z);
    double single_letter = 0.0;
    if (degraded) {
        single_letter = mi(t, {"X"}, {"Y"}) - mi(t, {"X"}, {"Z"});
        s.eq("I(X;Y|Z) = I(X;Y) - I(X;Z)", "follows from Markov chain X - Y - Z", i_x_y_z, single_letter);
    } else {
        s.eq("I(X;Y|Z) = 0", "I(X^n;Y^n|Z^n)=0, which in turn follows from Markov chain X - Z - Y", i_x_y_z, 0.0);
    }
    s.le("H(M) <= [I(X;Y) - I(X;Z)]^+ + H(T) + Fano + I(M;Z,T)", "converse", p.hm,
         single_letter + ht + p.fano + p.leak);
}

void memoryless_steps(const JointTable& t, StepList& s) {
    const Names Y{"Y1", "Y2"}, Z{"Z1", "Z2"}, X{"X1", "X2"};
    const Prefix p = common_prefix(t, s, Y, Z);
    const double i_m_y_z = mi(t, {"M"}, Y, Z);
    s.eq("I(M;Y^2) - I(M;Z^2) = I(M;Y^2|Z^2)", "Markov chain M - Y^n - Z^n", p.gap, i_m_y_z);
    const double i_x_y_z = mi(t, X, Y, Z);
    s.le("I(M;Y^2|Z^2) <= I(X^2;Y^2|Z^2)", "Markov chain M - X^n - (Y^n,Z^n)", i_m_y_z, i_x_y_z);
    double sum = 0.0, sum_single = 0.0;
    for (const char* i : {"1", "2"}) {
        const std::string x = std::string("X") + i, y = std::string("Y") + i, z = std::string("Z") + i;
        const double c = mi(t, {x}, {y}, {z});
        const double d = mi(t, {x}, {y}) - mi(t, {x}, {z});
        s.eq("I(X_i;Y_i|Z_i) = I(X_i;Y_i) - I(X_i;Z_i), i=" + std::string(i), "follows from Markov chain X - Y - Z", c, d);
        sum += c;
        sum_single += d;
    }
    s.le("I(X^2;Y^2|Z^2) <= sum_i I(X_i;Y_i|Z_i)", "memoryless channel", i_x_y_z, sum);

    // Uniform time-sharing variable Q: the averaged input sees the same channel.
    const std::size_t k = t.axes()[t.axis_index("X1")].size;
    const auto j1 = t.marginal(Names{"X1", "Y1", "Z1"});
    const auto j2 = t.marginal(Names{"X2", "Y2", "Z2"});
    JointTable avg(Model::DiscretizedGaussian, {{"X", k}, {"Y", k}, {"Z", k}});
    for (std::size_t idx = 0; idx < j1.size(); ++idx) {
        const double v = 0.5 * (j1[idx] + j2[idx]);
        if (v <= 0.0) continue;
        const std::uint16_t row[] = {static_cast<std::uint16_t>(idx / (k * k)),
                                     static_cast<std::uint16_t>((idx / k) % k), static_cast<std::uint16_t>(idx % k)};
        avg.add(row, v);
    }
    const double mixed = mi(avg, {"X"}, {"Y"}) - mi(avg, {"X"}, {"Z"});
    s.le("(1/2) sum_i [I(X_i;Y_i) - I(X_i;Z_i)] <= I(Xbar;Ybar) - I(Xbar;Zbar)",
         "concavity of the mutual information in the input distribution", 0.5 * sum_single, mixed);
    s.le("H(M) <= 2 [I(Xbar;Ybar) - I(Xbar;Zbar)] + Fano + I(M;Z^2)", "converse", p.hm, 2.0 * mixed + p.fano + p.leak);
}

}  // namespace

std::string_view to_string(Model m) {
    switch (m) {
        case Model::DegradedRx: return "degraded_rx";
        case Model::ReverselyDegradedRx: return "reversely_degraded_rx";
        case Model::DegradedTx: return "degraded_tx";
        case Model::ReverselyDegradedTx: return "reversely_degraded_tx";
        case Model::DegradedMessageAware: return "degraded_message_aware";
        case Model::ReverselyDegradedMessageAware: return "reversely_degraded_message_aware";
        case Model::DegradedMemoryless: return "degraded_memoryless";
        case Model::DiscretizedGaussian: return "discretized_gaussian";
    }
    return "?";
}

Model parse_model(std::string_view text) {
    for (Model m : converse_models())
        if (to_string(m) == text) return m;
    if (text == "discretized_gaussian") return Model::DiscretizedGaussian;
    throw InvalidParams("unknown oracle model '" + std::string(text) + "'");
}

std::span<const Model> converse_models() {
    static constexpr Model all[] = {Model::DegradedRx,           Model::ReverselyDegradedRx,
                                    Model::DegradedTx,           Model::ReverselyDegradedTx,
                                    Model::DegradedMessageAware, Model::ReverselyDegradedMessageAware,
                                    Model::DegradedMemoryless};
    return all;
}

std::string MarkovChain::describe() const {
    auto join = [](const std::vector<std::string>& v) {
        if (v.empty()) return std::string("{}");
        std::string s = "(";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
        return s + ")";
    };
    return join(a) + " - " + join(b) + " - " + join(c);
}

JointTable::JointTable(Model model, std::vector<Axis> axes) : model_(model), axes_(std::move(axes)) {
    if (axes_.empty()) throw InvalidParams("JointTable: needs at least one axis");
    for (const auto& a : axes_)
        if (a.size < 1 || a.size > 65535) throw InvalidParams("JointTable: axis size out of range");
}

std::size_t JointTable::axis_index(std::string_view name) const {
    for (std::size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i].name == name) return i;
    throw InvalidParams("JointTable: no axis named '" + std::string(name) + "'");
}

bool JointTable::has_axis(std::string_view name) const {
    return std::any_of(axes_.begin(), axes_.end(), [&](const Axis& a) { return a.name == name; });
}

void JointTable::add(std::span<const std::uint16_t> symbols, double p) {
    if (symbols.size() != axes_.size()) throw InvalidParams("JointTable::add: wrong number of symbols");
    if (!(p > 0.0)) return;
    for (std::size_t i = 0; i < symbols.size(); ++i)
        if (symbols[i] >= axes_[i].size) throw InvalidParams("JointTable::add: symbol out of range");
    symbols_.insert(symbols_.end(), symbols.begin(), symbols.end());
    probs_.push_back(p);
}

void JointTable::declare(MarkovChain chain) {
    for (const auto* g : {&chain.a, &chain.b, &chain.c})
        for (const auto& n : *g) axis_index(n);
    chains_.push_back(std::move(chain));
}

void JointTable::normalize() {
    const double s = total_probability();
    if (!(s > 0.0)) throw InvalidParams("JointTable::normalize: empty table");
    for (double& p : probs_) p /= s;
}

double JointTable::total_probability() const {
    double s = 0.0;
    for (double p : probs_) s += p;
    return s;
}

std::vector<std::size_t> JointTable::indices_of(std::span<const std::string> names) const {
    std::vector<std::size_t> idx;
    for (const auto& n : names) {
        const std::size_t i = axis_index(n);
        if (std::find(idx.begin(), idx.end(), i) == idx.end()) idx.push_back(i);
    }
    return idx;
}

std::vector<double> JointTable::marginal(std::span<const std::string> names) const {
    const auto idx = indices_of(names);
    std::size_t total = 1;
    for (std::size_t i : idx) {
        total *= axes_[i].size;
        if (total > (std::size_t{1} << 26)) throw ResourceCap("JointTable::marginal: marginal too large");
    }
    std::vector<double> out(total, 0.0);
    const std::size_t stride = axes_.size();
    for (std::size_t r = 0; r < probs_.size(); ++r) {
        std::size_t key = 0;
        for (std::size_t i : idx) key = key * axes_[i].size + symbols_[r * stride + i];
        out[key] += probs_[r];
    }
    return out;
}

std::vector<double> JointTable::dense() const {
    std::vector<std::string> all;
    for (const auto& a : axes_) all.push_back(a.name);
    return marginal(all);
}

double JointTable::entropy(std::span<const std::string> names) const {
    if (names.empty()) return 0.0;
    const auto idx = indices_of(names);
    double total = 1.0;
    for (std::size_t i : idx) total *= static_cast<double>(axes_[i].size);
    if (total <= static_cast<double>(std::size_t{1} << 22)) return plogp_sum(marginal(names));
    std::vector<std::pair<std::uint64_t, double>> keyed;
    keyed.reserve(probs_.size());
    const std::size_t stride = axes_.size();
    for (std::size_t r = 0; r < probs_.size(); ++r) {
        std::uint64_t key = 0;
        for (std::size_t i : idx) key = key * axes_[i].size + symbols_[r * stride + i];
        keyed.emplace_back(key, probs_[r]);
    }
    std::sort(keyed.begin(), keyed.end());
    double h = 0.0;
    for (std::size_t i = 0; i < keyed.size();) {
        double p = 0.0;
        std::size_t j = i;
        for (; j < keyed.size() && keyed[j].first == keyed[i].first; ++j) p += keyed[j].second;
        if (p > 0.0) h -= p * std::log2(p);
        i = j;
    }
    return h;
}

double JointTable::mutual_information(std::span<const std::string> a, std::span<const std::string> b,
                                      std::span<const std::string> given) const {
    Names ac(a.begin(), a.end()), bc(b.begin(), b.end()), abc(a.begin(), a.end()), c(given.begin(), given.end());
    ac.insert(ac.end(), c.begin(), c.end());
    bc.insert(bc.end(), c.begin(), c.end());
    abc.insert(abc.end(), b.begin(), b.end());
    abc.insert(abc.end(), c.begin(), c.end());
    return entropy(ac) + entropy(bc) - entropy(abc) - entropy(c);
}

double JointTable::chain_residual(const MarkovChain& chain) const {
    return std::abs(mutual_information(chain.a, chain.c, chain.b));
}

double H(const JointTable& t, std::initializer_list<std::string> names) {
    return t.entropy(Names(names));
}

double I(const JointTable& t, std::initializer_list<std::string> a, std::initializer_list<std::string> b,
         std::initializer_list<std::string> given) {
    return t.mutual_information(Names(a), Names(b), Names(given));
}

JointTable random_consistent_table(Model model, const AlphabetSizes& sizes, std::uint64_t seed) {
    JointTable t = build(model, sizes, seed, false);
    verify_declared(t);
    return t;
}

JointTable random_consistent_table(Structure structure, const AlphabetSizes& sizes, std::uint64_t seed) {
    switch (structure) {
        case Structure::Degraded: return random_consistent_table(Model::DegradedRx, sizes, seed);
        case Structure::ReverselyDegraded: return random_consistent_table(Model::ReverselyDegradedRx, sizes, seed);
        case Structure::NonDegraded: break;
    }
    throw InvalidParams("random_consistent_table: no discrete model for non-degraded channels");
}

JointTable deterministic_table(Model model, const AlphabetSizes& sizes, std::uint64_t seed) {
    JointTable t = build(model, sizes, seed, true);
    verify_declared(t);
    return t;
}

bool StepReport::passed() const { return violations() == 0; }

std::size_t StepReport::violations() const {
    return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const ChainStep& s) { return !s.ok; }));
}

StepReport check_converse_chain(const JointTable& table, Model chain) {
    require_model(table, chain);
    StepReport rep;
    rep.chain = chain;
    StepList s(rep);
    s.eq("sum p = 1", "normalization", table.total_probability(), 1.0);
    for (const auto& c : table.declared_chains())
        s.eq("declared " + c.describe(), "construction", table.chain_residual(c), 0.0);
    switch (chain) {
        case Model::DegradedRx: degraded_rx_steps(table, s, true); break;
        case Model::ReverselyDegradedRx: degraded_rx_steps(table, s, false); break;
        case Model::DegradedTx: degraded_tx_steps(table, s); break;
        case Model::ReverselyDegradedTx: rd_tx_steps(table, s); break;
        case Model::DegradedMessageAware: message_aware_steps(table, s, true); break;
        case Model::ReverselyDegradedMessageAware: message_aware_steps(table, s, false); break;
        case Model::DegradedMemoryless: memoryless_steps(table, s); break;
        case Model::DiscretizedGaussian: throw InvalidParams("check_converse_chain: no converse chain for this model");
    }
    return rep;
}

JointTable discretize_gaussian_case(const ChannelParams& params, const DiscretizationGrid& grid, int n) {
    params.validate();
    if (n != 1) throw InvalidParams("discretize_gaussian_case: only n = 1 is supported");
    if (grid.points < 4 || grid.points > 512) throw InvalidParams("discretize_gaussian_case: points must lie in [4, 512]");
    if (!(params.sigma_w_sq > 0.0)) throw InvalidParams("discretize_gaussian_case: sigma_w_sq must be > 0");
    const double P = grid.input_power > 0.0 ? grid.input_power : params.power_limit;
    if (!(P > 0.0)) throw InvalidParams("discretize_gaussian_case: input power must be > 0");

    // Eavesdropper noise N = Z - X written as beta * W + S.
    double beta = 1.0, s_var = params.sigma_v_sq;
    if (params.structure == Structure::ReverselyDegraded) {
        beta = params.sigma_v_sq / params.sigma_w_sq;
        s_var = params.sigma_v_sq * params.sigma_dw_sq / params.sigma_w_sq;
    } else if (params.structure == Structure::NonDegraded) {
        const double r = params.correlation;
        beta = r * std::sqrt(params.sigma_v_sq / params.sigma_w_sq);
        s_var = params.sigma_v_sq * (1.0 - r * r);
    }
    const double sw = std::sqrt(params.sigma_w_sq), sn = std::sqrt(beta * beta * params.sigma_w_sq + s_var);
    const double ss = std::sqrt(s_var);
    const std::size_t K = grid.points;
    const double xr = grid.x_span_sd * std::sqrt(P);

    std::vector<double> xs(K), px(K);
    for (std::size_t j = 0; j < K; ++j) {
        xs[j] = -xr + 2.0 * xr * (static_cast<double>(j) + 0.5) / static_cast<double>(K);
        px[j] = std::exp(-0.5 * xs[j] * xs[j] / P);
    }
    const double zsum = std::accumulate(px.begin(), px.end(), 0.0);
    for (double& v : px) v /= zsum;
    // Rescale the support so the discrete input has power exactly P.
    double pw = 0.0;
    for (std::size_t j = 0; j < K; ++j) pw += px[j] * xs[j] * xs[j];
    for (double& v : xs) v *= std::sqrt(P / pw);

    auto edges = [K](double half) {
        std::vector<double> e(K + 3);
        e.front() = -numeric::kInf;
        e.back() = numeric::kInf;
        for (std::size_t j = 0; j <= K; ++j) e[j + 1] = -half + 2.0 * half * static_cast<double>(j) / static_cast<double>(K);
        return e;
    };
    const double xmax = std::abs(xs.back());
    const auto ye = edges(xmax + grid.out_span_sd * sw);
    const auto ze = edges(xmax + grid.out_span_sd * sn);
    const std::size_t B = K + 2;

    JointTable t(Model::DiscretizedGaussian, {{"X", K}, {"Y", B}, {"Z", B}});
    using GL = boost::math::quadrature::gauss<double, 20>;
    const double wcap = 12.0 * sw;
    for (std::size_t j = 0; j < K; ++j) {
        const double x = xs[j];
        for (std::size_t a = 0; a < B; ++a) {
            const double wlo = std::max(ye[a] - x, -wcap), whi = std::min(ye[a + 1] - x, wcap);
            if (!(whi > wlo)) continue;
            const double pcell = numeric::normal_interval(wlo / sw, whi / sw);
            if (!(pcell > 1e-300)) continue;
            for (std::size_t b = 0; b < B; ++b) {
                const double nlo = ze[b] - x, nhi = ze[b + 1] - x;
                double p;
                if (ss == 0.0) {
                    p = numeric::rectangle_probability(params.sigma_w_sq, beta, 0.0, wlo, whi, nlo, nhi);
                } else {
                    p = GL::integrate(
                        [&](double w) {
                            const double m = beta * w;
                            return numeric::normal_pdf(w, params.sigma_w_sq) *
                                   numeric::normal_interval((nlo - m) / ss, (nhi - m) / ss);
                        },
                        wlo, whi);
                }
                if (p > 0.0) {
                    const std::uint16_t row[] = {static_cast<std::uint16_t>(j), static_cast<std::uint16_t>(a),
                                                 static_cast<std::uint16_t>(b)};
                    t.add(row, px[j] * p);
                }
            }
        }
    }
    t.normalize();
    return t;
}

DiscretizedSecrecy discretized_secrecy_capacity(const ChannelParams& params, std::size_t points) {
    DiscretizedSecrecy out;
    out.closed_form = no_help_secrecy_capacity(params);
    out.best = -numeric::kInf;
    for (double f : {0.25, 0.5, 0.75, 1.0}) {
        DiscretizationGrid g;
        g.points = points;
        g.input_power = f * params.power_limit;
        const JointTable t = discretize_gaussian_case(params, g);
        const double d = mi(t, {"X"}, {"Y"}) - mi(t, {"X"}, {"Z"});
        out.family.emplace_back(g.input_power, d);
        if (d > out.best) {
            out.best = d;
            out.best_power = g.input_power;
        }
    }
    out.best = std::max(out.best, 0.0);
    out.relative_error = out.closed_form > 0.0 ? std::abs(out.best - out.closed_form) / out.closed_form
                                               : std::abs(out.best);
    return out;
}

}  // namespace wiretap::oracle
