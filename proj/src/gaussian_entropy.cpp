#include "wiretap/gaussian_entropy.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "wiretap/errors.hpp"

namespace wiretap::numeric {

namespace {

constexpr double kTailSd = 12.0;

double std_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

// x * phi(x), taken as 0 at +-inf.
double x_pdf(double x) { return std::isfinite(x) ? x * std_pdf(x) : 0.0; }

double entropy_integrand(double f) { return f > 0.0 ? -f * std::log2(f) : 0.0; }

}  // namespace

double normal_pdf(double x, double variance) {
    return std::exp(-0.5 * x * x / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_interval(double a, double b) {
    if (!(b > a)) return 0.0;
    if (a >= 0.0) return 0.5 * (std::erfc(a / std::numbers::sqrt2) - std::erfc(b / std::numbers::sqrt2));
    if (b <= 0.0) return 0.5 * (std::erfc(-b / std::numbers::sqrt2) - std::erfc(-a / std::numbers::sqrt2));
    return 1.0 - 0.5 * std::erfc(b / std::numbers::sqrt2) - 0.5 * std::erfc(-a / std::numbers::sqrt2);
}

double gaussian_entropy_bits(double variance) {
    if (!(variance > 0.0)) throw InvalidParams("gaussian_entropy_bits: variance must be > 0");
    return 0.5 * std::log2(2.0 * std::numbers::pi * std::numbers::e * variance);
}

double log2_det(const Matrix& m) {
    const std::size_t n = m.size();
    Matrix l(n, std::vector<double>(n, 0.0));
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double d = m[j][j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
        if (!(d > 0.0)) throw InvalidParams("log2_det: matrix is not positive definite");
        l[j][j] = std::sqrt(d);
        acc += std::log2(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m[i][j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
            l[i][j] = s / l[j][j];
        }
    }
    return acc;
}

double gaussian_entropy_bits(const Matrix& cov) {
    if (cov.empty()) return 0.0;
    const double dim = static_cast<double>(cov.size());
    return 0.5 * (dim * std::log2(2.0 * std::numbers::pi * std::numbers::e) + log2_det(cov));
}

Matrix sub_matrix(const Matrix& m, std::span<const int> idx) {
    Matrix out(idx.size(), std::vector<double>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i)
        for (std::size_t j = 0; j < idx.size(); ++j) out[i][j] = m.at(idx[i]).at(idx[j]);
    return out;
}

double gaussian_cmi_bits(const Matrix& cov, std::span<const int> a, std::span<const int> b,
                         std::span<const int> c) {
    auto join = [](std::span<const int> x, std::span<const int> y) {
        std::vector<int> out(x.begin(), x.end());
        out.insert(out.end(), y.begin(), y.end());
        return out;
    };
    const auto ac = join(a, c);
    const auto bc = join(b, c);
    const auto abc = join(a, bc);
    auto h = [&](const std::vector<int>& idx) { return gaussian_entropy_bits(sub_matrix(cov, idx)); };
    const double hc = c.empty() ? 0.0 : h({c.begin(), c.end()});
    return h(ac) + h(bc) - h(abc) - hc;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks, double tol) {
    if (!(b > a)) return 0.0;
    std::vector<double> pts{a};
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1],
                                                                               12, tol);
    return total;
}

CellConditionedGaussian::CellConditionedGaussian(double w_var, double beta, double s_var,
                                                 double lo, double hi)
    : w_var_(w_var), beta_(beta), s_var_(s_var), lo_(lo), hi_(hi) {
    if (!(w_var > 0.0)) throw InvalidParams("CellConditionedGaussian: w_var must be > 0");
    if (!(s_var >= 0.0)) throw InvalidParams("CellConditionedGaussian: s_var must be >= 0");
    if (s_var == 0.0 && beta == 0.0) throw InvalidParams("CellConditionedGaussian: degenerate (point mass)");
    const double sw = std::sqrt(w_var);
    cell_prob_ = normal_interval(lo / sw, hi / sw);
    if (!(cell_prob_ > 0.0)) throw InvalidParams("CellConditionedGaussian: cell has zero probability");
    n_var_ = beta * beta * w_var + s_var;
    kappa_ = beta * w_var / n_var_;
    cond_sd_ = std::sqrt(w_var * s_var / n_var_);
}

double CellConditionedGaussian::density(double n) const {
    if (s_var_ == 0.0) {
        const double w = n / beta_;
        if (w < lo_ || w > hi_) return 0.0;
        return normal_pdf(w, w_var_) / std::abs(beta_) / cell_prob_;
    }
    const double m = kappa_ * n;
    return normal_pdf(n, n_var_) * normal_interval((lo_ - m) / cond_sd_, (hi_ - m) / cond_sd_) /
           cell_prob_;
}

double CellConditionedGaussian::mean() const {
    const double sw = std::sqrt(w_var_);
    const double a = lo_ / sw, b = hi_ / sw;
    const double pa = std::isfinite(a) ? std_pdf(a) : 0.0;
    const double pb = std::isfinite(b) ? std_pdf(b) : 0.0;
    return beta_ * sw * (pa - pb) / cell_prob_;
}

double CellConditionedGaussian::variance() const {
    const double sw = std::sqrt(w_var_);
    const double a = lo_ / sw, b = hi_ / sw;
    const double pa = std::isfinite(a) ? std_pdf(a) : 0.0;
    const double pb = std::isfinite(b) ? std_pdf(b) : 0.0;
    const double ratio = (pa - pb) / cell_prob_;
    const double w_cond_var = w_var_ * (1.0 + (x_pdf(a) - x_pdf(b)) / cell_prob_ - ratio * ratio);
    return beta_ * beta_ * w_cond_var + s_var_;
}

double CellConditionedGaussian::entropy_bits() const {
    const double sw = std::sqrt(w_var_);
    const double wlo = std::max(lo_, -kTailSd * sw);
    const double whi = std::min(hi_, kTailSd * sw);
    const double e1 = beta_ * wlo, e2 = beta_ * whi;
    const double ss = std::sqrt(s_var_);
    const double a = std::min(e1, e2) - kTailSd * ss;
    const double b = std::max(e1, e2) + kTailSd * ss;
    std::vector<double> breaks{e1, e2};
    if (ss > 0.0)
        for (double k : {-3.0, -1.0, 1.0, 3.0}) {
            breaks.push_back(e1 + k * ss);
            breaks.push_back(e2 + k * ss);
        }
    return density_entropy_bits([this](double n) { return density(n); }, a, b, breaks);
}

double density_entropy_bits(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> breaks) {
    return integrate([&f](double x) { return entropy_integrand(f(x)); }, a, b, breaks, 1e-12);
}

double rectangle_probability(double w_var, double beta, double s_var, double wlo, double whi,
                             double nlo, double nhi) {
    const double sw = std::sqrt(w_var);
    if (s_var == 0.0) {
        double a = wlo, b = whi;
        if (beta > 0.0) {
            a = std::max(a, nlo / beta);
            b = std::min(b, nhi / beta);
        } else if (beta < 0.0) {
            a = std::max(a, nhi / beta);
            b = std::min(b, nlo / beta);
        } else if (!(nlo <= 0.0 && 0.0 <= nhi)) {
            return 0.0;
        }
        return normal_interval(a / sw, b / sw);
    }
    const double ss = std::sqrt(s_var);
    if (beta == 0.0) return normal_interval(wlo / sw, whi / sw) * normal_interval(nlo / ss, nhi / ss);
    const double a = std::max(wlo, -kTailSd * sw);
    const double b = std::min(whi, kTailSd * sw);
    if (!(b > a)) return 0.0;
    std::vector<double> breaks;
    for (double edge : {nlo, nhi}) {
        if (!std::isfinite(edge)) continue;
        const double w0 = edge / beta;
        const double spread = ss / std::abs(beta);
        for (double k : {-4.0, -1.0, 0.0, 1.0, 4.0}) breaks.push_back(w0 + k * spread);
    }
    auto g = [&](double w) {
        const double m = beta * w;
        return normal_pdf(w, w_var) * normal_interval((nlo - m) / ss, (nhi - m) / ss);
    };
    return integrate(g, a, b, breaks, 1e-13);
}

}  // namespace wiretap::numeric
