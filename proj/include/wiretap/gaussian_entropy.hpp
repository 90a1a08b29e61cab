#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

// Numerical building blocks shared by leakage_lab and discrete_oracle: Gaussian
// entropies in bits, interval probabilities, and the one-dimensional densities
// that arise when a Gaussian is conditioned on a scalar-quantizer cell.
namespace wiretap::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

double normal_pdf(double x, double variance);
double normal_cdf(double x);
// P(a <= G <= b) for standard normal G; accurate in both tails. a, b may be +-inf.
double normal_interval(double a, double b);

double gaussian_entropy_bits(double variance);

using Matrix = std::vector<std::vector<double>>;

double log2_det(const Matrix& m);  // symmetric positive definite
double gaussian_entropy_bits(const Matrix& cov);
Matrix sub_matrix(const Matrix& m, std::span<const int> idx);
// I(A; B | C) for a jointly Gaussian vector with covariance cov.
double gaussian_cmi_bits(const Matrix& cov, std::span<const int> a, std::span<const int> b,
                         std::span<const int> c = {});

// Adaptive Gauss-Kronrod over [a, b], splitting at the sorted interior breakpoints.
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::span<const double> breaks = {}, double tol = 1e-11);

// N = beta * W + S with W ~ N(0, w_var), S ~ N(0, s_var) independent, conditioned
// on W in [lo, hi]. Covers every "noise seen by the eavesdropper given the help cell" law.
class CellConditionedGaussian {
public:
    CellConditionedGaussian(double w_var, double beta, double s_var, double lo, double hi);

    double cell_probability() const { return cell_prob_; }
    double density(double n) const;
    double entropy_bits() const;
    double mean() const;
    double variance() const;

private:
    double w_var_, beta_, s_var_, lo_, hi_;
    double cell_prob_;
    double n_var_, kappa_, cond_sd_;
};

// P(W in [wlo, whi], beta * W + S in [nlo, nhi]).
double rectangle_probability(double w_var, double beta, double s_var, double wlo, double whi,
                             double nlo, double nhi);

// Entropy (bits) of an arbitrary 1-D density over [a, b] by quadrature.
double density_entropy_bits(const std::function<double(double)>& f, double a, double b,
                            std::span<const double> breaks = {});

}  // namespace wiretap::numeric
