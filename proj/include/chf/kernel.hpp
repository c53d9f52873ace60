#pragma once

#include <cstddef>
#include <vector>

#include "chf/specfun.hpp"

namespace chf {

// (alpha, beta) with beta = i * beta_im. Requires alpha > -1/2.
struct KernelParams {
    double alpha = 0.0;
    double beta_im = 0.0;

    KernelParams() = default;
    KernelParams(double alpha, double beta_im);

    cplx beta() const { return {0.0, beta_im}; }
    // Gamma(1+a+b) Gamma(1+a-b) / Gamma(1+2a)^2, real and positive.
    double gamma_ratio() const;
};

// Endpoints r_0 < ... < r_n with exactly one r_m = 0, weights gamma_k on
// (r_k t, r_{k+1} t), and the scale t >= 0.
//
// Weights are only required to be finite here; determinants are also
// evaluated at weights outside [0, 1] by finite-difference probes.
class Configuration {
public:
    Configuration(std::vector<double> r, std::vector<double> gamma, double t);

    std::size_t n() const { return gamma_.size(); }
    std::size_t m() const { return m_; }
    double t() const { return t_; }
    const std::vector<double>& r() const { return r_; }
    const std::vector<double>& gamma() const { return gamma_; }
    double r(std::size_t k) const { return r_[k]; }
    double gamma(std::size_t k) const { return gamma_[k]; }
    double edge(std::size_t k) const { return r_[k] * t_; }

    // gamma_{-1} = gamma_n = 0 convention.
    double gamma_ext(long k) const;

    // Indices k != m in increasing order.
    std::vector<std::size_t> active_indices() const;

    Configuration with_t(double t) const { return {r_, gamma_, t}; }
    Configuration with_gamma(std::vector<double> gamma) const { return {r_, std::move(gamma), t_}; }

    // Throws DomainError unless every weight lies in [0, 1].
    void require_unit_weights() const;

private:
    std::vector<double> r_;
    std::vector<double> gamma_;
    double t_;
    std::size_t m_ = 0;
};

// A(x) = chi_beta(x)^{1/2} |2x|^alpha e^{-ix} phi(1+alpha+beta, 1+2alpha, 2ix)
// B(x) = chi_beta(x)^{1/2} |2x|^alpha e^{ix} phi(1+alpha-beta, 1+2alpha, -2ix)
// B is evaluated on its own rather than by conjugating A.
cplx cap_A(const KernelParams& p, double x);
cplx cap_B(const KernelParams& p, double x);

// A = P g and B = P h with the real amplitude P = chi^{1/2} |2x|^alpha,
// together with g' and h'.
struct KernelFactors {
    double x = 0.0;
    double amp = 0.0;
    cplx g, dg, h, dh;
};
KernelFactors kernel_factors(const KernelParams& p, double x);

// Confluent hypergeometric kernel, evaluated in complex arithmetic and
// returned as a real number after checking the imaginary residue.
double chf_kernel(const KernelParams& p, double x, double y);
double chf_kernel_diagonal(const KernelParams& p, double x);

// Kernel entries between nodes whose factors are precomputed; used when
// assembling Nystrom matrices. Same arithmetic as chf_kernel. Nodes must be
// nonzero.
class KernelTable {
public:
    KernelTable(const KernelParams& p, const std::vector<double>& nodes);
    std::size_t size() const { return f_.size(); }
    const KernelFactors& factors(std::size_t i) const { return f_[i]; }

    // Real kernel value with the realness check.
    double operator()(std::size_t i, std::size_t j) const;
    // Unreduced complex value; `allowance` receives the roundoff allowance
    // for its imaginary part.
    cplx entry(std::size_t i, std::size_t j) const;
    cplx entry(std::size_t i, std::size_t j, double& allowance) const;

private:
    KernelParams p_;
    double ratio_;
    std::vector<KernelFactors> f_;
};

// Near-diagonal threshold. Below it the amplitudes |2x|^alpha |2y|^alpha
// are kept exact and the remaining analytic difference quotient is taken
// on the diagonal at the midpoint.
double near_diagonal_threshold(double x);

double sigma_step(const Configuration& c, double x);

double sine_kernel(double x, double y);
double bessel_kernel(double alpha, double x, double y);

// Bessel J_nu(x) for real x > 0 and nu > -1.
double bessel_j(double nu, double x);

}  // namespace chf
