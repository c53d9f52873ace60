#pragma once

#include <string>
#include <vector>

#include "chf/kernel.hpp"

namespace chf {

// b_k = (1/2 pi i) ln((1 - gamma_{k-1}) / (1 - gamma_k)), k = 0..n.
std::vector<cplx> b_from_gamma(const Configuration& c);
// c_k per k (n+1 entries); the entry at k = m is 0 and unused.
std::vector<cplx> c_from_gamma(const Configuration& c, const KernelParams& p);
// h_j = b_j for j > m and -b_j for j <= m.
std::vector<cplx> h_from_gamma(const Configuration& c);

struct AsymptoticTerm {
    std::string name;
    double value = 0.0;
};

struct AsymptoticReport {
    double linear_term = 0.0;
    double log_term = 0.0;
    double constant_term = 0.0;
    double total = 0.0;
    double max_imag_residue = 0.0;
    std::vector<AsymptoticTerm> breakdown;
    std::vector<std::string> warnings;
};

// Large-gap expansion of ln F up to O(1/t), term by term.
AsymptoticReport large_gap_lnF(const KernelParams& p, const Configuration& c);

// Leading small-t term of ln F, integrated from the small-t behaviour of H.
double small_t_lnF(const KernelParams& p, const Configuration& c, double t);
double small_t_lnF(const KernelParams& p, const Configuration& c);

struct MomentAsymptotics {
    double mean_plus = 0.0;      // E N(t r1), count in (0, t r1)
    double mean_minus = 0.0;     // E N(-t r1), count in (-t r1, 0)
    double variance = 0.0;       // Var N(t r1) = Var N(-t r1)
    double cov_same = 0.0;       // Cov(N(t r1), N(t r2))
    double cov_opposite = 0.0;   // Cov(N(t r1), N(-t r2))
    double theta1 = 0.0;
    double theta2 = 0.0;
};

// Leading moment asymptotics of the counting function. Requires
// r2 > r1 > 0 and t > 0.
//
//   Var N(x)            = (ln 2x - (ln G)''(1)/2) / pi^2 + theta2
//   Cov(N(x), N(y))     =  ln(2xy/|x-y|) / (2 pi^2) + theta2
//   Cov(N(x), N(-y))    = -ln(2xy/(x+y)) / (2 pi^2) - theta2
MomentAsymptotics moment_asymptotics(const KernelParams& p, double t, double r1, double r2);

// Opposite-side covariance Cov(N(x), N(-y)) for any x, y > 0.
double opposite_covariance_asymptotic(const KernelParams& p, double x, double y);

}  // namespace chf
