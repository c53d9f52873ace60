#pragma once

#include <complex>

namespace chf {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double euler_gamma = 0.57721566490153286061;

// True when z lies within 1e-14 of 0, -1, -2, ...
bool is_nonpositive_integer(cplx z);

// Principal branch of ln Gamma(z).
cplx log_gamma(cplx z);
cplx digamma(cplx z);
cplx trigamma(cplx z);

// Kummer's function 1F1(a; b; z).
//
// |z| <= 1 uses the power series directly. Larger arguments are reached by
// Taylor continuation of the Kummer ODE along the ray from z/|z|, which
// avoids the cancellation the plain series suffers on the imaginary axis.
// For |z| >= 30 the large-argument expansion is tried first and the
// continuation is the fallback when it cannot reach 1e-13.
cplx kummer_phi(cplx a, cplx b, cplx z);
cplx kummer_phi_prime(cplx a, cplx b, cplx z);

// ln G(1+z) for the Barnes G-function, and its first two z-derivatives.
cplx log_barnes_g(cplx z);
cplx log_barnes_g_d1(cplx z);
cplx log_barnes_g_d2(cplx z);

// ln G(1+z) from the integral representation
//   (z/2) ln 2pi - z(z+1)/2 + z lnGamma(1+z) - int_0^z lnGamma(1+x) dx,
// with the integral taken along the straight segment by Gauss-Legendre.
// Slower than log_barnes_g; kept as an independent cross-check.
cplx log_barnes_g_integral(cplx z);

}  // namespace chf
