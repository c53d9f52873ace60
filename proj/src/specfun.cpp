#include "chf/specfun.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "chf/errors.hpp"
#include "chf/quadrature.hpp"

namespace chf {

namespace {

constexpr double pole_tol = 1e-14;
constexpr double log_2pi = 1.8378770664093454836;

// B_2, B_4, ..., B_20
constexpr std::array<double, 10> bernoulli = {
    1.0 / 6.0,         -1.0 / 30.0,      1.0 / 42.0,        -1.0 / 30.0,
    5.0 / 66.0,        -691.0 / 2730.0,  7.0 / 6.0,         -3617.0 / 510.0,
    43867.0 / 798.0,   -174611.0 / 330.0};

std::string fmt(cplx z) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << z.real() << "," << z.imag() << ")";
    return os.str();
}

// Signed zero in the imaginary part would flip principal logs on the
// negative real axis.
cplx clean(cplx z) {
    if (z.imag() == 0.0) return {z.real(), 0.0};
    return z;
}

void check_pole(cplx z, const char* who) {
    if (is_nonpositive_integer(z)) {
        throw PoleError(std::string(who) + ": pole at z = " + fmt(z));
    }
}

// Number of unit shifts that bring Re z up to at least 10.
int shift_count(cplx z) {
    return z.real() >= 10.0 ? 0 : static_cast<int>(std::ceil(10.0 - z.real()));
}

bool is_zero_pochhammer_base(cplx a) { return is_nonpositive_integer(a); }

}  // namespace

bool is_nonpositive_integer(cplx z) {
    if (std::abs(z.imag()) > pole_tol) return false;
    const double re = z.real();
    if (re > pole_tol) return false;
    return std::abs(re - std::round(re)) <= pole_tol;
}

cplx log_gamma(cplx z) {
    check_pole(z, "log_gamma");
    z = clean(z);
    cplx acc = 0.0;
    const int shift = shift_count(z);
    for (int k = 0; k < shift; ++k) acc += std::log(z + static_cast<double>(k));
    const cplx w = z + static_cast<double>(shift);
    const cplx iw = 1.0 / w;
    const cplx iw2 = iw * iw;
    cplx series = 0.0;
    cplx p = iw;
    for (std::size_t k = 0; k < bernoulli.size(); ++k) {
        const double n = 2.0 * (k + 1);
        series += bernoulli[k] / (n * (n - 1.0)) * p;
        p *= iw2;
    }
    return (w - 0.5) * std::log(w) - w + 0.5 * log_2pi + series - acc;
}

cplx digamma(cplx z) {
    check_pole(z, "digamma");
    z = clean(z);
    cplx acc = 0.0;
    const int shift = shift_count(z);
    for (int k = 0; k < shift; ++k) acc += 1.0 / (z + static_cast<double>(k));
    const cplx w = z + static_cast<double>(shift);
    const cplx iw = 1.0 / w;
    const cplx iw2 = iw * iw;
    cplx series = 0.0;
    cplx p = iw2;
    for (std::size_t k = 0; k < bernoulli.size(); ++k) {
        const double n = 2.0 * (k + 1);
        series += bernoulli[k] / n * p;
        p *= iw2;
    }
    return std::log(w) - 0.5 * iw - series - acc;
}

cplx trigamma(cplx z) {
    check_pole(z, "trigamma");
    z = clean(z);
    cplx acc = 0.0;
    const int shift = shift_count(z);
    for (int k = 0; k < shift; ++k) {
        const cplx zk = z + static_cast<double>(k);
        acc += 1.0 / (zk * zk);
    }
    const cplx w = z + static_cast<double>(shift);
    const cplx iw = 1.0 / w;
    const cplx iw2 = iw * iw;
    cplx series = 0.0;
    cplx p = iw2 * iw;
    for (std::size_t k = 0; k < bernoulli.size(); ++k) {
        series += bernoulli[k] * p;
        p *= iw2;
    }
    return iw + 0.5 * iw2 + series + acc;
}

// ---------------------------------------------------------------- Kummer

namespace {

constexpr double series_radius = 1.0;
constexpr double asymptotic_radius = 30.0;

struct ValueAndSlope {
    cplx w;
    cplx dw;
};

// Power series for 1F1 and its derivative; intended for |z| <= ~1 where
// neither suffers cancellation.
ValueAndSlope kummer_series(cplx a, cplx b, cplx z) {
    cplx term = 1.0, sum = 1.0;
    cplx dterm = a / b, dsum = a / b;  // derivative series = (a/b) 1F1(a+1,b+1,z)
    for (int k = 0; k < 500; ++k) {
        const double kk = k;
        term *= (a + kk) * z / ((b + kk) * (kk + 1.0));
        dterm *= (a + 1.0 + kk) * z / ((b + 1.0 + kk) * (kk + 1.0));
        sum += term;
        dsum += dterm;
        const bool small = std::abs(term) <= 1e-17 * std::abs(sum) &&
                           std::abs(dterm) <= 1e-17 * std::abs(dsum);
        if (small && kk > std::abs(a) + 2.0 * std::abs(z)) {
            return {sum, dsum};
        }
    }
    throw ConvergenceError("kummer_phi: power series did not converge for z = " + fmt(z));
}

// Advance (w, w') of the Kummer ODE  z w'' + (b - z) w' - a w = 0  from z0
// to z0 + zeta by its Taylor series about z0.
ValueAndSlope taylor_step(cplx a, cplx b, cplx z0, cplx zeta, ValueAndSlope s) {
    // d_n = c_n zeta^n
    cplx dm = s.w;           // d_n
    cplx dn = s.dw * zeta;   // d_{n+1}
    cplx sum = dm + dn;
    cplx dsum = dn;          // sum n d_n, divided by zeta at the end
    double scale = std::abs(sum);
    int quiet = 0;
    for (int n = 0; n < 400; ++n) {
        const double nn = n;
        const cplx next = ((nn + a) * zeta * zeta * dm - (nn + 1.0) * (nn + b - z0) * zeta * dn) /
                          (z0 * (nn + 1.0) * (nn + 2.0));
        sum += next;
        dsum += (nn + 2.0) * next;
        scale = std::max(scale, std::abs(sum));
        dm = dn;
        dn = next;
        if (std::abs(next) <= 1e-18 * scale) {
            if (++quiet >= 2) return {sum, dsum / zeta};
        } else {
            quiet = 0;
        }
    }
    throw ConvergenceError("kummer_phi: Taylor continuation stalled near z = " + fmt(z0));
}

ValueAndSlope kummer_continuation(cplx a, cplx b, cplx z) {
    const double radius = std::abs(z);
    const cplx dir = z / radius;
    double rho = series_radius;
    ValueAndSlope s = kummer_series(a, b, rho * dir);
    while (rho < radius) {
        const double h = std::min({radius - rho, 2.0, 0.5 * rho});
        s = taylor_step(a, b, rho * dir, h * dir, s);
        rho = (radius - rho <= h) ? radius : rho + h;
    }
    return s;
}

// Large-|z| expansion. Returns false when the smallest term of either
// asymptotic series is too large to meet the accuracy target.
bool kummer_asymptotic(cplx a, cplx b, cplx z, cplx& out) {
    const cplx logz = std::log(z);
    const cplx lgb = log_gamma(b);
    double err = 0.0;
    cplx total = 0.0;

    auto sum_series = [&](cplx p, cplx q, cplx x, double& last) {
        // sum_k (p)_k (q)_k / (k! x^k)
        cplx term = 1.0, sum = 1.0;
        double prev = 1.0;
        last = 0.0;
        for (int k = 0; k < 200; ++k) {
            const double kk = k;
            term *= (p + kk) * (q + kk) / ((kk + 1.0) * x);
            const double mag = std::abs(term);
            if (mag > prev) {
                last = prev;
                return sum;
            }
            sum += term;
            prev = mag;
            if (mag <= 1e-17 * std::abs(sum)) {
                last = mag;
                return sum;
            }
        }
        last = prev;
        return sum;
    };

    if (!is_zero_pochhammer_base(a)) {
        double last = 0.0;
        const cplx s1 = sum_series(b - a, 1.0 - a, z, last);
        const cplx pref = std::exp(lgb - log_gamma(a) + z + (a - b) * logz);
        total += pref * s1;
        err += std::abs(pref) * last;
    }
    if (!is_zero_pochhammer_base(b - a)) {
        double last = 0.0;
        const cplx s2 = sum_series(a, 1.0 + a - b, -z, last);
        const double sgn = z.imag() >= 0.0 ? 1.0 : -1.0;
        const cplx pref =
            std::exp(lgb - log_gamma(b - a) + cplx(0.0, sgn * pi) * a - a * logz);
        total += pref * s2;
        err += std::abs(pref) * last;
    }
    out = total;
    return std::isfinite(total.real()) && std::isfinite(total.imag()) &&
           err <= 1e-13 * std::abs(total);
}

}  // namespace

cplx kummer_phi(cplx a, cplx b, cplx z) {
    if (is_nonpositive_integer(b)) {
        throw PoleError("kummer_phi: b = " + fmt(b) + " is a non-positive integer");
    }
    const double r = std::abs(z);
    if (r == 0.0) return 1.0;
    if (r <= series_radius) return kummer_series(a, b, z).w;
    if (r >= asymptotic_radius) {
        cplx value;
        if (kummer_asymptotic(a, b, z, value)) return value;
    }
    const cplx w = kummer_continuation(a, b, z).w;
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        throw ConvergenceError("kummer_phi: non-finite value at z = " + fmt(z));
    }
    return w;
}

cplx kummer_phi_prime(cplx a, cplx b, cplx z) {
    if (is_nonpositive_integer(b)) {
        throw PoleError("kummer_phi_prime: b = " + fmt(b) + " is a non-positive integer");
    }
    return a / b * kummer_phi(a + 1.0, b + 1.0, z);
}

// ---------------------------------------------------------------- Barnes G

namespace {

// Hurwitz tail sum_{k > N} k^{-s} for integer s >= 2 by Euler-Maclaurin.
double hurwitz_tail(int s, int N) {
    const double n = N;
    double total = std::pow(n, 1.0 - s) / (s - 1.0) - 0.5 * std::pow(n, -s);
    double rising = s;  // (s)_{2p-1}
    double fact = 2.0;  // (2p)!
    double npow = std::pow(n, -s - 1.0);
    for (int p = 1; p <= 8; ++p) {
        if (p > 1) {
            rising *= (s + 2.0 * p - 3.0) * (s + 2.0 * p - 2.0);
            fact *= (2.0 * p - 1.0) * (2.0 * p);
            npow /= n * n;
        }
        total += bernoulli[p - 1] / fact * rising * npow;
    }
    return total;
}

}  // namespace

cplx log_barnes_g(cplx z) {
    if (is_nonpositive_integer(1.0 + z)) {
        throw PoleError("log_barnes_g: 1+z = " + fmt(1.0 + z) + " is a pole");
    }
    z = clean(z);
    if (z == 0.0) return 0.0;
    const double r = std::abs(z);
    const int N = 32 + static_cast<int>(std::ceil(4.0 * r));
    const cplx z2 = z * z;
    cplx sum = 0.0;
    for (int k = 1; k <= N; ++k) {
        const double kk = k;
        sum += kk * std::log(1.0 + z / kk) - z + z2 / (2.0 * kk);
    }
    // sum_{k>N} [k ln(1+z/k) - z + z^2/(2k)] = sum_{j>=3} (-1)^{j+1} z^j/j * H(j-1, N)
    cplx zj = z2;
    cplx tail = 0.0;
    for (int j = 3; j < 80; ++j) {
        zj *= z;
        const cplx term = ((j % 2 == 1) ? 1.0 : -1.0) * zj / static_cast<double>(j) *
                          hurwitz_tail(j - 1, N);
        tail += term;
        if (std::abs(term) <= 1e-18 * (1.0 + std::abs(sum))) break;
    }
    return 0.5 * z * log_2pi - 0.5 * z * (z + 1.0) - 0.5 * euler_gamma * z2 + sum + tail;
}

cplx log_barnes_g_d1(cplx z) {
    if (is_nonpositive_integer(1.0 + z)) {
        throw PoleError("log_barnes_g_d1: 1+z = " + fmt(1.0 + z) + " is a pole");
    }
    return 0.5 * log_2pi - 0.5 - z + z * digamma(1.0 + z);
}

cplx log_barnes_g_d2(cplx z) {
    if (is_nonpositive_integer(1.0 + z)) {
        throw PoleError("log_barnes_g_d2: 1+z = " + fmt(1.0 + z) + " is a pole");
    }
    return -1.0 + digamma(1.0 + z) + z * trigamma(1.0 + z);
}

cplx log_barnes_g_integral(cplx z) {
    if (is_nonpositive_integer(1.0 + z)) {
        throw PoleError("log_barnes_g_integral: 1+z = " + fmt(1.0 + z) + " is a pole");
    }
    if (!(z.real() > -1.0)) {
        // the segment 1 + u z would pass the branch cut of ln Gamma
        throw DomainError("log_barnes_g_integral: needs Re z > -1, got " + fmt(z));
    }
    z = clean(z);
    if (z == 0.0) return 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(z))));
    const QuadratureRule rule = gauss_legendre(40, 0.0, 1.0);
    cplx integral = 0.0;
    for (int p = 0; p < pieces; ++p) {
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double u = (p + rule.nodes[i]) / pieces;
            integral += rule.weights[i] / pieces * log_gamma(1.0 + u * z);
        }
    }
    integral *= z;
    return 0.5 * z * log_2pi - 0.5 * z * (z + 1.0) + z * log_gamma(1.0 + z) - integral;
}

}  // namespace chf
