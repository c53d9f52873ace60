#include "chf/kernel.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "chf/errors.hpp"

namespace chf {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

// chi_beta(x)^{1/2}: e^{-beta pi i/2} for x >= 0, e^{beta pi i/2} for x < 0.
// With beta = i b this is real.
double chi_half(const KernelParams& p, double x) {
    const double s = (x < 0.0) ? -1.0 : 1.0;
    return std::exp(s * 0.5 * pi * p.beta_im);
}

double amplitude(const KernelParams& p, double x) {
    if (x == 0.0) {
        if (p.alpha < 0.0) throw DomainError("kernel: x = 0 with alpha < 0");
        if (p.alpha > 0.0) return 0.0;
    }
    return chi_half(p, x) * std::pow(std::abs(2.0 * x), p.alpha);
}

void check_real(cplx k, double allowance, const char* who) {
    if (!(std::abs(k.imag()) <= 1e-10 * (1.0 + std::abs(k.real())) + allowance)) {
        throw RealnessError(std::string(who) + ": imaginary residue " + num(k.imag()) +
                            " for real part " + num(k.real()));
    }
}

struct Analytic {
    cplx g, dg, h, dh;
};

// g(x) = e^{-ix} phi(a, b, 2ix), h(x) = e^{ix} phi(abar, b, -2ix) and their
// derivatives; A = P g and B = P h.
Analytic analytic_part(const KernelParams& p, double x) {
    const cplx a(1.0 + p.alpha, p.beta_im);
    const cplx abar(1.0 + p.alpha, -p.beta_im);
    const cplx b(1.0 + 2.0 * p.alpha, 0.0);
    const cplx ex = std::polar(1.0, -x);
    const cplx z(0.0, 2.0 * x);
    const cplx i(0.0, 1.0);
    Analytic f;
    f.g = ex * kummer_phi(a, b, z);
    f.dg = -i * f.g + 2.0 * i * ex * kummer_phi_prime(a, b, z);
    f.h = std::conj(ex) * kummer_phi(abar, b, -z);
    f.dh = i * f.h - 2.0 * i * std::conj(ex) * kummer_phi_prime(abar, b, -z);
    return f;
}

cplx prefactor(double ratio) { return ratio / cplx(0.0, 2.0 * pi); }

// Off-diagonal value from the factors at two distinct points, x < y.
cplx pair_complex(double ratio, const KernelFactors& fx, const KernelFactors& fy,
                  double& allowance) {
    const cplx pref = prefactor(ratio);
    const cplx t1 = fx.g * fy.h;
    const cplx t2 = fy.g * fx.h;
    const double scale = fx.amp * fy.amp / (fx.x - fy.x);
    // Roundoff in the two independently evaluated phi values survives the
    // division by x - y; allow for it on top of the fixed tolerance.
    allowance = 1e-12 * std::abs(pref) * std::abs(scale) * (std::abs(t1) + std::abs(t2));
    return pref * scale * (t1 - t2);
}

// |x - y| below threshold: the amplitudes stay exact and only the analytic
// quotient (g(x)h(y) - g(y)h(x))/(x - y) is replaced by its value on the
// diagonal at the midpoint.
cplx near_complex(const KernelParams& p, double ratio, double ax, double ay, double mid,
                  double& allowance) {
    const Analytic f = analytic_part(p, mid);
    const cplx pref = prefactor(ratio);
    const cplx t1 = f.dg * f.h;
    const cplx t2 = f.g * f.dh;
    const double scale = ax * ay;
    allowance = 1e-12 * std::abs(pref) * scale * (std::abs(t1) + std::abs(t2));
    return pref * scale * (t1 - t2);
}

cplx diagonal_complex(double ratio, const KernelFactors& f, double& allowance) {
    const cplx pref = prefactor(ratio);
    const cplx t1 = f.dg * f.h;
    const cplx t2 = f.g * f.dh;
    const double a2 = f.amp * f.amp;
    allowance = 1e-12 * std::abs(pref) * a2 * (std::abs(t1) + std::abs(t2));
    return pref * a2 * (t1 - t2);
}

}  // namespace

KernelParams::KernelParams(double alpha_, double beta_im_) : alpha(alpha_), beta_im(beta_im_) {
    if (!(alpha > -0.5) || !std::isfinite(alpha)) {
        throw DomainError("kernel params: alpha must exceed -1/2, got " + num(alpha));
    }
    if (!std::isfinite(beta_im)) throw DomainError("kernel params: beta_im must be finite");
}

double KernelParams::gamma_ratio() const {
    const cplx b = beta();
    const cplx lg = log_gamma(1.0 + alpha + b) + log_gamma(1.0 + alpha - b) -
                    2.0 * log_gamma(cplx(1.0 + 2.0 * alpha, 0.0));
    return std::exp(lg.real());
}

Configuration::Configuration(std::vector<double> r, std::vector<double> gamma, double t)
    : r_(std::move(r)), gamma_(std::move(gamma)), t_(t) {
    if (r_.size() < 2) throw DomainError("configuration: need at least two endpoints r");
    if (gamma_.size() + 1 != r_.size()) {
        throw DomainError("configuration: need one gamma per interval (" +
                          std::to_string(r_.size() - 1) + "), got " +
                          std::to_string(gamma_.size()));
    }
    std::size_t zeros = 0;
    for (std::size_t k = 0; k < r_.size(); ++k) {
        if (!std::isfinite(r_[k])) throw DomainError("configuration: r must be finite");
        if (k > 0 && !(r_[k] > r_[k - 1])) {
            throw DomainError("configuration: r must be strictly increasing (r_" +
                              std::to_string(k - 1) + " = " + num(r_[k - 1]) + ", r_" +
                              std::to_string(k) + " = " + num(r_[k]) + ")");
        }
        if (r_[k] == 0.0) {
            ++zeros;
            m_ = k;
        }
    }
    if (zeros != 1) {
        throw DomainError("configuration: exactly one endpoint must satisfy r_m = 0");
    }
    for (double g : gamma_) {
        if (!std::isfinite(g)) throw DomainError("configuration: gamma must be finite");
    }
    if (!(t_ >= 0.0) || !std::isfinite(t_)) {
        throw DomainError("configuration: t must be finite and non-negative");
    }
}

double Configuration::gamma_ext(long k) const {
    if (k < 0 || k >= static_cast<long>(gamma_.size())) return 0.0;
    return gamma_[static_cast<std::size_t>(k)];
}

std::vector<std::size_t> Configuration::active_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < r_.size(); ++k) {
        if (k != m_) out.push_back(k);
    }
    return out;
}

void Configuration::require_unit_weights() const {
    for (std::size_t k = 0; k < gamma_.size(); ++k) {
        if (!(gamma_[k] >= 0.0 && gamma_[k] <= 1.0)) {
            throw DomainError("configuration: gamma_" + std::to_string(k) + " = " +
                              num(gamma_[k]) + " lies outside [0, 1]");
        }
    }
}

KernelFactors kernel_factors(const KernelParams& p, double x) {
    KernelFactors f;
    f.x = x;
    f.amp = amplitude(p, x);
    const Analytic a = analytic_part(p, x);
    f.g = a.g;
    f.dg = a.dg;
    f.h = a.h;
    f.dh = a.dh;
    return f;
}

cplx cap_A(const KernelParams& p, double x) {
    const double amp = amplitude(p, x);
    if (amp == 0.0) return 0.0;
    const cplx a(1.0 + p.alpha, p.beta_im);
    return amp * std::polar(1.0, -x) * kummer_phi(a, 1.0 + 2.0 * p.alpha, cplx(0.0, 2.0 * x));
}

cplx cap_B(const KernelParams& p, double x) {
    const double amp = amplitude(p, x);
    if (amp == 0.0) return 0.0;
    const cplx a(1.0 + p.alpha, -p.beta_im);
    return amp * std::polar(1.0, x) * kummer_phi(a, 1.0 + 2.0 * p.alpha, cplx(0.0, -2.0 * x));
}

double near_diagonal_threshold(double x) { return 1e-6 * (1.0 + std::abs(x)); }

double chf_kernel_diagonal(const KernelParams& p, double x) {
    if (x == 0.0 && p.alpha <= 0.0) {
        throw DomainError("chf_kernel_diagonal: x = 0 requires alpha > 0");
    }
    if (x == 0.0) return 0.0;
    double allowance = 0.0;
    const cplx k = diagonal_complex(p.gamma_ratio(), kernel_factors(p, x), allowance);
    check_real(k, allowance, "chf_kernel_diagonal");
    return k.real();
}

double chf_kernel(const KernelParams& p, double x, double y) {
    if (x == y) throw DomainError("chf_kernel: x = y; use chf_kernel_diagonal");
    if (p.alpha < 0.0 && (x == 0.0 || y == 0.0)) {
        throw DomainError("chf_kernel: x or y = 0 with alpha < 0");
    }
    if (x > y) std::swap(x, y);
    const KernelFactors fx = kernel_factors(p, x);
    const KernelFactors fy = kernel_factors(p, y);
    double allowance = 0.0;
    const cplx k =
        (y - x < near_diagonal_threshold(x))
            ? near_complex(p, p.gamma_ratio(), fx.amp, fy.amp, 0.5 * (x + y), allowance)
            : pair_complex(p.gamma_ratio(), fx, fy, allowance);
    check_real(k, allowance, "chf_kernel");
    return k.real();
}

KernelTable::KernelTable(const KernelParams& p, const std::vector<double>& nodes)
    : p_(p), ratio_(p.gamma_ratio()) {
    f_.reserve(nodes.size());
    for (double x : nodes) {
        if (x == 0.0) throw DomainError("KernelTable: node at x = 0");
        f_.push_back(kernel_factors(p, x));
    }
}

cplx KernelTable::entry(std::size_t i, std::size_t j, double& allowance) const {
    if (i == j) return diagonal_complex(ratio_, f_[i], allowance);
    const KernelFactors* a = &f_[i];
    const KernelFactors* b = &f_[j];
    if (a->x > b->x) std::swap(a, b);
    if (b->x - a->x < near_diagonal_threshold(a->x)) {
        return near_complex(p_, ratio_, a->amp, b->amp, 0.5 * (a->x + b->x), allowance);
    }
    return pair_complex(ratio_, *a, *b, allowance);
}

cplx KernelTable::entry(std::size_t i, std::size_t j) const {
    double allowance = 0.0;
    return entry(i, j, allowance);
}

double KernelTable::operator()(std::size_t i, std::size_t j) const {
    double allowance = 0.0;
    const cplx k = entry(i, j, allowance);
    check_real(k, allowance, "chf_kernel");
    return k.real();
}

double sigma_step(const Configuration& c, double x) {
    for (std::size_t k = 0; k < c.n(); ++k) {
        if (c.edge(k) <= x && x < c.edge(k + 1)) return c.gamma(k);
    }
    return 0.0;
}

double sine_kernel(double x, double y) {
    if (x == y) throw DomainError("sine_kernel: x = y");
    const double d = x - y;
    return std::sin(d) / (pi * d);
}

double bessel_j(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_j: x must be positive");
    if (!(nu > -1.0)) throw DomainError("bessel_j: nu must exceed -1");
    if (x <= 12.0) {
        const double h = 0.5 * x;
        double term = std::pow(h, nu) / std::tgamma(nu + 1.0);
        double sum = term;
        const double q = -h * h;
        for (int k = 1; k < 300; ++k) {
            term *= q / (k * (k + nu));
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum) && k > x) break;
        }
        return sum;
    }
    // Hankel expansion.
    const double mu = 4.0 * nu * nu;
    double P = 0.0, Q = 0.0;
    double a = 1.0;  // a_k(nu) / x^k
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
        if (k > 0) {
            const double odd = 2.0 * k - 1.0;
            a *= (mu - odd * odd) / (k * 8.0 * x);
        }
        const double mag = std::abs(a);
        if (mag > prev && k > 2) break;
        prev = mag;
        const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
        if (k % 2 == 0) {
            P += sign * a;
        } else {
            Q += sign * a;
        }
        if (mag < 1e-17) break;
    }
    const double w = x - 0.5 * nu * pi - 0.25 * pi;
    return std::sqrt(2.0 / (pi * x)) * (P * std::cos(w) - Q * std::sin(w));
}

double bessel_kernel(double alpha, double x, double y) {
    if (x == y) throw DomainError("bessel_kernel: x = y");
    if (x == 0.0 || y == 0.0) throw DomainError("bessel_kernel: zero argument");
    if (!(alpha > -0.5)) throw DomainError("bessel_kernel: alpha must exceed -1/2");
    // Principal branches throughout, with sqrt(xy) read as x^{1/2} y^{1/2}:
    // that choice keeps K(-x,-y) = K(x,y). J_nu(-v) = e^{i pi nu} J_nu(v).
    auto J = [](double nu, double v) -> cplx {
        const double j = bessel_j(nu, std::abs(v));
        return v > 0.0 ? cplx(j, 0.0) : std::polar(j, pi * nu);
    };
    auto pw = [](double v, double e) { return std::pow(cplx(v, 0.0), e); };
    const double np = alpha + 0.5, nm = alpha - 0.5;
    const cplx pref = std::pow(std::abs(x) * std::abs(y), alpha) / (pw(x, alpha) * pw(y, alpha)) *
                      std::sqrt(cplx(x, 0.0)) * std::sqrt(cplx(y, 0.0)) * 0.5;
    const cplx k = pref * (J(np, x) * J(nm, y) - J(nm, x) * J(np, y)) / (x - y);
    return k.real();
}

}  // namespace chf
