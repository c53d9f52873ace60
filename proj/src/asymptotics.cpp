#include "chf/asymptotics.hpp"

#include <cmath>
#include <sstream>

#include "chf/errors.hpp"

namespace chf {

namespace {

const cplx I(0.0, 1.0);

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void require_below_one(const Configuration& c) {
    for (std::size_t k = 0; k < c.n(); ++k) {
        if (!(c.gamma(k) < 1.0)) {
            throw DomainError("gamma_" + std::to_string(k) + " = " + num(c.gamma(k)) +
                              " must be < 1");
        }
    }
}

struct Collector {
    AsymptoticReport& rep;
    double sum = 0.0;

    void add(std::string name, cplx value) {
        const double residue = std::abs(value.imag());
        rep.max_imag_residue = std::max(rep.max_imag_residue, residue);
        if (residue > 1e-12 * (1.0 + std::abs(value.real()))) {
            throw RealnessError("large_gap_lnF: term " + name + " has imaginary residue " +
                                num(value.imag()));
        }
        rep.breakdown.push_back({std::move(name), value.real()});
        sum += value.real();
    }
    double take() {
        const double s = sum;
        sum = 0.0;
        return s;
    }
};

}  // namespace

std::vector<cplx> b_from_gamma(const Configuration& c) {
    require_below_one(c);
    std::vector<cplx> b(c.n() + 1);
    for (std::size_t k = 0; k <= c.n(); ++k) {
        const long kk = static_cast<long>(k);
        const double ratio = (1.0 - c.gamma_ext(kk - 1)) / (1.0 - c.gamma_ext(kk));
        b[k] = std::log(cplx(ratio, 0.0)) / (2.0 * pi * I);
    }
    return b;
}

std::vector<cplx> c_from_gamma(const Configuration& c, const KernelParams& p) {
    require_below_one(c);
    std::vector<cplx> out(c.n() + 1, 0.0);
    const cplx bpi = p.beta() * pi * I;
    const std::size_t m = c.m();
    for (std::size_t k = 0; k <= c.n(); ++k) {
        const long kk = static_cast<long>(k);
        if (k < m) {
            out[k] = (c.gamma_ext(kk - 1) - c.gamma_ext(kk)) / (2.0 * pi * I) * std::exp(bpi);
        } else if (k > m) {
            out[k] = (c.gamma_ext(kk) - c.gamma_ext(kk - 1)) / (2.0 * pi * I) * std::exp(-bpi);
        }
    }
    return out;
}

std::vector<cplx> h_from_gamma(const Configuration& c) {
    std::vector<cplx> h = b_from_gamma(c);
    for (std::size_t j = 0; j <= c.m(); ++j) h[j] = -h[j];
    return h;
}

AsymptoticReport large_gap_lnF(const KernelParams& p, const Configuration& c) {
    if (!(c.t() > 0.0)) throw DomainError("large_gap_lnF: t must be positive");
    const std::vector<cplx> b = b_from_gamma(c);
    const std::size_t m = c.m();
    const std::size_t n = c.n();
    const double t = c.t();
    const cplx beta = p.beta();
    const double alpha = p.alpha;
    AsymptoticReport rep;

    double min_gap = INFINITY;
    for (std::size_t k = 1; k <= n; ++k) min_gap = std::min(min_gap, c.r(k) - c.r(k - 1));
    if (min_gap < 0.05) {
        rep.warnings.push_back("minimum endpoint gap " + num(min_gap) +
                               " < 0.05; expansion is not uniform there");
    }

    Collector col{rep};
    for (std::size_t k = 0; k <= n; ++k) {
        if (k == m) continue;
        col.add("linear[" + std::to_string(k) + "]", 2.0 * I * b[k] * c.r(k) * t);
    }
    rep.linear_term = col.take();

    for (std::size_t k = 0; k <= n; ++k) {
        if (k == m) continue;
        col.add("log_single[" + std::to_string(k) + "]",
                (2.0 * beta * b[k] - 2.0 * b[k] * b[k]) * std::log(std::abs(2.0 * c.r(k) * t)));
    }
    for (std::size_t j = 0; j <= n; ++j) {
        if (j == m) continue;
        for (std::size_t k = j + 1; k <= n; ++k) {
            if (k == m) continue;
            const double arg = std::abs(2.0 * c.r(j) * c.r(k) * t / (c.r(k) - c.r(j)));
            col.add("log_pair[" + std::to_string(j) + "," + std::to_string(k) + "]",
                    -2.0 * b[j] * b[k] * std::log(arg));
        }
    }
    rep.log_term = col.take();

    const long mm = static_cast<long>(m);
    col.add("alpha_jump",
            cplx(-0.5 * alpha * std::log((1.0 - c.gamma_ext(mm - 1)) * (1.0 - c.gamma_ext(mm))),
                 0.0));
    const cplx bm = b[m];
    col.add("barnes_origin", log_barnes_g(alpha + beta + bm) + log_barnes_g(alpha - beta - bm) -
                                 log_barnes_g(alpha + beta) - log_barnes_g(alpha - beta));
    for (std::size_t k = 0; k <= n; ++k) {
        if (k == m) continue;
        col.add("barnes_pair[" + std::to_string(k) + "]",
                log_barnes_g(b[k]) + log_barnes_g(-b[k]));
    }
    rep.constant_term = col.take();
    rep.total = rep.linear_term + rep.log_term + rep.constant_term;
    return rep;
}

double small_t_lnF(const KernelParams& p, const Configuration& c, double t) {
    const std::vector<cplx> ck = c_from_gamma(c, p);
    const cplx beta = p.beta();
    const double alpha = p.alpha;
    const double e = 2.0 * alpha + 1.0;
    const cplx g = std::exp(log_gamma(1.0 + alpha - beta) + log_gamma(1.0 + alpha + beta) -
                            2.0 * log_gamma(cplx(1.0 + 2.0 * alpha, 0.0)));
    cplx sum = 0.0;
    for (std::size_t k = 0; k <= c.n(); ++k) {
        if (k == c.m()) continue;
        sum += ck[k] * std::pow(2.0 * std::abs(c.r(k)), e);
    }
    const cplx v = I * g * sum * std::pow(t, e) / (e * e);
    if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real()))) {
        throw RealnessError("small_t_lnF: imaginary residue " + num(v.imag()));
    }
    return v.real();
}

double small_t_lnF(const KernelParams& p, const Configuration& c) {
    return small_t_lnF(p, c, c.t());
}

namespace {

struct Thetas {
    double theta1, theta2;
};

Thetas thetas(const KernelParams& p) {
    const cplx beta = p.beta();
    const double a = p.alpha;
    const cplx t1 = (log_barnes_g_d1(a - beta) - log_barnes_g_d1(a + beta)) / (2.0 * pi * I);
    const cplx t2 = -(log_barnes_g_d2(a + beta) + log_barnes_g_d2(a - beta)) / (4.0 * pi * pi);
    return {t1.real(), t2.real()};
}

}  // namespace

double opposite_covariance_asymptotic(const KernelParams& p, double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) throw DomainError("opposite covariance: need x, y > 0");
    return -std::log(2.0 * x * y / (x + y)) / (2.0 * pi * pi) - thetas(p).theta2;
}

MomentAsymptotics moment_asymptotics(const KernelParams& p, double t, double r1, double r2) {
    if (!(t > 0.0)) throw DomainError("moment_asymptotics: t must be positive");
    if (!(r1 > 0.0)) throw DomainError("moment_asymptotics: r1 must be positive");
    if (!(r2 > r1)) throw DomainError("moment_asymptotics: r2 must exceed r1");
    const Thetas th = thetas(p);
    const double x = t * r1, y = t * r2;
    const double mu = x / pi - 0.5 * p.alpha;
    const double delta = std::log(2.0 * x);
    // beta / (i pi) is real.
    const double jump = p.beta_im / pi;
    const double g2 = log_barnes_g_d2(0.0).real();
    MomentAsymptotics out;
    out.theta1 = th.theta1;
    out.theta2 = th.theta2;
    out.mean_plus = mu + jump * delta + th.theta1;
    out.mean_minus = mu - jump * delta - th.theta1;
    out.variance = (delta - 0.5 * g2) / (pi * pi) + th.theta2;
    out.cov_same = std::log(2.0 * x * y / std::abs(x - y)) / (2.0 * pi * pi) + th.theta2;
    out.cov_opposite = opposite_covariance_asymptotic(p, x, y);
    return out;
}

}  // namespace chf
