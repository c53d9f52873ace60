#include "chf/painleve.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chf/asymptotics.hpp"
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

double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Powers of boundary values: (x)_+^p = exp(p log(x + i0)).
cplx log_plus(double x) { return x > 0.0 ? cplx(std::log(x), 0.0) : cplx(std::log(-x), pi); }

}  // namespace

double default_t0(double alpha) { return std::min(1e-3, std::pow(1e-8, 1.0 / (2.0 * alpha + 1.0))); }

cplx LargeTPrediction::y() const { return std::exp(log_y); }
cplx LargeTPrediction::d(double alpha) const { return 2.0 * alpha * std::exp(log_d); }

CoupledPainleveV::CoupledPainleveV(const KernelParams& p, const Configuration& c) : p_(p), c_(c) {
    for (std::size_t k : c_.active_indices()) {
        r_.push_back(c_.r(k));
        rmax_ = std::max(rmax_, std::abs(c_.r(k)));
    }
}

cplx CoupledPainleveV::t_hamiltonian(double t, const cplx* u, const cplx* w) const {
    const double a = p_.alpha;
    const cplx b = p_.beta();
    const std::size_t n = r_.size();
    cplx sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = 1.0 + w[k];
        sum += 2.0 * I * t * r_[k] * u[k] * v - a * u[k] * w[k] * (w[k] + 2.0) -
               b * u[k] * w[k] * w[k] + u[k] * u[k] * v * w[k] * w[k];
    }
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            sum += u[j] * u[k] * (2.0 + w[j] + w[k]) * w[j] * w[k];
        }
    }
    return sum;
}

// y layout: u[0..n), w[0..n), log_y, log_d, lnF, ruv, action.
void CoupledPainleveV::field(double t, const std::vector<cplx>& y, std::vector<cplx>& dy) const {
    const std::size_t n = r_.size();
    const cplx* u = y.data();
    const cplx* w = y.data() + n;
    const double a = p_.alpha;
    const cplx b = p_.beta();
    cplx s1 = 0.0, s2 = 0.0, s3 = 0.0;  // sum u w, sum u w^2, sum u v w
    for (std::size_t j = 0; j < n; ++j) {
        s1 += u[j] * w[j];
        s2 += u[j] * w[j] * w[j];
        s3 += u[j] * (1.0 + w[j]) * w[j];
    }
    cplx ruv = 0.0, udw = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = 1.0 + w[k];
        const cplx itr = 2.0 * I * t * r_[k];
        dy[k] = -itr * u[k] - u[k] * s2 - 2.0 * u[k] * v * s1 + 2.0 * (a + b) * u[k] * v -
                2.0 * b * u[k];
        // v s2 + v^2 s1 - s3 written with w to avoid cancellation at small w.
        dy[n + k] = itr * v + w[k] * s2 + (2.0 * w[k] + w[k] * w[k]) * s1 - a * w[k] * (w[k] + 2.0) -
                    b * w[k] * w[k];
        ruv += itr * u[k] * v;
        udw += u[k] * dy[n + k];
    }
    const cplx d1 = a + b - s1;
    const cplx d2 = a - b - s3;
    const cplx th = t_hamiltonian(t, u, w);
    dy[2 * n] = d1 - d2;
    dy[2 * n + 1] = d1 + d2;
    dy[2 * n + 2] = th;
    dy[2 * n + 3] = ruv;
    dy[2 * n + 4] = udw - th;
}

void CoupledPainleveV::pack(const CPVState& s, std::vector<cplx>& y) const {
    const std::size_t n = r_.size();
    if (s.u.size() != n || s.w.size() != n) {
        throw DomainError("CPV state size does not match the configuration");
    }
    y.resize(2 * n + 5);
    std::copy(s.u.begin(), s.u.end(), y.begin());
    std::copy(s.w.begin(), s.w.end(), y.begin() + n);
    y[2 * n] = s.log_y;
    y[2 * n + 1] = s.log_d;
    y[2 * n + 2] = s.lnF;
    y[2 * n + 3] = s.ruv;
    y[2 * n + 4] = s.action;
}

CPVState CoupledPainleveV::unpack(double t, const std::vector<cplx>& y) const {
    const std::size_t n = r_.size();
    CPVState s;
    s.t = t;
    s.u.assign(y.begin(), y.begin() + n);
    s.w.assign(y.begin() + n, y.begin() + 2 * n);
    s.log_y = y[2 * n];
    s.log_d = y[2 * n + 1];
    s.lnF = y[2 * n + 2];
    s.ruv = y[2 * n + 3];
    s.action = y[2 * n + 4];
    return s;
}

CPVDerivative CoupledPainleveV::rhs(const CPVState& s) const {
    if (!(s.t > 0.0)) throw DomainError("cpv_rhs: t must be positive");
    std::vector<cplx> y, dy(2 * r_.size() + 5);
    pack(s, y);
    field(s.t, y, dy);
    const std::size_t n = r_.size();
    CPVDerivative d;
    for (std::size_t k = 0; k < n; ++k) {
        d.du.push_back(dy[k] / s.t);
        d.dv.push_back(dy[n + k] / s.t);
    }
    d.dlog_y = dy[2 * n] / s.t;
    d.dlog_d = dy[2 * n + 1] / s.t;
    d.dlnF = dy[2 * n + 2] / s.t;
    d.druv = dy[2 * n + 3] / s.t;
    d.daction = dy[2 * n + 4] / s.t;
    return d;
}

cplx CoupledPainleveV::hamiltonian(const CPVState& s) const {
    if (!(s.t > 0.0)) throw DomainError("hamiltonian: t must be positive");
    if (s.u.size() != r_.size() || s.w.size() != r_.size()) {
        throw DomainError("CPV state size does not match the configuration");
    }
    return t_hamiltonian(s.t, s.u.data(), s.w.data()) / s.t;
}

std::pair<cplx, cplx> CoupledPainleveV::d1d2(const CPVState& s) const {
    cplx s1 = 0.0, s3 = 0.0;
    for (std::size_t j = 0; j < r_.size(); ++j) {
        s1 += s.u[j] * s.w[j];
        s3 += s.u[j] * s.v(j) * s.w[j];
    }
    return {p_.alpha + p_.beta() - s1, p_.alpha - p_.beta() - s3};
}

CPVState CoupledPainleveV::initial_state(double t0) const {
    if (!(t0 > 0.0) || t0 > t_init_max) {
        throw DomainError("cpv_init: t0 = " + num(t0) + " outside (0, " + num(t_init_max) + "]");
    }
    for (std::size_t k = 0; k < c_.n(); ++k) {
        if (c_.gamma(k) == 1.0) {
            throw DomainError("cpv_init: gamma_" + std::to_string(k) +
                              " = 1 is outside the supported solution family");
        }
    }
    const double a = p_.alpha;
    const cplx b = p_.beta();
    const double p = 2.0 * a + 1.0;
    const cplx lg_m = log_gamma(1.0 + a - b);
    const cplx lg_p = log_gamma(1.0 + a + b);
    const cplx lg_2a = log_gamma(cplx(1.0 + 2.0 * a, 0.0));
    const cplx g = std::exp(lg_m + lg_p - 2.0 * lg_2a);
    const std::vector<cplx> ck = c_from_gamma(c_, p_);
    const std::vector<std::size_t> idx = c_.active_indices();
    const std::size_t n = idx.size();

    // u ~ u0 t^{2a} (1 + B t + (a+b) W t^2 - 2 S t^p / p),
    // w ~ A t + W t^2 + (A S / p) t^{p+1}: leading small-t data plus the
    // first corrections generated by the flow itself.
    std::vector<cplx> u0(n), A(n), B(n), W(n);
    cplx S = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rk = r_[i];
        u0[i] = sgn(rk) * ck[idx[i]] * g * std::pow(2.0 * std::abs(rk), 2.0 * a);
        A[i] = 2.0 * I * rk / p;
        B[i] = 2.0 * (a + b) * A[i] - 2.0 * I * rk;
        W[i] = (2.0 * I * rk * A[i] - (a + b) * A[i] * A[i]) / (2.0 + 2.0 * a);
        S += u0[i] * A[i];
    }
    CPVState s;
    s.t = t0;
    const double tp = std::pow(t0, p);
    cplx lnF = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s.u.push_back(u0[i] * std::pow(t0, 2.0 * a) * (1.0 + B[i] * t0 + (a + b) * W[i] * t0 * t0 + 0.5 * B[i] * B[i] * t0 * t0 -
                                                  2.0 * S * tp / p));
        s.w.push_back(A[i] * t0 + W[i] * t0 * t0 + A[i] * S / p * tp * t0);
        lnF += 2.0 * I * r_[i] * u0[i] *
               (tp / (p * p) + (B[i] + A[i]) * tp * t0 / ((p + 1.0) * (p + 1.0)) -
                2.0 * S * tp * tp / (p * (2.0 * p) * (2.0 * p)));
    }
    const double l2t = std::log(2.0 * t0);
    s.log_y = lg_m - lg_p - b * pi * I + 2.0 * b * l2t;
    s.log_d = lg_m + lg_p - 2.0 * lg_2a - a * pi * I + 2.0 * a * l2t;
    s.lnF = lnF;
    return s;
}

Trajectory CoupledPainleveV::integrate(const CPVState& state0, double t1, double tol,
                                       const std::vector<double>& stops) const {
    if (!(t1 > state0.t)) throw DomainError("cpv_integrate: t1 must exceed the start time");
    if (!(tol >= 1e-12 && tol <= 1e-4)) {
        throw DomainError("cpv_integrate: tol must lie in [1e-12, 1e-4], got " + num(tol));
    }
    // Dormand-Prince 5(4) tableau.
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    const std::size_t n = r_.size();
    const std::size_t dim = 2 * n + 5;
    Trajectory traj;
    traj.states.push_back(state0);

    std::vector<double> targets;
    for (double st : stops) {
        if (st > state0.t && st < t1) targets.push_back(st);
    }
    std::sort(targets.begin(), targets.end());
    targets.push_back(t1);

    std::vector<cplx> y, yn(dim), tmp(dim), err(dim);
    std::vector<std::vector<cplx>> k(7, std::vector<cplx>(dim));
    pack(state0, y);

    double s = std::log(state0.t);
    double t = state0.t;
    auto eval = [&](double ss, const std::vector<cplx>& yy, std::vector<cplx>& out) {
        field(std::exp(ss), yy, out);
        ++traj.evaluations;
    };
    eval(s, y, k[0]);

    double h = 1e-2;
    double err_prev = 1e-4;
    bool rejected_last = false;
    const std::size_t max_steps = 20000000;
    std::size_t steps = 0;

    for (double target : targets) {
        const double s_target = std::log(target);
        while (s < s_target) {
            if (++steps > max_steps) throw ConvergenceError("cpv_integrate: step budget exhausted");
            // Oscillation cap: dt <= 0.1 / max|r|, i.e. ds <= 0.1 / (max|r| t).
            double hmax = (rmax_ > 0.0) ? 0.1 / (rmax_ * t) : 1.0;
            hmax = std::min(hmax, 1.0);
            h = std::min(h, hmax);
            bool last = false;
            if (s + h >= s_target || s_target - (s + h) < 1e-12 * std::max(1.0, std::abs(s))) {
                h = s_target - s;
                last = true;
            }
            if (h < 1e-13 * std::max(1.0, std::abs(s))) {
                throw StepUnderflowError("cpv_integrate: step size underflow at t = " + num(t) +
                                         " (movable singularity or tolerance too tight)");
            }
            auto stage = [&](std::vector<cplx>& out, std::initializer_list<std::pair<int, double>> coeffs) {
                for (std::size_t i = 0; i < dim; ++i) {
                    cplx acc = y[i];
                    for (auto [j, c] : coeffs) acc += h * c * k[j][i];
                    out[i] = acc;
                }
            };
            stage(tmp, {{0, a21}});
            eval(s + c2 * h, tmp, k[1]);
            stage(tmp, {{0, a31}, {1, a32}});
            eval(s + c3 * h, tmp, k[2]);
            stage(tmp, {{0, a41}, {1, a42}, {2, a43}});
            eval(s + c4 * h, tmp, k[3]);
            stage(tmp, {{0, a51}, {1, a52}, {2, a53}, {3, a54}});
            eval(s + c5 * h, tmp, k[4]);
            stage(tmp, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}});
            eval(s + h, tmp, k[5]);
            stage(yn, {{0, b1}, {2, b3}, {3, b4}, {4, b5}, {5, b6}});
            const double s_new = last ? s_target : s + h;
            eval(s_new, yn, k[6]);

            double sq = 0.0;
            bool finite = true;
            for (std::size_t i = 0; i < dim; ++i) {
                const cplx e = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                                    e6 * k[5][i] + e7 * k[6][i]);
                const double mag = std::max(std::abs(y[i]), std::abs(yn[i]));
                // u, w: relative with a small floor; scalars: mixed.
                const double sc = (i < 2 * n) ? tol * mag + 1e-6 * tol : tol * (1.0 + mag);
                const double q = std::abs(e) / sc;
                sq += q * q;
                finite = finite && std::isfinite(yn[i].real()) && std::isfinite(yn[i].imag());
            }
            if (!finite) {
                throw OverflowError("cpv_integrate: non-finite state near t = " + num(t));
            }
            const double errn = std::sqrt(sq / dim);
            if (errn <= 1.0) {
                s = s_new;
                t = last ? target : std::exp(s);
                y.swap(yn);
                std::swap(k[0], k[6]);
                for (std::size_t i = 0; i < 2 * n; ++i) {
                    if (std::abs(y[i]) > 1e150) {
                        throw OverflowError("cpv_integrate: state exceeds 1e150 at t = " + num(t));
                    }
                }
                traj.states.push_back(unpack(t, y));
                const double e = std::max(errn, 1e-10);
                double fac = 0.9 * std::pow(e, -0.14) * std::pow(err_prev, 0.08);
                fac = std::clamp(fac, 0.2, 5.0);
                if (rejected_last) fac = std::min(fac, 1.0);
                err_prev = e;
                rejected_last = false;
                if (!last) h *= fac;
            } else {
                ++traj.rejected;
                rejected_last = true;
                h *= std::max(0.2, 0.9 * std::pow(errn, -0.2));
            }
        }
    }
    return traj;
}

IdentityResiduals CoupledPainleveV::verify(const Trajectory& traj) const {
    IdentityResiduals res;
    if (traj.states.empty()) return res;
    const double a = p_.alpha;
    const cplx b = p_.beta();
    const double c = 2.0 * (a * a - (b * b).real());
    auto phi = [&](const CPVState& s, cplx th) {
        return th + a * s.log_d - b * s.log_y - c * std::log(s.t);
    };
    const CPVState& s0 = traj.states.front();
    const cplx th0 = t_hamiltonian(s0.t, s0.u.data(), s0.w.data());
    const cplx phi0 = phi(s0, th0);
    for (const CPVState& s : traj.states) {
        const cplx th = t_hamiltonian(s.t, s.u.data(), s.w.data());
        res.residual_a = std::max(res.residual_a, std::abs(th - th0 - (s.ruv - s0.ruv)));
        const cplx lhs = s.lnF - s0.lnF;
        const cplx rhs = (s.action - s0.action) + (phi(s, th) - phi0);
        res.residual_b = std::max(res.residual_b, std::abs(lhs - rhs));
        res.max_imag_lnF =
            std::max(res.max_imag_lnF, std::abs(s.lnF.imag()) / (1.0 + std::abs(s.lnF.real())));
    }
    return res;
}

LargeTPrediction CoupledPainleveV::large_t(double t) const {
    if (!(t > 0.0)) throw DomainError("cpv_large_t_prediction: t must be positive");
    const std::vector<cplx> bk = b_from_gamma(c_);
    const std::vector<cplx> ck = c_from_gamma(c_, p_);
    const std::size_t m = c_.m();
    const double a = p_.alpha;
    const cplx b = p_.beta();
    const cplx bm = bk[m];
    const long mm = static_cast<long>(m);
    const double jump = (1.0 - c_.gamma_ext(mm - 1)) * (1.0 - c_.gamma_ext(mm));
    const double l2t = std::log(2.0 * t);
    LargeTPrediction out;
    cplx hsum = 0.0, bsq = 0.0;
    for (std::size_t k = 0; k <= c_.n(); ++k) bsq += bk[k] * bk[k];
    for (std::size_t k : c_.active_indices()) {
        const double rk = c_.r(k);
        const double sk = sgn(rk);
        const long kk = static_cast<long>(k);
        // sum_{j != m, k} 2 b_j ln((r_k - r_j)/(r_m - r_j))_+
        cplx prod = 0.0;
        for (std::size_t j : c_.active_indices()) {
            if (j == k) continue;
            prod += 2.0 * bk[j] * log_plus((rk - c_.r(j)) / (0.0 - c_.r(j)));
        }
        const cplx phase = sk * pi * I * (bk[k] + bm + a + b);
        const cplx expo = 2.0 * (bk[k] - bm - b);
        const cplx lu = 2.0 * log_gamma(1.0 - bk[k]) + log_gamma(1.0 + a + b + bm) -
                        log_gamma(1.0 + a - b - bm) - prod + expo * std::log(std::abs(rk)) -
                        0.5 * std::log(jump) + phase + expo * l2t - 2.0 * I * t * rk;
        out.u.push_back(sk * ck[k] * std::exp(lu));
        // sgn(r_k) (gamma_k - gamma_{k-1}) / (2 pi i c_k) in closed form.
        const cplx ratio = (k > m) ? std::exp(b * pi * I) : std::exp(-b * pi * I);
        const double jk = (1.0 - c_.gamma_ext(kk - 1)) * (1.0 - c_.gamma_ext(kk));
        const cplx lv = log_gamma(1.0 + a - b - bm) + log_gamma(1.0 + bk[k]) -
                        log_gamma(1.0 + a + b + bm) - log_gamma(1.0 - bk[k]) + prod -
                        expo * std::log(std::abs(rk)) + 0.5 * std::log(jump / jk) - phase -
                        expo * l2t + 2.0 * I * t * rk;
        out.v.push_back(ratio * std::exp(lv));
        hsum += 2.0 * I * bk[k] * rk;
    }
    out.H = hsum - (bsq + 2.0 * b * bm) / t;
    cplx ly = log_gamma(1.0 + a - b - bm) - log_gamma(1.0 + a + b + bm) - (b + bm) * pi * I +
              2.0 * (b + bm) * l2t + 0.5 * std::log(jump);
    for (std::size_t j : c_.active_indices()) ly -= 2.0 * bk[j] * log_plus(-c_.r(j));
    out.log_y = ly;
    out.log_d = log_gamma(1.0 + a - b - bm) + log_gamma(1.0 + a + b + bm) -
                2.0 * log_gamma(cplx(1.0 + 2.0 * a, 0.0)) - a * pi * I + 2.0 * a * l2t -
                0.5 * std::log(jump);
    return out;
}

CPVDerivative cpv_rhs(const CPVState& s, const KernelParams& p, const Configuration& c) {
    return CoupledPainleveV(p, c).rhs(s);
}

cplx hamiltonian(const CPVState& s, const KernelParams& p, const Configuration& c) {
    return CoupledPainleveV(p, c).hamiltonian(s);
}

CPVState cpv_init(const KernelParams& p, const Configuration& c, double t0) {
    return CoupledPainleveV(p, c).initial_state(t0);
}

Trajectory cpv_integrate(const KernelParams& p, const Configuration& c, const CPVState& state0,
                         double t1, double tol) {
    return CoupledPainleveV(p, c).integrate(state0, t1, tol);
}

IdentityResiduals verify_identities(const Trajectory& traj, const KernelParams& p,
                                    const Configuration& c) {
    return CoupledPainleveV(p, c).verify(traj);
}

LargeTPrediction cpv_large_t_prediction(const KernelParams& p, const Configuration& c, double t) {
    return CoupledPainleveV(p, c).large_t(t);
}

double cpv_lnF(const KernelParams& p, const Configuration& c, double t, double tol) {
    const CoupledPainleveV sys(p, c);
    const CPVState s0 = sys.initial_state();
    if (t <= s0.t) throw DomainError("cpv_lnF: t must exceed the start time");
    return sys.integrate(s0, t, tol).states.back().lnF.real();
}

}  // namespace chf
