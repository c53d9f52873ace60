#include <doctest.h>

#include <cmath>

#include "chf/asymptotics.hpp"
#include "chf/errors.hpp"
#include "chf/fredholm.hpp"
#include "chf/painleve.hpp"

using namespace chf;

namespace {
const cplx I(0.0, 1.0);
}

TEST_CASE("zero solution") {
    const KernelParams p(0.3, 0.2);
    const Configuration c({-1.0, 0.0, 1.0}, {0.0, 0.0}, 1.0);
    const CoupledPainleveV sys(p, c);
    const CPVState s0 = sys.initial_state();
    for (const cplx& u : s0.u) CHECK(u == 0.0);
    const CPVDerivative d = sys.rhs(s0);
    for (const cplx& du : d.du) CHECK(du == 0.0);
    CHECK(sys.hamiltonian(s0) == 0.0);
    const Trajectory tr = sys.integrate(s0, 6.0, 1e-9);
    CHECK(tr.states.back().lnF == 0.0);
    const IdentityResiduals r = sys.verify(tr);
    CHECK(r.residual_a == 0.0);
    CHECK(r.residual_b < 1e-12);
}

TEST_CASE("equal weights give no u at all") {
    // n = 2 with gamma_0 = gamma_1 still has the outer jumps, so only check c_k.
    const KernelParams p(0.0, 0.0);
    const Configuration c({-1.0, 0.0, 1.0}, {0.4, 0.4}, 1.0);
    const std::vector<cplx> ck = c_from_gamma(c, p);
    CHECK(std::abs(ck[0]) > 0.0);
    CHECK(std::abs(ck[2]) > 0.0);
}

TEST_CASE("sine-case initial data") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({0.0, 1.0}, {0.5}, 1.0);
    const double t0 = 1e-6;
    const CPVState s = cpv_init(p, c, t0);
    REQUIRE(s.u.size() == 1);
    CHECK(std::abs(s.u[0] - I * 0.5 / (2.0 * pi)) < 1e-6);
    CHECK(std::abs(s.v(0) - 1.0) < 1e-5);
    CHECK(std::abs(s.log_y) < 1e-12);
    CHECK(std::abs(s.lnF.real() + 0.5 * t0 / pi) < 1e-12);
}

TEST_CASE("initial lnF matches the determinant at t0") {
    const KernelParams p(0.25, 0.3);
    const Configuration c({-1.0, 0.0, 1.0}, {0.3, 0.6}, 1e-3);
    const CPVState s = cpv_init(p, c, 1e-3);
    CHECK(std::abs(s.lnF.real() - log_det(p, c)) < 1e-6);
}

TEST_CASE("init preconditions") {
    const KernelParams p(0.0, 0.0);
    CHECK_THROWS_AS(cpv_init(p, Configuration({0.0, 1.0}, {1.0}, 1.0), 1e-4), DomainError);
    CHECK_THROWS_AS(cpv_init(p, Configuration({0.0, 1.0}, {0.5}, 1.0), 0.02), DomainError);
    CHECK_THROWS_AS(cpv_init(p, Configuration({0.0, 1.0}, {0.5}, 1.0), 0.0), DomainError);
    CHECK(default_t0(0.0) == doctest::Approx(1e-8));
    CHECK(default_t0(0.5) == doctest::Approx(1e-4));
    CHECK(default_t0(3.0) == 1e-3);
}

TEST_CASE("sine case against the determinant") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({0.0, 1.0}, {0.5}, 5.0);
    CHECK(std::abs(cpv_lnF(p, c, 5.0, 1e-9) - log_det(p, c)) < 1e-6);
}

TEST_CASE("symmetric two-interval case across t") {
    const KernelParams p(0.3, 0.2);
    const Configuration c({-1.0, 0.0, 1.0}, {0.5, 0.5}, 1.0);
    const CoupledPainleveV sys(p, c);
    const std::vector<double> ts = {0.1, 1.0, 4.0, 8.0};
    const Trajectory tr = sys.integrate(sys.initial_state(), 8.0, 1e-9, ts);
    int hits = 0;
    for (const CPVState& s : tr.states) {
        for (double t : ts) {
            if (s.t == t) {
                ++hits;
                CAPTURE(t);
                CHECK(std::abs(s.lnF.real() - log_det(p, c.with_t(t))) < 1e-8);
                CHECK(std::abs(s.lnF.imag()) < 1e-6 * (1.0 + std::abs(s.lnF.real())));
            }
        }
    }
    CHECK(hits == 4);
    const IdentityResiduals r = sys.verify(tr);
    CHECK(r.residual_b < 1e-4);
}

TEST_CASE("identity residual (a) on the sine case") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({0.0, 1.0}, {0.5}, 1.0);
    const CoupledPainleveV sys(p, c);
    const IdentityResiduals r = sys.verify(sys.integrate(sys.initial_state(), 5.0, 1e-9));
    CHECK(r.residual_a < 1e-5);
    CHECK(r.max_imag_lnF < 1e-6);
}

TEST_CASE("single-interval Hamiltonian has no coupling") {
    const KernelParams p(0.2, 0.3);
    const Configuration c({0.0, 2.0}, {0.5}, 1.0);
    CPVState s;
    s.t = 1.7;
    const cplx u(0.3, -0.2), v(0.8, 0.4);
    s.u = {u};
    s.w = {v - 1.0};
    const cplx sv = -2.0 * I * s.t * 2.0;
    const cplx b = p.beta();
    const cplx hv = (-sv * u * v - p.alpha * u * (v * v - 1.0) - b * u * (v - 1.0) * (v - 1.0) +
                     u * u * v * (v - 1.0) * (v - 1.0)) / sv;
    CHECK(std::abs(hamiltonian(s, p, c) - sv * hv / s.t) < 1e-14);
}

TEST_CASE("Lax-pair scalars follow d1 and d2") {
    const KernelParams p(0.2, 0.3);
    const Configuration c({-1.0, 0.0, 1.0}, {0.4, 0.7}, 1.0);
    const CoupledPainleveV sys(p, c);
    CPVState s;
    s.t = 2.0;
    s.u = {{0.1, 0.2}, {-0.3, 0.1}};
    s.w = {{0.2, -0.1}, {0.05, 0.3}};
    const auto [d1, d2] = sys.d1d2(s);
    const CPVDerivative d = sys.rhs(s);
    CHECK(std::abs(d.dlog_y - (d1 - d2) / s.t) < 1e-15);
    CHECK(std::abs(d.dlog_d - (d1 + d2) / s.t) < 1e-15);
    CHECK(std::abs(d.dlnF - sys.hamiltonian(s)) < 1e-15);
}

TEST_CASE("integrator preconditions") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({0.0, 1.0}, {0.5}, 1.0);
    const CoupledPainleveV sys(p, c);
    const CPVState s0 = sys.initial_state();
    CHECK_THROWS_AS(sys.integrate(s0, 1.0, 1e-3), DomainError);
    CHECK_THROWS_AS(sys.integrate(s0, 1.0, 1e-13), DomainError);
    CHECK_THROWS_AS(sys.integrate(s0, s0.t, 1e-9), DomainError);
}

TEST_CASE("step cap resolves the oscillation") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({-3.0, 0.0, 2.0}, {0.5, 0.2}, 1.0);
    const Trajectory tr = CoupledPainleveV(p, c).integrate(cpv_init(p, c, 1e-4), 12.0, 1e-6);
    for (std::size_t i = 1; i < tr.states.size(); ++i) {
        const double t = tr.states[i - 1].t;
        CHECK(std::log(tr.states[i].t / t) <= 0.1 / (3.0 * t) * (1.0 + 1e-9));
    }
}

TEST_CASE("large-t prediction") {
    const KernelParams p(0.0, 0.0);
    const Configuration zero({0.0, 1.0}, {0.0}, 1.0);
    CHECK(cpv_large_t_prediction(p, zero, 20.0).H == 0.0);

    const Configuration c({0.0, 1.0}, {0.5}, 1.0);
    const CoupledPainleveV sys(p, c);
    const Trajectory tr = sys.integrate(sys.initial_state(), 22.0, 1e-10);
    double sum = 0.0;
    int n = 0;
    for (const CPVState& s : tr.states) {
        if (s.t >= 18.0) {
            sum += std::abs(s.u[0] * s.v(0));
            ++n;
        }
    }
    const LargeTPrediction pr = sys.large_t(20.0);
    const double predicted = std::abs(pr.u[0] * pr.v[0]);
    CHECK(std::abs(sum / n - predicted) < 0.05 * predicted);
    // |u| and |v| envelopes at t = 20
    const CPVState& last = tr.states.back();
    const LargeTPrediction p22 = sys.large_t(22.0);
    CHECK(std::abs(std::abs(last.u[0]) - std::abs(p22.u[0])) < 0.05 * std::abs(p22.u[0]));
    CHECK(std::abs(std::abs(last.v(0)) - std::abs(p22.v[0])) < 0.05 * std::abs(p22.v[0]));
}

TEST_CASE("flow is the Hamiltonian gradient") {
    const KernelParams p(0.35, -0.2);
    const Configuration c({-1.5, 0.0, 1.0}, {0.4, 0.7}, 1.0);
    const CoupledPainleveV sys(p, c);
    CPVState s;
    s.t = 1.3;
    s.u = {{0.21, -0.13}, {-0.08, 0.3}};
    s.w = {{-0.4, 0.25}, {0.17, -0.6}};
    const CPVDerivative d = sys.rhs(s);
    const double h = 1e-5;
    for (std::size_t k = 0; k < 2; ++k) {
        CPVState a = s, b = s;
        a.w[k] += h;
        b.w[k] -= h;
        const cplx dHdv = (sys.hamiltonian(a) - sys.hamiltonian(b)) / (2.0 * h);
        a = s;
        b = s;
        a.u[k] += h;
        b.u[k] -= h;
        const cplx dHdu = (sys.hamiltonian(a) - sys.hamiltonian(b)) / (2.0 * h);
        CHECK(std::abs(d.du[k] + dHdv) < 1e-7);
        CHECK(std::abs(d.dv[k] - dHdu) < 1e-7);
    }
}

TEST_CASE("Hamiltonian approaches its large-t limit") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({0.0, 1.0}, {0.5}, 1.0);
    const CoupledPainleveV sys(p, c);
    const Trajectory tr = sys.integrate(sys.initial_state(), 20.0, 1e-11);
    const std::vector<cplx> b = b_from_gamma(c);
    cplx lead = 0.0, sub = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        lead += 2.0 * I * b[k] * c.r(k);
        sub -= b[k] * b[k];
    }
    const cplx seen = (sys.hamiltonian(tr.states.back()) - lead) * 20.0;
    CHECK(std::abs(seen - sub) < 0.1 * std::abs(sub));
    CHECK(std::abs(sys.large_t(20.0).H - (lead + sub / 20.0)) < 1e-15);
}

TEST_CASE("identity residuals follow the tolerance") {
    const KernelParams p(0.25, 0.3);
    const Configuration c({-1.0, 0.0, 1.0}, {0.3, 0.6}, 1.0);
    const CoupledPainleveV sys(p, c);
    double prev = 0.0;
    for (double tol : {1e-7, 1e-9, 1e-11}) {
        const double ra = sys.verify(sys.integrate(sys.initial_state(), 8.0, tol)).residual_a;
        CAPTURE(tol);
        CHECK(ra < 1e3 * tol);
        if (prev > 0.0) CHECK(ra < 0.1 * prev);
        prev = ra;
    }
}
