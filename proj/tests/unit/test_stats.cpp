#include <doctest.h>

#include <cmath>

#include "chf/asymptotics.hpp"
#include "chf/errors.hpp"
#include "chf/stats.hpp"

using namespace chf;

TEST_CASE("mean at small t is the integrated density") {
    const MomentEstimate m = numeric_mean(KernelParams(0.0, 0.0), 0.1, 1.0);
    CHECK(std::abs(m.value - 0.1 / pi) < 1e-6);
    CHECK(m.fd_step == 1e-3);
    CHECK(m.richardson_order == 4);
}

TEST_CASE("moments at t r1 = 10") {
    const KernelParams p(0.0, 0.0);
    const MomentAsymptotics a = moment_asymptotics(p, 10.0, 1.0, 2.0);
    CHECK(std::abs(numeric_mean(p, 10.0, 1.0).value - a.mean_plus) < 0.02);
    CHECK(std::abs(numeric_variance(p, 10.0, 1.0).value - a.variance) < 0.05);
    CHECK(std::abs(numeric_covariance(p, 10.0, 1.0, 2.0, CovSign::same).value - a.cov_same) < 0.05);
    CHECK(std::abs(numeric_covariance(p, 10.0, 1.0, 2.0, CovSign::opposite).value - a.cov_opposite) < 0.05);
}

TEST_CASE("moments with a root and jump singularity") {
    const KernelParams p(0.3, 0.2);
    const MomentAsymptotics a = moment_asymptotics(p, 10.0, 1.0, 2.0);
    CHECK(std::abs(numeric_mean(p, 10.0, 1.0).value - a.mean_plus) < 0.02);
    CHECK(std::abs(numeric_mean(p, 10.0, -1.0).value - a.mean_minus) < 0.02);
    CHECK(std::abs(numeric_variance(p, 10.0, 1.0).value - a.variance) < 0.05);
}

TEST_CASE("step halving is stable") {
    const KernelParams p(0.2, 0.1);
    StatsOptions coarse, fine;
    fine.fd_step = 0.5e-3;
    for (auto f : {numeric_mean, numeric_variance}) {
        const double a = f(p, 6.0, 1.0, coarse).value, b = f(p, 6.0, 1.0, fine).value;
        CHECK(std::abs(a - b) < 1e-4 * (1.0 + std::abs(a)));
    }
}

TEST_CASE("variance stays positive") {
    const KernelParams p(0.0, 0.0);
    for (double t : {1.0, 5.0, 10.0, 20.0}) CHECK(numeric_variance(p, t, 1.0).value > 0.0);
}

TEST_CASE("covariance is symmetric in its arguments") {
    const KernelParams p(0.1, 0.2);
    const double a = numeric_covariance(p, 5.0, 1.0, 2.0, CovSign::same).value;
    const double b = numeric_covariance(p, 5.0, 2.0, 1.0, CovSign::same).value;
    CHECK(a == b);
}

TEST_CASE("serial and concurrent stencils agree bit for bit") {
    const KernelParams p(0.1, 0.2);
    StatsOptions serial;
    serial.parallel = false;
    CHECK(numeric_variance(p, 4.0, 1.0, serial).value == numeric_variance(p, 4.0, 1.0).value);
}

TEST_CASE("preconditions") {
    const KernelParams p(0.0, 0.0);
    CHECK_THROWS_AS(numeric_mean(p, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(numeric_mean(p, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(numeric_covariance(p, 1.0, 1.0, 1.0, CovSign::same), DomainError);
    CHECK_THROWS_AS(numeric_covariance(p, 1.0, -1.0, 1.0, CovSign::opposite), DomainError);
    StatsOptions bad;
    bad.fd_step = 0.0;
    CHECK_THROWS_AS(numeric_mean(p, 1.0, 1.0, bad), DomainError);
}
