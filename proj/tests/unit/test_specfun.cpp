#include <doctest.h>

#include <cmath>

#include "chf/errors.hpp"
#include "chf/specfun.hpp"
#include "oracles/frozen.hpp"

using namespace chf;

namespace {
double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("log_gamma special values") {
    CHECK(std::abs(log_gamma(1.0)) < 1e-15);
    CHECK(std::abs(log_gamma(2.0)) < 1e-15);
    CHECK(std::abs(log_gamma(0.5) - 0.5 * std::log(pi)) < 4e-15);
    const cplx g = std::exp(log_gamma(cplx(1.0, 1.0)));
    CHECK(std::abs(std::norm(g) - pi / std::sinh(pi)) < 1e-14);
}

TEST_CASE("log_gamma against high-precision values") {
    for (const auto& row : oracle::log_gamma) CHECK(rel(log_gamma(row.z), row.value) < 1e-13);
}

TEST_CASE("log_gamma recurrence") {
    for (cplx z : {cplx(0.3, 0.1), cplx(4.5, -2.0), cplx(-2.5, 0.7), cplx(10.0, 20.0)}) {
        CHECK(rel(log_gamma(z + 1.0), log_gamma(z) + std::log(z)) < 1e-13);
    }
}

TEST_CASE("gamma poles") {
    CHECK_THROWS_AS(log_gamma(0.0), PoleError);
    CHECK_THROWS_AS(log_gamma(-3.0), PoleError);
    CHECK_THROWS_AS(digamma(-1.0), PoleError);
    CHECK_THROWS_AS(trigamma(cplx(-2.0, 0.0)), PoleError);
    CHECK(is_nonpositive_integer(cplx(-4.0 + 1e-15, 0.0)));
    CHECK_FALSE(is_nonpositive_integer(cplx(-4.0 + 1e-10, 0.0)));
}

TEST_CASE("digamma and trigamma") {
    CHECK(std::abs(digamma(1.0) + euler_gamma) < 1e-15);
    CHECK(std::abs(digamma(2.0) - (1.0 - euler_gamma)) < 1e-15);
    CHECK(std::abs(trigamma(1.0) - pi * pi / 6.0) < 1e-14);
    for (cplx z : {cplx(0.4, 0.2), cplx(-1.3, 0.5), cplx(7.0, -3.0)}) {
        CHECK(rel(digamma(z + 1.0), digamma(z) + 1.0 / z) < 1e-12);
        CHECK(rel(trigamma(z + 1.0), trigamma(z) - 1.0 / (z * z)) < 1e-12);
    }
}

TEST_CASE("kummer_phi elementary cases") {
    CHECK(std::abs(kummer_phi(cplx(0.3, 0.2), 1.7, 0.0) - 1.0) < 1e-16);
    const cplx z(0.0, 2.0);
    CHECK(rel(kummer_phi(1.0, 1.0, z), cplx(std::cos(2.0), std::sin(2.0))) < 1e-14);
    CHECK(rel(kummer_phi(1.0, 1.0, cplx(0.0, 45.0)), std::exp(cplx(0.0, 45.0))) < 1e-12);
    CHECK_THROWS_AS(kummer_phi(1.0, -2.0, 1.0), PoleError);
}

TEST_CASE("kummer_phi against high-precision values on the kernel arguments") {
    const double a = 0.25;
    const cplx b(0.0, 0.3);
    for (const auto& row : oracle::kummer) {
        const cplx pa = kummer_phi(1.0 + a + b, 1.0 + 2.0 * a, cplx(0.0, 2.0 * row.x));
        const cplx pb = kummer_phi(1.0 + a - b, 1.0 + 2.0 * a, cplx(0.0, -2.0 * row.x));
        CAPTURE(row.x);
        CHECK(std::abs(pa - row.phi_a) / std::abs(row.phi_a) < 1e-12);
        CHECK(std::abs(pb - row.phi_b) / std::abs(row.phi_b) < 1e-12);
    }
}

TEST_CASE("kummer_phi_prime") {
    CHECK(std::abs(kummer_phi_prime(1.0, 1.0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(kummer_phi_prime(2.0, 3.0, 0.0) - 2.0 / 3.0) < 1e-15);
    const cplx a(1.0, 0.5), z(0.0, 1.0);
    const double h = 1e-5;
    const cplx fd = (kummer_phi(a, 1.5, z + h) - kummer_phi(a, 1.5, z - h)) / (2.0 * h);
    CHECK(rel(kummer_phi_prime(a, 1.5, z), fd) < 1e-8);
}

TEST_CASE("Barnes G special values") {
    CHECK(std::abs(log_barnes_g(0.0)) < 1e-15);
    CHECK(std::abs(log_barnes_g(1.0)) < 1e-14);
    CHECK(std::abs(log_barnes_g(3.0) - std::log(2.0)) < 1e-13);
    const cplx s = log_barnes_g(cplx(0.0, 0.7)) + log_barnes_g(cplx(0.0, -0.7));
    CHECK(std::abs(s.imag()) < 1e-14);
    CHECK_THROWS_AS(log_barnes_g(-1.0), PoleError);
    CHECK_THROWS_AS(log_barnes_g(-3.0), PoleError);
}

TEST_CASE("Barnes G against high-precision values") {
    for (const auto& row : oracle::barnes) {
        CAPTURE(row.z);
        CHECK(rel(std::exp(log_barnes_g(row.z)), row.g) < 1e-13);
    }
}

TEST_CASE("Barnes G product and integral representations agree") {
    for (cplx z : {cplx(0.5, 0.0), cplx(0.25, 0.3), cplx(-0.4, 0.2), cplx(1.7, -1.2), cplx(0.0, 0.9)}) {
        CAPTURE(z);
        CHECK(rel(log_barnes_g(z), log_barnes_g_integral(z)) < 1e-12);
    }
    CHECK_THROWS_AS(log_barnes_g_integral(cplx(-1.5, 0.0)), DomainError);
}

TEST_CASE("Barnes G derivatives") {
    CHECK(std::abs(log_barnes_g_d2(0.0) - (-1.0 - euler_gamma)) < 1e-15);
    CHECK(std::abs(log_barnes_g_d1(0.0) - 0.5 * (std::log(2.0 * pi) - 1.0)) < 1e-15);
    const double h = 1e-5;
    const cplx fd = (log_barnes_g(0.5 + h) - log_barnes_g(0.5 - h)) / (2.0 * h);
    CHECK(rel(log_barnes_g_d1(0.5), fd) < 1e-8);
}
