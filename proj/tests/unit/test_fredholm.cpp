#include <doctest.h>

#include <cmath>
#include <map>

#include "chf/errors.hpp"
#include "chf/fredholm.hpp"
#include "oracles/frozen.hpp"

using namespace chf;

TEST_CASE("log_det against high-precision determinants") {
    for (const auto& row : oracle::dets) {
        const KernelParams p(row.alpha, row.beta_im);
        const Configuration c({0.0, 1.0}, {row.gamma}, row.hi);
        CAPTURE(row.alpha);
        CAPTURE(row.hi);
        CHECK(std::abs(log_det(p, c) - row.value) < 1e-12);
    }
}

TEST_CASE("trivial determinants") {
    const KernelParams p(0.3, 0.2);
    CHECK(log_det(p, Configuration({-1.0, 0.0, 1.0}, {0.0, 0.0}, 5.0)) == 0.0);
    CHECK(log_det(p, Configuration({-1.0, 0.0, 1.0}, {0.4, 0.6}, 0.0)) == 0.0);
}

TEST_CASE("small-t sine determinant follows the first trace") {
    const KernelParams p(0.0, 0.0);
    const double v = log_det(p, Configuration({0.0, 1.0}, {0.5}, 0.01));
    CHECK(std::abs(v - (-0.5 * 0.01 / pi)) < 2e-6);
}

TEST_CASE("log_det is stable in the panel order") {
    const KernelParams p(-0.25, 0.4);
    const Configuration c({-1.0, 0.0, 1.0, 2.0}, {0.3, 0.6, 0.3}, 6.0);
    const double a = log_det(p, c, default_grid(p, c, 32));
    const double b = log_det(p, c, default_grid(p, c, 64));
    CHECK(std::abs(a - b) < 1e-12);
}

TEST_CASE("negative weights are allowed") {
    const KernelParams p(0.0, 0.0);
    const double v = log_det(p, Configuration({0.0, 1.0}, {-0.5}, 2.0));
    CHECK(v > 0.0);
    CHECK(std::isfinite(v));
}

TEST_CASE("origin power and grading levels") {
    CHECK(origin_power(0.0) == 1);
    CHECK(origin_power(0.5) == 1);
    CHECK(origin_power(0.25) == 2);
    CHECK(origin_power(-0.25) == 2);
    CHECK(origin_power(0.3) == 5);
    CHECK(default_grading_levels(0.0) == 0);
    CHECK(default_grading_levels(0.25) == 2);
    CHECK(default_grading_levels(-0.25) == 2);
}

TEST_CASE("grid covers each interval") {
    for (double a : {-0.25, 0.0, 0.3, 1.0}) {
        const KernelParams p(a, 0.0);
        const Configuration c({-2.0, -0.5, 0.0, 3.0}, {0.3, 0.6, 0.2}, 7.0);
        const QuadratureGrid g = default_grid(p, c, 24);
        std::map<std::size_t, double> len;
        for (const auto& panel : g.panels) {
            CHECK(panel.b - panel.a <= 8.0 + 1e-12);
            for (double w : panel.weights) len[panel.interval] += w;
            for (double x : panel.nodes) {
                CHECK(x > panel.a);
                CHECK(x < panel.b);
            }
        }
        for (std::size_t k = 0; k < 3; ++k) {
            CAPTURE(a);
            CHECK(len[k] == doctest::Approx(c.edge(k + 1) - c.edge(k)).epsilon(1e-13));
        }
        CHECK(g.total_order == static_cast<int>(g.nodes().size()));
    }
    CHECK_THROWS_AS(build_grid(Configuration({0.0, 1.0}, {0.5}, 1.0), 3, 0, {}), DomainError);
}

TEST_CASE("origin panel integrates the root singularity") {
    const double a = -0.25;
    GridOptions o;
    o.alpha = a;
    const QuadratureGrid g = build_grid(Configuration({0.0, 1.0}, {1.0}, 1.0), 20, 2, o);
    double s = 0.0;
    for (const auto& panel : g.panels) {
        for (std::size_t i = 0; i < panel.nodes.size(); ++i) s += panel.weights[i] * std::pow(panel.nodes[i], 2.0 * a);
    }
    CHECK(std::abs(s - 1.0 / (2.0 * a + 1.0)) < 1e-13);
}

TEST_CASE("series oracle") {
    const KernelParams p(0.0, 0.0);
    const Configuration c({0.0, 1.0}, {0.3}, 0.2);
    const SeriesOracleResult s = log_det_series_oracle(p, c, 4);
    CHECK(s.truncation_bound < 1e-9);
    CHECK(std::abs(s.value - log_det(p, c)) <= s.truncation_bound);
    CHECK_THROWS_AS(log_det_series_oracle(p, c, 0), DomainError);
    CHECK_THROWS_AS(log_det_series_oracle(p, c, 9), DomainError);
    CHECK_THROWS_AS(log_det_series_oracle(p, Configuration({0.0, 1.0}, {1.0}, 10.0), 4), RegimeError);
    CHECK_THROWS_AS(log_det_series_oracle(p, Configuration({0.0, 1.0}, {0.5}, 0.3), 4, 1e-9), RegimeError);
}

TEST_CASE("series oracle with a signed weight") {
    const KernelParams p(-0.25, 0.4);
    const Configuration c({-1.0, 0.0, 1.0}, {-0.3, 0.6}, 0.3);
    const SeriesOracleResult s = log_det_series_oracle(p, c, 8);
    CHECK(std::abs(s.value - log_det(p, c)) <= s.truncation_bound);
}

TEST_CASE("near-singular determinant is reported") {
    const KernelParams p(0.0, 0.0);
    CHECK_THROWS_AS(log_det(p, Configuration({0.0, 1.0}, {1.0}, 80.0)), SingularMatrixError);
}
