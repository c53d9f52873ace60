#include "chf/quadrature.hpp"

#include <cmath>

#include "chf/errors.hpp"
#include "chf/specfun.hpp"

namespace chf {

QuadratureRule gauss_legendre(int order) {
    if (order < 1 || order > 512) {
        throw DomainError("gauss_legendre: order must be in [1, 512], got " +
                          std::to_string(order));
    }
    const int n = order;
    QuadratureRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Tricomi initial guess for the i-th largest root.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        bool converged = false;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            double pn = (n == 1) ? x : p1;
            double pm = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pm) / (x * x - 1.0);
            double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16 * (1.0 + std::abs(x))) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            throw ConvergenceError("gauss_legendre: Newton iteration failed at order " +
                                   std::to_string(n));
        }
        // Derivative at the converged root.
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        double pn = (n == 1) ? x : p1;
        double pm = (n == 1) ? 1.0 : p0;
        dp = n * (x * pn - pm) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        if (n == 1) {
            x = 0.0;
            w = 2.0;
        }
        rule.nodes[n - 1 - i] = x;
        rule.nodes[i] = -x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

QuadratureRule gauss_legendre(int order, double a, double b) {
    QuadratureRule rule = gauss_legendre(order);
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        rule.nodes[i] = mid + half * rule.nodes[i];
        rule.weights[i] *= half;
    }
    return rule;
}

QuadratureRule tanh_sinh(double a, double b, double h) {
    if (!(b > a) || !(h > 0.0)) throw DomainError("tanh_sinh: need a < b and h > 0");
    QuadratureRule rule;
    const double len = b - a;
    const double half = 0.5 * len;
    auto add = [&](double tau) {
        const double u = 0.5 * pi * std::sinh(tau);
        const double cu = std::cosh(u);
        // Distance from the nearer endpoint: len / (1 + e^{2|u|}).
        const double dist = len / (1.0 + std::exp(2.0 * std::abs(u)));
        const double w = half * h * 0.5 * pi * std::cosh(tau) / (cu * cu);
        if (dist < 1e-42 * len || w < 1e-40 * len || !std::isfinite(w)) return false;
        double x;
        if (tau < 0) {
            x = a + dist;
            if (x == a) return false;
        } else {
            x = b - dist;
            if (x == b) return false;
        }
        rule.nodes.push_back(x);
        rule.weights.push_back(w);
        return true;
    };
    std::vector<double> left_x, left_w;
    // Negative side first, then reverse so nodes ascend.
    for (int k = 1;; ++k) {
        if (!add(-k * h)) break;
    }
    left_x.assign(rule.nodes.rbegin(), rule.nodes.rend());
    left_w.assign(rule.weights.rbegin(), rule.weights.rend());
    rule.nodes = left_x;
    rule.weights = left_w;
    add(0.0);
    for (int k = 1;; ++k) {
        if (!add(k * h)) break;
    }
    return rule;
}

}  // namespace chf
