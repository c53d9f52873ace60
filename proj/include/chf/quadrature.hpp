#pragma once

#include <vector>

namespace chf {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Legendre rule on [-1, 1], 1 <= order <= 512. Nodes ascend.
QuadratureRule gauss_legendre(int order);

// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int order, double a, double b);

// Tanh-sinh (double exponential) rule on (a, b) with step h in the
// transformed variable. Nodes closer to an endpoint than 1e-42 (b - a)
// or with negligible weight are dropped; no node equals a or b. When an
// endpoint is 0 the distance to it is formed directly, so nodes can resolve
// an integrable singularity there.
QuadratureRule tanh_sinh(double a, double b, double h);

}  // namespace chf
