#pragma once

#include <vector>

#include "chf/kernel.hpp"

namespace chf {

struct MomentEstimate {
    double value = 0.0;
    double fd_step = 0.0;
    int richardson_order = 0;  // order of the leading error after extrapolation
};

struct StatsOptions {
    double fd_step = 1e-3;
    int order = 48;         // Gauss-Legendre points per panel
    bool parallel = true;   // evaluate stencil points concurrently
};

// Mean and variance of X = sum_k counts[k] N(r_k t, r_{k+1} t), read off
// ln E exp(-2 pi s X) = ln F(t r, 1 - e^{-2 pi counts s}) by central
// differences in s with one Richardson level.
struct LinearStatistic {
    MomentEstimate mean;
    MomentEstimate variance;
};
LinearStatistic numeric_linear_statistic(const KernelParams& p, const std::vector<double>& r,
                                         const std::vector<int>& counts, double t,
                                         const StatsOptions& opts = {});

// E N(t r1): particles in (0, t r1) for r1 > 0, in (t r1, 0) for r1 < 0.
MomentEstimate numeric_mean(const KernelParams& p, double t, double r1,
                            const StatsOptions& opts = {});
MomentEstimate numeric_variance(const KernelParams& p, double t, double r1,
                                const StatsOptions& opts = {});

enum class CovSign { same, opposite };

// sign = same: Cov(N(t r1), N(t r2)), arguments sorted (r1 != r2, both > 0).
// sign = opposite: Cov(N(t r1), N(-t r2)) with r1, r2 > 0.
MomentEstimate numeric_covariance(const KernelParams& p, double t, double r1, double r2,
                                  CovSign sign, const StatsOptions& opts = {});

}  // namespace chf
