#pragma once

#include <cstddef>
#include <vector>

#include "chf/kernel.hpp"
#include "chf/quadrature.hpp"

namespace chf {

struct Panel {
    double a = 0.0;
    double b = 0.0;
    std::size_t interval = 0;  // index k of (r_k t, r_{k+1} t)
    std::vector<double> nodes;
    std::vector<double> weights;
};

struct QuadratureGrid {
    std::vector<Panel> panels;
    int total_order = 0;
    int order_per_panel = 0;
    int grading_levels = 0;
    int origin_power = 1;  // exponent q of the x = h u^q map on origin panels

    std::vector<double> nodes() const;
    std::vector<double> weights() const;
    std::vector<std::size_t> intervals() const;
};

struct GridOptions {
    // Panels longer than this are split evenly.
    double max_panel_length = 8.0;
    // Exponent alpha of |x|^alpha in the kernel amplitude; selects the
    // polynomial map on the innermost origin panels.
    double alpha = 0.0;
};

// Composite Gauss-Legendre grid over the intervals of `config`.
//
// The two intervals touching 0 are graded geometrically toward 0 with ratio
// 1/4 into `grading_levels` panels (one panel when grading_levels <= 1).
// On the innermost origin panel (0, h) the nodes are x = h u^q with u
// Gauss-Legendre on (0, 1), where q is chosen from opts.alpha so that the
// |x|^{2 alpha} dx measure becomes a polynomial in u.
QuadratureGrid build_grid(const Configuration& config, int order_per_panel, int grading_levels,
                          const GridOptions& opts = {});

// max(0, ceil(6 |alpha|))
int default_grading_levels(double alpha);
// Exponent q for the origin panel map.
int origin_power(double alpha);

QuadratureGrid default_grid(const KernelParams& p, const Configuration& config,
                            int order_per_panel = 48);

struct LogDetResult {
    double value = 0.0;
    double imag_residue = 0.0;  // |Im ln det| after reduction mod 2 pi
    double rcond = 1.0;         // reciprocal condition estimate of I - M
    std::size_t nodes = 0;
};

// ln det(I - M), M_ij = w_j sigma(x_j) K(x_i, x_j), via complex LU with
// partial pivoting.
LogDetResult log_det_detailed(const KernelParams& p, const Configuration& config,
                              const QuadratureGrid& grid);
double log_det(const KernelParams& p, const Configuration& config, const QuadratureGrid& grid);
double log_det(const KernelParams& p, const Configuration& config);

struct SeriesOracleResult {
    double value = 0.0;
    double truncation_bound = 0.0;
    double trace_norm = 0.0;  // proxy sum_i |M_ii|
    int terms = 0;
    std::size_t nodes = 0;
};

// ln det(I - K_sigma) = -sum_{j <= terms} Tr(K_sigma^j)/j on a tanh-sinh
// grid independent of build_grid. The bound on the omitted terms is
//   |Tr(M^{J+1})| / ((J+1)(1 - rho))  when every weight is >= 0,
//   rho^{J+1} / ((J+1)(1 - rho))      otherwise,
// with rho the trace-norm proxy. RegimeError when rho >= 1 or the bound
// exceeds `tolerance`.
SeriesOracleResult log_det_series_oracle(const KernelParams& p, const Configuration& config,
                                         int terms, double tolerance = 1.0,
                                         double step = 1.0 / 16.0);

}  // namespace chf
