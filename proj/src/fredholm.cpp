#include "chf/fredholm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "chf/errors.hpp"

namespace chf {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void append_panel(QuadratureGrid& grid, std::size_t interval, double a, double b,
                  const QuadratureRule& ref) {
    Panel p;
    p.a = a;
    p.b = b;
    p.interval = interval;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (std::size_t i = 0; i < ref.nodes.size(); ++i) {
        p.nodes.push_back(mid + half * ref.nodes[i]);
        p.weights.push_back(half * ref.weights[i]);
    }
    grid.panels.push_back(std::move(p));
}

// Panel (0, h) or (-h, 0) with nodes h u^q.
void append_origin_panel(QuadratureGrid& grid, std::size_t interval, double h, bool negative,
                         int q, const QuadratureRule& ref) {
    Panel p;
    p.a = negative ? -h : 0.0;
    p.b = negative ? 0.0 : h;
    p.interval = interval;
    const std::size_t n = ref.nodes.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double u = 0.5 * (1.0 + ref.nodes[i]);
        const double wu = 0.5 * ref.weights[i];
        const double x = h * std::pow(u, q);
        const double w = h * q * std::pow(u, q - 1) * wu;
        p.nodes.push_back(negative ? -x : x);
        p.weights.push_back(w);
    }
    if (negative) {
        std::reverse(p.nodes.begin(), p.nodes.end());
        std::reverse(p.weights.begin(), p.weights.end());
    }
    grid.panels.push_back(std::move(p));
}

// Split (a, b) into equal panels no longer than max_len.
void append_split(QuadratureGrid& grid, std::size_t interval, double a, double b,
                  double max_len, const QuadratureRule& ref) {
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_len - 1e-12)));
    for (int i = 0; i < pieces; ++i) {
        const double lo = (i == 0) ? a : a + (b - a) * i / pieces;
        const double hi = (i == pieces - 1) ? b : a + (b - a) * (i + 1) / pieces;
        append_panel(grid, interval, lo, hi, ref);
    }
}

}  // namespace

std::vector<double> QuadratureGrid::nodes() const {
    std::vector<double> out;
    for (const auto& p : panels) out.insert(out.end(), p.nodes.begin(), p.nodes.end());
    return out;
}

std::vector<double> QuadratureGrid::weights() const {
    std::vector<double> out;
    for (const auto& p : panels) out.insert(out.end(), p.weights.begin(), p.weights.end());
    return out;
}

std::vector<std::size_t> QuadratureGrid::intervals() const {
    std::vector<std::size_t> out;
    for (const auto& p : panels) out.insert(out.end(), p.nodes.size(), p.interval);
    return out;
}

int default_grading_levels(double alpha) {
    return std::max(0, static_cast<int>(std::ceil(6.0 * std::abs(alpha) - 1e-12)));
}

int origin_power(double alpha) {
    const double p = 2.0 * alpha + 1.0;
    for (int q = 1; q <= 8; ++q) {
        const double e = q * p;
        if (std::abs(e - std::round(e)) <= 1e-12) return q;
    }
    return static_cast<int>(std::ceil(5.0 / p));
}

QuadratureGrid build_grid(const Configuration& config, int order_per_panel, int grading_levels,
                          const GridOptions& opts) {
    if (order_per_panel < 4) {
        throw DomainError("build_grid: order_per_panel must be >= 4, got " +
                          std::to_string(order_per_panel));
    }
    if (!(opts.max_panel_length > 0.0)) throw DomainError("build_grid: max_panel_length <= 0");
    QuadratureGrid grid;
    grid.order_per_panel = order_per_panel;
    grid.grading_levels = std::max(0, grading_levels);
    grid.origin_power = origin_power(opts.alpha);
    if (config.t() == 0.0) return grid;

    const QuadratureRule ref = gauss_legendre(order_per_panel);
    const int levels = std::max(1, grading_levels);
    const std::size_t m = config.m();
    for (std::size_t k = 0; k < config.n(); ++k) {
        const double a = config.edge(k), b = config.edge(k + 1);
        const bool right_of_zero = (k == m);      // (0, r_{m+1} t)
        const bool left_of_zero = (k + 1 == m);   // (r_{m-1} t, 0)
        if (!right_of_zero && !left_of_zero) {
            append_split(grid, k, a, b, opts.max_panel_length, ref);
            continue;
        }
        const double len = b - a;
        // Breakpoints len * 4^{-j}, j = 0..levels-1, measured from 0.
        std::vector<double> cuts;
        for (int j = 0; j < levels; ++j) cuts.push_back(len * std::pow(0.25, j));
        // The mapped origin panel is capped at the panel length as well.
        const double inner = std::min(cuts.back(), opts.max_panel_length);
        if (right_of_zero) {
            append_origin_panel(grid, k, inner, false, grid.origin_power, ref);
            if (inner < cuts.back()) {
                append_split(grid, k, inner, cuts.back(), opts.max_panel_length, ref);
            }
            for (int j = levels - 1; j >= 1; --j) {
                append_split(grid, k, cuts[j], cuts[j - 1], opts.max_panel_length, ref);
            }
        } else {
            for (int j = 0; j + 1 < levels; ++j) {
                append_split(grid, k, -cuts[j], -cuts[j + 1], opts.max_panel_length, ref);
            }
            if (inner < cuts.back()) {
                append_split(grid, k, -cuts.back(), -inner, opts.max_panel_length, ref);
            }
            append_origin_panel(grid, k, inner, true, grid.origin_power, ref);
        }
    }
    for (const auto& p : grid.panels) grid.total_order += static_cast<int>(p.nodes.size());
    return grid;
}

QuadratureGrid default_grid(const KernelParams& p, const Configuration& config,
                            int order_per_panel) {
    GridOptions opts;
    opts.alpha = p.alpha;
    return build_grid(config, order_per_panel, default_grading_levels(p.alpha), opts);
}

LogDetResult log_det_detailed(const KernelParams& p, const Configuration& config,
                              const QuadratureGrid& grid) {
    LogDetResult res;
    if (config.t() == 0.0) return res;
    bool all_zero = true;
    for (double g : config.gamma()) all_zero = all_zero && (g == 0.0);
    if (all_zero) return res;

    // Nodes on zero-weight intervals contribute zero columns; drop them.
    std::vector<double> x, col;
    {
        const std::vector<double> gx = grid.nodes();
        const std::vector<double> gw = grid.weights();
        const std::vector<std::size_t> iv = grid.intervals();
        for (std::size_t j = 0; j < gx.size(); ++j) {
            const double c = gw[j] * config.gamma(iv[j]);
            if (c != 0.0) {
                x.push_back(gx[j]);
                col.push_back(c);
            }
        }
    }
    const std::size_t n = x.size();
    res.nodes = n;
    const KernelTable table(p, x);

    // Upper triangle once; the lower one reuses it so K(x_i, x_j) and
    // K(x_j, x_i) are bit-identical.
    Eigen::MatrixXcd k(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i <= j; ++i) k(i, j) = table.entry(i, j);
    }
    Eigen::MatrixXcd a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            const cplx kij = (i <= j) ? k(i, j) : k(j, i);
            a(i, j) = (i == j ? 1.0 : 0.0) - col[j] * kij;
        }
    }
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    res.rcond = lu.rcond();
    const auto& u = lu.matrixLU();
    cplx lnd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx d = u(i, i);
        if (d == 0.0 || !std::isfinite(d.real()) || !std::isfinite(d.imag())) {
            throw SingularMatrixError("log_det: zero pivot in I - M");
        }
        lnd += std::log(d);
    }
    if (!(res.rcond > 1e-15)) {
        throw SingularMatrixError("log_det: I - M numerically singular (rcond " +
                                  num(res.rcond) + ")");
    }
    if (lu.permutationP().determinant() < 0) lnd += cplx(0.0, pi);
    double im = std::remainder(lnd.imag(), 2.0 * pi);
    res.imag_residue = std::abs(im);
    if (res.imag_residue > 1e-8) {
        throw RealnessError("log_det: imaginary residue " + num(im) + " exceeds 1e-8");
    }
    res.value = lnd.real();
    return res;
}

double log_det(const KernelParams& p, const Configuration& config, const QuadratureGrid& grid) {
    return log_det_detailed(p, config, grid).value;
}

double log_det(const KernelParams& p, const Configuration& config) {
    return log_det(p, config, default_grid(p, config));
}

SeriesOracleResult log_det_series_oracle(const KernelParams& p, const Configuration& config,
                                         int terms, double tolerance, double step) {
    if (terms < 1 || terms > 8) {
        throw DomainError("log_det_series_oracle: terms must be in [1, 8], got " +
                          std::to_string(terms));
    }
    SeriesOracleResult res;
    res.terms = terms;
    bool all_zero = true;
    for (double g : config.gamma()) all_zero = all_zero && (g == 0.0);
    if (config.t() == 0.0 || all_zero) return res;

    std::vector<double> x, w, s;
    bool nonnegative = true;
    for (std::size_t k = 0; k < config.n(); ++k) {
        if (config.gamma(k) == 0.0) continue;
        nonnegative = nonnegative && config.gamma(k) > 0.0;
        const QuadratureRule r = tanh_sinh(config.edge(k), config.edge(k + 1), step);
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            x.push_back(r.nodes[i]);
            w.push_back(r.weights[i]);
            s.push_back(config.gamma(k));
        }
    }
    const std::size_t n = x.size();
    res.nodes = n;
    const KernelTable table(p, x);
    Eigen::MatrixXd m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            m(i, j) = w[j] * s[j] * ((i <= j) ? table(i, j) : table(j, i));
        }
    }
    double rho = 0.0;
    for (std::size_t i = 0; i < n; ++i) rho += std::abs(m(i, i));
    res.trace_norm = rho;
    if (!(rho < 1.0)) {
        throw RegimeError("log_det_series_oracle: trace-norm proxy " + num(rho) +
                          " >= 1, series not applicable");
    }
    Eigen::MatrixXd power = m;
    double sum = 0.0;
    for (int j = 1; j <= terms; ++j) {
        if (j > 1) power = power * m;
        sum -= power.trace() / j;
    }
    const int next = terms + 1;
    const double lead = nonnegative ? std::abs((power * m).trace()) : std::pow(rho, next);
    res.truncation_bound = lead / (next * (1.0 - rho));
    res.value = sum;
    if (res.truncation_bound > tolerance) {
        throw RegimeError("log_det_series_oracle: truncation bound " +
                          num(res.truncation_bound) + " exceeds tolerance " + num(tolerance) +
                          " at " + std::to_string(terms) + " terms");
    }
    return res;
}

}  // namespace chf
