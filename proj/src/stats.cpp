#include "chf/stats.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "chf/errors.hpp"
#include "chf/fredholm.hpp"

namespace chf {

namespace {

struct Profile {
    KernelParams p;
    std::vector<double> r;
    std::vector<int> counts;
    double t;
    int order;

    double lnF(double s) const {
        if (s == 0.0) return 0.0;
        std::vector<double> g;
        for (int c : counts) g.push_back(-std::expm1(-2.0 * pi * c * s));
        const Configuration cfg(r, g, t);
        return log_det(p, cfg, default_grid(p, cfg, order));
    }
};

// f(+-h), f(+-h/2) in that order.
std::vector<double> stencil(const Profile& prof, double h, bool parallel) {
    const double pts[4] = {h, -h, 0.5 * h, -0.5 * h};
    std::vector<double> out(4);
    if (parallel) {
        std::vector<std::future<double>> fs;
        for (double s : pts) fs.push_back(std::async(std::launch::async, [&prof, s] { return prof.lnF(s); }));
        for (int i = 0; i < 4; ++i) out[i] = fs[i].get();
    } else {
        for (int i = 0; i < 4; ++i) out[i] = prof.lnF(pts[i]);
    }
    return out;
}

struct Derivs {
    double d1, d2;
};

Derivs derivatives(const Profile& prof, double h, bool parallel) {
    const std::vector<double> f = stencil(prof, h, parallel);
    const double d1h = (f[0] - f[1]) / (2.0 * h);
    const double d1q = (f[2] - f[3]) / h;
    const double d2h = (f[0] + f[1]) / (h * h);  // f(0) = 0
    const double d2q = (f[2] + f[3]) / (0.25 * h * h);
    return {(4.0 * d1q - d1h) / 3.0, (4.0 * d2q - d2h) / 3.0};
}

void check_step(const StatsOptions& o) {
    if (!(o.fd_step > 0.0) || o.fd_step > 0.1) {
        throw DomainError("stats: fd_step must lie in (0, 0.1]");
    }
}

MomentEstimate make(double v, const StatsOptions& o) {
    if (!std::isfinite(v)) throw ConvergenceError("stats: non-finite moment estimate");
    return {v, o.fd_step, 4};
}

}  // namespace

LinearStatistic numeric_linear_statistic(const KernelParams& p, const std::vector<double>& r,
                                         const std::vector<int>& counts, double t,
                                         const StatsOptions& opts) {
    check_step(opts);
    if (!(t > 0.0)) throw DomainError("stats: t must be positive");
    if (counts.size() + 1 != r.size()) throw DomainError("stats: counts must have r.size()-1 entries");
    // Validates r up front.
    (void)Configuration(r, std::vector<double>(counts.size(), 0.0), t);
    const Profile prof{p, r, counts, t, opts.order};
    const Derivs d = derivatives(prof, opts.fd_step, opts.parallel);
    return {make(-d.d1 / (2.0 * pi), opts), make(d.d2 / (4.0 * pi * pi), opts)};
}

MomentEstimate numeric_mean(const KernelParams& p, double t, double r1, const StatsOptions& opts) {
    if (r1 == 0.0) throw DomainError("numeric_mean: r1 must be nonzero");
    const std::vector<double> r = r1 > 0.0 ? std::vector<double>{0.0, r1} : std::vector<double>{r1, 0.0};
    return numeric_linear_statistic(p, r, {1}, t, opts).mean;
}

MomentEstimate numeric_variance(const KernelParams& p, double t, double r1,
                                const StatsOptions& opts) {
    if (r1 == 0.0) throw DomainError("numeric_variance: r1 must be nonzero");
    const std::vector<double> r = r1 > 0.0 ? std::vector<double>{0.0, r1} : std::vector<double>{r1, 0.0};
    return numeric_linear_statistic(p, r, {1}, t, opts).variance;
}

MomentEstimate numeric_covariance(const KernelParams& p, double t, double r1, double r2,
                                  CovSign sign, const StatsOptions& opts) {
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("numeric_covariance: r1, r2 must be positive");
    double joint, v1, v2;
    if (sign == CovSign::same) {
        if (r1 == r2) throw DomainError("numeric_covariance: r1 and r2 must differ");
        const double lo = std::min(r1, r2), hi = std::max(r1, r2);
        joint = numeric_linear_statistic(p, {0.0, lo, hi}, {2, 1}, t, opts).variance.value;
        v1 = numeric_variance(p, t, lo, opts).value;
        v2 = numeric_variance(p, t, hi, opts).value;
    } else {
        joint = numeric_linear_statistic(p, {-r2, 0.0, r1}, {1, 1}, t, opts).variance.value;
        v1 = numeric_variance(p, t, r1, opts).value;
        v2 = numeric_variance(p, t, -r2, opts).value;
    }
    return make(0.5 * (joint - v1 - v2), opts);
}

}  // namespace chf
