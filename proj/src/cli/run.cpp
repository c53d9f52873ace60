#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <thread>

#include "chf/asymptotics.hpp"
#include "chf/cli.hpp"
#include "chf/errors.hpp"
#include "chf/fredholm.hpp"
#include "chf/painleve.hpp"
#include "chf/stats.hpp"

namespace chf::cli {

namespace {

using ojson = nlohmann::ordered_json;

// Runs fn(i) for i < n on a few threads; results are placed by index so
// the output order never depends on scheduling. The first failure by index
// is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> errs(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nt = std::min(n, std::min<std::size_t>(hw, 8));
    std::vector<std::thread> pool;
    for (std::size_t i = 1; i < nt; ++i) pool.emplace_back(worker);
    if (n > 0) worker();
    for (auto& th : pool) th.join();
    for (auto& e : errs) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

std::string idx(std::size_t k) { return "[" + std::to_string(k) + "]"; }

std::vector<std::string> asymp_names(const KernelParams& p, const Configuration& c) {
    std::vector<std::string> names;
    for (const auto& term : large_gap_lnF(p, c.with_t(1.0)).breakdown) names.push_back(term.name);
    return names;
}

std::vector<std::string> columns_for(const RunConfig& rc) {
    const std::string& cmd = rc.command;
    if (cmd == "det") return {"t", "lnF", "total_order", "panels", "active_nodes", "rcond", "imag_residue"};
    if (cmd == "asymp") {
        std::vector<std::string> cols = {"t", "linear_term", "log_term", "constant_term", "total",
                                         "max_imag_residue"};
        const KernelParams p(rc.alpha, rc.beta_im);
        const Configuration c(rc.r, rc.gamma, 1.0);
        for (const auto& n : asymp_names(p, c)) cols.push_back(n);
        return cols;
    }
    if (cmd == "painleve") {
        std::vector<std::string> cols = {"t"};
        const Configuration c(rc.r, rc.gamma, 1.0);
        for (std::size_t k : c.active_indices()) {
            for (const char* f : {"re_u", "im_u", "re_v", "im_v"}) cols.push_back(f + idx(k));
        }
        for (const char* f : {"re_H", "im_H", "re_lnF", "im_lnF", "re_log_y", "im_log_y", "re_log_d", "im_log_d"}) {
            cols.push_back(f);
        }
        return cols;
    }
    if (cmd == "verify") {
        return {"t", "lnF_nystrom", "lnF_cpv", "lnF_asymptotic", "residual_cpv", "residual_asymptotic"};
    }
    if (cmd == "moments") {
        return {"t",           "mean_plus",    "mean_plus_asym",   "mean_minus", "mean_minus_asym",
                "variance",    "variance_asym", "cov_same",        "cov_same_asym", "cov_opposite",
                "cov_opposite_asym"};
    }
    // sweep
    RunConfig sub = sweep_point(rc, rc.sweep_range->a);
    std::vector<std::string> cols = {"sweep." + rc.sweep_over};
    for (const auto& col : columns_for(sub)) cols.push_back(col);
    return cols;
}

Report run_det(const RunConfig& rc) {
    Report rep;
    const KernelParams p(rc.alpha, rc.beta_im);
    const Configuration c(rc.r, rc.gamma, 0.0);
    const std::vector<double> ts = rc.times();
    struct Row {
        std::vector<double> v;
    };
    const auto rows = parallel_map<Row>(ts.size(), [&](std::size_t i) {
        const Configuration ci = c.with_t(ts[i]);
        const QuadratureGrid grid = default_grid(p, ci, rc.order);
        const LogDetResult r = log_det_detailed(p, ci, grid);
        return Row{{ts[i], r.value, double(grid.total_order), double(grid.panels.size()),
                    double(r.nodes), r.rcond, r.imag_residue}};
    });
    for (const auto& r : rows) rep.rows.push_back(r.v);
    rep.diagnostics["order_per_panel"] = rc.order;
    rep.diagnostics["grading_levels"] = default_grading_levels(p.alpha);
    rep.diagnostics["origin_power"] = origin_power(p.alpha);
    rep.diagnostics["max_panel_length"] = GridOptions{}.max_panel_length;
    return rep;
}

Report run_asymp(const RunConfig& rc) {
    Report rep;
    const KernelParams p(rc.alpha, rc.beta_im);
    const Configuration c(rc.r, rc.gamma, 1.0);
    std::vector<std::string> warnings;
    for (double t : rc.times()) {
        const AsymptoticReport a = large_gap_lnF(p, c.with_t(t));
        std::vector<double> row = {t, a.linear_term, a.log_term, a.constant_term, a.total, a.max_imag_residue};
        for (const auto& term : a.breakdown) row.push_back(term.value);
        rep.rows.push_back(std::move(row));
        warnings = a.warnings;
    }
    if (rc.times().empty()) warnings = large_gap_lnF(p, c).warnings;
    rep.diagnostics["warnings"] = warnings;
    return rep;
}

Report run_painleve(const RunConfig& rc) {
    Report rep;
    const KernelParams p(rc.alpha, rc.beta_im);
    const Configuration c(rc.r, rc.gamma, 1.0);
    const CoupledPainleveV sys(p, c);
    const std::vector<double> ts = rc.times();
    if (ts.empty()) return rep;
    const CPVState s0 = rc.t0 ? sys.initial_state(*rc.t0) : sys.initial_state();
    const double t_end = *std::max_element(ts.begin(), ts.end());
    const Trajectory traj = sys.integrate(s0, t_end, rc.tol, ts);
    auto emit_state = [&](const CPVState& s) {
        std::vector<double> row = {s.t};
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            const cplx v = s.v(i);
            row.insert(row.end(), {s.u[i].real(), s.u[i].imag(), v.real(), v.imag()});
        }
        const cplx h = sys.hamiltonian(s);
        row.insert(row.end(), {h.real(), h.imag(), s.lnF.real(), s.lnF.imag(), s.log_y.real(), s.log_y.imag(),
                               s.log_d.real(), s.log_d.imag()});
        rep.rows.push_back(std::move(row));
    };
    if (rc.t_range) {
        for (const CPVState& s : traj.states) {
            if (std::find(ts.begin(), ts.end(), s.t) != ts.end()) emit_state(s);
        }
    } else {
        for (const CPVState& s : traj.states) emit_state(s);
    }
    const IdentityResiduals res = sys.verify(traj);
    ojson& d = rep.diagnostics;
    d["t0"] = s0.t;
    d["accepted_steps"] = traj.states.size() - 1;
    d["rejected_steps"] = traj.rejected;
    d["rhs_evaluations"] = traj.evaluations;
    d["residual_a"] = res.residual_a;
    d["residual_b"] = res.residual_b;
    d["max_imag_lnF"] = res.max_imag_lnF;
    if (t_end >= t_match_default) {
        const LargeTPrediction pred = sys.large_t(t_end);
        const cplx h = sys.hamiltonian(traj.states.back());
        d["large_t"] = {{"t", t_end},
                        {"H", {h.real(), h.imag()}},
                        {"H_predicted", {pred.H.real(), pred.H.imag()}},
                        {"abs_difference", std::abs(h - pred.H)}};
    }
    return rep;
}

Report run_verify(const RunConfig& rc) {
    Report rep;
    const KernelParams p(rc.alpha, rc.beta_im);
    const Configuration c(rc.r, rc.gamma, 1.0);
    const std::vector<double> ts = rc.times();
    const double threshold = std::max(1e-6, 50.0 * rc.tol);
    rep.diagnostics["threshold"] = threshold;
    if (ts.empty()) {
        rep.diagnostics["passed"] = true;
        return rep;
    }
    const CoupledPainleveV sys(p, c);
    const CPVState s0 = rc.t0 ? sys.initial_state(*rc.t0) : sys.initial_state();
    const double t_end = *std::max_element(ts.begin(), ts.end());
    const Trajectory traj = sys.integrate(s0, t_end, rc.tol, ts);
    const auto nys = parallel_map<double>(ts.size(), [&](std::size_t i) {
        const Configuration ci = c.with_t(ts[i]);
        return log_det(p, ci, default_grid(p, ci, rc.order));
    });
    double worst = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double cpv = NAN;
        for (const CPVState& s : traj.states) {
            if (s.t == ts[i]) cpv = s.lnF.real();
        }
        const double asym = large_gap_lnF(p, c.with_t(ts[i])).total;
        const double res = std::abs(cpv - nys[i]);
        worst = std::max(worst, res);
        rep.rows.push_back({ts[i], nys[i], cpv, asym, res, std::abs(asym - nys[i])});
    }
    const IdentityResiduals ir = sys.verify(traj);
    rep.diagnostics["max_residual_cpv"] = worst;
    rep.diagnostics["residual_a"] = ir.residual_a;
    rep.diagnostics["residual_b"] = ir.residual_b;
    rep.diagnostics["max_imag_lnF"] = ir.max_imag_lnF;
    rep.passed = worst <= threshold;
    rep.diagnostics["passed"] = rep.passed;
    if (!rep.passed) {
        rep.failure = "max |lnF_cpv - lnF_nystrom| = " + format_double(worst) + " exceeds " + format_double(threshold);
    }
    return rep;
}

Report run_moments(const RunConfig& rc) {
    Report rep;
    const KernelParams p(rc.alpha, rc.beta_im);
    StatsOptions opts;
    opts.fd_step = rc.fd_step;
    opts.order = rc.order;
    for (double t : rc.times()) {
        const MomentAsymptotics a = moment_asymptotics(p, t, rc.r1, rc.r2);
        rep.rows.push_back({t, numeric_mean(p, t, rc.r1, opts).value, a.mean_plus,
                            numeric_mean(p, t, -rc.r1, opts).value, a.mean_minus,
                            numeric_variance(p, t, rc.r1, opts).value, a.variance,
                            numeric_covariance(p, t, rc.r1, rc.r2, CovSign::same, opts).value, a.cov_same,
                            numeric_covariance(p, t, rc.r1, rc.r2, CovSign::opposite, opts).value,
                            a.cov_opposite});
    }
    rep.diagnostics["fd_step"] = rc.fd_step;
    rep.diagnostics["richardson_order"] = 4;
    rep.diagnostics["order_per_panel"] = rc.order;
    return rep;
}

Report run_single(const RunConfig& rc) {
    Report rep;
    if (rc.command == "det") rep = run_det(rc);
    else if (rc.command == "asymp") rep = run_asymp(rc);
    else if (rc.command == "painleve") rep = run_painleve(rc);
    else if (rc.command == "verify") rep = run_verify(rc);
    else if (rc.command == "moments") rep = run_moments(rc);
    else throw ConfigError("unknown command '" + rc.command + "'");
    return rep;
}

Report run_sweep(const RunConfig& rc) {
    Report rep;
    const std::vector<double> pts = rc.sweep_range->points();
    const auto subs = parallel_map<Report>(pts.size(), [&](std::size_t i) {
        return run_single(sweep_point(rc, pts[i]));
    });
    ojson points = ojson::array();
    std::vector<std::string> failures;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (const auto& row : subs[i].rows) {
            std::vector<double> r = {pts[i]};
            r.insert(r.end(), row.begin(), row.end());
            rep.rows.push_back(std::move(r));
        }
        points.push_back({{"value", pts[i]}, {"diagnostics", subs[i].diagnostics}});
        if (!subs[i].passed) failures.push_back(rc.sweep_over + " = " + format_double(pts[i]) + ": " + subs[i].failure);
    }
    rep.diagnostics["points"] = points;
    if (!failures.empty()) {
        rep.passed = false;
        rep.failure = failures.front();
        if (failures.size() > 1) rep.failure += " (and " + std::to_string(failures.size() - 1) + " more)";
    }
    return rep;
}

}  // namespace

Report run(const RunConfig& rc) {
    validate(rc);
    Report rep = rc.command == "sweep" ? run_sweep(rc) : run_single(rc);
    rep.command = rc.command;
    rep.inputs = inputs_json(rc);
    rep.columns = columns_for(rc);
    for (const auto& row : rep.rows) {
        if (row.size() != rep.columns.size()) throw Error("internal", "row width does not match the header");
    }
    return rep;
}

}  // namespace chf::cli
