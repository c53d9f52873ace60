#pragma once

#include <cstddef>
#include <vector>

#include "chf/kernel.hpp"

namespace chf {

// State of the coupled Painleve V system at time t. Entries of u and w are
// ordered as Configuration::active_indices(). The system is carried in
// w = v - 1, which is O(t) at small t. log_d is ln(d / (2 alpha)), finite
// at alpha = 0.
struct CPVState {
    double t = 0.0;
    std::vector<cplx> u;
    std::vector<cplx> w;
    cplx log_y = 0.0;
    cplx log_d = 0.0;
    cplx lnF = 0.0;
    // Running integrals used by verify_identities:
    //   ruv    = int 2i sum r_k u_k v_k dt
    //   action = int (sum u_k dv_k/dt - H) dt
    cplx ruv = 0.0;
    cplx action = 0.0;

    cplx v(std::size_t i) const { return 1.0 + w[i]; }
};

struct CPVDerivative {
    std::vector<cplx> du;
    std::vector<cplx> dv;
    cplx dlog_y = 0.0;
    cplx dlog_d = 0.0;
    cplx dlnF = 0.0;
    cplx druv = 0.0;
    cplx daction = 0.0;
};

struct Trajectory {
    std::vector<CPVState> states;  // accepted steps, first entry is the start
    std::size_t rejected = 0;
    std::size_t evaluations = 0;
};

struct IdentityResiduals {
    double residual_a = 0.0;     // max |(tH)(t) - (tH)(t0) - int 2i sum r u v|
    double residual_b = 0.0;     // max violation of the integrated H identity
    double max_imag_lnF = 0.0;   // max |Im lnF| / (1 + |Re lnF|)
};

struct LargeTPrediction {
    std::vector<cplx> u;
    std::vector<cplx> v;
    cplx H = 0.0;
    cplx log_y = 0.0;
    cplx log_d = 0.0;  // ln(d / (2 alpha))
    cplx y() const;
    cplx d(double alpha) const;
};

// Default start time min(1e-3, 1e-8^{1/(2 alpha + 1)}).
double default_t0(double alpha);
inline constexpr double t_init_max = 1e-2;
inline constexpr double t_match_default = 15.0;

class CoupledPainleveV {
public:
    CoupledPainleveV(const KernelParams& p, const Configuration& c);

    const KernelParams& params() const { return p_; }
    const Configuration& config() const { return c_; }
    std::size_t size() const { return r_.size(); }
    const std::vector<double>& r() const { return r_; }

    CPVDerivative rhs(const CPVState& s) const;
    cplx hamiltonian(const CPVState& s) const;
    // Returns (d1, d2).
    std::pair<cplx, cplx> d1d2(const CPVState& s) const;

    CPVState initial_state(double t0) const;
    CPVState initial_state() const { return initial_state(default_t0(p_.alpha)); }

    // Adaptive Dormand-Prince 5(4) in s = ln t. `stops` are extra times
    // (ascending, within (state0.t, t1)) that steps land on exactly.
    Trajectory integrate(const CPVState& state0, double t1, double tol,
                         const std::vector<double>& stops = {}) const;

    IdentityResiduals verify(const Trajectory& traj) const;
    LargeTPrediction large_t(double t) const;

private:
    // Packed right-hand side in s = ln t.
    void field(double t, const std::vector<cplx>& y, std::vector<cplx>& dy) const;
    void pack(const CPVState& s, std::vector<cplx>& y) const;
    CPVState unpack(double t, const std::vector<cplx>& y) const;
    cplx t_hamiltonian(double t, const cplx* u, const cplx* w) const;

    KernelParams p_;
    Configuration c_;
    std::vector<double> r_;
    double rmax_ = 0.0;
};

CPVDerivative cpv_rhs(const CPVState& s, const KernelParams& p, const Configuration& c);
cplx hamiltonian(const CPVState& s, const KernelParams& p, const Configuration& c);
CPVState cpv_init(const KernelParams& p, const Configuration& c, double t0);
Trajectory cpv_integrate(const KernelParams& p, const Configuration& c, const CPVState& state0,
                         double t1, double tol);
IdentityResiduals verify_identities(const Trajectory& traj, const KernelParams& p,
                                    const Configuration& c);
LargeTPrediction cpv_large_t_prediction(const KernelParams& p, const Configuration& c, double t);

// ln F(t) by integrating from the default start time; convenience for
// comparisons against log_det.
double cpv_lnF(const KernelParams& p, const Configuration& c, double t, double tol);

}  // namespace chf
