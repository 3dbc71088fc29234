#pragma once

#include <string>
#include <vector>

#include "kspap/constants.hpp"
#include "kspap/pap_signal.hpp"
#include "kspap/trajectory.hpp"

namespace kspap {

// Configuration of the whole-line Duhamel solves.  history_length = 0 asks
// for the automatic choice ln(1e12)/lambda_1, which makes the truncation
// tail factor e^{-lambda_1 T_h} <= 1e-12.
struct SolverConfig {
    double p_cfg = 3.5;
    double gamma = 1.0;
    double dt = 0.02;
    double t_start = 0.0;
    double t_end = 20.0;
    double history_length = 0.0;
    double tol = 1e-9;
    int max_iter = 60;

    // Range checks against the domain dimension; fills history_length.
    SolverConfig validated(const BoxDomain& domain) const;
};

// Per-mode weights of the exponential-time-differencing step with linear
// interpolation of the bracket:
//   u_{i+1} = decay u_i + w0 G_i + w1 G_{i+1}.
struct EtdWeights {
    std::vector<double> decay, w0, w1;
};
EtdWeights make_etd_weights(const BoxDomain& domain, double dt);

// phi1(z) = (e^z - 1)/z, phi2(z) = (e^z - 1 - z)/z^2, stable near z = 0.
double phi1(double z);
double phi2(double z);

// One ETD step on coefficient arrays: out = decay*u + w0*g0 + w1*g1.
void etd_step(const EtdWeights& w, const std::vector<double>& u, const std::vector<double>& g0,
              const std::vector<double>& g1, std::vector<double>& out);

// G = div(-w grad(-Delta+gamma I)^{-1} w + f); the forcing may be null.
SpectralField bracket_div(const SpectralField& w, const VectorSpectralField* f, double gamma);

// Linear solution operator: u(t) = int_{-inf}^t div e^{(t-s)Delta}
// [-w grad(-Delta+gamma)^{-1} w + f](s) ds, history truncated at the start of
// the input grid.  Inputs share one grid covering [-T_h, t_end]; the returned
// trajectory covers [0, t_end].
Trajectory<SpectralField> duhamel_linear(const Trajectory<SpectralField>& omega,
                                         const Trajectory<VectorSpectralField>& f,
                                         const SolverConfig& cfg);

struct IterationLog {
    std::vector<double> update_norms;  // sup_t ||u^{k+1} - u^k||_{p/2} per sweep
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;  // ||Phi(u_final) - u_final|| measured by an extra sweep
    double f_sup = 0.0;
    std::string to_json() const;
    void write_csv(const std::string& path) const;
};

struct PicardResult {
    Trajectory<SpectralField> u;
    IterationLog log;
};

// Picard iteration u^{k+1} = Phi(u^k) from u^0 = 0 for the semilinear fixed
// point.  Requires ||f||_{inf,L^{p/3}} <= ledger.f_max (ForcingTooLarge) and
// a contraction modulus < 1; throws NoConvergence when max_iter is hit.
// The returned trajectory covers [t_start, t_end]; internally the window is
// extended two history lengths to the left so the truncation error on the
// returned part stays at the 1e-12 tail level.
PicardResult picard_solve(const PapSignal<VectorSpectralField>& f, const SolverConfig& cfg,
                          const ConstantsLedger& ledger);

// ||Phi(w1) - Phi(w2)|| / ||w1 - w2|| in the sup-L^{p/2} norms over the
// common grid; both inputs must lie in the ball of radius rho.  The forcing
// cancels in the difference, so Phi is evaluated with f = 0.
double contraction_probe(const Trajectory<SpectralField>& w1, const Trajectory<SpectralField>& w2,
                         const SolverConfig& cfg, double rho);

struct LinearBoundReport {
    double lhs = 0.0;     // sup_t ||u(t)||_{p/2}
    double omega_sup = 0.0;
    double f_sup = 0.0;
    double rhs = 0.0;     // K~ (k(gamma) |w|^2 + |f|)
    double margin = 0.0;  // rhs - lhs
    bool pass = false;
    std::string anchor = "linear.boundedness";
    std::string to_json() const;
};

LinearBoundReport linear_bound_check(const Trajectory<SpectralField>& u,
                                     const Trajectory<SpectralField>& omega, double f_sup,
                                     const ConstantsLedger& ledger);

struct PapPreservationReport {
    double T = 0.0;             // almost period used (snapped to the time grid)
    double eps = 0.0;           // search tolerance
    double eps_measured = 0.0;  // grid-estimated forcing shift sup at T
    double shift_sup = 0.0;     // sup_t ||u_ap(t+T) - u_ap(t)||_{p/2}
    double shift_bound = 0.0;   // K~ (2 k(gamma) + 1) eps
    bool pass_ap_bound = false;
    std::vector<double> L_values;
    std::vector<double> ergodic_means;  // residual M_L per L
    bool decay_monotone = false;
    std::string anchor = "linear.pap-preservation";
    std::string to_json() const;
};

// Solves with the full forcing and with its AP part only, checks the almost
// period transfer bound on the AP solution and the ergodic-mean decay of the
// residual (full minus AP solution).
PapPreservationReport pap_preservation_test(const PapSignal<VectorSpectralField>& f,
                                            const SolverConfig& cfg, const ConstantsLedger& ledger,
                                            double eps, double window_lo, double window_len,
                                            std::vector<double> L_values);

// Trajectory CSV (t, coefficient columns).
void write_trajectory_csv(const Trajectory<SpectralField>& traj, const std::string& path);

}  // namespace kspap
