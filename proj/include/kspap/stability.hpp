#pragma once

#include <string>
#include <vector>

#include "kspap/solver.hpp"

namespace kspap {

// IVP form of the integral equation on [0, t_end]:
//   u(t) = e^{tD} u0 + int_0^t div e^{(t-s)D}[-u grad(-D+gamma)^{-1} u + f](s) ds,
// integrated with the same per-mode ETD step; the bracket at the new time is
// resolved by per-step fixed-point iterations so the discrete orbit matches
// the converged Picard orbit exactly.  u0 must be mean-zero.
Trajectory<SpectralField> forward_solve(const SpectralField& u0,
                                        const PapSignal<VectorSpectralField>& f,
                                        const SolverConfig& cfg);

struct DecayFit {
    double window_lo = 0.0, window_hi = 0.0;
    std::vector<double> times;      // usable samples
    std::vector<double> log_norms;  // log ||.|| at those samples
    double sigma_hat = 0.0;         // least-squares slope of -log||.|| vs t
    double fit_residual = 0.0;      // rms residual of the linear fit
    int samples_used = 0;
};

// Least-squares decay rate over [window_lo, window_hi]; only samples with
// norm above 100x machine epsilon enter.  Throws InsufficientSamples if
// fewer than 5 remain.
DecayFit decay_rate_fit(const std::vector<double>& times, const std::vector<double>& norms,
                        double window_lo, double window_hi);

struct StabilityReport {
    double sigma_target = 0.0;
    double sigma_fitted = 0.0;            // difference-side fit
    double sigma_semigroup = 0.0;         // semigroup-side fit
    bool pass_semigroup_side = false;     // e^{sigma t}||e^{tD} w0|| -> 0
    bool pass_difference_side = false;    // e^{sigma t}||u_hat - u|| -> 0
    bool trivial = false;                 // difference never left the solver floor
    double perturbation_norm = 0.0;
    std::string norms_csv_path;
    std::string anchor = "stability.equivalence";
    std::string to_json() const;
};

// Computes the fixed point u_hat of Phi for the forcing f, a forward solution
// u from u_hat(0) + perturbation, and tests both sides of the exponential-
// stability equivalence at the target rate.  The perturbation must be
// mean-zero and sigma_target must lie in (0, lambda_1).  When norms_csv_path
// is nonempty, writes the (t, semigroup_norm, difference_norm) table there.
StabilityReport stability_experiment(const PapSignal<VectorSpectralField>& f,
                                     const SpectralField& perturbation, double sigma_target,
                                     const SolverConfig& cfg, const ConstantsLedger& ledger,
                                     const std::string& norms_csv_path = "");

}  // namespace kspap
