#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kspap/box_domain.hpp"

namespace kspap {

// Result of an empirical operator-norm fit over Monte-Carlo trial fields.
// `ratio` always denotes the measured norm divided by the full claimed bound
// with constant 1, so fitted_constant = max over samples of ratio.
struct EstimateReport {
    std::string anchor;           // id of the property being tested
    double p = 0.0;
    double q = 0.0;
    double gamma = 0.0;           // only meaningful for the resolvent-gradient fit
    std::vector<double> t_grid;   // empty for t-independent fits
    std::vector<double> ratio_max;   // per t (or per trial when t_grid is empty)
    std::vector<double> ratio_mean;  // per t
    double fitted_constant = 0.0;
    bool exceeded = false;        // true iff some ratio was non-finite
    int trials = 0;
    std::uint64_t seed = 0;

    std::string to_json() const;
    // CSV table (t, ratio_max, ratio_mean); one row per trial for t-free fits.
    void write_csv(const std::string& path) const;
};

// Dispersive bound of the Neumann semigroup on mean-zero data:
// ratio = ||e^{tD}w||_p / [(1 + t^{-(n/2)(1/q-1/p)}) e^{-lambda_1 t} ||w||_q].
// Requires 1 <= q <= p (p may be infinity).
EstimateReport verify_dispersive(const BoxDomain& domain, double p, double q,
                                 std::vector<double> t_grid, int trials, std::uint64_t seed);

// Gradient smoothing bound: same with |grad e^{tD} w| and the extra t^{-1/2}.
EstimateReport verify_smoothing(const BoxDomain& domain, double p, double q,
                                std::vector<double> t_grid, int trials, std::uint64_t seed);

// L_j = d_j(-Delta+gamma I)^{-1} : L^p -> L^q with 1/q = 1/p - 1/n;
// ratio = ||L_j w||_q / (k(gamma) ||w||_p).  Requires 1 < p < n.
EstimateReport verify_lj_bound(const BoxDomain& domain, double p, double gamma, int trials,
                               std::uint64_t seed);

// Log-spaced grid helper for the t in [t_lo, t_hi] sweeps.
std::vector<double> log_grid(double t_lo, double t_hi, int count);

}  // namespace kspap
