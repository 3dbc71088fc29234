#pragma once

#include <cstdint>
#include <string>

#include "kspap/box_domain.hpp"

namespace kspap {

// Gamma function, x > 0.
double gamma_fn(double x);

struct KtildeResult {
    double value = 0.0;
    int active_branch = 0;  // 0: quadratic (C k2) branch, 1: forcing (k2) branch
};

// K-tilde = max{ C k2 (lambda1^{-(1-n/p)} Gamma(1-n/p) + 1/lambda1),
//                  k2 (lambda1^{-(p-n)/(2p)} Gamma((p-n)/(2p)) + 1/lambda1) }.
// Requires lambda1 > 0, n/p < 1 and p > n.
KtildeResult ktilde(int n, double p, double lambda1, double C, double k2);

// All constants feeding the fixed-point solve, with their provenance.
// contraction_modulus = 2 K~ k(gamma) rho; a solve requires it < 1.
struct ConstantsLedger {
    int n = 2;
    double p = 3.5;
    double gamma = 1.0;
    double lambda1 = 0.0;   // exact from the domain spectrum
    double k1 = 0.0;        // fitted (dispersive)
    double k2 = 0.0;        // fitted (gradient smoothing)
    double C = 0.0;         // fitted (resolvent-gradient bound)
    double kg = 0.0;        // k(gamma), formula
    double Ktilde = 0.0;    // formula from fitted inputs
    int ktilde_branch = 0;
    double rho = 0.0;       // chosen: largest rho with 2 K~ k(gamma) rho <= 1/2
    double contraction_modulus = 0.0;
    double f_max = 0.0;     // rho/K~ - k(gamma) rho^2 at the chosen rho
    std::uint64_t seed = 0;
    int fit_trials = 0;

    // Runs the Monte-Carlo fits for k1, k2, C on the given domain and fills
    // every derived constant.  k2 is fitted over both (p/2, pn/(4n-p)) and
    // (p/2, p/3) pairs that enter the K~ formula.
    static ConstantsLedger fit(const BoxDomain& domain, double p_cfg, double gamma, int trials,
                               std::uint64_t seed);

    // Recompute k(gamma), K~, rho, modulus, f_max from lambda1/k2/C.
    void refresh();

    std::string to_json() const;
};

}  // namespace kspap
