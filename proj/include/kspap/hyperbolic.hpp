#pragma once

#include <string>

namespace kspap {

// gamma_{p,q} = (delta_n/2)[(1/p - 1/q) + (8/q)(1 - 1/p)] for 1 <= p <= q
// (q may be infinity).  delta_n has no default anywhere: callers must pass it.
double hyperbolic_gamma_pq(double p, double q, double delta_n);

struct HyperbolicRateConstants {
    double gamma_pq = 0.0;
    std::string h_n;  // closed form of the kernel factor, C~ left symbolic
};

HyperbolicRateConstants hyperbolic_rate_constants(double p, double q, int n, double delta_n);

// sigma = min{ g(p/2,p/2), (g(p/2,p/2)+g(pn/(4n-p),p/2))/2,
//              (g(p/2,p/2)+g(p/3,p/2))/2 }, with max{3,n} < p < 2n.
double hyperbolic_sigma(double p, int n, double delta_n);

}  // namespace kspap
