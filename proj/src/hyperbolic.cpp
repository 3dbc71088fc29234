#include "kspap/hyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kspap {

double hyperbolic_gamma_pq(double p, double q, double delta_n) {
    if (!(p >= 1.0) || !(q >= p)) throw std::invalid_argument("gamma_pq: need 1 <= p <= q");
    if (!(delta_n > 0.0)) throw std::invalid_argument("gamma_pq: delta_n > 0 required");
    const double pinv = std::isinf(p) ? 0.0 : 1.0 / p;
    const double qinv = std::isinf(q) ? 0.0 : 1.0 / q;
    return 0.5 * delta_n * ((pinv - qinv) + 8.0 * qinv * (1.0 - pinv));
}

HyperbolicRateConstants hyperbolic_rate_constants(double p, double q, int n, double delta_n) {
    HyperbolicRateConstants r;
    r.gamma_pq = hyperbolic_gamma_pq(p, q, delta_n);
    r.h_n = "Ctilde * max(t^(-" + std::to_string(n) + "/2), 1)";
    return r;
}

double hyperbolic_sigma(double p, int n, double delta_n) {
    if (!(p > std::max(3, n)) || !(p < 2.0 * n))
        throw std::invalid_argument("hyperbolic_sigma: need max{3,n} < p < 2n");
    const double g0 = hyperbolic_gamma_pq(p / 2.0, p / 2.0, delta_n);
    const double g1 = hyperbolic_gamma_pq(p * n / (4.0 * n - p), p / 2.0, delta_n);
    const double g2 = hyperbolic_gamma_pq(p / 3.0, p / 2.0, delta_n);
    return std::min({g0, 0.5 * (g0 + g1), 0.5 * (g0 + g2)});
}

}  // namespace kspap
