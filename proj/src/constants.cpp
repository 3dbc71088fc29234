#include "kspap/constants.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "kspap/estimates.hpp"
#include "kspap/operators.hpp"
#include "kspap/rng.hpp"

namespace kspap {

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("gamma_fn: x > 0 required");
    return std::tgamma(x);
}

KtildeResult ktilde(int n, double p, double lambda1, double C, double k2) {
    if (!(lambda1 > 0.0)) throw std::invalid_argument("ktilde: lambda1 > 0 required");
    if (!(n / p < 1.0)) throw std::invalid_argument("ktilde: n/p < 1 required");
    if (!(p > n)) throw std::invalid_argument("ktilde: (p-n)/(2p) > 0 required");
    const double a1 = 1.0 - n / p;
    const double a2 = (p - n) / (2.0 * p);
    const double b0 = C * k2 * (std::pow(lambda1, -a1) * gamma_fn(a1) + 1.0 / lambda1);
    const double b1 = k2 * (std::pow(lambda1, -a2) * gamma_fn(a2) + 1.0 / lambda1);
    KtildeResult r;
    r.value = std::max(b0, b1);
    r.active_branch = (b1 >= b0) ? 1 : 0;
    return r;
}

void ConstantsLedger::refresh() {
    kg = kgamma(gamma, n);
    const auto kt = ktilde(n, p, lambda1, C, k2);
    Ktilde = kt.value;
    ktilde_branch = kt.active_branch;
    rho = 1.0 / (4.0 * Ktilde * kg);
    contraction_modulus = 2.0 * Ktilde * kg * rho;
    f_max = rho / Ktilde - kg * rho * rho;
}

ConstantsLedger ConstantsLedger::fit(const BoxDomain& domain, double p_cfg, double gamma,
                                     int trials, std::uint64_t seed) {
    const int n = domain.dim();
    if (!(p_cfg > std::max(3, n)) || !(p_cfg < 2.0 * n))
        throw std::invalid_argument("ConstantsLedger: need max{3,n} < p < 2n");
    ConstantsLedger led;
    led.n = n;
    led.p = p_cfg;
    led.gamma = gamma;
    led.lambda1 = domain.first_eigenvalue();
    led.seed = seed;
    led.fit_trials = trials;

    const double lam1 = led.lambda1;
    auto tgrid = log_grid(1e-3 / lam1, 10.0 / lam1, 20);
    const double phalf = p_cfg / 2.0;
    const double pthird = p_cfg / 3.0;
    const double qmid = p_cfg * n / (4.0 * n - p_cfg);  // pn/(4n-p)

    led.k1 = verify_dispersive(domain, phalf, pthird, tgrid, trials, derive_seed(seed, "k1")).fitted_constant;
    const double k2a =
        verify_smoothing(domain, phalf, qmid, tgrid, trials, derive_seed(seed, "k2a")).fitted_constant;
    const double k2b =
        verify_smoothing(domain, phalf, pthird, tgrid, trials, derive_seed(seed, "k2b")).fitted_constant;
    led.k2 = std::max(k2a, k2b);
    led.C = verify_lj_bound(domain, phalf, 1.0, trials, derive_seed(seed, "C")).fitted_constant;
    led.refresh();
    return led;
}

std::string ConstantsLedger::to_json() const {
    nlohmann::json j;
    j["n"] = n;
    j["p"] = p;
    j["gamma"] = gamma;
    j["lambda1"] = {{"value", lambda1}, {"provenance", "formula"}};
    j["k1"] = {{"value", k1}, {"provenance", "fitted"}};
    j["k2"] = {{"value", k2}, {"provenance", "fitted"}};
    j["C"] = {{"value", C}, {"provenance", "fitted"}};
    j["k_gamma"] = {{"value", kg}, {"provenance", "formula"}};
    j["Ktilde"] = {{"value", Ktilde}, {"provenance", "formula"}, {"active_branch", ktilde_branch}};
    j["rho"] = {{"value", rho}, {"provenance", "chosen"}};
    j["contraction_modulus"] = {{"value", contraction_modulus}, {"provenance", "formula"}};
    j["f_max"] = {{"value", f_max}, {"provenance", "formula"}};
    j["fit"] = {{"seed", seed}, {"trials", fit_trials}};
    return j.dump(2);
}

}  // namespace kspap
