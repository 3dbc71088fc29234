#include "kspap/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "kspap/errors.hpp"
#include "kspap/fields.hpp"
#include "kspap/operators.hpp"

namespace kspap {

namespace {

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;  // zero field convention
    return num / den;
}

nlohmann::json base_json(const EstimateReport& r) {
    nlohmann::json j;
    j["anchor"] = r.anchor;
    j["p"] = std::isinf(r.p) ? -1.0 : r.p;
    j["q"] = r.q;
    j["gamma"] = r.gamma;
    j["t_grid"] = r.t_grid;
    j["ratio_max"] = r.ratio_max;
    j["ratio_mean"] = r.ratio_mean;
    j["fitted_constant"] = r.fitted_constant;
    j["exceeded"] = r.exceeded;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    return j;
}

}  // namespace

std::string EstimateReport::to_json() const { return base_json(*this).dump(2); }

void EstimateReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open " + path);
    out.precision(17);
    if (!t_grid.empty()) {
        out << "t,ratio_max,ratio_mean\n";
        for (std::size_t i = 0; i < t_grid.size(); ++i)
            out << t_grid[i] << ',' << ratio_max[i] << ',' << ratio_mean[i] << '\n';
    } else {
        out << "trial,ratio\n";
        for (std::size_t i = 0; i < ratio_max.size(); ++i) out << i << ',' << ratio_max[i] << '\n';
    }
}

std::vector<double> log_grid(double t_lo, double t_hi, int count) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo) || count < 2)
        throw std::invalid_argument("log_grid: need 0 < t_lo < t_hi and count >= 2");
    std::vector<double> t(count);
    const double a = std::log(t_lo), b = std::log(t_hi);
    for (int i = 0; i < count; ++i) t[i] = std::exp(a + (b - a) * i / (count - 1));
    return t;
}

namespace {

EstimateReport run_semigroup_fit(const BoxDomain& domain, double p, double q,
                                 std::vector<double> t_grid, int trials, std::uint64_t seed,
                                 bool smoothing) {
    if (!(q >= 1.0) || !(p >= q)) throw std::invalid_argument("semigroup fit: need 1 <= q <= p");
    if (trials < 1 || t_grid.empty()) throw std::invalid_argument("semigroup fit: empty setup");
    const int n = domain.dim();
    const double lam1 = domain.first_eigenvalue();
    const double pinv = std::isinf(p) ? 0.0 : 1.0 / p;
    const double expo = (smoothing ? 0.5 : 0.0) + 0.5 * n * (1.0 / q - pinv);

    EstimateReport r;
    r.anchor = smoothing ? "heat.smoothing" : "heat.dispersive";
    r.p = p;
    r.q = q;
    r.t_grid = t_grid;
    r.trials = trials;
    r.seed = seed;
    r.ratio_max.assign(t_grid.size(), 0.0);
    r.ratio_mean.assign(t_grid.size(), 0.0);

    for (int tr = 0; tr < trials; ++tr) {
        Rng rng(trial_seed(seed, tr));
        SpectralField w = random_field(domain, rng, /*mean_zero=*/true);
        const double wq = lp_norm(w, q);
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const double t = t_grid[i];
            SpectralField ut = heat(w, t);
            const double num = smoothing ? lp_norm(gradient(ut), p) : lp_norm(ut, p);
            const double den = (1.0 + std::pow(t, -expo)) * std::exp(-lam1 * t) * wq;
            const double ratio = safe_ratio(num, den);
            if (!std::isfinite(ratio)) r.exceeded = true;
            r.ratio_max[i] = std::max(r.ratio_max[i], ratio);
            r.ratio_mean[i] += ratio / trials;
        }
    }
    r.fitted_constant = *std::max_element(r.ratio_max.begin(), r.ratio_max.end());
    return r;
}

}  // namespace

EstimateReport verify_dispersive(const BoxDomain& domain, double p, double q,
                                 std::vector<double> t_grid, int trials, std::uint64_t seed) {
    return run_semigroup_fit(domain, p, q, std::move(t_grid), trials, seed, false);
}

EstimateReport verify_smoothing(const BoxDomain& domain, double p, double q,
                                std::vector<double> t_grid, int trials, std::uint64_t seed) {
    return run_semigroup_fit(domain, p, q, std::move(t_grid), trials, seed, true);
}

EstimateReport verify_lj_bound(const BoxDomain& domain, double p, double gamma, int trials,
                               std::uint64_t seed) {
    const int n = domain.dim();
    if (n < 2) throw std::invalid_argument("verify_lj_bound: n >= 2 required");
    if (!(p > 1.0) || !(p < n)) throw std::invalid_argument("verify_lj_bound: need 1 < p < n");
    const double q = 1.0 / (1.0 / p - 1.0 / n);
    const double kg = kgamma(gamma, n);

    EstimateReport r;
    r.anchor = "resolvent-gradient.bound";
    r.p = p;
    r.q = q;
    r.gamma = gamma;
    r.trials = trials;
    r.seed = seed;
    r.ratio_max.reserve(trials);

    double fit = 0.0;
    for (int tr = 0; tr < trials; ++tr) {
        Rng rng(trial_seed(seed, tr));
        SpectralField w = random_field(domain, rng, /*mean_zero=*/true);
        const double wp = lp_norm(w, p);
        double worst = 0.0;
        for (int axis = 0; axis < n; ++axis) {
            const double num = lp_norm(lj(w, axis, gamma), q);
            worst = std::max(worst, safe_ratio(num, kg * wp));
        }
        if (!std::isfinite(worst)) r.exceeded = true;
        r.ratio_max.push_back(worst);
        fit = std::max(fit, worst);
    }
    r.fitted_constant = fit;
    return r;
}

}  // namespace kspap
