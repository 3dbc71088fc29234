#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kspap/errors.hpp"
#include "kspap/operators.hpp"
#include "kspap/solver.hpp"
#include "oracles.hpp"

using namespace kspap;
constexpr double kPi = std::numbers::pi;

namespace {

BoxDomain small_domain() { return BoxDomain({kPi, kPi}, 8); }

// Ledger with fitted constants for the small test domain (few trials keep
// the unit suite fast; the acceptance suite fits at full scale).
ConstantsLedger test_ledger(const BoxDomain& d, double gamma) {
    return ConstantsLedger::fit(d, 3.5, gamma, 25, 12345);
}

// Constant-in-time forcing with div f = amp cos(k_x x) as a PAP signal.
PapSignal<VectorSpectralField> const_forcing(const BoxDomain& d, double amp) {
    PapSignal<VectorSpectralField> f(d);
    // d/dx [amp sin x] = amp cos x
    f.ap.terms.push_back({0.0, kPi / 2.0, 1.0, sine_mode(d, 0, {1, 0}, amp)});
    return f;
}

Trajectory<SpectralField> constant_trajectory(const SpectralField& w, double t0, double dt,
                                              int steps) {
    Trajectory<SpectralField> traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.values.assign(steps, w);
    return traj;
}

Trajectory<VectorSpectralField> constant_vtrajectory(const VectorSpectralField& v, double t0,
                                                     double dt, int steps) {
    Trajectory<VectorSpectralField> traj;
    traj.t0 = t0;
    traj.dt = dt;
    traj.values.assign(steps, v);
    return traj;
}

struct LinearGrid {
    double t0;
    int steps;
};

LinearGrid linear_grid(const SolverConfig& c) {
    const int n_h = static_cast<int>(std::ceil(c.history_length / c.dt));
    return {-n_h * c.dt, n_h + static_cast<int>(std::lround(c.t_end / c.dt)) + 1};
}

}  // namespace

TEST_CASE("phi functions: series and direct branches agree") {
    for (double z : {-1e-6, -1e-3, -9e-3, -1.1e-2, -0.5, -4.0, -40.0}) {
        const long double e = std::expm1l((long double)z);
        CHECK(phi1(z) == doctest::Approx((double)(e / z)).epsilon(1e-13));
        CHECK(phi2(z) == doctest::Approx((double)((e - z) / (z * z))).epsilon(1e-11));
    }
    CHECK(phi1(0.0) == 1.0);
    CHECK(phi2(0.0) == 0.5);
}

TEST_CASE("duhamel_linear: zero inputs give zero") {
    BoxDomain d = small_domain();
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.dt = 0.05;
    cfg = cfg.validated(d);
    auto g = linear_grid(cfg);
    auto omega = constant_trajectory(SpectralField(d), g.t0, cfg.dt, g.steps);
    auto f = constant_vtrajectory(VectorSpectralField(d), g.t0, cfg.dt, g.steps);
    auto u = duhamel_linear(omega, f, cfg);
    CHECK(u.sup_norm(2.0) == 0.0);
}

TEST_CASE("duhamel_linear: stationary single-mode forcing") {
    // div f = eps cos x and omega = 0 give u(t) = eps cos x for all t.
    BoxDomain d = small_domain();
    SolverConfig cfg;
    cfg.t_end = 3.0;
    cfg.dt = 0.05;
    cfg.gamma = 0.0;
    cfg = cfg.validated(d);
    auto g = linear_grid(cfg);
    const double eps = 0.01;
    auto omega = constant_trajectory(SpectralField(d), g.t0, cfg.dt, g.steps);
    auto f = constant_vtrajectory(sine_mode(d, 0, {1, 0}, eps), g.t0, cfg.dt, g.steps);
    auto u = duhamel_linear(omega, f, cfg);
    const SpectralField expect = cosine_mode(d, {1, 0}, eps);
    for (double t : {0.0, 1.0, 3.0}) {
        SpectralField diff = u.at_time(t);
        diff -= expect;
        CHECK(diff.l2_parseval() <= 1e-8 * expect.l2_parseval());
    }
    CHECK(std::abs(u.values.back().mean()) <= 1e-14);
}

TEST_CASE("duhamel_linear: quadratic response of a stationary eigenmode") {
    // omega = delta cos x, f = 0, gamma = 0:
    //   -omega grad (-D)^{-1} omega = (delta^2/2) sin 2x, mode 2 has
    //   lambda = 4, so u = (delta^2/4) cos 2x.
    BoxDomain d = small_domain();
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.dt = 0.05;
    cfg.gamma = 0.0;
    cfg = cfg.validated(d);
    auto g = linear_grid(cfg);
    const double delta = 0.05;
    auto omega = constant_trajectory(cosine_mode(d, {1, 0}, delta), g.t0, cfg.dt, g.steps);
    auto f = constant_vtrajectory(VectorSpectralField(d), g.t0, cfg.dt, g.steps);
    auto u = duhamel_linear(omega, f, cfg);

    const SpectralField expect = cosine_mode(d, {2, 0}, delta * delta / 4.0);
    SpectralField diff = u.at_time(2.0);
    diff -= expect;
    CHECK(diff.l2_parseval() <= 1e-8 * expect.l2_parseval());

    // cross-check against the fine-step method-of-lines oracle: integrate
    // the linear-in-u equation long enough to reach the stationary state
    auto mol = oracle::mol_rk4_solve(SpectralField(d), nullptr, 0.0, 0.0, 1.0, 0.1, 200);
    (void)mol;  // zero stays zero; the quadratic case is best checked by
                // comparing the bracket directly:
    SpectralField bracket = bracket_div(omega.values[0], nullptr, 0.0);
    const SpectralField bexpect = cosine_mode(d, {2, 0}, delta * delta);
    SpectralField bdiff = bracket;
    bdiff -= bexpect;
    CHECK(bdiff.l2_parseval() <= 1e-12 * bexpect.l2_parseval());
}

TEST_CASE("duhamel_linear: grid and mean-zero precondition errors") {
    BoxDomain d = small_domain();
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = 0.05;
    cfg.gamma = 0.0;
    cfg = cfg.validated(d);
    auto g = linear_grid(cfg);
    auto omega = constant_trajectory(SpectralField(d), g.t0, cfg.dt, g.steps);
    auto f_bad = constant_vtrajectory(VectorSpectralField(d), g.t0, cfg.dt, g.steps - 1);
    CHECK_THROWS_AS(duhamel_linear(omega, f_bad, cfg), GridMismatch);

    auto omega_mean = constant_trajectory(cosine_mode(d, {0, 0}, 0.3), g.t0, cfg.dt, g.steps);
    auto f = constant_vtrajectory(VectorSpectralField(d), g.t0, cfg.dt, g.steps);
    CHECK_THROWS_AS(duhamel_linear(omega_mean, f, cfg), MeanNotZero);
}

TEST_CASE("picard_solve: zero forcing fixed point is zero, one sweep") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = 0.05;
    cfg = cfg.validated(d);
    PapSignal<VectorSpectralField> f(d);
    auto res = picard_solve(f, cfg, led);
    CHECK(res.log.iterations == 1);
    CHECK(res.u.sup_norm(1.75) == 0.0);
}

TEST_CASE("picard_solve: perturbative expansion of the stationary forcing") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 0.0);
    SolverConfig cfg;
    cfg.gamma = 0.0;
    cfg.t_end = 2.0;
    cfg.dt = 0.05;
    cfg.tol = 1e-12;
    cfg = cfg.validated(d);
    const double eps = 1e-3;
    auto f = const_forcing(d, eps);
    auto res = picard_solve(f, cfg, led);
    CHECK(res.log.converged);
    CHECK(res.log.residual <= 1e-11);

    SpectralField expansion = cosine_mode(d, {1, 0}, eps);
    expansion += cosine_mode(d, {2, 0}, eps * eps / 4.0);
    SpectralField diff = res.u.at_time(2.0);
    diff -= expansion;
    CHECK(diff.l2_parseval() <= 10.0 * eps * eps * eps);

    // update ratios stay below the ledger modulus + 0.05
    for (std::size_t i = 1; i < res.log.update_norms.size(); ++i) {
        if (res.log.update_norms[i - 1] < 1e2 * cfg.tol) break;
        CHECK(res.log.update_norms[i] / res.log.update_norms[i - 1] <=
              led.contraction_modulus + 0.05);
    }

    // iterate-2 matches the expansion to O(eps^3): rebuild it via the
    // linear operator route u2 = Phi(u1), u1 = Phi(0)
    auto g = linear_grid(cfg);
    Trajectory<VectorSpectralField> ftraj;
    ftraj.t0 = g.t0;
    ftraj.dt = cfg.dt;
    ftraj.values.reserve(g.steps);
    for (int i = 0; i < g.steps; ++i) ftraj.values.push_back(f.sample(g.t0 + i * cfg.dt));
    auto u1 = duhamel_linear(constant_trajectory(SpectralField(d), g.t0, cfg.dt, g.steps), ftraj,
                             cfg);
    // extend u1 to the full history window by reusing its t=0 value (the
    // stationary state is reached well before t = 0)
    Trajectory<SpectralField> u1_full = constant_trajectory(u1.values[0], g.t0, cfg.dt, g.steps);
    auto u2 = duhamel_linear(u1_full, ftraj, cfg);
    SpectralField d2 = u2.at_time(2.0);
    d2 -= expansion;
    CHECK(d2.l2_parseval() <= 10.0 * eps * eps * eps);
}

TEST_CASE("picard_solve: forcing above f_max is rejected") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = 0.05;
    cfg = cfg.validated(d);
    auto f = const_forcing(d, 10.0 * led.f_max);
    CHECK_THROWS_AS(picard_solve(f, cfg, led), ForcingTooLarge);
}

TEST_CASE("zero-mean preservation along the solve") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    SolverConfig cfg;
    cfg.t_end = 2.0;
    cfg.dt = 0.05;
    cfg = cfg.validated(d);
    PapSignal<VectorSpectralField> f(d);
    f.ap.terms.push_back({1.0, 0.0, 1.0, sine_mode(d, 0, {1, 1}, 0.002)});
    f.ap.terms.push_back({std::sqrt(2.0), 0.5, 1.0, sine_mode(d, 1, {1, 2}, 0.001)});
    auto res = picard_solve(f, cfg, led);
    for (const auto& v : res.u.values) CHECK(std::abs(v.coeffs()[0]) <= 1e-14);
}

TEST_CASE("ETD consistency: halving dt converges at second order") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    auto f = const_forcing(d, 0.003);
    f.ap.terms[0].freq = 1.0;  // time-dependent forcing exercises the interpolation
    f.ap.terms[0].phase = 0.3;

    auto solve_at = [&](double dt) {
        SolverConfig cfg;
        cfg.t_end = 2.0;
        cfg.dt = dt;
        cfg.tol = 1e-12;
        cfg = cfg.validated(d);
        return picard_solve(f, cfg, led).u;
    };
    auto u1 = solve_at(0.08);
    auto u2 = solve_at(0.04);
    auto u3 = solve_at(0.02);

    auto diff_at = [&](const Trajectory<SpectralField>& a, const Trajectory<SpectralField>& b,
                       double t) {
        SpectralField x = a.at_time(t);
        x -= b.at_time(t);
        return x.l2_parseval();
    };
    const double e1 = diff_at(u1, u2, 2.0);
    const double e2 = diff_at(u2, u3, 2.0);
    const double slope = std::log2(e1 / e2);
    CHECK(slope >= 1.8);
    CHECK(slope <= 2.2);
}

TEST_CASE("history truncation: doubling T_h changes the solution below 1e-10") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    auto f = const_forcing(d, 0.003);
    f.ap.terms[0].freq = 0.7;

    auto solve_with_hist = [&](double th) {
        SolverConfig cfg;
        cfg.t_end = 1.0;
        cfg.dt = 0.05;
        cfg.tol = 1e-12;
        cfg.history_length = th;
        cfg = cfg.validated(d);
        return picard_solve(f, cfg, led).u;
    };
    const double th = std::log(1e12);
    auto ua = solve_with_hist(th);
    auto ub = solve_with_hist(2.0 * th);
    double m = 0.0;
    for (double t : {0.0, 0.5, 1.0}) {
        SpectralField diff = ua.at_time(t);
        diff -= ub.at_time(t);
        m = std::max(m, lp_norm(diff, 1.75));
    }
    CHECK(m <= 1e-10);
}

TEST_CASE("contraction_probe: conventions and the ledger bound") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    SolverConfig cfg;
    cfg.t_end = 5.0;
    cfg.dt = 0.05;
    cfg = cfg.validated(d);

    const double rho = 0.1;
    Rng rng(77);
    // equal inputs: ratio 0 by convention
    PapSignal<SpectralField> ws(d);
    ws.ap.terms.push_back({1.0, 0.0, 1.0, random_field(d, rng, true)});
    auto w = sample_signal(ws, 0.0, cfg.dt, 101);
    const double s = w.sup_norm(1.75);
    for (auto& v : w.values) v *= 0.9 * rho / s;
    CHECK(contraction_probe(w, w, cfg, rho) == 0.0);

    // random pairs in the ball never exceed 2 K~ k(gamma) rho
    const double bound = 2.0 * led.Ktilde * led.kg * rho;
    std::vector<double> ratios;
    for (int pair = 0; pair < 10; ++pair) {
        auto make = [&](double scale) {
            PapSignal<SpectralField> sig(d);
            sig.ap.terms.push_back({1.0 + 0.3 * pair, 0.1, 1.0, random_field(d, rng, true)});
            sig.ap.terms.push_back({std::sqrt(2.0), 0.0, 0.5, random_field(d, rng, true)});
            auto traj = sample_signal(sig, 0.0, cfg.dt, 101);
            const double sn = traj.sup_norm(1.75);
            for (auto& v : traj.values) v *= scale * rho / sn;
            return traj;
        };
        auto w1 = make(0.95), w2 = make(0.55);
        const double r = contraction_probe(w1, w2, cfg, rho);
        ratios.push_back(r);
        CHECK(r <= bound);
    }

    // outside the ball: rejected
    auto big = w;
    for (auto& v : big.values) v *= 3.0;
    CHECK_THROWS_AS(contraction_probe(big, w, cfg, rho), std::invalid_argument);

    // ratios scale linearly in rho: medians at rho and rho/2 within 20%
    std::vector<double> ratios_half;
    Rng rng2(77);
    for (int pair = 0; pair < 10; ++pair) {
        auto make = [&](double scale, double radius) {
            PapSignal<SpectralField> sig(d);
            sig.ap.terms.push_back({1.0 + 0.3 * pair, 0.1, 1.0, random_field(d, rng2, true)});
            sig.ap.terms.push_back({std::sqrt(2.0), 0.0, 0.5, random_field(d, rng2, true)});
            auto traj = sample_signal(sig, 0.0, cfg.dt, 101);
            const double sn = traj.sup_norm(1.75);
            for (auto& v : traj.values) v *= scale * radius / sn;
            return traj;
        };
        auto w1 = make(0.95, rho / 2.0), w2 = make(0.55, rho / 2.0);
        ratios_half.push_back(contraction_probe(w1, w2, cfg, rho / 2.0));
    }
    std::sort(ratios.begin(), ratios.end());
    std::sort(ratios_half.begin(), ratios_half.end());
    const double med = ratios[ratios.size() / 2];
    const double med_half = ratios_half[ratios_half.size() / 2];
    CHECK(med_half == doctest::Approx(0.5 * med).epsilon(0.2));
}

TEST_CASE("linear_bound_check: zero inputs and single-mode margin") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 0.0);
    led.gamma = 0.0;
    led.refresh();

    SolverConfig cfg;
    cfg.gamma = 0.0;
    cfg.t_end = 2.0;
    cfg.dt = 0.05;
    cfg = cfg.validated(d);
    auto g = linear_grid(cfg);

    auto zero_omega = constant_trajectory(SpectralField(d), g.t0, cfg.dt, g.steps);
    auto zero_f = constant_vtrajectory(VectorSpectralField(d), g.t0, cfg.dt, g.steps);
    auto u0 = duhamel_linear(zero_omega, zero_f, cfg);
    auto rep0 = linear_bound_check(u0, zero_omega, 0.0, led);
    CHECK(rep0.pass);
    CHECK(rep0.lhs == 0.0);

    const double eps = 0.01;
    auto f = constant_vtrajectory(sine_mode(d, 0, {1, 0}, eps), g.t0, cfg.dt, g.steps);
    auto u = duhamel_linear(zero_omega, f, cfg);
    const double f_sup = lp_norm(f.values[0], 3.5 / 3.0);
    auto rep = linear_bound_check(u, zero_omega, f_sup, led);
    CHECK(rep.pass);
    CHECK(rep.lhs == doctest::Approx(lp_norm(cosine_mode(d, {1, 0}, eps), 1.75)).epsilon(1e-6));
    CHECK(rep.rhs == doctest::Approx(led.Ktilde * f_sup).epsilon(1e-12));
}

TEST_CASE("oracle equivalence: picard fixed point vs fine-step RK4 integrator") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    auto f = const_forcing(d, 0.003);
    f.ap.terms[0].freq = 1.0;
    f.ap.terms.push_back({std::sqrt(2.0), 0.4, 1.0, sine_mode(d, 0, {2, 1}, 0.002)});

    SolverConfig cfg;
    cfg.t_end = 1.0;
    cfg.dt = 0.02;
    cfg.tol = 1e-11;
    cfg = cfg.validated(d);
    auto res = picard_solve(f, cfg, led);

    auto mol = oracle::mol_rk4_solve(res.u.values[0], &f, cfg.gamma, 0.0, 1.0, cfg.dt, 50);
    SpectralField diff = res.u.at_time(1.0);
    diff -= mol.values.back();
    const double rel = diff.l2_parseval() / mol.values.back().l2_parseval();
    CHECK(rel <= 1e-4);
}

TEST_CASE("pap_preservation_test: pure AP and pure PAP0 forcings") {
    BoxDomain d = small_domain();
    auto led = test_ledger(d, 1.0);
    SolverConfig cfg;
    cfg.t_start = -80.0;
    cfg.t_end = 80.0;
    cfg.dt = 0.05;
    cfg.tol = 1e-9;
    cfg = cfg.validated(d);

    // purely AP: the residual against the AP-only solve vanishes
    PapSignal<VectorSpectralField> f_ap(d);
    f_ap.ap.terms.push_back({1.0, 0.0, 1.0, sine_mode(d, 0, {1, 0}, 0.002)});
    const auto rep_ap = pap_preservation_test(f_ap, cfg, led, 1e-3, 6.0, 0.6, {10.0, 20.0});
    CHECK(rep_ap.pass_ap_bound);
    CHECK(std::abs(rep_ap.T - 2.0 * kPi) <= 0.1);
    for (double ml : rep_ap.ergodic_means) CHECK(ml <= cfg.tol);

    // purely PAP0 (exponential envelope): ergodic means decay, M80 <= 0.3 M10
    PapSignal<VectorSpectralField> f_p0(d);
    Pap0Part<VectorSpectralField> p0;
    p0.kind = EnvelopeKind::Exponential;
    p0.rate = 1.0;
    p0.scale = 0.003;
    p0.profile = sine_mode(d, 0, {1, 1}, 1.0);
    f_p0.pap0 = p0;
    const auto rep_p0 =
        pap_preservation_test(f_p0, cfg, led, 1e-3, 6.0, 0.6, {10.0, 20.0, 40.0, 80.0});
    CHECK(rep_p0.pass_ap_bound);  // vacuous bound for an empty AP part
    CHECK(rep_p0.decay_monotone);
    CHECK(rep_p0.ergodic_means[3] <= 0.3 * rep_p0.ergodic_means[0]);
}
