#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kspap/estimates.hpp"
#include "kspap/operators.hpp"

using namespace kspap;
constexpr double kPi = std::numbers::pi;

TEST_CASE("dispersive ratio of a pure eigenmode, p = q = 2") {
    BoxDomain d({kPi, kPi}, 8);
    SpectralField cx = cosine_mode(d, {1, 0}, 1.0);  // lambda = lambda_1 = 1
    for (double t : {0.01, 0.5, 3.0}) {
        const double num = lp_norm(heat(cx, t), 2.0);
        const double den = (1.0 + 1.0) * std::exp(-t) * lp_norm(cx, 2.0);  // t^{-0} = 1
        CHECK(num / den == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("smoothing ratio closed form on cos x") {
    BoxDomain d({kPi, kPi}, 8);
    SpectralField cx = cosine_mode(d, {1, 0}, 1.0);
    for (double t : {0.05, 1.0, 10.0}) {
        // grad e^{tD} cos x = -e^{-t} sin x, so the gradient norm is
        // e^{-t} ||sin x||_2.
        const double gnorm = lp_norm(gradient(heat(cx, t)), 2.0);
        CHECK(gnorm == doctest::Approx(std::exp(-t) * kPi / std::sqrt(2.0)).epsilon(1e-12));
        const double den = (1.0 + std::pow(t, -0.5)) * std::exp(-t) * lp_norm(cx, 2.0);
        CHECK(std::isfinite(gnorm / den));
    }
    // constant field: gradient vanishes identically
    SpectralField one = cosine_mode(d, {0, 0}, 4.0);
    CHECK(lp_norm(gradient(heat(one, 0.3)), 2.0) == 0.0);
}

TEST_CASE("verify_dispersive: finite fit, reproducible across reseeds") {
    BoxDomain d({kPi, kPi}, 12);
    auto tg = log_grid(1e-3, 10.0, 12);
    auto r1 = verify_dispersive(d, 1.75, 3.5 / 3.0, tg, 60, 101);
    CHECK(!r1.exceeded);
    CHECK(std::isfinite(r1.fitted_constant));
    CHECK(r1.fitted_constant > 0.0);
    CHECK(r1.fitted_constant ==
          *std::max_element(r1.ratio_max.begin(), r1.ratio_max.end()));

    // The fitted constant is a max statistic; its seed-to-seed spread is a
    // few percent for the pinned pair below (arbitrary pairs can reach ~10%,
    // which is what the validation margin in the acceptance suite absorbs).
    auto r2 = verify_dispersive(d, 1.75, 3.5 / 3.0, tg, 60, 202);
    const double spread = std::abs(r1.fitted_constant - r2.fitted_constant) /
                          std::max(r1.fitted_constant, r2.fitted_constant);
    CHECK(spread <= 0.15);

    // same seed reproduces bit-identically
    auto r3 = verify_dispersive(d, 1.75, 3.5 / 3.0, tg, 60, 101);
    CHECK(r3.fitted_constant == r1.fitted_constant);
}

TEST_CASE("verify_smoothing: finite at large t (no growth)") {
    BoxDomain d({kPi, kPi}, 12);
    auto r = verify_smoothing(d, 1.75, 3.5 / 3.0, {0.001, 0.1, 1.0, 10.0}, 40, 7);
    CHECK(!r.exceeded);
    CHECK(std::isfinite(r.fitted_constant));
    // the t = 10 column stays below the overall fit
    CHECK(r.ratio_max.back() <= r.fitted_constant * (1.0 + 1e-12));
}

TEST_CASE("verify_lj_bound: single-mode ratio and resolvent monotonicity") {
    BoxDomain d({kPi, kPi}, 12);
    const double p = 1.75, q = 14.0;

    SpectralField cx = cosine_mode(d, {1, 0}, 1.0);
    const double direct = lp_norm(lj(cx, 0, 0.0), q) / lp_norm(cx, p);
    CHECK(std::isfinite(direct));
    CHECK(direct > 0.0);
    // |L_x cos x| = |sin x| exactly at gamma = 0, lambda = 1
    CHECK(lp_norm(lj(cx, 0, 0.0), q) ==
          doctest::Approx(lp_norm(SpectralField(cosine_mode(d, {1, 0}, 1.0)), q)).epsilon(1e-6));

    auto r0 = verify_lj_bound(d, p, 0.0, 40, 55);
    auto r1 = verify_lj_bound(d, p, 1.0, 40, 55);
    CHECK(!r0.exceeded);
    CHECK(!r1.exceeded);
    CHECK(r1.fitted_constant <= r0.fitted_constant);

    CHECK_THROWS_AS(verify_lj_bound(d, 2.5, 0.0, 4, 1), std::invalid_argument);
}
