#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kspap/errors.hpp"
#include "kspap/fields.hpp"
#include "oracles.hpp"

using namespace kspap;
constexpr double kPi = std::numbers::pi;

TEST_CASE("first nonzero eigenvalue, closed form") {
    CHECK(BoxDomain({kPi, kPi}, 8).first_eigenvalue() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(BoxDomain({2.0 * kPi}, 8).first_eigenvalue() == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(BoxDomain({kPi, kPi / 2.0}, 8).first_eigenvalue() ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("eigenvalues exact for multi-indices") {
    BoxDomain d({kPi, kPi / 2.0}, 6);
    CHECK(d.eigenvalue({2, 1}) == doctest::Approx(4.0 + 4.0).epsilon(1e-15));
    CHECK(d.eigenvalue({0, 0}) == 0.0);
    CHECK(d.eigenvalue_flat(d.flat_index({3, 2})) == doctest::Approx(9.0 + 16.0).epsilon(1e-15));
}

TEST_CASE("transform picks out single modes") {
    BoxDomain d1({kPi}, 8);
    // samples of cos(x) -> only the k=1 coefficient
    auto grid = to_grid(cosine_mode(d1, {1}, 1.0));
    auto f = to_coefficients(d1, grid);
    for (int k = 0; k <= 8; ++k) {
        const double expected = (k == 1) ? std::sqrt(kPi / 2.0) : 0.0;  // orthonormal scaling
        CHECK(f.coeffs()[k] == doctest::Approx(expected).epsilon(1e-13));
    }
    // all-ones grid -> only k=0
    std::vector<double> ones(d1.grid_count(), 1.0);
    auto c = to_coefficients(d1, ones);
    CHECK(c.coeffs()[0] == doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
    for (int k = 1; k <= 8; ++k) CHECK(std::abs(c.coeffs()[k]) < 1e-13);
    CHECK(c.mean() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("round trip on random band-limited fields <= 1e-12") {
    BoxDomain d({kPi, 1.7}, 12);
    Rng rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralField f = random_field(d, rng, false);
        auto grid = to_grid(f);
        auto back = to_coefficients(d, grid);
        auto grid2 = to_grid(back);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            err = std::max(err, std::abs(grid2[i] - grid[i]));
        for (std::size_t i = 0; i < f.coeffs().size(); ++i)
            err = std::max(err, std::abs(back.coeffs()[i] - f.coeffs()[i]));
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("size mismatch raises") {
    BoxDomain d({kPi}, 4);
    std::vector<double> wrong(3, 0.0);
    CHECK_THROWS_AS(to_coefficients(d, wrong), SizeMismatch);
}

TEST_CASE("lp norms: closed forms") {
    BoxDomain d({kPi, kPi}, 8);
    // constant c: |c| * pi^{2/p}
    SpectralField cfield = cosine_mode(d, {0, 0}, -2.5);
    for (double p : {1.0, 1.75, 2.0, 3.5}) {
        CHECK(lp_norm(cfield, p) ==
              doctest::Approx(2.5 * std::pow(kPi, 2.0 / p)).epsilon(1e-12));
    }
    CHECK(lp_norm(cfield, std::numeric_limits<double>::infinity()) ==
          doctest::Approx(2.5).epsilon(1e-12));
    // cos(x): ||.||_2 = pi/sqrt(2)
    SpectralField cx = cosine_mode(d, {1, 0}, 1.0);
    CHECK(lp_norm(cx, 2.0) == doctest::Approx(kPi / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("lp norm p = 1.75 against the refined quadrature oracle") {
    // Frozen from oracle_lp_norm_2d(|cos x|, 10x finer grid); the integrand
    // has a |.|^{1.75} kink, so the Gauss rule carries a small algebraic
    // error at the default resolution.
    const double frozen = 2.5629267146460134;
    const double again = oracle::lp_norm_2d([](double x, double) { return std::cos(x); }, kPi,
                                            kPi, 1.75, 640);
    CHECK(again == doctest::Approx(frozen).epsilon(1e-6));

    // |cos|^{1.75} has a kink at pi/2, so the Gauss rule converges
    // algebraically: ~2e-4 relative at M = 16, tightening with M.
    BoxDomain d({kPi, kPi}, 8);
    SpectralField cx = cosine_mode(d, {1, 0}, 1.0);
    CHECK(lp_norm(cx, 1.75) == doctest::Approx(frozen).epsilon(5e-4));
    BoxDomain dfine({kPi, kPi}, 8, 128);
    SpectralField cxf = cosine_mode(dfine, {1, 0}, 1.0);
    CHECK(lp_norm(cxf, 1.75) == doctest::Approx(frozen).epsilon(5e-6));
}

TEST_CASE("lp norm rejects p < 1") {
    BoxDomain d({kPi}, 4);
    CHECK_THROWS_AS(lp_norm(SpectralField(d), 0.5), std::invalid_argument);
}

TEST_CASE("scaled Hoelder inequality over random band-limited fields") {
    BoxDomain d({kPi, kPi}, 10);
    const double vol = d.volume();
    Rng rng(11);
    const std::vector<std::pair<double, double>> pq = {{2.0, 1.0}, {3.5, 1.75}, {2.0, 1.1667}};
    for (int trial = 0; trial < 200; ++trial) {
        SpectralField f = random_field(d, rng, false);
        for (auto [p, q] : pq) {
            const double lhs = lp_norm(f, q);
            const double rhs = std::pow(vol, 1.0 / q - 1.0 / p) * lp_norm(f, p);
            CHECK(lhs <= rhs * (1.0 + 1e-8));
        }
    }
}

TEST_CASE("Parseval agreement at p = 2") {
    BoxDomain d({kPi, kPi}, 32);
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        SpectralField f = random_field(d, rng, false);
        const double quad = lp_norm(f, 2.0);
        const double par = f.l2_parseval();
        CHECK(quad == doctest::Approx(par).epsilon(1e-8));
    }
}

TEST_CASE("vector field divergence is mean-zero by construction") {
    BoxDomain d({kPi, 2.0}, 9);
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        VectorSpectralField v = random_vector_field(d, rng);
        SpectralField div = divergence(v);
        CHECK(div.coeffs()[0] == 0.0);
    }
}

TEST_CASE("quadrature oversampling is enforced") {
    CHECK_THROWS_AS(BoxDomain({kPi}, 8, 10), std::invalid_argument);
    CHECK_NOTHROW(BoxDomain({kPi}, 8, 16));
}
