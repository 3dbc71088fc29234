#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "kspap/errors.hpp"
#include "kspap/field_io.hpp"
#include "kspap/hyperbolic.hpp"
#include "kspap/suite.hpp"

using namespace kspap;
constexpr double kPi = std::numbers::pi;
const double kInf = std::numeric_limits<double>::infinity();

TEST_CASE("hyperbolic gamma_pq fixtures") {
    CHECK(hyperbolic_gamma_pq(2.0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(hyperbolic_gamma_pq(1.0, kInf, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(hyperbolic_gamma_pq(3.0, 2.0, 1.0), std::invalid_argument);  // p > q
    CHECK_THROWS_AS(hyperbolic_gamma_pq(2.0, 2.0, 0.0), std::invalid_argument);
    // scaling in delta_n is linear
    CHECK(hyperbolic_gamma_pq(1.5, 4.0, 3.0) ==
          doctest::Approx(3.0 * hyperbolic_gamma_pq(1.5, 4.0, 1.0)).epsilon(1e-14));
}

TEST_CASE("hyperbolic sigma: fixture and min identity") {
    // frozen from exact-fraction evaluation at n = 2, p = 3.5, delta_n = 1
    CHECK(hyperbolic_sigma(3.5, 2, 1.0) ==
          doctest::Approx(0.7244897959183673).epsilon(1e-14));
    // min identity against direct evaluation of the three terms
    for (double p : {3.2, 3.5, 3.8}) {
        const double g0 = hyperbolic_gamma_pq(p / 2.0, p / 2.0, 1.0);
        const double g1 = hyperbolic_gamma_pq(p * 2.0 / (8.0 - p), p / 2.0, 1.0);
        const double g2 = hyperbolic_gamma_pq(p / 3.0, p / 2.0, 1.0);
        const double expect = std::min({g0, 0.5 * (g0 + g1), 0.5 * (g0 + g2)});
        CHECK(hyperbolic_sigma(p, 2, 1.0) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK_THROWS_AS(hyperbolic_sigma(5.0, 2, 1.0), std::invalid_argument);  // p >= 2n
    CHECK_THROWS_AS(hyperbolic_sigma(3.0, 2, 1.0), std::invalid_argument);  // p <= max{3,n}
}

TEST_CASE("hyperbolic rate constants carry the kernel description") {
    const auto rc = hyperbolic_rate_constants(2.0, 2.0, 2, 1.0);
    CHECK(rc.gamma_pq == doctest::Approx(1.0));
    CHECK(rc.h_n.find("max(t^(-2/2), 1)") != std::string::npos);
}

TEST_CASE("field JSON round trip") {
    BoxDomain d({kPi, 1.5}, 5);
    Rng rng(4);
    SpectralField f = random_field(d, rng, false);
    SpectralField back = field_from_json(field_to_json(f));
    CHECK(back.domain().compatible_with(d));
    for (std::size_t i = 0; i < f.coeffs().size(); ++i)
        CHECK(back.coeffs()[i] == f.coeffs()[i]);

    VectorSpectralField v = random_vector_field(d, rng);
    VectorSpectralField vback = vector_field_from_json(field_to_json(v));
    for (int j = 0; j < 2; ++j)
        for (std::size_t i = 0; i < v.component(j).size(); ++i)
            CHECK(vback.component(j)[i] == v.component(j)[i]);
}

TEST_CASE("grid CSV round trip") {
    BoxDomain d({kPi, kPi}, 6);
    Rng rng(8);
    SpectralField f = random_field(d, rng, false);
    const auto path = std::filesystem::temp_directory_path() / "kspap_grid_test.csv";
    write_grid_csv(f, path.string());
    SpectralField back = read_grid_csv(d, path.string());
    for (std::size_t i = 0; i < f.coeffs().size(); ++i)
        CHECK(back.coeffs()[i] == doctest::Approx(f.coeffs()[i]).epsilon(1e-12));
    std::remove(path.string().c_str());
}

TEST_CASE("suite: empty config runs clean, bad config rejected") {
    const auto dir = std::filesystem::temp_directory_path() / "kspap_suite_test";
    std::filesystem::create_directories(dir);
    auto suite = ExperimentSuite::from_json(
        std::string("{\"name\":\"empty\",\"out\":\"") + dir.string() + "\",\"experiments\":[]}");
    const auto outcome = run_suite(suite, 2);
    CHECK(outcome.exit_code == 0);
    CHECK(outcome.results.empty());
    CHECK(std::filesystem::exists(outcome.manifest_path));

    CHECK_THROWS_AS(ExperimentSuite::from_json("{not json"), ConfigError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("suite: forcing above f_max surfaces ForcingTooLarge in the result") {
    const auto dir = std::filesystem::temp_directory_path() / "kspap_suite_toolarge";
    std::filesystem::create_directories(dir);
    const std::string cfg = R"({
      "name": "toolarge", "out": ")" + dir.string() + R"(", "seed": 7,
      "domain": {"side_lengths": [3.141592653589793, 3.141592653589793], "modes": 6},
      "solver": {"p": 3.5, "gamma": 1.0, "dt": 0.1, "t_end": 1.0},
      "experiments": [{
        "kind": "solve-pap", "name": "blowup", "ledger_trials": 10,
        "forcing": {"ap": [{"freq": 0.0, "phase": 1.5707963267948966, "amp": 1.0,
                    "profile": {"mode": [1, 0], "component": 0, "amplitude": 50.0}}]}
      }]
    })";
    auto suite = ExperimentSuite::from_json(cfg);
    const auto outcome = run_suite(suite, 1);
    CHECK(outcome.exit_code == 1);
    REQUIRE(outcome.results.size() == 1);
    CHECK(!outcome.results[0].pass);
    CHECK(outcome.results[0].message.find("exceeds f_max") != std::string::npos);
    std::filesystem::remove_all(dir);
}
