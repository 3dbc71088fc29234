#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kspap/constants.hpp"
#include "kspap/errors.hpp"
#include "kspap/hyperbolic.hpp"
#include "kspap/suite.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    int jobs = 1;
    double p = 3.5;
    double gamma = 1.0;
    double dt = 0.02;
    double t_end = 20.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_path, "JSON config file (overrides flags)");
    cmd->add_option("--seed", o.seed, "master seed");
    cmd->add_option("--jobs", o.jobs, "parallel experiment jobs");
    cmd->add_option("--out", o.out_dir, "output directory");
    cmd->add_option("--p", o.p, "integrability exponent p");
    cmd->add_option("--gamma", o.gamma, "chemoattractant decay rate gamma");
    cmd->add_option("--dt", o.dt, "time step");
    cmd->add_option("--t-end", o.t_end, "window end");
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw kspap::ConfigError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Build a one-experiment suite from the flags; a --config file wins over
// flag values wherever both specify a field.
json base_config(const CommonOpts& o) {
    json j;
    j["name"] = "cli";
    j["seed"] = o.seed;
    j["out"] = o.out_dir;
    j["domain"] = {{"side_lengths", {M_PI, M_PI}}, {"modes", 32}};
    j["solver"] = {{"p", o.p}, {"gamma", o.gamma}, {"dt", o.dt}, {"t_end", o.t_end}};
    if (!o.config_path.empty()) {
        const json file = json::parse(slurp(o.config_path));
        j.merge_patch(file);
    }
    return j;
}

int run_single(const CommonOpts& o, json experiment) {
    json j = base_config(o);
    if (!j.contains("experiments")) {
        experiment["name"] = experiment.value("name", experiment["kind"]);
        j["experiments"] = json::array({experiment});
    }
    const auto suite = kspap::ExperimentSuite::from_json(j.dump());
    const auto outcome = kspap::run_suite(suite, o.jobs);
    for (const auto& r : outcome.results)
        std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.message << '\n';
    std::cout << "manifest: " << outcome.manifest_path << '\n';
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Keller-Segel simulation and verification laboratory"};
    app.require_subcommand(1);

    CommonOpts constants_o, verify_o, linear_o, pap_o, stab_o, suite_o;

    auto* c_constants = app.add_subcommand("constants", "fit the constants ledger");
    add_common(c_constants, constants_o);
    int c_trials = 100;
    bool hyperbolic = false;
    double hp = 2.0, hq = 2.0, delta_n = 0.0, sigma_p = 0.0;
    int hn = 2;
    c_constants->add_option("--trials", c_trials, "Monte-Carlo trials per fit");
    c_constants->add_flag("--hyperbolic", hyperbolic, "evaluate hyperbolic-space rate constants");
    c_constants->add_option("--hp", hp, "first exponent of gamma_{p,q}");
    c_constants->add_option("--hq", hq, "second exponent of gamma_{p,q} (inf allowed)");
    c_constants->add_option("--n", hn, "dimension n");
    c_constants->add_option("--delta-n", delta_n,
                            "spectral-gap constant delta_n (required, never defaulted)");
    c_constants->add_option("--sigma-p", sigma_p, "also evaluate sigma(p) at this p");

    auto* c_verify = app.add_subcommand("verify-estimates", "fit semigroup/resolvent constants");
    add_common(c_verify, verify_o);
    int v_trials = 100;
    std::vector<double> v_gammas{0.0, 0.5, 1.0, 2.0};
    c_verify->add_option("--trials", v_trials, "Monte-Carlo trials");
    c_verify->add_option("--gammas", v_gammas, "gamma values for the resolvent-gradient fit");

    auto* c_linear = app.add_subcommand("solve-linear", "linear Duhamel solve + bound check");
    add_common(c_linear, linear_o);

    auto* c_pap = app.add_subcommand("solve-pap", "fixed-point solve / PAP preservation");
    add_common(c_pap, pap_o);

    auto* c_stab = app.add_subcommand("stability", "exponential stability experiment");
    add_common(c_stab, stab_o);
    double s_sigma = 0.5, s_delta = 1e-3;
    std::vector<int> s_mode{1, 0};
    c_stab->add_option("--sigma", s_sigma, "target decay rate (< lambda_1)");
    c_stab->add_option("--delta", s_delta, "perturbation amplitude");
    c_stab->add_option("--perturbation-mode", s_mode, "cosine multi-index of the perturbation");

    auto* c_suite = app.add_subcommand("suite", "run an experiment suite from a config file");
    add_common(c_suite, suite_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_constants->parsed()) {
            if (hyperbolic) {
                if (delta_n <= 0.0)
                    throw kspap::ConfigError("--delta-n is required (and positive) with --hyperbolic");
                const auto rc = kspap::hyperbolic_rate_constants(hp, hq, hn, delta_n);
                json out;
                out["anchor"] = "hyperbolic.dispersive";
                out["gamma_pq"] = rc.gamma_pq;
                out["h_n"] = rc.h_n;
                if (sigma_p > 0.0) out["sigma"] = kspap::hyperbolic_sigma(sigma_p, hn, delta_n);
                std::cout << out.dump(2) << '\n';
                return 0;
            }
            return run_single(constants_o, json{{"kind", "constants"}, {"trials", c_trials}});
        }
        if (c_verify->parsed())
            return run_single(verify_o, json{{"kind", "verify-estimates"},
                                             {"trials", v_trials},
                                             {"p", verify_o.p / 2.0},
                                             {"q", verify_o.p / 3.0},
                                             {"gammas", v_gammas}});
        if (c_linear->parsed()) {
            json e{{"kind", "solve-linear"}};
            e["forcing"] = {{"ap", {{{"freq", 0.0},
                                     {"phase", M_PI / 2.0},
                                     {"amp", 1.0},
                                     {"profile",
                                      {{"mode", {1, 0}}, {"component", 0}, {"amplitude", 0.01}}}}}}};
            return run_single(linear_o, e);
        }
        if (c_pap->parsed()) {
            json e{{"kind", "solve-pap"}};
            e["forcing"] = {{"ap", {{{"freq", 1.0},
                                     {"phase", 0.0},
                                     {"amp", 1.0},
                                     {"profile",
                                      {{"mode", {1, 0}}, {"component", 0}, {"amplitude", 0.002}}}}}}};
            return run_single(pap_o, e);
        }
        if (c_stab->parsed()) {
            json e{{"kind", "stability"},
                   {"sigma", s_sigma},
                   {"delta", s_delta},
                   {"perturbation_mode", s_mode}};
            e["forcing"] = {{"ap", {{{"freq", 1.0},
                                     {"phase", 0.0},
                                     {"amp", 1.0},
                                     {"profile",
                                      {{"mode", {1, 0}}, {"component", 0}, {"amplitude", 0.002}}}}}}};
            return run_single(stab_o, e);
        }
        if (c_suite->parsed()) {
            if (suite_o.config_path.empty())
                throw kspap::ConfigError("suite: --config <path> is required");
            auto suite = kspap::ExperimentSuite::from_file(suite_o.config_path);
            if (suite_o.out_dir != "out") suite.out_dir = suite_o.out_dir;
            const auto outcome = kspap::run_suite(suite, suite_o.jobs);
            for (const auto& r : outcome.results)
                std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  " << r.message
                          << '\n';
            std::cout << "manifest: " << outcome.manifest_path << '\n';
            return outcome.exit_code;
        }
    } catch (const kspap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
