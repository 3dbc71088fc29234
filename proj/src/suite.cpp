#include "kspap/suite.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "kspap/errors.hpp"
#include "kspap/estimates.hpp"
#include "kspap/field_io.hpp"
#include "kspap/operators.hpp"
#include "kspap/stability.hpp"

namespace kspap {

namespace {

using nlohmann::json;

json parse(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

BoxDomain domain_from(const json& j) {
    if (!j.contains("domain")) throw ConfigError("config: missing 'domain'");
    const auto& d = j["domain"];
    std::vector<double> sides = d.at("side_lengths").get<std::vector<double>>();
    const int modes = d.at("modes").get<int>();
    const int quad = d.value("quadrature_points", 0);
    return BoxDomain(std::move(sides), modes, quad);
}

SolverConfig solver_from(const json& j, const BoxDomain& domain) {
    SolverConfig c;
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        c.p_cfg = s.value("p_cfg", s.value("p", c.p_cfg));
        c.gamma = s.value("gamma", c.gamma);
        c.dt = s.value("dt", c.dt);
        c.t_start = s.value("t_start", c.t_start);
        c.t_end = s.value("t_end", c.t_end);
        c.history_length = s.value("t_hist", 0.0);
        c.tol = s.value("tol", c.tol);
        c.max_iter = s.value("max_iter", c.max_iter);
    }
    return c.validated(domain);
}

// Profile descriptor: either an inline field descriptor (field_io schema) or
// a single-mode builder {"mode": [k...], "component": j, "amplitude": a}.
VectorSpectralField vector_profile_from(const json& j, const BoxDomain& domain) {
    if (j.contains("components")) return vector_field_from_json(j.dump());
    const auto k = j.at("mode").get<std::vector<int>>();
    const int comp = j.at("component").get<int>();
    const double amp = j.value("amplitude", 1.0);
    return sine_mode(domain, comp, k, amp);
}

PapSignal<VectorSpectralField> forcing_from(const json& j, const BoxDomain& domain) {
    PapSignal<VectorSpectralField> f(domain);
    if (j.contains("ap")) {
        for (const auto& term : j["ap"]) {
            ApTerm<VectorSpectralField> t{term.value("freq", 0.0), term.value("phase", 0.0),
                                          term.value("amp", 1.0),
                                          vector_profile_from(term.at("profile"), domain)};
            f.ap.terms.push_back(std::move(t));
        }
    }
    if (j.contains("pap0") && !j["pap0"].is_null()) {
        const auto& p0 = j["pap0"];
        Pap0Part<VectorSpectralField> part;
        const std::string kind = p0.value("kind", "exponential");
        if (kind == "exponential")
            part.kind = EnvelopeKind::Exponential;
        else if (kind == "power")
            part.kind = EnvelopeKind::Power;
        else
            throw ConfigError("forcing: unknown pap0 kind '" + kind + "'");
        part.rate = p0.value("rate", 1.0);
        part.scale = p0.value("scale", 1.0);
        part.profile = vector_profile_from(p0.at("profile"), domain);
        f.pap0 = std::move(part);
    }
    return f;
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

ExperimentResult run_constants(const json& e, const BoxDomain& domain, const SolverConfig& cfg,
                               std::uint64_t seed, const std::string& out_dir,
                               const std::string& name) {
    ExperimentResult r;
    r.kind = "constants";
    const int trials = e.value("trials", 100);
    const auto led = ConstantsLedger::fit(domain, cfg.p_cfg, cfg.gamma, trials, seed);
    const auto path = join_path(out_dir, name + "_ledger.json");
    std::ofstream(path) << led.to_json();
    r.artifacts.push_back(path);
    r.pass = std::isfinite(led.Ktilde) && led.contraction_modulus < 1.0;
    std::ostringstream msg;
    msg << "Ktilde=" << led.Ktilde << " rho=" << led.rho << " f_max=" << led.f_max;
    r.message = msg.str();
    return r;
}

ExperimentResult run_verify_estimates(const json& e, const BoxDomain& domain,
                                      const SolverConfig& cfg, std::uint64_t seed,
                                      const std::string& out_dir, const std::string& name) {
    ExperimentResult r;
    r.kind = "verify-estimates";
    const int trials = e.value("trials", 100);
    const double p = e.value("p", cfg.p_cfg / 2.0);
    const double q = e.value("q", cfg.p_cfg / 3.0);
    auto tg = log_grid(e.value("t_lo", 1e-3), e.value("t_hi", 10.0), e.value("t_count", 20));
    bool ok = true;

    auto disp = verify_dispersive(domain, p, q, tg, trials, derive_seed(seed, "dispersive"));
    auto smoo = verify_smoothing(domain, p, q, tg, trials, derive_seed(seed, "smoothing"));
    ok = ok && !disp.exceeded && !smoo.exceeded;
    for (const auto* rep : {&disp, &smoo}) {
        const auto base = join_path(out_dir, name + "_" + rep->anchor);
        std::ofstream(base + ".json") << rep->to_json();
        rep->write_csv(base + ".csv");
        r.artifacts.push_back(base + ".json");
        r.artifacts.push_back(base + ".csv");
    }
    std::ostringstream msg;
    msg << "k1=" << disp.fitted_constant << " k2=" << smoo.fitted_constant;
    if (e.contains("gammas")) {
        for (double g : e["gammas"].get<std::vector<double>>()) {
            auto lj = verify_lj_bound(domain, p, g, trials, derive_seed(seed, "lj"));
            ok = ok && !lj.exceeded && std::isfinite(lj.fitted_constant);
            std::ostringstream gname;
            gname << name << "_lj_gamma" << g;
            const auto base = join_path(out_dir, gname.str());
            std::ofstream(base + ".json") << lj.to_json();
            r.artifacts.push_back(base + ".json");
            msg << " C(gamma=" << g << ")=" << lj.fitted_constant;
        }
    }
    r.pass = ok;
    r.message = msg.str();
    return r;
}

ExperimentResult run_solve_pap(const json& e, const BoxDomain& domain, const SolverConfig& cfg,
                               std::uint64_t seed, const std::string& out_dir,
                               const std::string& name) {
    ExperimentResult r;
    r.kind = "solve-pap";
    const int trials = e.value("ledger_trials", 100);
    const auto led =
        ConstantsLedger::fit(domain, cfg.p_cfg, cfg.gamma, trials, derive_seed(seed, "ledger"));
    const auto f = forcing_from(e.at("forcing"), domain);

    if (e.contains("eps")) {
        auto rep = pap_preservation_test(f, cfg, led, e["eps"].get<double>(),
                                         e.value("window_lo", 28.0), e.value("window_len", 7.0),
                                         e.value("L_values", std::vector<double>{10, 20, 40, 80}));
        const auto path = join_path(out_dir, name + "_pap_report.json");
        std::ofstream(path) << rep.to_json();
        r.artifacts.push_back(path);
        r.pass = rep.pass_ap_bound && rep.decay_monotone;
        std::ostringstream msg;
        msg << "T=" << rep.T << " shift=" << rep.shift_sup << " bound=" << rep.shift_bound;
        r.message = msg.str();
    } else {
        const auto res = picard_solve(f, cfg, led);
        const auto traj_path = join_path(out_dir, name + "_trajectory.csv");
        const auto log_path = join_path(out_dir, name + "_iterations.csv");
        const auto led_path = join_path(out_dir, name + "_ledger.json");
        write_trajectory_csv(res.u, traj_path);
        res.log.write_csv(log_path);
        std::ofstream(led_path) << led.to_json();
        r.artifacts = {traj_path, log_path, led_path};
        r.pass = res.log.converged;
        std::ostringstream msg;
        msg << "iterations=" << res.log.iterations << " residual=" << res.log.residual;
        r.message = msg.str();
    }
    return r;
}

ExperimentResult run_solve_linear(const json& e, const BoxDomain& domain, const SolverConfig& cfg,
                                  std::uint64_t seed, const std::string& out_dir,
                                  const std::string& name) {
    ExperimentResult r;
    r.kind = "solve-linear";
    const int trials = e.value("ledger_trials", 100);
    const auto led =
        ConstantsLedger::fit(domain, cfg.p_cfg, cfg.gamma, trials, derive_seed(seed, "ledger"));
    const auto f = forcing_from(e.at("forcing"), domain);
    PapSignal<VectorSpectralField> fsignal = f;

    // omega defaults to zero; an "omega" block gives a scalar-profile AP signal.
    const int n_h = static_cast<int>(std::ceil(cfg.history_length / cfg.dt));
    const double t_lo = -n_h * cfg.dt;
    const int steps = n_h + static_cast<int>(std::lround(cfg.t_end / cfg.dt)) + 1;
    Trajectory<SpectralField> omega;
    omega.t0 = t_lo;
    omega.dt = cfg.dt;
    omega.values.assign(steps, SpectralField(domain));
    if (e.contains("omega")) {
        PapSignal<SpectralField> ws(domain);
        for (const auto& term : e["omega"]["ap"]) {
            const auto k = term.at("profile").at("mode").get<std::vector<int>>();
            ApTerm<SpectralField> t{term.value("freq", 0.0), term.value("phase", 0.0),
                                    term.value("amp", 1.0),
                                    cosine_mode(domain, k, term.at("profile").value("amplitude", 1.0))};
            ws.ap.terms.push_back(std::move(t));
        }
        omega = sample_signal(ws, t_lo, cfg.dt, steps);
    }
    auto ftraj_values = std::vector<VectorSpectralField>();
    ftraj_values.reserve(steps);
    for (int i = 0; i < steps; ++i) ftraj_values.push_back(fsignal.sample(t_lo + i * cfg.dt));
    Trajectory<VectorSpectralField> ftraj;
    ftraj.t0 = t_lo;
    ftraj.dt = cfg.dt;
    ftraj.values = std::move(ftraj_values);

    const auto u = duhamel_linear(omega, ftraj, cfg);
    const double f_sup = signal_sup_norm(fsignal, cfg.p_cfg / 3.0);
    const auto rep = linear_bound_check(u, omega, f_sup, led);

    const auto traj_path = join_path(out_dir, name + "_trajectory.csv");
    const auto rep_path = join_path(out_dir, name + "_bound.json");
    write_trajectory_csv(u, traj_path);
    std::ofstream(rep_path) << rep.to_json();
    r.artifacts = {traj_path, rep_path};
    r.pass = rep.pass;
    std::ostringstream msg;
    msg << "sup||u||=" << rep.lhs << " bound=" << rep.rhs;
    r.message = msg.str();
    (void)seed;
    return r;
}

ExperimentResult run_stability(const json& e, const BoxDomain& domain, const SolverConfig& cfg,
                               std::uint64_t seed, const std::string& out_dir,
                               const std::string& name) {
    ExperimentResult r;
    r.kind = "stability";
    const int trials = e.value("ledger_trials", 100);
    const auto led =
        ConstantsLedger::fit(domain, cfg.p_cfg, cfg.gamma, trials, derive_seed(seed, "ledger"));
    const auto f = forcing_from(e.at("forcing"), domain);
    const double sigma = e.at("sigma").get<double>();
    const double delta = e.value("delta", 1e-3);
    const auto kmode = e.at("perturbation_mode").get<std::vector<int>>();
    const SpectralField pert = cosine_mode(domain, kmode, delta);

    const auto csv_path = join_path(out_dir, name + "_norms.csv");
    const auto rep = stability_experiment(f, pert, sigma, cfg, led, csv_path);
    const auto rep_path = join_path(out_dir, name + "_report.json");
    std::ofstream(rep_path) << rep.to_json();
    r.artifacts = {csv_path, rep_path};
    r.pass = rep.pass_semigroup_side && rep.pass_difference_side;
    std::ostringstream msg;
    msg << "sigma_target=" << sigma << " sigma_fitted=" << rep.sigma_fitted;
    r.message = msg.str();
    return r;
}

ExperimentResult run_one(const json& e, const json& root, std::uint64_t master,
                         const std::string& out_dir) {
    const std::string kind = e.value("kind", "");
    const std::string name = e.value("name", kind);
    ExperimentResult r;
    try {
        const BoxDomain domain = domain_from(e.contains("domain") ? e : root);
        const SolverConfig cfg = solver_from(e.contains("solver") ? e : root, domain);
        const std::uint64_t seed = derive_seed(master, name);
        if (kind == "constants")
            r = run_constants(e, domain, cfg, seed, out_dir, name);
        else if (kind == "verify-estimates")
            r = run_verify_estimates(e, domain, cfg, seed, out_dir, name);
        else if (kind == "solve-pap")
            r = run_solve_pap(e, domain, cfg, seed, out_dir, name);
        else if (kind == "solve-linear")
            r = run_solve_linear(e, domain, cfg, seed, out_dir, name);
        else if (kind == "stability")
            r = run_stability(e, domain, cfg, seed, out_dir, name);
        else
            throw ConfigError("unknown experiment kind '" + kind + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        r.kind = kind;
        r.pass = false;
        r.message = ex.what();
    }
    r.name = name;
    return r;
}

}  // namespace

ExperimentSuite ExperimentSuite::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open suite config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

ExperimentSuite ExperimentSuite::from_json(const std::string& text) {
    const json j = parse(text, "suite config");
    ExperimentSuite s;
    s.name = j.value("name", "suite");
    s.out_dir = j.value("out", ".");
    s.master_seed = j.value("seed", 42ULL);
    s.config_json = text;
    return s;
}

SuiteOutcome run_suite(const ExperimentSuite& suite, int jobs) {
    const json root = parse(suite.config_json, "suite config");
    std::filesystem::create_directories(suite.out_dir);
    std::vector<json> experiments;
    if (root.contains("experiments"))
        for (const auto& e : root["experiments"]) experiments.push_back(e);

    SuiteOutcome out;
    out.results.resize(experiments.size());
    const int njobs = std::max(1, jobs);
    std::size_t next = 0;
    while (next < experiments.size()) {
        std::vector<std::pair<std::size_t, std::future<ExperimentResult>>> batch;
        for (int k = 0; k < njobs && next < experiments.size(); ++k, ++next) {
            const std::size_t idx = next;
            batch.emplace_back(idx, std::async(std::launch::async, [&, idx] {
                                   return run_one(experiments[idx], root, suite.master_seed,
                                                  suite.out_dir);
                               }));
        }
        for (auto& [idx, fut] : batch) out.results[idx] = fut.get();
    }

    json manifest;
    manifest["suite"] = suite.name;
    manifest["seed"] = suite.master_seed;
    manifest["experiments"] = json::array();
    bool all_pass = true;
    for (const auto& r : out.results) {
        manifest["experiments"].push_back({{"name", r.name},
                                           {"kind", r.kind},
                                           {"pass", r.pass},
                                           {"message", r.message},
                                           {"artifacts", r.artifacts}});
        all_pass = all_pass && r.pass;
    }
    out.exit_code = all_pass ? 0 : 1;
    out.manifest_path = join_path(suite.out_dir, "manifest.json");
    std::ofstream(out.manifest_path) << manifest.dump(2) << '\n';
    std::ofstream(join_path(suite.out_dir, "plot.gp"))
        << "# gnuplot starting points for the CSV artifacts in this directory\n"
           "# estimate fits:   plot '<name>.csv' using 1:2 w lp t 'ratio max', \\\n"
           "#                       '' using 1:3 w lp t 'ratio mean'\n"
           "# set logscale x   # the t grids are log-spaced\n"
           "# stability norms: plot '<name>_norms.csv' using 1:2 w l, '' using 1:3 w l\n"
           "# set logscale y   # exponential decay shows as a straight line\n"
           "# trajectories:    plot '<name>_trajectory.csv' using 1:2 w l t 'c0'\n";
    return out;
}

BoxDomain domain_from_config(const std::string& json_text) {
    return domain_from(parse(json_text, "config"));
}

SolverConfig solver_from_config(const std::string& json_text, const BoxDomain& domain) {
    return solver_from(parse(json_text, "config"), domain);
}

PapSignal<VectorSpectralField> forcing_from_config(const std::string& json_text,
                                                   const BoxDomain& domain) {
    const json j = parse(json_text, "forcing config");
    return forcing_from(j.contains("forcing") ? j["forcing"] : j, domain);
}

}  // namespace kspap
