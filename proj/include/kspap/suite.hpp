#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kspap/pap_signal.hpp"
#include "kspap/solver.hpp"

namespace kspap {

struct ExperimentResult {
    std::string name;
    std::string kind;
    bool pass = false;
    std::string message;
    std::vector<std::string> artifacts;
};

// A named list of experiment configs sharing one output directory and one
// master seed; rerunning with the same seed reproduces every fitted constant
// and writes bit-identical deterministic outputs.
struct ExperimentSuite {
    std::string name;
    std::string out_dir = ".";
    std::uint64_t master_seed = 42;
    std::string config_json;  // raw config text (parsed lazily per run)

    static ExperimentSuite from_file(const std::string& path);
    static ExperimentSuite from_json(const std::string& text);
};

struct SuiteOutcome {
    std::vector<ExperimentResult> results;
    int exit_code = 0;  // 0 pass, 1 assertion failure
    std::string manifest_path;
};

// Runs every experiment (up to `jobs` in parallel), writes JSON/CSV artifacts
// and a manifest, and returns nonzero iff an acceptance assertion failed.
SuiteOutcome run_suite(const ExperimentSuite& suite, int jobs = 1);

// Shared config parsing (also used by the single-shot CLI subcommands).
BoxDomain domain_from_config(const std::string& json_text);
SolverConfig solver_from_config(const std::string& json_text, const BoxDomain& domain);
PapSignal<VectorSpectralField> forcing_from_config(const std::string& json_text,
                                                   const BoxDomain& domain);

}  // namespace kspap
