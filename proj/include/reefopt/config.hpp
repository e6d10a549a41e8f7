#ifndef REEFOPT_CONFIG_HPP
#define REEFOPT_CONFIG_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include "reefopt/antenna.hpp"
#include "reefopt/bsop.hpp"
#include "reefopt/engine.hpp"
#include "reefopt/tmd.hpp"

namespace reefopt {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { Sphere, Bsop, Tmd, AntennaTrace };

std::string problem_kind_name(ProblemKind kind);

// A fully parsed run description: the problem instance, the engine parameters
// (substrates included) and the output directory. One file determines a run.
struct RunConfig {
    ProblemKind kind = ProblemKind::Sphere;
    std::shared_ptr<Problem> problem;
    RunParams params;
    std::string output_dir = "out";

    // set when kind matches, for FRF / billing report plumbing
    std::shared_ptr<TmdProblem> tmd;
    std::shared_ptr<BsopProblem> bsop;
};

// Strict schema: unknown keys are rejected, schedules are a number or a
// [start, end] pair. Throws ConfigError with a position-anchored message.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Solution files. TMD solutions are {"omega": [...], "xi": [...], "m": [...],
// "fb": [...]}; any problem also accepts {"genome": [...]}.
Genome load_solution(const std::string& path, const RunConfig& config);
TmdDesign load_tmd_solution(const std::string& path);

} // namespace reefopt

#endif
