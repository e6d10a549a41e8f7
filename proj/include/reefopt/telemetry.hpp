#ifndef REEFOPT_TELEMETRY_HPP
#define REEFOPT_TELEMETRY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace reefopt {

struct SubstrateIterStats {
    long produced = 0;
    long settled = 0;
    long rejected = 0;
    bool best = false;  // this substrate produced the fittest larva of the iteration
};

struct IterationRecord {
    int iteration = 0;
    double best_fitness = 0.0;
    // One entry per substrate, plus a trailing "brooding" pseudo-substrate.
    std::vector<SubstrateIterStats> per_substrate;
};

struct RunTelemetry {
    std::vector<std::string> substrate_names;  // includes "brooding" last
    std::vector<IterationRecord> records;

    std::uint64_t seed = 0;
    std::string rng_name;
    std::string params_digest;
    long evaluations = 0;
    double seconds = 0.0;
};

// Columns: iteration,best_fitness, then produced_<name>,settled_<name>,best_<name>
// per substrate. LF line endings, 9 significant digits.
void write_csv(const RunTelemetry& telemetry, const std::string& path);

std::string telemetry_csv(const RunTelemetry& telemetry);

// Moving-window percentage of iterations in which each substrate produced the
// best larva. Iterations with no substrate larvae are excluded from the window
// denominator. The brooding pseudo-substrate never carries the flag.
std::vector<std::vector<double>> best_larva_ratio(const RunTelemetry& telemetry,
                                                  int window = 50);

} // namespace reefopt

#endif
