#ifndef REEFOPT_ENGINE_HPP
#define REEFOPT_ENGINE_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "reefopt/problem.hpp"
#include "reefopt/rng.hpp"
#include "reefopt/substrates.hpp"
#include "reefopt/telemetry.hpp"

namespace reefopt {

struct Coral {
    Genome genome;
    double fitness = std::numeric_limits<double>::infinity();
    bool evaluated = false;
};

struct RunParams {
    int reef_size = 120;
    std::vector<SubstrateConfig> substrates;
    double rho0 = 0.9;             // initial occupied fraction
    double pb = 0.97;              // per-coral broadcast-spawning probability
    int kappa = 3;                 // settlement attempts
    double fa = 0.05;              // budding fraction
    bool budding_enabled = false;  // no-op under duplicate exclusion; off by default
    double fd = 0.15;              // depredation fraction
    double pd = 0.1;               // depredation probability
    int iterations = 1000;
    int stagnation_window = 0;     // 0 disables regeneration
    double init_perturb_fraction = 0.5;
    double duplicate_tol = 1e-12;
    std::uint64_t seed = 0;

    void validate(const EncodingSpec& encoding) const;
};

// Slot-partitioned population. Slot index determines the substrate:
// contiguous equal partitions of reef_size / substrate_count slots.
struct Reef {
    std::vector<std::optional<Coral>> slots;
    int substrate_count = 1;
    Coral best_ever;
    bool has_best = false;

    int size() const { return static_cast<int>(slots.size()); }
    int slots_per_substrate() const { return size() / substrate_count; }
    int substrate_of(int slot) const { return slot / slots_per_substrate(); }
    int occupied_count() const;
    double best_fitness() const;  // best_ever, or +inf when nothing was ever settled

    // true when some occupied slot holds a genome equal to `g` under the
    // duplicate tolerance
    bool contains_equal(const Genome& g, const EncodingSpec& encoding, double tol) const;
};

enum class SlotProvenance { Empty, Seed, Perturbed, Uniform };

Reef initialize_reef(const RunParams& params, const Problem& problem, RngStream& rng,
                     long* evaluations = nullptr,
                     std::vector<SlotProvenance>* provenance = nullptr);

// As initialize_reef but with an explicit seed list (used by regeneration).
Reef initialize_reef_with_seeds(const RunParams& params, const Problem& problem,
                                const std::vector<Genome>& seeds, RngStream& rng,
                                long* evaluations = nullptr,
                                std::vector<SlotProvenance>* provenance = nullptr);

// Deterministic settlement core given an explicit slot-draw sequence; the
// duplicate check runs first and rejects regardless of fitness.
bool try_settle(Reef& reef, const Coral& larva, const EncodingSpec& encoding, double tol,
                std::span<const int> slot_draws);

bool settle(Reef& reef, const Coral& larva, int kappa, const EncodingSpec& encoding,
            double tol, RngStream& rng);

struct BuddingStats {
    long attempts = 0;
    long settled = 0;
};

BuddingStats budding(Reef& reef, double fa, int kappa, const EncodingSpec& encoding,
                     double tol, RngStream& rng);

// With probability pd removes the floor(fd * occupied) worst corals; ties break
// by slot index (lower index survives) and the current best is never removed.
void depredation(Reef& reef, double fd, double pd, RngStream& rng);

void stagnation_regenerate(Reef& reef, const RunParams& params, const Problem& problem,
                           RngStream& rng, long* evaluations = nullptr);

// One full iteration: spawning, brooding, repair/evaluate, settlement, budding,
// depredation, best_ever update, telemetry record. The iteration index is the
// current telemetry record count.
void iterate(Reef& reef, const RunParams& params, const Problem& problem, RngStream& rng,
             RunTelemetry& telemetry);

struct RunResult {
    Coral best;
    RunTelemetry telemetry;
};

RunResult run(const RunParams& params, const Problem& problem);

std::string params_digest(const RunParams& params);

} // namespace reefopt

#endif
