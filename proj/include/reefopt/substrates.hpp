#ifndef REEFOPT_SUBSTRATES_HPP
#define REEFOPT_SUBSTRATES_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reefopt/encoding.hpp"
#include "reefopt/rng.hpp"

namespace reefopt {

enum class SubstrateKind { HS, DE, TwoPx, MPx, GM, SAbM };

std::string substrate_kind_name(SubstrateKind kind);
SubstrateKind substrate_kind_from_name(const std::string& name);

// Linear interpolation over the run: iteration 0 -> start, last -> end.
struct LinearSchedule {
    double start = 0.0;
    double end = 0.0;

    LinearSchedule() = default;
    LinearSchedule(double s, double e) : start(s), end(e) {}
    static LinearSchedule constant(double v) { return {v, v}; }

    double at(int iteration, int total_iterations) const;
};

double schedule_value(double start, double end, int iteration, int total_iterations);

struct SubstrateConfig {
    SubstrateKind kind = SubstrateKind::GM;

    // HS
    double hmcr = 0.9;
    double par = 0.2;
    std::vector<LinearSchedule> delta_by_group;  // one entry per encoding group

    // DE
    LinearSchedule f = LinearSchedule::constant(0.6);

    // MPx
    int m_points = 10;

    // GM (also the SAbM divergence fallback): absolute sigma, or a fraction
    // of each gene's range when range_proportional is set
    LinearSchedule sigma = LinearSchedule::constant(0.1);
    bool sigma_range_proportional = false;

    std::string name() const { return substrate_kind_name(kind); }
    void validate(const EncodingSpec& encoding) const;
};

// Two-dimensional quadratic map used by the strange-attractor mutation.
struct AttractorSpec {
    std::array<double, 12> a{};
    int s_iterations = 2;
};

// Iterates the map from (0.05, 0.05); returns the visited points, or nullopt
// once |x| or |y| exceeds 1e6 (unbounded attractor).
std::optional<std::vector<std::pair<double, double>>>
quadratic_map_iterate(const AttractorSpec& spec, int steps);

// --- broadcast-spawning operators ---
// `population` is the whole occupied reef at the start of the iteration.

Genome hs_mutate(const Genome& coral, const std::vector<const Genome*>& population,
                 double hmcr, double par, const std::vector<double>& delta_by_group,
                 const EncodingSpec& encoding, RngStream& rng);

// x' = x1 + f*(x2 - x3); partners are distinct from x1 and from each other.
// Requires at least two other population members.
Genome de_mutate(const Genome& x1, const std::vector<const Genome*>& population,
                 double f_value, const EncodingSpec& encoding, RngStream& rng);

std::pair<Genome, Genome> crossover_2p(const Genome& parent_a, const Genome& parent_b,
                                       RngStream& rng);

std::pair<Genome, Genome> crossover_mp(const Genome& parent_a, const Genome& parent_b,
                                       int m_points, RngStream& rng);

Genome gaussian_mutate(const Genome& coral, const std::vector<double>& sigma_by_gene,
                       const EncodingSpec& encoding, RngStream& rng);

// Draws bounded attractors (up to 20 attempts, then falls back to a
// range-proportional gaussian at `fallback_sigma`).
Genome sabm_mutate(const Genome& coral, const EncodingSpec& encoding, RngStream& rng,
                   const std::vector<double>& fallback_sigma);

// Single-gene uniform resample; the brooding reproduction path.
Genome brood(const Genome& coral, const EncodingSpec& encoding, RngStream& rng);

// Uniform in-bounds genome (integer genes drawn over their integer range).
Genome random_genome(const EncodingSpec& encoding, RngStream& rng);

// Dispatch: applies the configured operator at the given iteration, selecting
// crossover partners from `population`. Returns one larva, or two for the
// crossover substrates. Degrades to brooding when DE lacks partners.
std::vector<Genome> substrate_spawn(const SubstrateConfig& config, const Genome& coral,
                                    const std::vector<const Genome*>& population,
                                    const EncodingSpec& encoding, RngStream& rng,
                                    int iteration, int total_iterations);

} // namespace reefopt

#endif
