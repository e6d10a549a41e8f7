#ifndef REEFOPT_ENCODING_HPP
#define REEFOPT_ENCODING_HPP

#include <cstddef>
#include <vector>

namespace reefopt {

using Genome = std::vector<double>;

enum class GeneKind { Real, Integer };

struct GeneSpec {
    GeneKind kind = GeneKind::Real;
    double lower = 0.0;
    double upper = 1.0;
    int group = 0;
};

// Per-gene type/bounds shared by the engine, the substrates and the problems.
// Group tags select per-group operator parameters (e.g. the HS delta vector).
struct EncodingSpec {
    std::vector<GeneSpec> genes;

    std::size_t size() const { return genes.size(); }
    int group_count() const;
    double range(std::size_t i) const { return genes[i].upper - genes[i].lower; }

    // Throws std::invalid_argument on bad bounds, non-integral integer bounds
    // or non-contiguous group tags.
    void validate() const;

    bool in_bounds(const Genome& g) const;
};

// Real genes clamped to [lower,upper]; integer genes rounded half-away-from-zero
// and then clamped.
Genome clamp_round(Genome genome, const EncodingSpec& encoding);

// Elementwise equality: |delta| <= tol for real genes, exact for integer genes.
bool genomes_equal(const Genome& a, const Genome& b, const EncodingSpec& encoding,
                   double tol = 1e-12);

EncodingSpec uniform_real_encoding(std::size_t n, double lower, double upper);

} // namespace reefopt

#endif
