#include "reefopt/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reefopt {

int EncodingSpec::group_count() const {
    int m = -1;
    for (const auto& g : genes) m = std::max(m, g.group);
    return m + 1;
}

void EncodingSpec::validate() const {
    if (genes.empty()) throw std::invalid_argument("encoding: no genes");
    std::vector<bool> seen(genes.size(), false);
    int max_group = -1;
    for (std::size_t i = 0; i < genes.size(); ++i) {
        const auto& g = genes[i];
        if (!(g.lower <= g.upper))
            throw std::invalid_argument("encoding: lower > upper at gene " + std::to_string(i));
        if (g.kind == GeneKind::Integer &&
            (g.lower != std::floor(g.lower) || g.upper != std::floor(g.upper)))
            throw std::invalid_argument("encoding: non-integral integer bounds at gene " +
                                        std::to_string(i));
        if (g.group < 0)
            throw std::invalid_argument("encoding: negative group tag at gene " + std::to_string(i));
        if (static_cast<std::size_t>(g.group) < seen.size()) seen[g.group] = true;
        max_group = std::max(max_group, g.group);
    }
    for (int t = 0; t <= max_group; ++t)
        if (static_cast<std::size_t>(t) >= seen.size() || !seen[t])
            throw std::invalid_argument("encoding: group tags not contiguous from 0");
}

bool EncodingSpec::in_bounds(const Genome& g) const {
    if (g.size() != genes.size()) return false;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] < genes[i].lower || g[i] > genes[i].upper) return false;
        if (genes[i].kind == GeneKind::Integer && g[i] != std::floor(g[i])) return false;
    }
    return true;
}

Genome clamp_round(Genome genome, const EncodingSpec& encoding) {
    if (genome.size() != encoding.size())
        throw std::invalid_argument("clamp_round: genome length mismatch");
    for (std::size_t i = 0; i < genome.size(); ++i) {
        const auto& g = encoding.genes[i];
        double v = genome[i];
        if (g.kind == GeneKind::Integer) v = std::round(v);  // half away from zero
        genome[i] = std::clamp(v, g.lower, g.upper);
    }
    return genome;
}

bool genomes_equal(const Genome& a, const Genome& b, const EncodingSpec& encoding, double tol) {
    if (a.size() != b.size() || a.size() != encoding.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (encoding.genes[i].kind == GeneKind::Integer) {
            if (a[i] != b[i]) return false;
        } else if (std::abs(a[i] - b[i]) > tol) {
            return false;
        }
    }
    return true;
}

EncodingSpec uniform_real_encoding(std::size_t n, double lower, double upper) {
    EncodingSpec enc;
    enc.genes.assign(n, GeneSpec{GeneKind::Real, lower, upper, 0});
    return enc;
}

} // namespace reefopt
