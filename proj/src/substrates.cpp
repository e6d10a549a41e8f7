#include "reefopt/substrates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reefopt {

std::string substrate_kind_name(SubstrateKind kind) {
    switch (kind) {
        case SubstrateKind::HS: return "HS";
        case SubstrateKind::DE: return "DE";
        case SubstrateKind::TwoPx: return "2Px";
        case SubstrateKind::MPx: return "MPx";
        case SubstrateKind::GM: return "GM";
        case SubstrateKind::SAbM: return "SAbM";
    }
    throw std::invalid_argument("unknown substrate kind");
}

SubstrateKind substrate_kind_from_name(const std::string& name) {
    if (name == "HS") return SubstrateKind::HS;
    if (name == "DE") return SubstrateKind::DE;
    if (name == "2Px") return SubstrateKind::TwoPx;
    if (name == "MPx") return SubstrateKind::MPx;
    if (name == "GM") return SubstrateKind::GM;
    if (name == "SAbM") return SubstrateKind::SAbM;
    throw std::invalid_argument("unknown substrate kind: " + name);
}

double schedule_value(double start, double end, int iteration, int total_iterations) {
    if (total_iterations < 1) throw std::invalid_argument("schedule_value: total_iterations < 1");
    if (total_iterations == 1) return start;
    return start + (end - start) * static_cast<double>(iteration) /
                       static_cast<double>(total_iterations - 1);
}

double LinearSchedule::at(int iteration, int total_iterations) const {
    return schedule_value(start, end, iteration, total_iterations);
}

void SubstrateConfig::validate(const EncodingSpec& encoding) const {
    if (kind == SubstrateKind::HS) {
        if (hmcr < 0.0 || hmcr > 1.0 || par < 0.0 || par > 1.0)
            throw std::invalid_argument("HS: HMCR and PAR must lie in [0,1]");
        if (!delta_by_group.empty() &&
            delta_by_group.size() != static_cast<std::size_t>(encoding.group_count()))
            throw std::invalid_argument("HS: delta_by_group size must match encoding groups");
    }
    if (kind == SubstrateKind::MPx) {
        if (m_points < 1) throw std::invalid_argument("MPx: point count must be >= 1");
        if (static_cast<std::size_t>(m_points) >= encoding.size())
            throw std::invalid_argument("MPx: point count must be below genome length");
    }
    auto finite = [](const LinearSchedule& s) {
        return std::isfinite(s.start) && std::isfinite(s.end);
    };
    if (!finite(f) || !finite(sigma))
        throw std::invalid_argument("substrate: schedule endpoints must be finite");
    for (const auto& d : delta_by_group)
        if (!finite(d)) throw std::invalid_argument("substrate: schedule endpoints must be finite");
}

static double random_gene_value(const GeneSpec& gene, RngStream& rng) {
    if (gene.kind == GeneKind::Integer)
        return static_cast<double>(rng.uniform_int(static_cast<std::int64_t>(gene.lower),
                                                   static_cast<std::int64_t>(gene.upper)));
    return rng.uniform(gene.lower, gene.upper);
}

Genome random_genome(const EncodingSpec& encoding, RngStream& rng) {
    Genome g(encoding.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = random_gene_value(encoding.genes[i], rng);
    return g;
}

std::optional<std::vector<std::pair<double, double>>>
quadratic_map_iterate(const AttractorSpec& spec, int steps) {
    if (steps < 2 || steps > 5000)
        throw std::invalid_argument("quadratic_map_iterate: steps must lie in [2,5000]");
    const auto& a = spec.a;
    std::vector<std::pair<double, double>> z;
    z.reserve(steps);
    double x = 0.05, y = 0.05;
    for (int k = 0; k < steps; ++k) {
        const double xn = a[0] + a[1] * x + a[2] * x * x + a[3] * x * y + a[4] * y + a[5] * y * y;
        const double yn = a[6] + a[7] * x + a[8] * x * x + a[9] * x * y + a[10] * y + a[11] * y * y;
        x = xn;
        y = yn;
        if (!std::isfinite(x) || !std::isfinite(y) || std::abs(x) > 1e6 || std::abs(y) > 1e6)
            return std::nullopt;
        z.emplace_back(x, y);
    }
    return z;
}

Genome hs_mutate(const Genome& coral, const std::vector<const Genome*>& population,
                 double hmcr, double par, const std::vector<double>& delta_by_group,
                 const EncodingSpec& encoding, RngStream& rng) {
    Genome larva(coral.size());
    for (std::size_t i = 0; i < coral.size(); ++i) {
        const GeneSpec& gene = encoding.genes[i];
        double v;
        if (!population.empty() && rng.bernoulli(hmcr)) {
            const auto* member =
                population[rng.uniform_int(0, static_cast<std::int64_t>(population.size()) - 1)];
            v = (*member)[i];
        } else {
            v = random_gene_value(gene, rng);
        }
        if (rng.bernoulli(par)) {
            const double delta = static_cast<std::size_t>(gene.group) < delta_by_group.size()
                                     ? delta_by_group[gene.group]
                                     : 0.0;
            v += rng.bernoulli(0.5) ? delta : -delta;
        }
        larva[i] = v;
    }
    return clamp_round(std::move(larva), encoding);
}

Genome de_mutate(const Genome& x1, const std::vector<const Genome*>& population,
                 double f_value, const EncodingSpec& encoding, RngStream& rng) {
    std::vector<const Genome*> others;
    others.reserve(population.size());
    for (const auto* p : population)
        if (p != &x1) others.push_back(p);
    if (others.size() < 2)
        throw std::invalid_argument("de_mutate: needs at least two other corals");
    const auto i2 = rng.uniform_int(0, static_cast<std::int64_t>(others.size()) - 1);
    std::int64_t i3;
    do {
        i3 = rng.uniform_int(0, static_cast<std::int64_t>(others.size()) - 1);
    } while (i3 == i2);
    const Genome& x2 = *others[i2];
    const Genome& x3 = *others[i3];
    Genome larva(x1.size());
    for (std::size_t i = 0; i < x1.size(); ++i) larva[i] = x1[i] + f_value * (x2[i] - x3[i]);
    return clamp_round(std::move(larva), encoding);
}

std::pair<Genome, Genome> crossover_2p(const Genome& parent_a, const Genome& parent_b,
                                       RngStream& rng) {
    if (parent_a.size() != parent_b.size())
        throw std::invalid_argument("crossover_2p: parent length mismatch");
    const auto n = static_cast<std::int64_t>(parent_a.size());
    auto u = rng.uniform_int(0, n - 1);
    auto v = rng.uniform_int(0, n - 1);
    std::size_t i = static_cast<std::size_t>(std::min(u, v));
    std::size_t j = static_cast<std::size_t>(std::max(u, v));
    if (i == j) j = static_cast<std::size_t>(n);  // degenerates to one-point at i
    Genome c1 = parent_a, c2 = parent_b;
    for (std::size_t k = i; k < j; ++k) std::swap(c1[k], c2[k]);
    return {std::move(c1), std::move(c2)};
}

std::pair<Genome, Genome> crossover_mp(const Genome& parent_a, const Genome& parent_b,
                                       int m_points, RngStream& rng) {
    if (parent_a.size() != parent_b.size())
        throw std::invalid_argument("crossover_mp: parent length mismatch");
    const int n = static_cast<int>(parent_a.size());
    if (m_points < 1 || m_points >= n)
        throw std::invalid_argument("crossover_mp: invalid point count");
    // m distinct cut positions in 1..n-1
    auto perm = rng.permutation(n - 1);
    std::vector<int> cuts(perm.begin(), perm.begin() + m_points);
    for (int& c : cuts) ++c;
    std::sort(cuts.begin(), cuts.end());
    Genome c1 = parent_a, c2 = parent_b;
    bool swapped = false;
    std::size_t next_cut = 0;
    for (int k = 0; k < n; ++k) {
        if (next_cut < cuts.size() && k == cuts[next_cut]) {
            swapped = !swapped;
            ++next_cut;
        }
        if (swapped) std::swap(c1[k], c2[k]);
    }
    return {std::move(c1), std::move(c2)};
}

Genome gaussian_mutate(const Genome& coral, const std::vector<double>& sigma_by_gene,
                       const EncodingSpec& encoding, RngStream& rng) {
    Genome larva(coral.size());
    for (std::size_t i = 0; i < coral.size(); ++i)
        larva[i] = coral[i] + sigma_by_gene[i] * rng.gaussian();
    return clamp_round(std::move(larva), encoding);
}

Genome sabm_mutate(const Genome& coral, const EncodingSpec& encoding, RngStream& rng,
                   const std::vector<double>& fallback_sigma) {
    const int n = static_cast<int>(coral.size());
    for (int attempt = 0; attempt < 20; ++attempt) {
        AttractorSpec spec;
        for (auto& c : spec.a) c = rng.uniform(-1.2, 1.2);
        spec.s_iterations = static_cast<int>(rng.uniform_int(std::max(n, 2), 5000));
        auto traj = quadratic_map_iterate(spec, spec.s_iterations);
        if (!traj) continue;
        auto perm = rng.permutation(spec.s_iterations);
        Genome larva(coral.size());
        for (int i = 0; i < n; ++i) {
            const auto& z = (*traj)[perm[i]];
            const double value = rng.bernoulli(0.5) ? z.first : z.second;
            const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
            larva[i] = coral[i] + sign * value;
        }
        return clamp_round(std::move(larva), encoding);
    }
    return gaussian_mutate(coral, fallback_sigma, encoding, rng);
}

Genome brood(const Genome& coral, const EncodingSpec& encoding, RngStream& rng) {
    Genome larva = coral;
    const auto i = rng.uniform_int(0, static_cast<std::int64_t>(coral.size()) - 1);
    larva[i] = random_gene_value(encoding.genes[i], rng);
    return larva;
}

static std::vector<double> sigma_vector(const SubstrateConfig& config,
                                        const EncodingSpec& encoding, int iteration,
                                        int total_iterations) {
    const double s = config.sigma.at(iteration, total_iterations);
    std::vector<double> out(encoding.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = config.sigma_range_proportional ? s * encoding.range(i) : s;
    return out;
}

std::vector<Genome> substrate_spawn(const SubstrateConfig& config, const Genome& coral,
                                    const std::vector<const Genome*>& population,
                                    const EncodingSpec& encoding, RngStream& rng,
                                    int iteration, int total_iterations) {
    switch (config.kind) {
        case SubstrateKind::HS: {
            std::vector<double> delta(encoding.group_count(), 0.0);
            for (std::size_t g = 0; g < delta.size() && g < config.delta_by_group.size(); ++g)
                delta[g] = config.delta_by_group[g].at(iteration, total_iterations);
            return {hs_mutate(coral, population, config.hmcr, config.par, delta, encoding, rng)};
        }
        case SubstrateKind::DE: {
            std::size_t others = 0;
            for (const auto* p : population) others += (p != &coral);
            if (others < 2) return {brood(coral, encoding, rng)};  // documented fallback
            return {de_mutate(coral, population, config.f.at(iteration, total_iterations),
                              encoding, rng)};
        }
        case SubstrateKind::TwoPx:
        case SubstrateKind::MPx: {
            if (population.empty()) return {brood(coral, encoding, rng)};
            const auto* partner =
                population[rng.uniform_int(0, static_cast<std::int64_t>(population.size()) - 1)];
            auto [c1, c2] = config.kind == SubstrateKind::TwoPx
                                ? crossover_2p(coral, *partner, rng)
                                : crossover_mp(coral, *partner, config.m_points, rng);
            return {std::move(c1), std::move(c2)};
        }
        case SubstrateKind::GM:
            return {gaussian_mutate(coral, sigma_vector(config, encoding, iteration,
                                                        total_iterations),
                                    encoding, rng)};
        case SubstrateKind::SAbM:
            return {sabm_mutate(coral, encoding, rng,
                                sigma_vector(config, encoding, iteration, total_iterations))};
    }
    throw std::invalid_argument("unknown substrate kind");
}

} // namespace reefopt
