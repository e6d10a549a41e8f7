#include "reefopt/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace reefopt {

void RunParams::validate(const EncodingSpec& encoding) const {
    encoding.validate();
    if (reef_size < 1) throw std::invalid_argument("params: reef_size must be >= 1");
    if (substrates.empty()) throw std::invalid_argument("params: at least one substrate");
    if (reef_size % static_cast<int>(substrates.size()) != 0)
        throw std::invalid_argument("params: reef_size must be divisible by substrate count");
    if (!(rho0 > 0.0 && rho0 < 1.0)) throw std::invalid_argument("params: rho0 must be in (0,1)");
    if (pb < 0.0 || pb > 1.0) throw std::invalid_argument("params: pb must be in [0,1]");
    if (kappa < 1) throw std::invalid_argument("params: kappa must be >= 1");
    if (fa < 0.0 || fd < 0.0 || fa + fd > 1.0)
        throw std::invalid_argument("params: need fa, fd >= 0 and fa + fd <= 1");
    if (pd < 0.0 || pd > 1.0) throw std::invalid_argument("params: pd must be in [0,1]");
    if (iterations < 0) throw std::invalid_argument("params: iterations must be >= 0");
    if (stagnation_window < 0) throw std::invalid_argument("params: stagnation_window >= 0");
    if (init_perturb_fraction < 0.0 || init_perturb_fraction > 1.0)
        throw std::invalid_argument("params: init_perturb_fraction must be in [0,1]");
    for (const auto& s : substrates) s.validate(encoding);
}

int Reef::occupied_count() const {
    int n = 0;
    for (const auto& s : slots) n += s.has_value();
    return n;
}

double Reef::best_fitness() const {
    return has_best ? best_ever.fitness : std::numeric_limits<double>::infinity();
}

bool Reef::contains_equal(const Genome& g, const EncodingSpec& encoding, double tol) const {
    for (const auto& s : slots)
        if (s && genomes_equal(s->genome, g, encoding, tol)) return true;
    return false;
}

static Coral make_coral(Genome genome, const Problem& problem, long* evaluations) {
    Coral c;
    c.genome = clamp_round(problem.repair(std::move(genome)), problem.encoding());
    c.fitness = problem.evaluate(c.genome);
    c.evaluated = true;
    if (evaluations) ++*evaluations;
    if (!std::isfinite(c.fitness))
        throw std::runtime_error("problem: evaluate returned a non-finite cost");
    return c;
}

static void update_best(Reef& reef, const Coral& c) {
    if (!reef.has_best || c.fitness < reef.best_ever.fitness) {
        reef.best_ever = c;
        reef.has_best = true;
    }
}

Reef initialize_reef_with_seeds(const RunParams& params, const Problem& problem,
                                const std::vector<Genome>& seeds, RngStream& rng,
                                long* evaluations, std::vector<SlotProvenance>* provenance) {
    const EncodingSpec& enc = problem.encoding();
    const int p = params.reef_size;
    const int occupied = static_cast<int>(std::lround(params.rho0 * p));
    if (static_cast<int>(seeds.size()) > occupied)
        throw std::invalid_argument("init: more seed solutions than occupied slots");

    Reef reef;
    reef.slots.resize(p);
    reef.substrate_count = static_cast<int>(params.substrates.size());
    if (provenance) provenance->assign(p, SlotProvenance::Empty);

    const int n_seeds = static_cast<int>(seeds.size());
    const int remaining = occupied - n_seeds;
    const int n_perturbed =
        n_seeds > 0 ? static_cast<int>(std::lround(params.init_perturb_fraction * remaining)) : 0;

    // seeds fill the first slots; the rest of the occupied budget is scattered
    std::vector<int> free_slots;
    for (int i = n_seeds; i < p; ++i) free_slots.push_back(i);
    auto perm = rng.permutation(static_cast<int>(free_slots.size()));

    auto place = [&](int slot, Genome g, SlotProvenance prov) {
        Coral c = make_coral(std::move(g), problem, evaluations);
        update_best(reef, c);
        reef.slots[slot] = std::move(c);
        if (provenance) (*provenance)[slot] = prov;
    };

    for (int i = 0; i < n_seeds; ++i) place(i, seeds[i], SlotProvenance::Seed);
    for (int i = 0; i < remaining; ++i) {
        const int slot = free_slots[perm[i]];
        if (i < n_perturbed) {
            Genome g = seeds.front();
            for (std::size_t k = 0; k < g.size(); ++k)
                g[k] += 0.1 * enc.range(k) * rng.gaussian();
            place(slot, std::move(g), SlotProvenance::Perturbed);
        } else {
            place(slot, random_genome(enc, rng), SlotProvenance::Uniform);
        }
    }
    return reef;
}

Reef initialize_reef(const RunParams& params, const Problem& problem, RngStream& rng,
                     long* evaluations, std::vector<SlotProvenance>* provenance) {
    params.validate(problem.encoding());
    return initialize_reef_with_seeds(params, problem, problem.seed_solutions(), rng,
                                      evaluations, provenance);
}

bool try_settle(Reef& reef, const Coral& larva, const EncodingSpec& encoding, double tol,
                std::span<const int> slot_draws) {
    if (!larva.evaluated) throw std::invalid_argument("settle: larva not evaluated");
    if (reef.contains_equal(larva.genome, encoding, tol)) return false;
    for (int slot : slot_draws) {
        auto& cell = reef.slots.at(slot);
        if (!cell || larva.fitness < cell->fitness) {
            cell = larva;
            update_best(reef, larva);
            return true;
        }
    }
    return false;
}

bool settle(Reef& reef, const Coral& larva, int kappa, const EncodingSpec& encoding,
            double tol, RngStream& rng) {
    std::vector<int> draws(kappa);
    for (int& d : draws) d = static_cast<int>(rng.uniform_int(0, reef.size() - 1));
    return try_settle(reef, larva, encoding, tol, draws);
}

BuddingStats budding(Reef& reef, double fa, int kappa, const EncodingSpec& encoding,
                     double tol, RngStream& rng) {
    BuddingStats stats;
    std::vector<const Coral*> occupied;
    for (const auto& s : reef.slots)
        if (s) occupied.push_back(&*s);
    const int count =
        static_cast<int>(std::ceil(fa * static_cast<double>(occupied.size())));
    if (count <= 0) return stats;
    std::sort(occupied.begin(), occupied.end(),
              [](const Coral* a, const Coral* b) { return a->fitness < b->fitness; });
    std::vector<Coral> clones;
    for (int i = 0; i < count && i < static_cast<int>(occupied.size()); ++i)
        clones.push_back(*occupied[i]);
    for (const auto& clone : clones) {
        ++stats.attempts;
        stats.settled += settle(reef, clone, kappa, encoding, tol, rng);
    }
    return stats;
}

void depredation(Reef& reef, double fd, double pd, RngStream& rng) {
    if (!rng.bernoulli(pd)) return;
    std::vector<int> occupied;
    for (int i = 0; i < reef.size(); ++i)
        if (reef.slots[i]) occupied.push_back(i);
    if (occupied.empty()) return;
    int count = static_cast<int>(std::floor(fd * static_cast<double>(occupied.size())));
    count = std::min<int>(count, static_cast<int>(occupied.size()) - 1);
    if (count <= 0) return;
    // worst first; equal fitness resolved so the lower slot index survives
    std::sort(occupied.begin(), occupied.end(), [&](int a, int b) {
        const double fa_ = reef.slots[a]->fitness, fb_ = reef.slots[b]->fitness;
        if (fa_ != fb_) return fa_ > fb_;
        return a > b;
    });
    for (int i = 0; i < count; ++i) reef.slots[occupied[i]].reset();
}

void stagnation_regenerate(Reef& reef, const RunParams& params, const Problem& problem,
                           RngStream& rng, long* evaluations) {
    if (!reef.has_best) return;
    const Coral keep = reef.best_ever;
    reef = initialize_reef_with_seeds(params, problem, {keep.genome}, rng, evaluations,
                                      nullptr);
    update_best(reef, keep);
}

void iterate(Reef& reef, const RunParams& params, const Problem& problem, RngStream& rng,
             RunTelemetry& telemetry) {
    const EncodingSpec& enc = problem.encoding();
    const int iteration = static_cast<int>(telemetry.records.size());
    const int n_sub = static_cast<int>(params.substrates.size());
    const int brooding_idx = n_sub;

    IterationRecord rec;
    rec.iteration = iteration;
    rec.per_substrate.resize(n_sub + 1);

    // population snapshot at the start of the iteration
    std::vector<const Genome*> population;
    std::vector<int> spawner_slots;
    for (int i = 0; i < reef.size(); ++i) {
        if (reef.slots[i]) {
            population.push_back(&reef.slots[i]->genome);
            spawner_slots.push_back(i);
        }
    }

    // reproduction: broadcast spawning with probability pb, brooding otherwise
    struct Larva {
        Coral coral;
        int substrate;
    };
    std::vector<Larva> larvae;
    for (int slot : spawner_slots) {
        const Genome& parent = reef.slots[slot]->genome;
        if (rng.bernoulli(params.pb)) {
            const int sub = reef.substrate_of(slot);
            auto genomes = substrate_spawn(params.substrates[sub], parent, population, enc,
                                           rng, iteration, params.iterations);
            for (auto& g : genomes) {
                larvae.push_back({make_coral(std::move(g), problem, &telemetry.evaluations), sub});
                ++rec.per_substrate[sub].produced;
            }
        } else {
            larvae.push_back(
                {make_coral(brood(parent, enc, rng), problem, &telemetry.evaluations),
                 brooding_idx});
            ++rec.per_substrate[brooding_idx].produced;
        }
    }

    // best-larva flag over substrate larvae only, ties toward lower substrate index
    int best_sub = -1;
    double best_larva = std::numeric_limits<double>::infinity();
    for (const auto& l : larvae) {
        if (l.substrate == brooding_idx) continue;
        if (l.coral.fitness < best_larva ||
            (l.coral.fitness == best_larva && l.substrate < best_sub)) {
            best_larva = l.coral.fitness;
            best_sub = l.substrate;
        }
    }
    if (best_sub >= 0) rec.per_substrate[best_sub].best = true;

    for (const auto& l : larvae) {
        const bool ok =
            settle(reef, l.coral, params.kappa, enc, params.duplicate_tol, rng);
        ++(ok ? rec.per_substrate[l.substrate].settled
              : rec.per_substrate[l.substrate].rejected);
    }

    if (params.budding_enabled)
        budding(reef, params.fa, params.kappa, enc, params.duplicate_tol, rng);

    depredation(reef, params.fd, params.pd, rng);

    rec.best_fitness = reef.best_fitness();
    telemetry.records.push_back(std::move(rec));
}

std::string params_digest(const RunParams& params) {
    std::string s;
    auto add = [&](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g;", v);
        s += buf;
    };
    add(params.reef_size);
    add(params.rho0);
    add(params.pb);
    add(params.kappa);
    add(params.fa);
    add(params.budding_enabled);
    add(params.fd);
    add(params.pd);
    add(params.iterations);
    add(params.stagnation_window);
    add(params.init_perturb_fraction);
    for (const auto& sub : params.substrates) {
        s += sub.name() + ";";
        add(sub.hmcr);
        add(sub.par);
        add(sub.f.start);
        add(sub.f.end);
        add(sub.m_points);
        add(sub.sigma.start);
        add(sub.sigma.end);
        add(sub.sigma_range_proportional);
        for (const auto& d : sub.delta_by_group) {
            add(d.start);
            add(d.end);
        }
    }
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunResult run(const RunParams& params, const Problem& problem) {
    params.validate(problem.encoding());
    const auto t0 = std::chrono::steady_clock::now();

    RngStream rng(params.seed);
    RunResult result;
    auto& telemetry = result.telemetry;
    for (const auto& s : params.substrates) telemetry.substrate_names.push_back(s.name());
    telemetry.substrate_names.push_back("brooding");
    telemetry.seed = params.seed;
    telemetry.rng_name = RngStream::kName;
    telemetry.params_digest = params_digest(params);

    Reef reef =
        initialize_reef_with_seeds(params, problem, problem.seed_solutions(), rng,
                                   &telemetry.evaluations, nullptr);

    int stagnant = 0;
    double last_best = reef.best_fitness();
    for (int it = 0; it < params.iterations; ++it) {
        iterate(reef, params, problem, rng, telemetry);
        if (reef.best_fitness() < last_best) {
            last_best = reef.best_fitness();
            stagnant = 0;
        } else {
            ++stagnant;
        }
        if (params.stagnation_window > 0 && stagnant >= params.stagnation_window) {
            stagnation_regenerate(reef, params, problem, rng, &telemetry.evaluations);
            stagnant = 0;
        }
    }

    if (!reef.has_best) throw std::runtime_error("run: empty reef, nothing evaluated");
    result.best = reef.best_ever;
    telemetry.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

} // namespace reefopt
