#ifndef REEFOPT_PROBLEM_HPP
#define REEFOPT_PROBLEM_HPP

#include "reefopt/encoding.hpp"

namespace reefopt {

// Objective contract. The engine minimizes: evaluate returns a cost.
// evaluate must be pure and deterministic; repair defaults to identity.
class Problem {
public:
    virtual ~Problem() = default;

    virtual const EncodingSpec& encoding() const = 0;
    virtual double evaluate(const Genome& genome) const = 0;
    virtual Genome repair(Genome genome) const { return genome; }

    // Genomes injected at initialization (and at stagnation regeneration,
    // where the incumbent best replaces the first seed).
    virtual std::vector<Genome> seed_solutions() const { return {}; }
};

// Sum of squares over real genes in [lower,upper]. Benchmark objective.
class SphereProblem : public Problem {
public:
    explicit SphereProblem(std::size_t dim, double lower = -5.0, double upper = 5.0)
        : encoding_(uniform_real_encoding(dim, lower, upper)) {}

    const EncodingSpec& encoding() const override { return encoding_; }

    double evaluate(const Genome& g) const override {
        double s = 0.0;
        for (double x : g) s += x * x;
        return s;
    }

private:
    EncodingSpec encoding_;
};

} // namespace reefopt

#endif
