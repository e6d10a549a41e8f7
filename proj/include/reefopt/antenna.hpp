#ifndef REEFOPT_ANTENNA_HPP
#define REEFOPT_ANTENNA_HPP

#include <string>
#include <vector>

#include "reefopt/problem.hpp"

namespace reefopt {

struct S11Trace {
    std::vector<double> freq_mhz;  // strictly ascending
    std::vector<double> s11_db;

    void validate() const;
};

struct AntennaWindow {
    double lo_mhz = 2400.0;
    double hi_mhz = 2500.0;
};

// f = 0.8*N + 0.1*|mean| + 0.1*|min| over the in-window samples, where N
// counts samples strictly under -10 dB. Higher is better; the engine takes
// the negated value as cost.
double antenna_fitness(const S11Trace& trace, AntennaWindow window = {});

// CSV with header freq_mhz,s11_db
S11Trace load_trace(const std::string& path);

// Single-resonator reflection response sampled every 2 MHz across the window;
// test-fixture generator.
S11Trace synth_trace(double resonant_mhz, double bandwidth_mhz, double depth_db,
                     double lo_mhz = 2400.0, double hi_mhz = 2500.0,
                     double step_mhz = 2.0);

// Packages the objective behind the engine contract: the genome holds the
// in-window dB samples of the supplied trace, bounded to [-40, 0], and the
// trace itself seeds the reef.
class AntennaTraceProblem : public Problem {
public:
    explicit AntennaTraceProblem(S11Trace trace, AntennaWindow window = {});

    const EncodingSpec& encoding() const override { return encoding_; }
    double evaluate(const Genome& g) const override;
    std::vector<Genome> seed_solutions() const override;

    const std::vector<double>& window_freqs() const { return freqs_; }

private:
    std::vector<double> freqs_;
    Genome seed_;
    AntennaWindow window_;
    EncodingSpec encoding_;
};

} // namespace reefopt

#endif
