#include "reefopt/antenna.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace reefopt {

void S11Trace::validate() const {
    if (freq_mhz.size() != s11_db.size())
        throw std::invalid_argument("s11 trace: column lengths differ");
    if (freq_mhz.empty()) throw std::invalid_argument("s11 trace: empty");
    for (std::size_t i = 1; i < freq_mhz.size(); ++i)
        if (freq_mhz[i] <= freq_mhz[i - 1])
            throw std::invalid_argument("s11 trace: frequencies must be strictly ascending");
}

double antenna_fitness(const S11Trace& trace, AntennaWindow window) {
    trace.validate();
    long under = 0;
    long count = 0;
    double sum = 0.0;
    double minimum = 0.0;
    for (std::size_t i = 0; i < trace.freq_mhz.size(); ++i) {
        const double f = trace.freq_mhz[i];
        if (f < window.lo_mhz || f > window.hi_mhz) continue;
        const double db = trace.s11_db[i];
        ++count;
        sum += db;
        minimum = std::min(minimum, db);
        if (db < -10.0) ++under;  // strictly under -10 dB
    }
    if (count == 0)
        throw std::invalid_argument("antenna_fitness: trace has no samples in the window");
    const double mean_mag = std::abs(sum / static_cast<double>(count));
    const double min_mag = std::abs(minimum);
    return 0.8 * static_cast<double>(under) + 0.1 * mean_mag + 0.1 * min_mag;
}

S11Trace load_trace(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("trace: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("trace: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "freq_mhz,s11_db")
        throw std::runtime_error("trace: expected header freq_mhz,s11_db in " + path);
    S11Trace trace;
    int row = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::istringstream ss(line);
        double freq, db;
        char c;
        if (!(ss >> freq >> c >> db) || c != ',')
            throw std::runtime_error("trace: malformed row " + std::to_string(row) + " in " +
                                     path);
        trace.freq_mhz.push_back(freq);
        trace.s11_db.push_back(db);
    }
    trace.validate();
    return trace;
}

S11Trace synth_trace(double resonant_mhz, double bandwidth_mhz, double depth_db,
                     double lo_mhz, double hi_mhz, double step_mhz) {
    S11Trace trace;
    for (double f = lo_mhz; f <= hi_mhz + 1e-9; f += step_mhz) {
        // Lorentzian notch of the given half-power bandwidth
        const double x = 2.0 * (f - resonant_mhz) / bandwidth_mhz;
        const double db = depth_db / (1.0 + x * x);
        trace.freq_mhz.push_back(f);
        trace.s11_db.push_back(db);
    }
    trace.validate();
    return trace;
}

AntennaTraceProblem::AntennaTraceProblem(S11Trace trace, AntennaWindow window)
    : window_(window) {
    trace.validate();
    for (std::size_t i = 0; i < trace.freq_mhz.size(); ++i) {
        const double f = trace.freq_mhz[i];
        if (f < window.lo_mhz || f > window.hi_mhz) continue;
        freqs_.push_back(f);
        seed_.push_back(trace.s11_db[i]);
    }
    if (freqs_.empty())
        throw std::invalid_argument("antenna problem: trace has no samples in the window");
    encoding_.genes.assign(freqs_.size(), GeneSpec{GeneKind::Real, -40.0, 0.0, 0});
}

double AntennaTraceProblem::evaluate(const Genome& g) const {
    S11Trace t{freqs_, g};
    return -antenna_fitness(t, window_);
}

std::vector<Genome> AntennaTraceProblem::seed_solutions() const {
    Genome s = seed_;
    for (double& v : s) v = std::clamp(v, -40.0, 0.0);
    return {s};
}

} // namespace reefopt
