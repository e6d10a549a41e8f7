#include "reefopt/telemetry.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace reefopt {

static std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string telemetry_csv(const RunTelemetry& telemetry) {
    std::string out = "iteration,best_fitness";
    for (const auto& name : telemetry.substrate_names)
        out += ",produced_" + name + ",settled_" + name + ",best_" + name;
    out += "\n";
    for (const auto& rec : telemetry.records) {
        out += std::to_string(rec.iteration) + "," + fmt9(rec.best_fitness);
        for (const auto& s : rec.per_substrate) {
            out += "," + std::to_string(s.produced) + "," + std::to_string(s.settled) + "," +
                   (s.best ? "1" : "0");
        }
        out += "\n";
    }
    return out;
}

void write_csv(const RunTelemetry& telemetry, const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!f) throw std::runtime_error("telemetry: cannot write " + path);
    f << telemetry_csv(telemetry);
}

std::vector<std::vector<double>> best_larva_ratio(const RunTelemetry& telemetry, int window) {
    if (window < 1) throw std::invalid_argument("best_larva_ratio: window must be >= 1");
    // brooding (last column) is excluded from the ratio
    const std::size_t n_sub =
        telemetry.substrate_names.empty() ? 0 : telemetry.substrate_names.size() - 1;
    const std::size_t n_iter = telemetry.records.size();
    std::vector<std::vector<double>> out(n_sub, std::vector<double>(n_iter, 0.0));
    for (std::size_t t = 0; t < n_iter; ++t) {
        const std::size_t lo = t + 1 >= static_cast<std::size_t>(window) ? t + 1 - window : 0;
        long flagged_total = 0;
        std::vector<long> flagged(n_sub, 0);
        for (std::size_t k = lo; k <= t; ++k) {
            for (std::size_t s = 0; s < n_sub; ++s) {
                if (telemetry.records[k].per_substrate[s].best) {
                    ++flagged[s];
                    ++flagged_total;
                }
            }
        }
        if (flagged_total == 0) continue;
        for (std::size_t s = 0; s < n_sub; ++s)
            out[s][t] = 100.0 * static_cast<double>(flagged[s]) /
                        static_cast<double>(flagged_total);
    }
    return out;
}

} // namespace reefopt
