#include "reefopt/bsop.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "reefopt/rng.hpp"

namespace reefopt {

void BatterySpec::validate() const {
    if (capacity_kwh <= 0.0) throw std::invalid_argument("battery: capacity must be > 0");
    if (soc_min_fraction < 0.0 || soc_min_fraction >= 1.0)
        throw std::invalid_argument("battery: soc_min_fraction must be in [0,1)");
    if (soc_initial_fraction < soc_min_fraction || soc_initial_fraction > 1.0)
        throw std::invalid_argument("battery: initial SOC outside [soc_min,1]");
    if (p_max_charge_kw <= 0.0 || p_max_discharge_kw <= 0.0)
        throw std::invalid_argument("battery: power limits must be > 0");
}

std::array<int, 24> Tariff::default_calendar() {
    std::array<int, 24> cal{};
    for (int h = 0; h < 24; ++h) {
        if (h >= 10 && h < 14) cal[h] = 0;          // P1, 4 hours
        else if (h >= 8 && h < 10) cal[h] = 1;      // P2
        else if (h >= 14) cal[h] = 1;               // P2, 12 hours total
        else cal[h] = 2;                            // P3, 8 hours
    }
    return cal;
}

void Tariff::validate() const {
    std::array<int, 3> counts{};
    for (int h = 0; h < 24; ++h) {
        if (calendar[h] < 0 || calendar[h] > 2)
            throw std::invalid_argument("tariff: calendar periods must be 0..2");
        ++counts[calendar[h]];
    }
    if (counts[0] != 4 || counts[1] != 12 || counts[2] != 8)
        throw std::invalid_argument("tariff: periods must cover 4/12/8 hours");
    if (proration_weeks <= 0.0) throw std::invalid_argument("tariff: proration_weeks must be > 0");
}

void MicroGridScenario::validate() const {
    for (const auto* p : {&residential_load, &industrial_load, &wind, &solar})
        if (p->size() != kWeekHours)
            throw std::invalid_argument("scenario: profiles must have 168 hourly values");
    for (int t = 0; t < kWeekHours; ++t)
        if (residential_load[t] < 0.0 || industrial_load[t] < 0.0 || wind[t] < 0.0 ||
            solar[t] < 0.0)
            throw std::invalid_argument("scenario: negative profile value at hour " +
                                        std::to_string(t));
    battery.validate();
    tariff.validate();
}

std::vector<double> MicroGridScenario::base_consumption() const {
    std::vector<double> p(kWeekHours);
    for (int t = 0; t < kWeekHours; ++t)
        p[t] = residential_load[t] + industrial_load[t] - solar[t] - wind[t];
    return p;
}

SocRepairResult simulate_soc_repair(const std::vector<double>& schedule,
                                    const BatterySpec& battery) {
    SocRepairResult out;
    out.schedule.resize(schedule.size());
    out.soc_trace.resize(schedule.size() + 1);
    const double soc_min = battery.soc_min_fraction * battery.capacity_kwh;
    double soc = battery.soc_initial_fraction * battery.capacity_kwh;
    out.soc_trace[0] = soc;
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        double b = std::clamp(schedule[t], -battery.p_max_discharge_kw,
                              battery.p_max_charge_kw);
        b = std::clamp(b, soc_min - soc, battery.capacity_kwh - soc);  // 1 h steps
        soc += b;
        out.schedule[t] = b;
        out.soc_trace[t + 1] = soc;
    }
    return out;
}

double invoiced_power(double max_kw, double hired_kw) {
    if (max_kw < 0.0) throw std::invalid_argument("invoiced_power: negative maximum");
    if (max_kw < 0.85 * hired_kw) return 0.85 * hired_kw;
    if (max_kw > 1.05 * hired_kw) return max_kw + 2.0 * (max_kw - hired_kw);
    return hired_kw;
}

Billing billing(const std::vector<double>& consumption_kw, const Tariff& tariff) {
    std::array<double, 3> energy{};
    std::array<double, 3> peak{};
    for (std::size_t t = 0; t < consumption_kw.size(); ++t) {
        const int j = tariff.period_of(static_cast<int>(t));
        energy[j] += std::max(consumption_kw[t], 0.0);  // exports earn nothing
        peak[j] = std::max(peak[j], consumption_kw[t]);
    }
    Billing bill;
    for (int j = 0; j < 3; ++j) {
        bill.energy_term += tariff.beta[j] * energy[j];
        bill.power_term += tariff.alpha[j] / tariff.proration_weeks *
                           invoiced_power(peak[j], tariff.hired_power[j]);
    }
    bill.total = bill.energy_term + bill.power_term;
    return bill;
}

std::vector<double> deterministic_schedule(const MicroGridScenario& scenario) {
    const auto& b = scenario.battery;
    const double soc_min = b.soc_min_fraction * b.capacity_kwh;
    double soc = b.soc_initial_fraction * b.capacity_kwh;
    std::vector<double> schedule(kWeekHours);
    for (int t = 0; t < kWeekHours; ++t) {
        const double generation = scenario.wind[t] + scenario.solar[t];
        const double load = scenario.residential_load[t] + scenario.industrial_load[t];
        double power;
        if (generation > load) {
            power = std::min({generation - load, b.p_max_charge_kw,
                              b.capacity_kwh - soc});
        } else {
            power = -std::min({load - generation, b.p_max_discharge_kw, soc - soc_min});
        }
        soc += power;
        schedule[t] = power;
    }
    return schedule;
}

double bsop_fitness(const Genome& schedule, const MicroGridScenario& scenario) {
    if (schedule.size() != kWeekHours)
        throw std::invalid_argument("bsop: schedule must have 168 values");
    const auto repaired = simulate_soc_repair(schedule, scenario.battery);
    std::vector<double> p = scenario.base_consumption();
    for (int t = 0; t < kWeekHours; ++t) p[t] += repaired.schedule[t];
    return billing(p, scenario.tariff).total;
}

MicroGridScenario load_profiles(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("scenario: cannot open " + path);
    MicroGridScenario sc;
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("scenario: empty file " + path);
    // tolerate trailing CR in the header
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "hour,L1,L2,W,F")
        throw std::runtime_error("scenario: expected header hour,L1,L2,W,F, got '" + line + "'");
    int row = 0;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        ++row;
        std::istringstream ss(line);
        double hour, l1, l2, w, fv;
        char c1, c2, c3, c4;
        if (!(ss >> hour >> c1 >> l1 >> c2 >> l2 >> c3 >> w >> c4 >> fv) || c1 != ',' ||
            c2 != ',' || c3 != ',' || c4 != ',')
            throw std::runtime_error("scenario: malformed row " + std::to_string(row) +
                                     " in " + path);
        if (row > kWeekHours)
            throw std::runtime_error("scenario: expected 168 rows, found more in " + path);
        sc.residential_load.push_back(l1);
        sc.industrial_load.push_back(l2);
        sc.wind.push_back(w);
        sc.solar.push_back(fv);
    }
    if (row != kWeekHours)
        throw std::runtime_error("scenario: expected 168 rows, got " + std::to_string(row) +
                                 " in " + path);
    sc.validate();
    return sc;
}

MicroGridScenario synth_profiles(std::uint64_t seed) {
    RngStream rng(seed);
    MicroGridScenario sc;
    sc.residential_load.resize(kWeekHours);
    sc.industrial_load.resize(kWeekHours);
    sc.wind.resize(kWeekHours);
    sc.solar.resize(kWeekHours);

    const double two_pi = 2.0 * std::numbers::pi;
    double wind_state = rng.uniform(0.2, 0.8);
    for (int t = 0; t < kWeekHours; ++t) {
        const int h = t % 24;
        const int day = t / 24;
        // residential: morning and evening bumps
        const double res = 18.0 + 10.0 * std::exp(-0.5 * std::pow((h - 20.0) / 2.5, 2)) +
                           6.0 * std::exp(-0.5 * std::pow((h - 8.0) / 2.0, 2)) +
                           rng.uniform(-1.5, 1.5);
        // industrial: weekday working hours block
        const bool working = day < 5 && h >= 8 && h < 18;
        const double ind = (working ? 42.0 : 10.0) + rng.uniform(-2.0, 2.0);
        // solar bell around noon, daily cloud factor
        const double daylight = std::max(0.0, std::sin(two_pi * (h - 6.0) / 24.0));
        const double cloud = 0.6 + 0.4 * rng.uniform();
        const double sol = 80.0 * cloud * daylight * daylight;
        // autocorrelated wind
        wind_state = std::clamp(0.85 * wind_state + 0.15 * rng.uniform(), 0.0, 1.0);
        const double wnd = 70.0 * wind_state + rng.uniform(0.0, 3.0);

        sc.residential_load[t] = std::max(res, 0.0);
        sc.industrial_load[t] = std::max(ind, 0.0);
        sc.solar[t] = std::max(sol, 0.0);
        sc.wind[t] = std::max(wnd, 0.0);
    }
    sc.validate();
    return sc;
}

BsopProblem::BsopProblem(MicroGridScenario scenario) : scenario_(std::move(scenario)) {
    scenario_.validate();
    encoding_.genes.assign(kWeekHours,
                           GeneSpec{GeneKind::Real, -scenario_.battery.p_max_discharge_kw,
                                    scenario_.battery.p_max_charge_kw, 0});
}

Genome BsopProblem::repair(Genome g) const {
    return simulate_soc_repair(g, scenario_.battery).schedule;
}

std::vector<Genome> BsopProblem::seed_solutions() const {
    return {deterministic_schedule(scenario_)};
}

} // namespace reefopt
