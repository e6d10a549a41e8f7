#ifndef REEFOPT_BSOP_HPP
#define REEFOPT_BSOP_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "reefopt/problem.hpp"

namespace reefopt {

inline constexpr int kWeekHours = 168;

struct BatterySpec {
    double capacity_kwh = 300.0;
    double soc_min_fraction = 0.20;
    double soc_initial_fraction = 0.20;
    double p_max_charge_kw = 50.0;
    double p_max_discharge_kw = 50.0;

    void validate() const;
};

// Spanish 3.1 access tariff: three periods with energy prices (beta,
// euro/kWh), annual power-term prices (alpha, euro/kW/year, prorated weekly)
// and hired powers (kW). calendar[h] gives the period (0..2) of hour-of-day h.
struct Tariff {
    std::array<double, 3> alpha{59.1735, 36.4907, 8.3677};
    std::array<double, 3> beta{0.1044496, 0.089868, 0.065655};
    std::array<double, 3> hired_power{72.0, 66.0, 58.0};
    std::array<int, 24> calendar = default_calendar();
    double proration_weeks = 52.0;

    // P1 = 10:00-14:00, P2 = 08:00-10:00 and 14:00-24:00, P3 = 00:00-08:00
    static std::array<int, 24> default_calendar();
    void validate() const;
    int period_of(int week_hour) const { return calendar[week_hour % 24]; }
};

struct MicroGridScenario {
    std::vector<double> residential_load;  // L1, kW, 168 values
    std::vector<double> industrial_load;   // L2
    std::vector<double> wind;              // W
    std::vector<double> solar;             // F
    BatterySpec battery;
    Tariff tariff;

    void validate() const;
    // grid consumption without any battery: L1 + L2 - F - W
    std::vector<double> base_consumption() const;
};

struct SocRepairResult {
    std::vector<double> schedule;   // feasible battery powers, kW
    std::vector<double> soc_trace;  // 169 points, kWh
};

// Forward hour-by-hour clamp to power limits and the [soc_min, capacity]
// SOC band. Idempotent.
SocRepairResult simulate_soc_repair(const std::vector<double>& schedule,
                                    const BatterySpec& battery);

// Banded invoiced power; boundary values fall into the dead band.
double invoiced_power(double max_kw, double hired_kw);

struct Billing {
    double energy_term = 0.0;
    double power_term = 0.0;
    double total = 0.0;
};

Billing billing(const std::vector<double>& consumption_kw, const Tariff& tariff);

// Charge on surplus, discharge to avoid exportation; SOC-feasible by
// construction.
std::vector<double> deterministic_schedule(const MicroGridScenario& scenario);

double bsop_fitness(const Genome& schedule, const MicroGridScenario& scenario);

// CSV with header hour,L1,L2,W,F and 168 rows.
MicroGridScenario load_profiles(const std::string& path);

// Seed-deterministic synthetic week: sinusoidal daily loads, solar bell,
// autocorrelated wind.
MicroGridScenario synth_profiles(std::uint64_t seed);

class BsopProblem : public Problem {
public:
    explicit BsopProblem(MicroGridScenario scenario);

    const EncodingSpec& encoding() const override { return encoding_; }
    double evaluate(const Genome& g) const override { return bsop_fitness(g, scenario_); }
    Genome repair(Genome g) const override;
    std::vector<Genome> seed_solutions() const override;

    const MicroGridScenario& scenario() const { return scenario_; }

private:
    MicroGridScenario scenario_;
    EncodingSpec encoding_;
};

} // namespace reefopt

#endif
