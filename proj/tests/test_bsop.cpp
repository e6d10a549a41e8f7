#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <numeric>

#include "reefopt/bsop.hpp"

using namespace reefopt;

namespace {

// sum of the annual power-term prices weighted by the hired powers
constexpr double kAlphaDotHp =
    59.1735 * 72.0 + 36.4907 * 66.0 + 8.3677 * 58.0;  // 7154.2048

MicroGridScenario flat_scenario(double load = 40.0, double generation = 0.0) {
    MicroGridScenario sc;
    sc.residential_load.assign(kWeekHours, load);
    sc.industrial_load.assign(kWeekHours, 0.0);
    sc.wind.assign(kWeekHours, generation);
    sc.solar.assign(kWeekHours, 0.0);
    return sc;
}

} // namespace

TEST_CASE("battery and tariff validation") {
    BatterySpec b;
    CHECK_NOTHROW(b.validate());
    b.soc_min_fraction = 1.0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);

    Tariff t;
    CHECK_NOTHROW(t.validate());
    CHECK(t.period_of(0) == 2);    // 00:00, valley
    CHECK(t.period_of(9) == 1);    // 09:00
    CHECK(t.period_of(12) == 0);   // noon, peak
    CHECK(t.period_of(23) == 1);
    CHECK(t.period_of(36) == t.period_of(12));  // day 2, same hour of day

    Tariff broken;
    broken.calendar[0] = 0;  // five P1 hours now
    CHECK_THROWS_AS(broken.validate(), std::invalid_argument);
}

TEST_CASE("soc repair clamps forward in time") {
    BatterySpec b;  // 300 kWh, floor 60, start 60, +/-50 kW

    // zeros pass through untouched
    const auto zero = simulate_soc_repair(std::vector<double>(5, 0.0), b);
    CHECK(zero.schedule == std::vector<double>(5, 0.0));
    for (double soc : zero.soc_trace) CHECK(soc == 60.0);

    // discharging at the SOC floor is cut to zero
    const auto floor = simulate_soc_repair({-10.0, -10.0}, b);
    CHECK(floor.schedule == std::vector<double>{0.0, 0.0});

    // power clamp first, then capacity clamp near the ceiling
    const auto top = simulate_soc_repair({80.0, 50.0, 50.0, 50.0, 50.0, 50.0}, b);
    CHECK(top.schedule[0] == 50.0);  // 80 kW exceeds the charger
    CHECK(top.soc_trace[5] == 300.0);
    CHECK(top.schedule[5] == 0.0);  // full battery takes no more
    // SOC 290 -> +50 request admits only +10
    BatterySpec near = b;
    near.soc_initial_fraction = 290.0 / 300.0;
    const auto squeeze = simulate_soc_repair({50.0}, near);
    CHECK(squeeze.schedule[0] == doctest::Approx(10.0));

    // idempotent, and the trace always stays inside the band
    const std::vector<double> wild{90, -120, 50, 50, 50, -50, 50, -200, 17, 3};
    const auto once = simulate_soc_repair(wild, b);
    const auto twice = simulate_soc_repair(once.schedule, b);
    CHECK(once.schedule == twice.schedule);
    for (double soc : once.soc_trace) {
        CHECK(soc >= 60.0 - 1e-9);
        CHECK(soc <= 300.0 + 1e-9);
    }
}

TEST_CASE("invoiced power branches") {
    CHECK(invoiced_power(0.5 * 72.0, 72.0) == doctest::Approx(61.2));  // 0.85 hp
    CHECK(invoiced_power(66.0, 66.0) == 66.0);                         // dead band
    CHECK(invoiced_power(69.6, 58.0) == doctest::Approx(92.8));        // m + 2 (m - hp)
    // boundaries belong to the dead band
    CHECK(invoiced_power(0.85 * 60.0, 60.0) == 60.0);
    CHECK(invoiced_power(1.05 * 60.0, 60.0) == 60.0);
    // the jump at the upper band edge: 1.15 hp just above it
    CHECK(invoiced_power(1.05 * 60.0 + 1e-9, 60.0) == doctest::Approx(1.15 * 60.0));
    CHECK_THROWS_AS(invoiced_power(-1.0, 60.0), std::invalid_argument);
}

TEST_CASE("billing oracles") {
    Tariff t;

    // all-zero consumption: no energy term, minimum-band power term
    const Billing idle = billing(std::vector<double>(kWeekHours, 0.0), t);
    CHECK(idle.energy_term == 0.0);
    CHECK(idle.power_term == doctest::Approx(0.85 * kAlphaDotHp / 52.0));
    CHECK(idle.power_term == doctest::Approx(116.944).epsilon(1e-4));

    // peaks sitting exactly at the hired powers: PT = sum(alpha hp) / 52
    std::vector<double> shaped(kWeekHours);
    for (int h = 0; h < kWeekHours; ++h) shaped[h] = t.hired_power[t.period_of(h)];
    const Billing at_hp = billing(shaped, t);
    CHECK(at_hp.power_term == doctest::Approx(kAlphaDotHp / 52.0));
    CHECK(at_hp.power_term == doctest::Approx(137.581).epsilon(1e-4));
    CHECK(at_hp.total == at_hp.energy_term + at_hp.power_term);

    // one P3 hour of 1 kW: energy term equals the P3 price
    std::vector<double> blip(kWeekHours, 0.0);
    blip[3] = 1.0;  // 03:00 of day one
    const Billing night = billing(blip, t);
    CHECK(night.energy_term == doctest::Approx(0.065655));

    // exports earn nothing and do not lower the peak floor
    std::vector<double> exporting(kWeekHours, -5.0);
    const Billing out = billing(exporting, t);
    CHECK(out.energy_term == 0.0);
    CHECK(out.power_term == idle.power_term);

    // monotone: raising consumption pointwise never lowers the bill
    std::vector<double> base(kWeekHours, 30.0), raised(kWeekHours, 30.0);
    raised[100] += 80.0;
    CHECK(billing(raised, t).total >= billing(base, t).total);
}

TEST_CASE("deterministic baseline") {
    // zero generation and SOC at the floor: nothing to do
    MicroGridScenario starved = flat_scenario(40.0, 0.0);
    const auto idle = deterministic_schedule(starved);
    CHECK(idle == std::vector<double>(kWeekHours, 0.0));

    // constant 30 kW surplus charges at 30 until the battery fills
    MicroGridScenario rich = flat_scenario(10.0, 40.0);
    rich.battery.soc_initial_fraction = 0.2;  // 60 kWh of 300
    const auto charging = deterministic_schedule(rich);
    CHECK(charging[0] == 30.0);
    CHECK(charging[1] == 30.0);
    CHECK(charging[7] == 30.0);  // 60 + 8*30 = 300
    CHECK(charging[8] == 0.0);

    // 80 kW surplus is clamped by the charger rating
    MicroGridScenario gush = flat_scenario(0.0, 80.0);
    CHECK(deterministic_schedule(gush)[0] == 50.0);

    // output is already feasible: repair is the identity on it
    const MicroGridScenario sc = synth_profiles(3);
    const auto sched = deterministic_schedule(sc);
    CHECK(simulate_soc_repair(sched, sc.battery).schedule == sched);
}

TEST_CASE("fitness wiring and the cost ordering") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const MicroGridScenario sc = synth_profiles(seed);
        const double none = billing(sc.base_consumption(), sc.tariff).total;
        const double zero = bsop_fitness(Genome(kWeekHours, 0.0), sc);
        CHECK(zero == doctest::Approx(none));

        const double det = bsop_fitness(deterministic_schedule(sc), sc);
        CHECK(det <= none);

        // repair idempotence carries over to the fitness
        Genome rough(kWeekHours);
        for (int t = 0; t < kWeekHours; ++t) rough[t] = (t % 7 - 3) * 31.0;
        const auto repaired = simulate_soc_repair(rough, sc.battery).schedule;
        CHECK(bsop_fitness(rough, sc) == doctest::Approx(bsop_fitness(repaired, sc)));
    }
}

TEST_CASE("synthetic generator is deterministic and valid") {
    const MicroGridScenario a = synth_profiles(1);
    const MicroGridScenario b = synth_profiles(1);
    CHECK(a.residential_load == b.residential_load);
    CHECK(a.industrial_load == b.industrial_load);
    CHECK(a.wind == b.wind);
    CHECK(a.solar == b.solar);
    CHECK_NOTHROW(a.validate());

    const MicroGridScenario c = synth_profiles(2);
    CHECK(a.wind != c.wind);

    // some surplus hour exists, so the deterministic baseline has work to do
    bool surplus = false;
    for (int t = 0; t < kWeekHours; ++t)
        surplus |= a.wind[t] + a.solar[t] > a.residential_load[t] + a.industrial_load[t];
    CHECK(surplus);
}

TEST_CASE("profile csv loading") {
    const std::string path = "bsop_profiles_tmp.csv";
    {
        std::ofstream f(path);
        f << "hour,L1,L2,W,F\n";
        for (int t = 0; t < kWeekHours; ++t)
            f << t << ",20,10,5,"
              << (t % 24 == 12 ? "30" : "0") << "\n";
    }
    const MicroGridScenario sc = load_profiles(path);
    CHECK(sc.residential_load[0] == 20.0);
    CHECK(sc.solar[12] == 30.0);
    CHECK(sc.solar[11] == 0.0);
    std::remove(path.c_str());

    // short file: the error names the expected length
    {
        std::ofstream f(path);
        f << "hour,L1,L2,W,F\n";
        for (int t = 0; t < 167; ++t) f << t << ",1,1,1,1\n";
    }
    CHECK_THROWS_WITH_AS(load_profiles(path),
                         doctest::Contains("expected 168 rows"), std::runtime_error);
    std::remove(path.c_str());

    {
        std::ofstream f(path);
        f << "hour,L1,L2,W,F\n0,1,1;1,1\n";
    }
    CHECK_THROWS_WITH_AS(load_profiles(path), doctest::Contains("row 1"),
                         std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("problem packaging") {
    const MicroGridScenario sc = synth_profiles(7);
    BsopProblem prob(sc);
    CHECK(prob.encoding().size() == kWeekHours);
    CHECK(prob.encoding().genes[0].lower == -50.0);
    CHECK(prob.encoding().genes[0].upper == 50.0);

    const auto seeds = prob.seed_solutions();
    REQUIRE(seeds.size() == 1);
    CHECK(seeds[0] == deterministic_schedule(sc));

    // repair goes through the SOC simulation
    Genome g(kWeekHours, 45.0);
    const Genome r = prob.repair(g);
    CHECK(r == simulate_soc_repair(g, sc.battery).schedule);
    CHECK(prob.evaluate(g) == doctest::Approx(bsop_fitness(g, sc)));
}
