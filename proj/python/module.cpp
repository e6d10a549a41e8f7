#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reefopt/config.hpp"

namespace py = pybind11;
using namespace reefopt;

namespace {

py::dict run_from_json(const std::string& json_text) {
    RunConfig cfg = parse_run_config(json_text);
    const RunResult result = run(cfg.params, *cfg.problem);
    py::dict out;
    out["best_fitness"] = result.best.fitness;
    out["best_genome"] = result.best.genome;
    out["evaluations"] = result.telemetry.evaluations;
    out["seconds"] = result.telemetry.seconds;
    out["telemetry_csv"] = telemetry_csv(result.telemetry);
    return out;
}

double eval_from_json(const std::string& json_text, const Genome& genome) {
    RunConfig cfg = parse_run_config(json_text);
    return cfg.problem->evaluate(genome);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Coral reef optimization with substrate layers";

    py::register_exception<ConfigError>(m, "ConfigError");

    m.def("run", &run_from_json, py::arg("config_json"),
          "Execute a full run described by a configuration JSON string.");
    m.def("evaluate", &eval_from_json, py::arg("config_json"), py::arg("genome"),
          "Evaluate one genome under the problem of a configuration JSON string.");
    m.def("schedule_value", &schedule_value, py::arg("start"), py::arg("end"),
          py::arg("iteration"), py::arg("total_iterations"));

    py::class_<BuildingSpec>(m, "BuildingSpec")
        .def(py::init([](std::vector<double> k, std::vector<double> mass, double xi) {
                 return BuildingSpec{std::move(k), std::move(mass), xi};
             }),
             py::arg("stiffness"), py::arg("mass"), py::arg("xi_s"))
        .def_static("two_floor_case", &BuildingSpec::two_floor_case)
        .def_static("four_floor_case", &BuildingSpec::four_floor_case)
        .def_static("experimental_rig", &BuildingSpec::experimental_rig)
        .def_readonly("stiffness", &BuildingSpec::stiffness)
        .def_readonly("mass", &BuildingSpec::mass)
        .def_readonly("xi_s", &BuildingSpec::xi_s);

    m.def(
        "natural_frequencies",
        [](const BuildingSpec& spec) {
            const auto mats = assemble_matrices(spec);
            return natural_frequencies(mats.mass, mats.stiffness).omegas;
        },
        py::arg("building"), "Natural frequencies of a shear building, rad/s ascending.");

    m.def(
        "tmd_fitness",
        [](const BuildingSpec& spec, std::vector<double> omega, std::vector<double> xi,
           std::vector<double> mass, std::vector<int> fb) {
            TmdModel model(spec);
            return model.fitness({std::move(omega), std::move(xi), std::move(mass),
                                  std::move(fb)});
        },
        py::arg("building"), py::arg("omega"), py::arg("xi"), py::arg("m"), py::arg("fb"),
        "Worst-floor worst-frequency acceleration magnification for a damper set.");

    m.def(
        "antenna_fitness",
        [](std::vector<double> freq_mhz, std::vector<double> s11_db, double lo, double hi) {
            return antenna_fitness({std::move(freq_mhz), std::move(s11_db)}, {lo, hi});
        },
        py::arg("freq_mhz"), py::arg("s11_db"), py::arg("window_lo_mhz") = 2400.0,
        py::arg("window_hi_mhz") = 2500.0);

    m.def("invoiced_power", &invoiced_power, py::arg("max_kw"), py::arg("hired_kw"));

    m.def(
        "bsop_fitness",
        [](const std::vector<double>& schedule, std::uint64_t scenario_seed) {
            return bsop_fitness(schedule, synth_profiles(scenario_seed));
        },
        py::arg("schedule"), py::arg("scenario_seed"),
        "Weekly bill of a battery schedule on a synthetic scenario.");

    m.def(
        "deterministic_schedule",
        [](std::uint64_t scenario_seed) {
            return deterministic_schedule(synth_profiles(scenario_seed));
        },
        py::arg("scenario_seed"));
}
