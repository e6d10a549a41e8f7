#include "reefopt/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace reefopt {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

void expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
}

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a) { known = true; break; }
        if (!known) fail(where, "unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key, "expected a number");
    return v.get<double>();
}

double get_number(const json& obj, const std::string& where, const char* key,
                  double fallback) {
    if (!obj.contains(key)) return fallback;
    return get_number(obj, where, key);
}

int get_int(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_number_integer()) fail(where + "." + key, "expected an integer");
    return v.get<int>();
}

int get_int(const json& obj, const std::string& where, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    return get_int(obj, where, key);
}

bool get_bool(const json& obj, const std::string& where, const char* key, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) fail(where + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const char* key) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "." + key, "expected a string");
    return v.get<std::string>();
}

// number -> constant, [start, end] -> linear over the run
LinearSchedule parse_schedule(const json& v, const std::string& where) {
    if (v.is_number()) return LinearSchedule::constant(v.get<double>());
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(where, "expected a number or a [start, end] pair");
}

std::vector<double> get_fixed_array(const json& obj, const std::string& where,
                                    const char* key, std::size_t n) {
    if (!obj.contains(key)) fail(where, std::string("missing key '") + key + "'");
    const json& v = obj.at(key);
    if (!v.is_array() || v.size() != n)
        fail(where + "." + key, "expected an array of " + std::to_string(n) + " numbers");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) fail(where + "." + key, "expected numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

BatterySpec parse_battery(const json& obj, const std::string& where) {
    expect_object(obj, where);
    reject_unknown(obj, where,
                   {"capacity_kwh", "soc_min_fraction", "soc_initial_fraction",
                    "p_max_charge_kw", "p_max_discharge_kw"});
    BatterySpec b;
    b.capacity_kwh = get_number(obj, where, "capacity_kwh", b.capacity_kwh);
    b.soc_min_fraction = get_number(obj, where, "soc_min_fraction", b.soc_min_fraction);
    b.soc_initial_fraction =
        get_number(obj, where, "soc_initial_fraction", b.soc_initial_fraction);
    b.p_max_charge_kw = get_number(obj, where, "p_max_charge_kw", b.p_max_charge_kw);
    b.p_max_discharge_kw = get_number(obj, where, "p_max_discharge_kw", b.p_max_discharge_kw);
    return b;
}

Tariff parse_tariff(const json& obj, const std::string& where) {
    expect_object(obj, where);
    reject_unknown(obj, where,
                   {"alpha", "beta", "hired_power", "calendar", "proration_weeks"});
    Tariff t;
    if (obj.contains("alpha")) {
        auto a = get_fixed_array(obj, where, "alpha", 3);
        std::copy(a.begin(), a.end(), t.alpha.begin());
    }
    if (obj.contains("beta")) {
        auto b = get_fixed_array(obj, where, "beta", 3);
        std::copy(b.begin(), b.end(), t.beta.begin());
    }
    if (obj.contains("hired_power")) {
        auto h = get_fixed_array(obj, where, "hired_power", 3);
        std::copy(h.begin(), h.end(), t.hired_power.begin());
    }
    if (obj.contains("calendar")) {
        const json& cal = obj.at("calendar");
        if (!cal.is_array() || cal.size() != 24)
            fail(where + ".calendar", "expected 24 period indices");
        for (int h = 0; h < 24; ++h) {
            if (!cal[h].is_number_integer())
                fail(where + ".calendar", "expected integers");
            t.calendar[h] = cal[h].get<int>();
        }
    }
    t.proration_weeks = get_number(obj, where, "proration_weeks", t.proration_weeks);
    return t;
}

BuildingSpec parse_building(const json& v, const std::string& where) {
    if (v.is_string()) {
        const std::string name = v.get<std::string>();
        if (name == "two_floor") return BuildingSpec::two_floor_case();
        if (name == "four_floor") return BuildingSpec::four_floor_case();
        if (name == "experimental_rig") return BuildingSpec::experimental_rig();
        fail(where, "unknown building '" + name +
                        "' (expected two_floor, four_floor or experimental_rig)");
    }
    expect_object(v, where);
    reject_unknown(v, where, {"stiffness", "mass", "xi_s"});
    BuildingSpec spec;
    if (!v.contains("stiffness") || !v.at("stiffness").is_array())
        fail(where, "missing stiffness array");
    if (!v.contains("mass") || !v.at("mass").is_array())
        fail(where, "missing mass array");
    for (const json& e : v.at("stiffness")) spec.stiffness.push_back(e.get<double>());
    for (const json& e : v.at("mass")) spec.mass.push_back(e.get<double>());
    spec.xi_s = get_number(v, where, "xi_s", spec.xi_s);
    return spec;
}

void build_problem(const json& obj, RunConfig& cfg) {
    const std::string where = "problem";
    expect_object(obj, where);
    const std::string kind = get_string(obj, where, "kind");
    if (kind == "sphere") {
        reject_unknown(obj, where, {"kind", "dim", "lower", "upper"});
        const int dim = get_int(obj, where, "dim");
        if (dim < 1) fail(where + ".dim", "must be >= 1");
        const double lower = get_number(obj, where, "lower", -5.0);
        const double upper = get_number(obj, where, "upper", 5.0);
        cfg.kind = ProblemKind::Sphere;
        cfg.problem = std::make_shared<SphereProblem>(dim, lower, upper);
    } else if (kind == "bsop") {
        reject_unknown(obj, where,
                       {"kind", "profiles", "synthetic_seed", "battery", "tariff"});
        MicroGridScenario sc;
        if (obj.contains("profiles") == obj.contains("synthetic_seed"))
            fail(where, "give exactly one of 'profiles' or 'synthetic_seed'");
        if (obj.contains("profiles")) {
            sc = load_profiles(get_string(obj, where, "profiles"));
        } else {
            const json& s = obj.at("synthetic_seed");
            if (!s.is_number_unsigned()) fail(where + ".synthetic_seed", "expected a seed");
            sc = synth_profiles(s.get<std::uint64_t>());
        }
        if (obj.contains("battery")) sc.battery = parse_battery(obj.at("battery"), where + ".battery");
        if (obj.contains("tariff")) sc.tariff = parse_tariff(obj.at("tariff"), where + ".tariff");
        cfg.kind = ProblemKind::Bsop;
        cfg.bsop = std::make_shared<BsopProblem>(std::move(sc));
        cfg.problem = cfg.bsop;
    } else if (kind == "tmd") {
        reject_unknown(obj, where, {"kind", "building", "n_tmds", "grid", "bounds"});
        if (!obj.contains("building")) fail(where, "missing key 'building'");
        BuildingSpec spec = parse_building(obj.at("building"), where + ".building");
        const int n_tmds = get_int(obj, where, "n_tmds");
        FrfGrid grid;
        if (obj.contains("grid")) {
            const json& g = obj.at("grid");
            expect_object(g, where + ".grid");
            reject_unknown(g, where + ".grid", {"omega_min", "omega_max", "step"});
            grid.omega_min = get_number(g, where + ".grid", "omega_min", grid.omega_min);
            grid.omega_max = get_number(g, where + ".grid", "omega_max", grid.omega_max);
            grid.step = get_number(g, where + ".grid", "step", grid.step);
        }
        TmdBounds bounds;
        if (obj.contains("bounds")) {
            const json& b = obj.at("bounds");
            expect_object(b, where + ".bounds");
            reject_unknown(b, where + ".bounds", {"omega_max", "xi_max", "m_max"});
            bounds.omega_max = get_number(b, where + ".bounds", "omega_max", bounds.omega_max);
            bounds.xi_max = get_number(b, where + ".bounds", "xi_max", bounds.xi_max);
            bounds.m_max = get_number(b, where + ".bounds", "m_max", bounds.m_max);
        }
        cfg.kind = ProblemKind::Tmd;
        cfg.tmd = std::make_shared<TmdProblem>(std::move(spec), n_tmds, grid, bounds);
        cfg.problem = cfg.tmd;
    } else if (kind == "antenna_trace") {
        reject_unknown(obj, where, {"kind", "trace", "synthetic", "window"});
        if (obj.contains("trace") == obj.contains("synthetic"))
            fail(where, "give exactly one of 'trace' or 'synthetic'");
        S11Trace trace;
        if (obj.contains("trace")) {
            trace = load_trace(get_string(obj, where, "trace"));
        } else {
            const json& s = obj.at("synthetic");
            const std::string sw = where + ".synthetic";
            expect_object(s, sw);
            reject_unknown(s, sw, {"resonant_mhz", "bandwidth_mhz", "depth_db", "lo_mhz",
                                   "hi_mhz", "step_mhz"});
            trace = synth_trace(get_number(s, sw, "resonant_mhz"),
                                get_number(s, sw, "bandwidth_mhz"),
                                get_number(s, sw, "depth_db"),
                                get_number(s, sw, "lo_mhz", 2400.0),
                                get_number(s, sw, "hi_mhz", 2500.0),
                                get_number(s, sw, "step_mhz", 2.0));
        }
        AntennaWindow window;
        if (obj.contains("window")) {
            const json& w = obj.at("window");
            expect_object(w, where + ".window");
            reject_unknown(w, where + ".window", {"lo_mhz", "hi_mhz"});
            window.lo_mhz = get_number(w, where + ".window", "lo_mhz", window.lo_mhz);
            window.hi_mhz = get_number(w, where + ".window", "hi_mhz", window.hi_mhz);
        }
        cfg.kind = ProblemKind::AntennaTrace;
        cfg.problem = std::make_shared<AntennaTraceProblem>(std::move(trace), window);
    } else {
        fail(where + ".kind",
             "unknown problem '" + kind + "' (expected sphere, bsop, tmd or antenna_trace)");
    }
}

SubstrateConfig parse_substrate(const json& obj, const std::string& where,
                                const EncodingSpec& encoding) {
    expect_object(obj, where);
    SubstrateConfig sc;
    sc.kind = substrate_kind_from_name(get_string(obj, where, "kind"));
    switch (sc.kind) {
    case SubstrateKind::HS: {
        reject_unknown(obj, where, {"kind", "hmcr", "par", "delta"});
        sc.hmcr = get_number(obj, where, "hmcr", sc.hmcr);
        sc.par = get_number(obj, where, "par", sc.par);
        const int groups = encoding.group_count();
        sc.delta_by_group.assign(groups, LinearSchedule::constant(0.1));
        if (obj.contains("delta")) {
            const json& d = obj.at("delta");
            // a single schedule applies to every group; an array of schedules
            // maps one per encoding group
            if (d.is_array() && !d.empty() && (d[0].is_array() || d.size() != 2)) {
                if (static_cast<int>(d.size()) != groups)
                    fail(where + ".delta", "expected one schedule per gene group (" +
                                               std::to_string(groups) + ")");
                for (int g = 0; g < groups; ++g)
                    sc.delta_by_group[g] =
                        parse_schedule(d[g], where + ".delta[" + std::to_string(g) + "]");
            } else {
                const LinearSchedule s = parse_schedule(d, where + ".delta");
                sc.delta_by_group.assign(groups, s);
            }
        }
        break;
    }
    case SubstrateKind::DE:
        reject_unknown(obj, where, {"kind", "f"});
        if (obj.contains("f")) sc.f = parse_schedule(obj.at("f"), where + ".f");
        break;
    case SubstrateKind::TwoPx:
        reject_unknown(obj, where, {"kind"});
        break;
    case SubstrateKind::MPx:
        reject_unknown(obj, where, {"kind", "m_points"});
        sc.m_points = get_int(obj, where, "m_points", sc.m_points);
        break;
    case SubstrateKind::GM:
        reject_unknown(obj, where, {"kind", "sigma", "range_proportional"});
        if (obj.contains("sigma")) sc.sigma = parse_schedule(obj.at("sigma"), where + ".sigma");
        sc.sigma_range_proportional = get_bool(obj, where, "range_proportional", false);
        break;
    case SubstrateKind::SAbM:
        reject_unknown(obj, where, {"kind", "sigma", "range_proportional"});
        // divergence fallback defaults to the range-proportional 0.2 -> 0.02
        // gaussian schedule
        sc.sigma = {0.2, 0.02};
        sc.sigma_range_proportional = true;
        if (obj.contains("sigma")) {
            sc.sigma = parse_schedule(obj.at("sigma"), where + ".sigma");
            sc.sigma_range_proportional = get_bool(obj, where, "range_proportional", false);
        }
        break;
    }
    try {
        sc.validate(encoding);
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return sc;
}

void parse_engine(const json& obj, RunParams& p) {
    const std::string where = "engine";
    expect_object(obj, where);
    reject_unknown(obj, where,
                   {"reef_size", "rho0", "pb", "kappa", "fa", "budding_enabled", "fd",
                    "pd", "iterations", "stagnation_window", "init_perturb_fraction",
                    "duplicate_tol", "seed"});
    p.reef_size = get_int(obj, where, "reef_size", p.reef_size);
    p.rho0 = get_number(obj, where, "rho0", p.rho0);
    p.pb = get_number(obj, where, "pb", p.pb);
    p.kappa = get_int(obj, where, "kappa", p.kappa);
    p.fa = get_number(obj, where, "fa", p.fa);
    p.budding_enabled = get_bool(obj, where, "budding_enabled", p.budding_enabled);
    p.fd = get_number(obj, where, "fd", p.fd);
    p.pd = get_number(obj, where, "pd", p.pd);
    p.iterations = get_int(obj, where, "iterations", p.iterations);
    p.stagnation_window = get_int(obj, where, "stagnation_window", p.stagnation_window);
    p.init_perturb_fraction =
        get_number(obj, where, "init_perturb_fraction", p.init_perturb_fraction);
    p.duplicate_tol = get_number(obj, where, "duplicate_tol", p.duplicate_tol);
    if (obj.contains("seed")) {
        const json& s = obj.at("seed");
        if (!s.is_number_unsigned()) fail(where + ".seed", "expected an unsigned integer");
        p.seed = s.get<std::uint64_t>();
    }
}

} // namespace

std::string problem_kind_name(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::Sphere: return "sphere";
    case ProblemKind::Bsop: return "bsop";
    case ProblemKind::Tmd: return "tmd";
    case ProblemKind::AntennaTrace: return "antenna_trace";
    }
    return "?";
}

RunConfig parse_run_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    expect_object(doc, "config");
    reject_unknown(doc, "config", {"problem", "engine", "substrates", "output_dir"});
    if (!doc.contains("problem")) fail("config", "missing key 'problem'");
    if (!doc.contains("substrates")) fail("config", "missing key 'substrates'");

    RunConfig cfg;
    try {
        build_problem(doc.at("problem"), cfg);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        fail("problem", e.what());
    }

    if (doc.contains("engine")) parse_engine(doc.at("engine"), cfg.params);

    const json& subs = doc.at("substrates");
    if (!subs.is_array() || subs.empty())
        fail("substrates", "expected a non-empty array");
    const EncodingSpec& enc = cfg.problem->encoding();
    for (std::size_t i = 0; i < subs.size(); ++i)
        cfg.params.substrates.push_back(
            parse_substrate(subs[i], "substrates[" + std::to_string(i) + "]", enc));

    if (doc.contains("output_dir")) cfg.output_dir = get_string(doc, "config", "output_dir");

    try {
        cfg.params.validate(enc);
    } catch (const std::exception& e) {
        fail("engine", e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_run_config(ss.str());
}

TmdDesign load_tmd_solution(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("solution: cannot open " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("solution: ") + e.what());
    }
    expect_object(doc, "solution");
    reject_unknown(doc, "solution", {"omega", "xi", "m", "fb"});
    TmdDesign d;
    for (const char* key : {"omega", "xi", "m", "fb"})
        if (!doc.contains(key) || !doc.at(key).is_array())
            fail("solution", std::string("missing array '") + key + "'");
    for (const json& e : doc.at("omega")) d.omega_t.push_back(e.get<double>());
    for (const json& e : doc.at("xi")) d.xi_t.push_back(e.get<double>());
    for (const json& e : doc.at("m")) d.m_t.push_back(e.get<double>());
    for (const json& e : doc.at("fb")) d.fb.push_back(e.get<int>());
    return d;
}

Genome load_solution(const std::string& path, const RunConfig& config) {
    std::ifstream f(path);
    if (!f) throw ConfigError("solution: cannot open " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("solution: ") + e.what());
    }
    expect_object(doc, "solution");
    if (doc.contains("genome")) {
        reject_unknown(doc, "solution", {"genome"});
        const json& g = doc.at("genome");
        if (!g.is_array()) fail("solution.genome", "expected an array");
        Genome out;
        for (const json& e : g) out.push_back(e.get<double>());
        if (out.size() != config.problem->encoding().size())
            fail("solution.genome", "expected " +
                                        std::to_string(config.problem->encoding().size()) +
                                        " genes, got " + std::to_string(out.size()));
        return out;
    }
    if (config.kind == ProblemKind::Tmd) {
        TmdDesign d = load_tmd_solution(path);
        try {
            d.validate(config.tmd->model().floors());
        } catch (const std::exception& e) {
            fail("solution", e.what());
        }
        if (d.count() != config.tmd->n_tmds())
            fail("solution", "design has " + std::to_string(d.count()) +
                                 " dampers, problem expects " +
                                 std::to_string(config.tmd->n_tmds()));
        return TmdProblem::encode(d);
    }
    fail("solution", "expected a 'genome' array");
}

} // namespace reefopt
