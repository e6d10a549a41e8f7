#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reefopt/config.hpp"

namespace fs = std::filesystem;
using namespace reefopt;

namespace {

int thread_cap() {
    int cap = static_cast<int>(std::thread::hardware_concurrency());
    if (cap < 1) cap = 1;
    if (const char* env = std::getenv("REEFOPT_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) cap = v;
    }
    return cap;
}

// run `jobs` closures over at most thread_cap() workers; each job index is
// independent, so completion order does not matter
template <typename Fn>
void parallel_for(int jobs, Fn&& fn) {
    const int workers = std::min(jobs, thread_cap());
    if (workers <= 1) {
        for (int i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < jobs; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

void write_summary(const fs::path& path, const Coral& best, const RunTelemetry& tm) {
    nlohmann::json doc;
    doc["best_fitness"] = best.fitness;
    doc["best_genome"] = best.genome;
    doc["evaluations"] = tm.evaluations;
    doc["seconds"] = tm.seconds;
    write_text(path, doc.dump(2) + "\n");
}

int cmd_run(const std::string& config_path, std::uint64_t* seed_override,
            const std::string& out_override) {
    RunConfig cfg = load_run_config(config_path);
    if (seed_override) cfg.params.seed = *seed_override;
    if (!out_override.empty()) cfg.output_dir = out_override;
    fs::create_directories(cfg.output_dir);

    const RunResult result = run(cfg.params, *cfg.problem);
    const fs::path out(cfg.output_dir);
    write_csv(result.telemetry, (out / "telemetry.csv").string());
    write_summary(out / "summary.json", result.best, result.telemetry);
    std::cout << "best_fitness " << fmt9(result.best.fitness) << "\n";
    return 0;
}

int cmd_compare(const std::string& config_path, std::uint64_t* seed_override, int n_seeds,
                const std::string& out_override) {
    RunConfig cfg = load_run_config(config_path);
    if (seed_override) cfg.params.seed = *seed_override;
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (n_seeds < 1) throw ConfigError("compare: --seeds must be >= 1");
    fs::create_directories(cfg.output_dir);

    // variant 0 is the full multi-substrate run; then one variant per
    // substrate with the same reef size and iteration budget
    std::vector<std::string> names{"CRO-SL"};
    std::vector<RunParams> variants{cfg.params};
    for (std::size_t i = 0; i < cfg.params.substrates.size(); ++i) {
        RunParams p = cfg.params;
        p.substrates = {cfg.params.substrates[i]};
        names.push_back(cfg.params.substrates[i].name());
        variants.push_back(std::move(p));
    }
    for (std::size_t i = 1; i < names.size(); ++i)
        for (std::size_t j = 1; j < i; ++j)
            if (names[i] == names[j]) names[i] += "#" + std::to_string(i);

    const int n_variants = static_cast<int>(variants.size());
    std::vector<double> fitness(static_cast<std::size_t>(n_variants) * n_seeds);
    std::vector<long> evals(fitness.size());
    parallel_for(n_variants * n_seeds, [&](int job) {
        const int v = job / n_seeds;
        const int s = job % n_seeds;
        RunParams p = variants[v];
        p.seed = cfg.params.seed + static_cast<std::uint64_t>(s);
        const RunResult r = run(p, *cfg.problem);
        fitness[job] = r.best.fitness;
        evals[job] = r.telemetry.evaluations;
    });

    std::string csv = "variant,min,mean,evaluations\n";
    for (int v = 0; v < n_variants; ++v) {
        double mn = std::numeric_limits<double>::infinity();
        double sum = 0.0;
        long ev = 0;
        for (int s = 0; s < n_seeds; ++s) {
            const double f = fitness[static_cast<std::size_t>(v) * n_seeds + s];
            mn = std::min(mn, f);
            sum += f;
            ev += evals[static_cast<std::size_t>(v) * n_seeds + s];
        }
        csv += names[v] + "," + fmt9(mn) + "," + fmt9(sum / n_seeds) + "," +
               std::to_string(ev) + "\n";
    }
    write_text(fs::path(cfg.output_dir) / "compare.csv", csv);
    std::cout << csv;
    return 0;
}

int cmd_eval(const std::string& config_path, const std::string& solution_path) {
    RunConfig cfg = load_run_config(config_path);
    const Genome g = load_solution(solution_path, cfg);
    std::printf("%.6g\n", cfg.problem->evaluate(g));
    return 0;
}

int cmd_frf(const std::string& config_path, const std::string& solution_path,
            const std::string& out_override) {
    RunConfig cfg = load_run_config(config_path);
    if (cfg.kind != ProblemKind::Tmd)
        throw ConfigError("frf: the config must describe a tmd problem");
    if (!out_override.empty()) cfg.output_dir = out_override;
    fs::create_directories(cfg.output_dir);

    TmdDesign design;  // empty list of dampers = open loop
    if (!solution_path.empty())
        design = cfg.tmd->decode(load_solution(solution_path, cfg));

    const TmdModel& model = cfg.tmd->model();
    const auto curves = model.frf_closed_loop(design);
    const int n = model.floors();
    std::string csv = "omega_rad_s";
    for (int i = 1; i <= n; ++i) csv += ",floor_" + std::to_string(i) + "_db";
    csv += "\n";
    for (int p = 0; p < model.grid().points(); ++p) {
        csv += fmt9(model.grid().omega(p));
        for (int i = 0; i < n; ++i)
            csv += "," + fmt9(20.0 * std::log10(std::max(curves[i][p], 1e-300)));
        csv += "\n";
    }
    write_text(fs::path(cfg.output_dir) / "frf.csv", csv);
    return 0;
}

int cmd_bsop_report(const std::string& config_path, const std::string& mode,
                    const std::string& solution_path, const std::string& out_override) {
    RunConfig cfg = load_run_config(config_path);
    if (cfg.kind != ProblemKind::Bsop)
        throw ConfigError("bsop-report: the config must describe a bsop problem");
    if (!out_override.empty()) cfg.output_dir = out_override;
    fs::create_directories(cfg.output_dir);

    const MicroGridScenario& sc = cfg.bsop->scenario();
    const Billing base = billing(sc.base_consumption(), sc.tariff);

    std::vector<double> schedule(kWeekHours, 0.0);
    if (mode == "deterministic") {
        schedule = deterministic_schedule(sc);
    } else if (mode == "solution") {
        if (solution_path.empty())
            throw ConfigError("bsop-report: --solution required for mode solution");
        schedule = load_solution(solution_path, cfg);
    } else if (mode != "none") {
        throw ConfigError("bsop-report: mode must be none, deterministic or solution");
    }

    const auto repaired = simulate_soc_repair(schedule, sc.battery);
    std::vector<double> p = sc.base_consumption();
    for (int t = 0; t < kWeekHours; ++t) p[t] += repaired.schedule[t];
    const Billing bill = billing(p, sc.tariff);
    const double improvement = (base.total - bill.total) / base.total * 100.0;

    char row[160];
    std::snprintf(row, sizeof row, "%s,%.2f,%.2f,%.2f,%.2f\n", mode.c_str(),
                  bill.power_term, bill.energy_term, bill.total, improvement);
    const std::string csv =
        std::string("mode,power_term_eur,energy_term_eur,total_eur,improvement_pct\n") + row;
    write_text(fs::path(cfg.output_dir) / "bsop_report.csv", csv);
    std::cout << csv;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coral reef optimization with substrate layers"};
    app.require_subcommand(1);

    std::string config_path;
    std::string solution_path;
    std::string out_dir;
    std::string mode = "none";
    std::uint64_t seed = 0;
    bool seed_given = false;
    int n_seeds = 5;

    auto add_common = [&](CLI::App* sub, bool with_seed) {
        sub->add_option("--config", config_path, "run configuration JSON")->required();
        sub->add_option("--out", out_dir, "output directory (overrides the config)");
        if (with_seed)
            sub->add_option("--seed", seed, "base RNG seed (overrides the config)")
                ->each([&](const std::string&) { seed_given = true; });
    };

    CLI::App* run_cmd = app.add_subcommand("run", "single optimization run");
    add_common(run_cmd, true);

    CLI::App* compare_cmd =
        app.add_subcommand("compare", "CRO-SL vs single-substrate baselines");
    add_common(compare_cmd, true);
    compare_cmd->add_option("--seeds", n_seeds, "number of seeds per variant");

    CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a stored solution");
    eval_cmd->add_option("--config", config_path, "run configuration JSON")->required();
    eval_cmd->add_option("--solution", solution_path, "solution JSON")->required();

    CLI::App* frf_cmd = app.add_subcommand("frf", "per-floor frequency response CSV");
    add_common(frf_cmd, false);
    frf_cmd->add_option("--solution", solution_path,
                        "damper design JSON (omit for the open loop)");

    CLI::App* bsop_cmd = app.add_subcommand("bsop-report", "weekly billing breakdown");
    add_common(bsop_cmd, false);
    bsop_cmd->add_option("--mode", mode, "none, deterministic or solution");
    bsop_cmd->add_option("--solution", solution_path, "battery schedule JSON");

    CLI11_PARSE(app, argc, argv);

    try {
        std::uint64_t* seed_ptr = seed_given ? &seed : nullptr;
        if (run_cmd->parsed()) return cmd_run(config_path, seed_ptr, out_dir);
        if (compare_cmd->parsed())
            return cmd_compare(config_path, seed_ptr, n_seeds, out_dir);
        if (eval_cmd->parsed()) return cmd_eval(config_path, solution_path);
        if (frf_cmd->parsed()) return cmd_frf(config_path, solution_path, out_dir);
        if (bsop_cmd->parsed())
            return cmd_bsop_report(config_path, mode, solution_path, out_dir);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
