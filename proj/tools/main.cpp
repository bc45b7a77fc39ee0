// Command-line front end: single runs, parameter sweeps, and the
// scheduler-vs-oracle self check.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "freebs/engine.hpp"
#include "freebs/io.hpp"
#include "freebs/model.hpp"
#include "freebs/scheduler.hpp"
#include "freebs/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitVerifyFailed = 2;

void print_config_error(const freebs::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& msg : e.errors()) {
        std::cerr << "  - " << msg << "\n";
    }
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write to " + path);
    }
    return out;
}

int do_run(const std::string& config_path, const std::string& scheduler,
           const std::uint64_t* seed_override, const std::string& trace_path,
           const std::string& summary_path) {
    freebs::SimConfig cfg = freebs::load_config_file(config_path);
    if (seed_override) {
        cfg.seed = *seed_override;
    }
    const auto kind = freebs::scheduler_from_name(scheduler);
    if (!kind) {
        std::cerr << "unknown scheduler: " << scheduler
                  << " (expected free_bs, baseline or brute_force)\n";
        return kExitConfigError;
    }

    freebs::RunSummary summary;
    if (!trace_path.empty()) {
        auto trace = open_output(trace_path);
        freebs::write_trace_header(trace, cfg.n_users);
        summary = freebs::run(cfg, *kind, [&trace](const freebs::SlotRecord& r) {
            freebs::write_trace_row(trace, r);
        });
    } else {
        summary = freebs::run(cfg, *kind);
    }

    const std::string json = freebs::summary_to_json(summary);
    std::cout << json << "\n";
    if (!summary_path.empty()) {
        auto out = open_output(summary_path);
        out << json << "\n";
    }
    return kExitOk;
}

int do_sweep(const std::string& config_path, const std::string& parameter,
             const std::vector<double>& values, int replications,
             const std::vector<std::string>& schedulers,
             const std::string& out_dir) {
    freebs::SimConfig base = freebs::load_config_file(config_path);

    freebs::SweepSpec spec;
    spec.parameter = parameter;
    spec.values = values;
    spec.replications = replications;
    spec.schedulers.clear();
    for (const auto& name : schedulers) {
        const auto kind = freebs::scheduler_from_name(name);
        if (!kind) {
            std::cerr << "unknown scheduler: " << name << "\n";
            return kExitConfigError;
        }
        spec.schedulers.push_back(*kind);
    }

    const auto rows = freebs::run_sweep(base, spec);

    std::filesystem::create_directories(out_dir);
    const auto csv_path =
        std::filesystem::path(out_dir) / ("sweep_" + parameter + ".csv");
    auto out = open_output(csv_path.string());
    freebs::emit_csv(out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << csv_path.string()
              << "\n";
    return kExitOk;
}

int do_verify(const std::string& config_path, std::int64_t slots, int grid,
              const std::uint64_t* seed_override) {
    freebs::SimConfig cfg = freebs::load_config_file(config_path);
    if (seed_override) {
        cfg.seed = *seed_override;
    }
    const auto report =
        freebs::verify_against_oracle(cfg, slots, grid, cfg.seed);
    std::cout << "checked " << report.slots << " slots (n_users=" << cfg.n_users
              << ", grid=" << grid << ")\n"
              << "objective mismatches: " << report.objective_mismatches
              << "\nmax |objective gap|: " << report.max_objective_gap << "\n";
    if (grid > 0) {
        std::cout << "max grid excess: " << report.max_grid_excess << "\n";
    }
    if (!report.ok()) {
        std::cout << "verify FAILED\n";
        return kExitVerifyFailed;
    }
    std::cout << "verify ok\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deadline-constrained multicast offloading simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scheduler = "free_bs";
    std::uint64_t seed = 0;
    std::string trace_path;
    std::string summary_path;

    auto* run_cmd = app.add_subcommand("run", "simulate one configuration");
    run_cmd->add_option("--config", config_path, "config JSON")->required();
    run_cmd->add_option("--scheduler", scheduler,
                        "free_bs | baseline | brute_force");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "override config seed");
    run_cmd->add_option("--trace", trace_path, "write a per-slot CSV trace");
    run_cmd->add_option("--summary", summary_path, "write the summary JSON");

    std::string parameter;
    std::vector<double> values;
    int replications = 1;
    std::vector<std::string> schedulers = {"free_bs", "baseline"};
    std::string out_dir;

    auto* sweep_cmd =
        app.add_subcommand("sweep", "run a parameter sweep, emit CSV");
    sweep_cmd->add_option("--config", config_path, "config JSON")->required();
    sweep_cmd
        ->add_option("--param", parameter,
                     "bs_power_db | n_users | control_v | arrival_rate")
        ->required();
    sweep_cmd->add_option("--values", values, "comma-separated sweep values")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--reps", replications, "paired replications");
    sweep_cmd
        ->add_option("--schedulers", schedulers, "subset of free_bs,baseline")
        ->delimiter(',');
    sweep_cmd->add_option("--out", out_dir, "output directory")->required();

    std::int64_t slots = 10000;
    int grid = 0;

    auto* verify_cmd = app.add_subcommand(
        "verify", "check the greedy scheduler against the exhaustive oracle");
    verify_cmd->add_option("--config", config_path, "config JSON")->required();
    verify_cmd->add_option("--slots", slots, "random slots to check");
    verify_cmd->add_option("--grid", grid,
                           "extra threshold grid points per slot");
    auto* vseed_opt =
        verify_cmd->add_option("--seed", seed, "override config seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            return do_run(config_path, scheduler,
                          seed_opt->count() ? &seed : nullptr, trace_path,
                          summary_path);
        }
        if (sweep_cmd->parsed()) {
            return do_sweep(config_path, parameter, values, replications,
                            schedulers, out_dir);
        }
        if (verify_cmd->parsed()) {
            return do_verify(config_path, slots, grid,
                             vseed_opt->count() ? &seed : nullptr);
        }
    } catch (const freebs::ConfigError& e) {
        print_config_error(e);
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitOk;
}
