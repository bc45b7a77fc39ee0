#include "freebs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "freebs/io.hpp"

namespace freebs {

namespace {

const char* const kSweepParams[] = {"bs_power_db", "n_users", "control_v",
                                    "arrival_rate"};

bool known_parameter(const std::string& name) {
    return std::find(std::begin(kSweepParams), std::end(kSweepParams), name) !=
           std::end(kSweepParams);
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("FREEBS_THREADS")) {
        const long parsed = std::strtol(env, nullptr, 10);
        if (parsed >= 1) {
            return static_cast<unsigned>(parsed);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

}  // namespace

std::vector<std::string> validate_sweep(const SweepSpec& spec) {
    std::vector<std::string> errors;
    if (!known_parameter(spec.parameter)) {
        errors.push_back("unknown sweep parameter: " + spec.parameter);
    }
    if (spec.values.empty()) {
        errors.push_back("values must be nonempty");
    } else {
        for (std::size_t i = 1; i < spec.values.size(); ++i) {
            if (!(spec.values[i] > spec.values[i - 1])) {
                errors.push_back("values must be strictly increasing");
                break;
            }
        }
    }
    if (spec.replications < 1) {
        errors.push_back("replications must be >= 1");
    }
    if (spec.schedulers.empty()) {
        errors.push_back("schedulers must be nonempty");
    } else if (std::any_of(spec.schedulers.begin(), spec.schedulers.end(),
                           [](SchedulerKind k) {
                               return k == SchedulerKind::brute_force;
                           })) {
        errors.push_back("sweeps support free_bs and baseline schedulers only");
    }
    return errors;
}

SimConfig apply_sweep_value(const SimConfig& base, const std::string& parameter,
                            double value) {
    SimConfig cfg = base;
    if (parameter == "bs_power_db") {
        cfg.bs_power = std::pow(10.0, value / 10.0);
    } else if (parameter == "n_users") {
        if (value < 1.0 || value != std::floor(value)) {
            throw std::invalid_argument("n_users sweep values must be integers >= 1");
        }
        const int n = static_cast<int>(value);
        cfg.n_users = n;
        const auto un = static_cast<std::size_t>(n);
        cfg.user_powers.assign(un, base.user_powers.at(0));
        cfg.mean_gain_bs.assign(un, base.mean_gain_bs.at(0));
        cfg.mean_gain_d2d.assign(
            un, std::vector<double>(un, base.mean_gain_d2d.at(0).at(0)));
        cfg.qos.assign(un, base.qos.at(0));
    } else if (parameter == "control_v") {
        cfg.control_v = value;
    } else if (parameter == "arrival_rate") {
        cfg.arrival_rate = value;
    } else {
        throw std::invalid_argument("unknown sweep parameter: " + parameter);
    }
    return cfg;
}

std::vector<SweepRow> run_sweep(const SimConfig& base, const SweepSpec& spec) {
    auto spec_errors = validate_sweep(spec);
    if (!spec_errors.empty()) {
        throw ConfigError(std::move(spec_errors));
    }

    struct Job {
        double value;
        int rep;
        SchedulerKind scheduler;
    };
    std::vector<Job> jobs;
    jobs.reserve(spec.values.size() *
                 static_cast<std::size_t>(spec.replications) *
                 spec.schedulers.size());
    for (double value : spec.values) {
        for (int rep = 0; rep < spec.replications; ++rep) {
            for (SchedulerKind scheduler : spec.schedulers) {
                jobs.push_back({value, rep, scheduler});
            }
        }
    }

    // Validate every sweep point up front so a bad value fails before any
    // work is spent.
    for (double value : spec.values) {
        auto cfg = apply_sweep_value(base, spec.parameter, value);
        auto errors = validate_config(cfg);
        if (!errors.empty()) {
            throw ConfigError(std::move(errors));
        }
    }

    std::vector<SweepRow> rows(jobs.size());
    auto run_job = [&](std::size_t index) {
        const Job& job = jobs[index];
        SimConfig cfg = apply_sweep_value(base, spec.parameter, job.value);
        cfg.seed = base.seed + static_cast<std::uint64_t>(job.rep);
        const RunSummary summary = run(cfg, job.scheduler);

        SweepRow row;
        row.parameter = spec.parameter;
        row.value = job.value;
        row.rep = job.rep;
        row.scheduler = job.scheduler;
        row.seed = cfg.seed;
        row.offloading_factor = summary.offloading_factor;
        row.throughput = summary.throughput;
        row.min_delivery_ratio =
            *std::min_element(summary.delivery_ratio.begin(),
                              summary.delivery_ratio.end());
        double drift = summary.z_drift;
        for (double y : summary.y_drift) drift = std::max(drift, y);
        row.max_queue_drift = drift;
        row.qos_all_met = std::all_of(summary.qos_met.begin(),
                                      summary.qos_met.end(),
                                      [](std::uint8_t m) { return m != 0; });
        rows[index] = std::move(row);
    };

    const unsigned n_threads = std::min<std::size_t>(
        sweep_threads(), jobs.size() == 0 ? 1 : jobs.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        workers.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) {
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < jobs.size();
                     i = next.fetch_add(1)) {
                    run_job(i);
                }
            });
        }
        for (auto& w : workers) w.join();
    }
    return rows;
}

void emit_csv(std::ostream& out, std::span<const SweepRow> rows) {
    out << "param,value,rep,scheduler,seed,offloading_factor,throughput,"
           "min_delivery_ratio,max_queue_drift,qos_all_met\n";
    for (const auto& row : rows) {
        out << row.parameter << ',' << format_sig9(row.value) << ',' << row.rep
            << ',' << scheduler_name(row.scheduler) << ',' << row.seed << ','
            << format_sig9(row.offloading_factor) << ','
            << format_sig9(row.throughput) << ','
            << format_sig9(row.min_delivery_ratio) << ','
            << format_sig9(row.max_queue_drift) << ','
            << (row.qos_all_met ? 1 : 0) << '\n';
    }
}

}  // namespace freebs
