#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "freebs/engine.hpp"
#include "freebs/model.hpp"

namespace freebs {

// One-dimensional parameter sweep with paired replications: replication r
// uses seed base+r at every sweep point and for every scheduler, so curves
// are common-random-number comparable.
struct SweepSpec {
    std::string parameter;  // bs_power_db | n_users | control_v | arrival_rate
    std::vector<double> values;  // nonempty, strictly increasing
    int replications = 1;
    std::vector<SchedulerKind> schedulers = {SchedulerKind::free_bs,
                                             SchedulerKind::baseline};
};

std::vector<std::string> validate_sweep(const SweepSpec& spec);

// Base config with one parameter replaced. n_users rebuilds the per-user
// vectors by broadcasting the first user's values. Throws
// std::invalid_argument for unknown parameters.
SimConfig apply_sweep_value(const SimConfig& base, const std::string& parameter,
                            double value);

struct SweepRow {
    std::string parameter;
    double value = 0.0;
    int rep = 0;
    SchedulerKind scheduler = SchedulerKind::free_bs;
    std::uint64_t seed = 0;
    double offloading_factor = 0.0;
    double throughput = 0.0;
    double min_delivery_ratio = 0.0;
    double max_queue_drift = 0.0;
    bool qos_all_met = false;
};

// Runs value x replication x scheduler jobs, in parallel up to
// FREEBS_THREADS (default: hardware concurrency). Rows come back in job
// order regardless of completion order.
std::vector<SweepRow> run_sweep(const SimConfig& base, const SweepSpec& spec);

// Fixed schema, 9 significant digits: identical rows serialize to identical
// bytes.
void emit_csv(std::ostream& out, std::span<const SweepRow> rows);

}  // namespace freebs
