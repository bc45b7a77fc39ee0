#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "freebs/model.hpp"

namespace freebs {

enum class SchedulerKind { free_bs, baseline, brute_force };

std::optional<SchedulerKind> scheduler_from_name(std::string_view name);
std::string_view scheduler_name(SchedulerKind kind);

// Flattened per-slot trace entry; queue values are post-update.
struct SlotRecord {
    std::int64_t slot = 0;            // 1-based, gapless
    bool arrival = false;
    double phase1_threshold = -1.0;   // -1 when the BS stays silent
    double mu1 = 0.0;
    double mu2 = 0.0;
    int relay = -1;
    int aux_r = 0;
    int decoded_count = 0;
    std::vector<std::uint8_t> decoded;
    std::vector<double> y_after;
    double z_after = 0.0;
};

using SlotSink = std::function<void(const SlotRecord&)>;

// K-slot simulation loop: Bernoulli arrival, channel draw, scheduling
// decision, queue updates, metric accumulation. r(k) is chosen from the
// pre-update Z. Fully deterministic given (cfg.seed, cfg, kind); the sink,
// when set, receives every slot in order.
RunSummary run(const SimConfig& cfg, SchedulerKind kind,
               const SlotSink& sink = {});

// Recomputes the summary from a materialized trace. Throws
// std::invalid_argument on an empty trace.
RunSummary summarize(std::span<const SlotRecord> records, const SimConfig& cfg);

// Empirical mean-rate-stability proxy: one flag per queue (Y_1..Y_N then Z),
// true iff final value / K < epsilon.
std::vector<bool> check_stability(std::span<const SlotRecord> records,
                                  double epsilon);

// Slack allowed when comparing a delivery ratio against its QoS target;
// finite-horizon queue backlogs leave at most O(Y_max/K) of the target
// unserved, which this absorbs.
inline constexpr double kQosTolerance = 1e-2;

}  // namespace freebs
