#include "freebs/engine.hpp"

#include <algorithm>
#include <stdexcept>

#include "freebs/channel.hpp"
#include "freebs/scheduler.hpp"

namespace freebs {

std::optional<SchedulerKind> scheduler_from_name(std::string_view name) {
    if (name == "free_bs") return SchedulerKind::free_bs;
    if (name == "baseline") return SchedulerKind::baseline;
    if (name == "brute_force") return SchedulerKind::brute_force;
    return std::nullopt;
}

std::string_view scheduler_name(SchedulerKind kind) {
    switch (kind) {
        case SchedulerKind::free_bs: return "free_bs";
        case SchedulerKind::baseline: return "baseline";
        case SchedulerKind::brute_force: return "brute_force";
    }
    return "unknown";
}

namespace {

SlotDecision dispatch(SchedulerKind kind, const GainMatrix& gains,
                      const VirtualQueueState& queues, bool arrival,
                      const SimConfig& cfg) {
    switch (kind) {
        case SchedulerKind::free_bs:
            return free_bs_decide(gains, queues, arrival, cfg);
        case SchedulerKind::baseline:
            return baseline_decide(gains, queues, arrival, cfg);
        case SchedulerKind::brute_force:
            return brute_force_decide(gains, queues, arrival, cfg);
    }
    throw std::logic_error("unknown scheduler kind");
}

struct Accumulator {
    double sum_mu2_norm = 0.0;
    std::int64_t arrivals = 0;
    std::vector<std::int64_t> decode_counts;
    std::int64_t total_decoded = 0;

    explicit Accumulator(std::size_t n) : decode_counts(n, 0) {}

    void add(bool arrival, double mu2_norm,
             const std::vector<std::uint8_t>& decoded) {
        sum_mu2_norm += mu2_norm;
        arrivals += arrival ? 1 : 0;
        for (std::size_t m = 0; m < decoded.size(); ++m) {
            if (decoded[m]) {
                ++decode_counts[m];
                ++total_decoded;
            }
        }
    }

    RunSummary finish(std::int64_t slots, const VirtualQueueState& queues,
                      const SimConfig& cfg) const {
        RunSummary s;
        const auto k = static_cast<double>(slots);
        s.offloading_factor = sum_mu2_norm / k;
        s.throughput = static_cast<double>(total_decoded) / k;
        const std::size_t n = decode_counts.size();
        s.delivery_ratio.resize(n);
        s.qos_met.resize(n);
        for (std::size_t m = 0; m < n; ++m) {
            // No arrivals: every QoS target is vacuously satisfied.
            s.delivery_ratio[m] =
                arrivals > 0 ? static_cast<double>(decode_counts[m]) /
                                   static_cast<double>(arrivals)
                             : 1.0;
            s.qos_met[m] =
                s.delivery_ratio[m] >= cfg.qos[m] - kQosTolerance ? 1 : 0;
        }
        s.y_drift.resize(n);
        for (std::size_t m = 0; m < n; ++m) {
            s.y_drift[m] = queues.y[m] / k;
        }
        s.z_drift = queues.z / k;
        return s;
    }
};

}  // namespace

RunSummary run(const SimConfig& cfg, SchedulerKind kind, const SlotSink& sink) {
    auto errors = validate_config(cfg);
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }

    const auto n = static_cast<std::size_t>(cfg.n_users);
    const FadingModel model{cfg.seed};
    VirtualQueueState queues;
    queues.y.assign(n, 0.0);

    Accumulator acc(n);
    SlotRecord record;
    record.decoded.resize(n);
    record.y_after.resize(n);

    for (std::int64_t k = 1; k <= cfg.n_slots; ++k) {
        auto arrival_eng =
            slot_engine(cfg.seed, static_cast<std::uint64_t>(k), kArrivalStream);
        const bool arrival = uniform01(arrival_eng) < cfg.arrival_rate;
        const auto gains =
            sample_slot_gains(model, cfg, static_cast<std::uint64_t>(k));

        const SlotDecision decision = dispatch(kind, gains, queues, arrival, cfg);

        // decide -> decode -> update Y -> r from pre-update Z -> update Z.
        for (std::size_t m = 0; m < n; ++m) {
            queues.y[m] = update_user_queue(queues.y[m], arrival, cfg.qos[m],
                                            decision.decoded[m] != 0);
        }
        const double mu2_norm = decision.mu2 / cfg.slot_duration;
        queues.z = update_z_queue(queues.z, decision.aux_r, mu2_norm);

        acc.add(arrival, mu2_norm, decision.decoded);

        if (sink) {
            record.slot = k;
            record.arrival = arrival;
            record.phase1_threshold = decision.phase1_threshold
                                          ? *decision.phase1_threshold
                                          : -1.0;
            record.mu1 = decision.mu1;
            record.mu2 = decision.mu2;
            record.relay = decision.relay ? *decision.relay : -1;
            record.aux_r = decision.aux_r;
            record.decoded = decision.decoded;
            record.decoded_count = static_cast<int>(
                std::count_if(decision.decoded.begin(), decision.decoded.end(),
                              [](std::uint8_t bit) { return bit != 0; }));
            record.y_after = queues.y;
            record.z_after = queues.z;
            sink(record);
        }
    }
    return acc.finish(cfg.n_slots, queues, cfg);
}

RunSummary summarize(std::span<const SlotRecord> records, const SimConfig& cfg) {
    if (records.empty()) {
        throw std::invalid_argument("summarize: empty slot record stream");
    }
    const auto n = static_cast<std::size_t>(cfg.n_users);
    Accumulator acc(n);
    for (const auto& r : records) {
        acc.add(r.arrival, r.mu2 / cfg.slot_duration, r.decoded);
    }
    VirtualQueueState final_queues;
    final_queues.y = records.back().y_after;
    final_queues.z = records.back().z_after;
    return acc.finish(static_cast<std::int64_t>(records.size()), final_queues,
                      cfg);
}

std::vector<bool> check_stability(std::span<const SlotRecord> records,
                                  double epsilon) {
    if (records.empty()) {
        throw std::invalid_argument("check_stability: empty slot record stream");
    }
    const auto& last = records.back();
    const auto k = static_cast<double>(records.size());
    std::vector<bool> stable;
    stable.reserve(last.y_after.size() + 1);
    for (double y : last.y_after) {
        stable.push_back(y / k < epsilon);
    }
    stable.push_back(last.z_after / k < epsilon);
    return stable;
}

}  // namespace freebs
