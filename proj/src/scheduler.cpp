#include "freebs/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "freebs/channel.hpp"

namespace freebs {

std::vector<int> descending_gain_order(const std::vector<double>& bs_gains) {
    std::vector<int> order(bs_gains.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&bs_gains](int a, int b) {
        return bs_gains[a] > bs_gains[b];
    });
    return order;
}

namespace {

// Phase-I decode set for a given threshold, by direct comparison: with tied
// gains this can extend past the sorted prefix, which matters for oracle
// equivalence.
void phase1_decode_set(const GainMatrix& gains, double threshold,
                       std::vector<std::uint8_t>& decoded) {
    const std::size_t n = gains.bs_to_user.size();
    decoded.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
        decoded[m] = gains.bs_to_user[m] >= threshold ? 1 : 0;
    }
}

double decoded_weight(const std::vector<std::uint8_t>& decoded,
                      const std::vector<double>& y) {
    double sum = 0.0;
    for (std::size_t m = 0; m < decoded.size(); ++m) {
        if (decoded[m]) sum += y[m];
    }
    return sum;
}

SlotDecision make_idle_decision(const VirtualQueueState& queues, bool arrival,
                                const SimConfig& cfg) {
    SlotDecision d;
    d.arrival = arrival;
    d.mu1 = 0.0;
    d.mu2 = cfg.slot_duration;
    d.decoded.assign(static_cast<std::size_t>(cfg.n_users), 0);
    d.aux_r = choose_auxiliary(queues.z, cfg.control_v);
    d.objective = queues.z * (d.mu2 / cfg.slot_duration);
    d.packet_lost = arrival;
    return d;
}

SlotDecision decide(const GainMatrix& gains, const VirtualQueueState& queues,
                    bool arrival, const SimConfig& cfg, bool relays_allowed) {
    if (!arrival) {
        SlotDecision d = make_idle_decision(queues, false, cfg);
        d.packet_lost = false;
        return d;
    }

    const auto order = descending_gain_order(gains.bs_to_user);
    const int n = cfg.n_users;
    relays_allowed = relays_allowed && cfg.relay_enabled && n > 1;

    bool have_best = false;
    Candidate best;
    int evaluated = 0;

    for (int rank_i = 1; rank_i <= n; ++rank_i) {
        auto base = evaluate_candidate(order, rank_i, std::nullopt, gains,
                                       queues, cfg);
        if (!base) {
            continue;  // packet does not fit at this rate
        }
        ++evaluated;
        if (!have_best || base->objective > best.objective) {
            best = *base;
            have_best = true;
        }
        if (!relays_allowed || !(base->mu2 > 0.0)) {
            continue;
        }
        for (int rank_j = 1; rank_j <= rank_i; ++rank_j) {
            auto cand = evaluate_candidate(order, rank_i, rank_j, gains,
                                           queues, cfg);
            ++evaluated;
            if (cand->objective > best.objective) {
                best = *cand;
            }
        }
    }

    if (cfg.allow_idle) {
        ++evaluated;
        const double idle_objective =
            queues.z * (cfg.slot_duration / cfg.slot_duration);
        if (!have_best || idle_objective > best.objective) {
            SlotDecision d = make_idle_decision(queues, true, cfg);
            d.candidates_evaluated = evaluated;
            return d;
        }
    }

    if (!have_best) {
        SlotDecision d = make_idle_decision(queues, true, cfg);
        d.candidates_evaluated = evaluated;
        return d;
    }

    // Rebuild the winning candidate in full.
    SlotDecision d;
    d.arrival = true;
    const int user_i = order[static_cast<std::size_t>(best.phase1_rank - 1)];
    const double gamma0 = gains.bs_to_user[static_cast<std::size_t>(user_i)];
    d.phase1_threshold = gamma0;
    d.phase1_rate = rate_from_threshold(cfg.bs_power, gamma0, cfg.log_base);
    d.mu1 = best.mu1;
    d.mu2 = best.mu2;
    phase1_decode_set(gains, gamma0, d.decoded);
    if (best.relay_rank) {
        const int user_j = order[static_cast<std::size_t>(*best.relay_rank - 1)];
        const double power_j = cfg.user_powers[static_cast<std::size_t>(user_j)];
        const double thr = relay_threshold(cfg.packet_bits, best.mu2, power_j,
                                           cfg.log_base);
        d.relay = user_j;
        d.relay_rate = cfg.packet_bits / best.mu2;
        d.relay_threshold = thr;
        const auto& row = gains.user_to_user[static_cast<std::size_t>(user_j)];
        for (std::size_t m = 0; m < d.decoded.size(); ++m) {
            if (!d.decoded[m] && row[m] >= thr) d.decoded[m] = 1;
        }
    }
    d.aux_r = choose_auxiliary(queues.z, cfg.control_v);
    d.objective = best.objective;
    d.packet_lost =
        std::none_of(d.decoded.begin(), d.decoded.end(),
                     [](std::uint8_t bit) { return bit != 0; });
    d.candidates_evaluated = evaluated;
    return d;
}

}  // namespace

std::optional<Candidate> evaluate_candidate(std::span<const int> order,
                                            int rank_i,
                                            std::optional<int> rank_j,
                                            const GainMatrix& gains,
                                            const VirtualQueueState& queues,
                                            const SimConfig& cfg) {
    if (rank_i < 1 || rank_i > static_cast<int>(order.size())) {
        throw std::invalid_argument("evaluate_candidate: bad phase-I rank");
    }
    if (rank_j && (*rank_j < 1 || *rank_j > rank_i)) {
        throw std::invalid_argument(
            "evaluate_candidate: relay must be a phase-I decoder");
    }

    const int user_i = order[static_cast<std::size_t>(rank_i - 1)];
    const double gamma0 = gains.bs_to_user[static_cast<std::size_t>(user_i)];
    const auto mu1 = phase1_duration(cfg.packet_bits, cfg.bs_power, gamma0,
                                     cfg.slot_duration, cfg.log_base);
    if (!mu1) {
        return std::nullopt;
    }

    Candidate cand;
    cand.phase1_rank = rank_i;
    cand.mu1 = *mu1;
    cand.mu2 = cfg.slot_duration - *mu1;

    std::vector<std::uint8_t> decoded;
    phase1_decode_set(gains, gamma0, decoded);

    if (rank_j && cand.mu2 > 0.0) {
        cand.relay_rank = rank_j;
        const int user_j = order[static_cast<std::size_t>(*rank_j - 1)];
        const double thr = relay_threshold(
            cfg.packet_bits, cand.mu2,
            cfg.user_powers[static_cast<std::size_t>(user_j)], cfg.log_base);
        const auto& row = gains.user_to_user[static_cast<std::size_t>(user_j)];
        for (std::size_t m = 0; m < decoded.size(); ++m) {
            if (!decoded[m] && row[m] >= thr) decoded[m] = 1;
        }
    }

    cand.objective = decoded_weight(decoded, queues.y) +
                     queues.z * (cand.mu2 / cfg.slot_duration);
    return cand;
}

SlotDecision free_bs_decide(const GainMatrix& gains,
                            const VirtualQueueState& queues, bool arrival,
                            const SimConfig& cfg) {
    return decide(gains, queues, arrival, cfg, /*relays_allowed=*/true);
}

SlotDecision baseline_decide(const GainMatrix& gains,
                             const VirtualQueueState& queues, bool arrival,
                             const SimConfig& cfg) {
    return decide(gains, queues, arrival, cfg, /*relays_allowed=*/false);
}

SlotDecision brute_force_decide(const GainMatrix& gains,
                                const VirtualQueueState& queues, bool arrival,
                                const SimConfig& cfg,
                                std::span<const double> gamma_grid) {
    if (!arrival) {
        SlotDecision d = make_idle_decision(queues, false, cfg);
        d.packet_lost = false;
        return d;
    }

    const int n = cfg.n_users;
    const bool relays_allowed = cfg.relay_enabled && n > 1;

    // Threshold candidates: every user gain, then the extra grid.
    std::vector<double> thresholds(gains.bs_to_user.begin(),
                                   gains.bs_to_user.end());
    thresholds.insert(thresholds.end(), gamma_grid.begin(), gamma_grid.end());

    bool have_best = false;
    double best_objective = 0.0;
    SlotDecision best;
    std::vector<std::uint8_t> decoded;
    std::vector<std::uint8_t> with_relay;

    for (double gamma0 : thresholds) {
        const auto mu1 = phase1_duration(cfg.packet_bits, cfg.bs_power, gamma0,
                                         cfg.slot_duration, cfg.log_base);
        if (!mu1) {
            continue;
        }
        const double mu2 = cfg.slot_duration - *mu1;

        phase1_decode_set(gains, gamma0, decoded);
        if (std::none_of(decoded.begin(), decoded.end(),
                         [](std::uint8_t bit) { return bit != 0; })) {
            continue;  // a broadcast nobody can hear is not a transmission
        }

        auto consider = [&](std::optional<int> relay_user,
                            const std::vector<std::uint8_t>& dec,
                            double objective, std::optional<double> thr) {
            if (have_best && !(objective > best_objective)) {
                return;
            }
            have_best = true;
            best_objective = objective;
            best = SlotDecision{};
            best.arrival = true;
            best.phase1_threshold = gamma0;
            best.phase1_rate =
                rate_from_threshold(cfg.bs_power, gamma0, cfg.log_base);
            best.mu1 = *mu1;
            best.mu2 = mu2;
            best.decoded = dec;
            best.objective = objective;
            if (relay_user) {
                best.relay = relay_user;
                best.relay_rate = cfg.packet_bits / mu2;
                best.relay_threshold = thr;
            }
        };

        const double no_relay_objective =
            decoded_weight(decoded, queues.y) +
            queues.z * (mu2 / cfg.slot_duration);
        consider(std::nullopt, decoded, no_relay_objective, std::nullopt);

        if (!relays_allowed || !(mu2 > 0.0)) {
            continue;
        }
        for (int j = 0; j < n; ++j) {
            if (!decoded[static_cast<std::size_t>(j)]) {
                continue;  // only a phase-I decoder holds the packet
            }
            const double thr = relay_threshold(
                cfg.packet_bits, mu2,
                cfg.user_powers[static_cast<std::size_t>(j)], cfg.log_base);
            with_relay = decoded;
            const auto& row = gains.user_to_user[static_cast<std::size_t>(j)];
            for (std::size_t m = 0; m < with_relay.size(); ++m) {
                if (!with_relay[m] && row[m] >= thr) with_relay[m] = 1;
            }
            const double objective = decoded_weight(with_relay, queues.y) +
                                     queues.z * (mu2 / cfg.slot_duration);
            consider(j, with_relay, objective, thr);
        }
    }

    if (cfg.allow_idle) {
        const double idle_objective =
            queues.z * (cfg.slot_duration / cfg.slot_duration);
        if (!have_best || idle_objective > best_objective) {
            return make_idle_decision(queues, true, cfg);
        }
    }
    if (!have_best) {
        return make_idle_decision(queues, true, cfg);
    }

    best.aux_r = choose_auxiliary(queues.z, cfg.control_v);
    best.packet_lost = false;  // a gain-threshold candidate always decodes
    return best;
}

VerifyReport verify_against_oracle(const SimConfig& cfg, std::int64_t n_slots,
                                   int grid_points, std::uint64_t seed) {
    VerifyReport report;
    report.slots = n_slots;

    const FadingModel model{seed};
    VirtualQueueState queues;
    queues.y.resize(static_cast<std::size_t>(cfg.n_users));
    std::vector<double> grid;

    for (std::int64_t slot = 1; slot <= n_slots; ++slot) {
        const auto gains =
            sample_slot_gains(model, cfg, static_cast<std::uint64_t>(slot));
        auto eng = slot_engine(seed, static_cast<std::uint64_t>(slot),
                               kStateStream);
        for (auto& y : queues.y) {
            y = 5.0 * uniform01(eng);
        }
        queues.z = 5.0 * uniform01(eng);

        const auto greedy = free_bs_decide(gains, queues, true, cfg);
        const auto exact = brute_force_decide(gains, queues, true, cfg);
        const double gap = std::abs(greedy.objective - exact.objective);
        report.max_objective_gap = std::max(report.max_objective_gap, gap);
        if (gap != 0.0) {
            ++report.objective_mismatches;
        }

        if (grid_points > 0) {
            const double top =
                *std::max_element(gains.bs_to_user.begin(),
                                  gains.bs_to_user.end());
            grid.resize(static_cast<std::size_t>(grid_points));
            for (int t = 1; t <= grid_points; ++t) {
                grid[static_cast<std::size_t>(t - 1)] =
                    2.0 * top * static_cast<double>(t) /
                    static_cast<double>(grid_points);
            }
            const auto gridded =
                brute_force_decide(gains, queues, true, cfg, grid);
            report.max_grid_excess = std::max(
                report.max_grid_excess, gridded.objective - exact.objective);
        }
    }
    return report;
}

}  // namespace freebs
