#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "freebs/model.hpp"

namespace freebs {

// One (threshold, relay) choice under evaluation. Ranks are 1-based
// positions in the descending-gain order; relay_rank, when set, is <= the
// phase-I rank so the relay itself decoded in phase I.
struct Candidate {
    int phase1_rank = 0;
    std::optional<int> relay_rank;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double objective = 0.0;
};

// User indices sorted by descending BS gain, ties by ascending index.
std::vector<int> descending_gain_order(const std::vector<double>& bs_gains);

// Evaluates the candidate that pins the BS threshold to the rank_i-th
// largest gain and lets the rank_j-th user relay (no relay when rank_j is
// empty). Empty result when the candidate is infeasible (mu1 > T).
std::optional<Candidate> evaluate_candidate(std::span<const int> order,
                                            int rank_i,
                                            std::optional<int> rank_j,
                                            const GainMatrix& gains,
                                            const VirtualQueueState& queues,
                                            const SimConfig& cfg);

// Greedy per-slot rule: enumerate thresholds over the sorted user gains and
// relays over the phase-I decoders, keep the candidate maximizing
// sum_m Y_m 1_m + Z mu2/T. Ties resolve to the smaller rank, then to no
// relay, then to the smaller relay rank. When every candidate is infeasible
// and idling is not allowed, the packet is lost and the slot reported idle.
SlotDecision free_bs_decide(const GainMatrix& gains,
                            const VirtualQueueState& queues, bool arrival,
                            const SimConfig& cfg);

// Same search with the relay candidate set forced to "none".
SlotDecision baseline_decide(const GainMatrix& gains,
                             const VirtualQueueState& queues, bool arrival,
                             const SimConfig& cfg);

// Exhaustive reference: every threshold in {bs gains} + gamma_grid crossed
// with every phase-I decoder as relay. Grid thresholds that no user can
// decode are skipped (they describe a broadcast nobody hears; idling is the
// allow_idle candidate instead). Intended for small N.
SlotDecision brute_force_decide(const GainMatrix& gains,
                                const VirtualQueueState& queues, bool arrival,
                                const SimConfig& cfg,
                                std::span<const double> gamma_grid = {});

struct VerifyReport {
    std::int64_t slots = 0;
    std::int64_t objective_mismatches = 0;
    double max_objective_gap = 0.0;  // max |greedy - exhaustive|
    double max_grid_excess = 0.0;    // max (gridded - gain-grid optimum)
    bool ok() const {
        return objective_mismatches == 0 && max_grid_excess <= 1e-9;
    }
};

// Self-test over random queue states and channel draws: the greedy rule must
// attain the exhaustive optimum exactly, and (with grid_points > 0) a dense
// threshold grid must never beat the gain-grid choices by more than 1e-9.
VerifyReport verify_against_oracle(const SimConfig& cfg, std::int64_t n_slots,
                                   int grid_points, std::uint64_t seed);

}  // namespace freebs
