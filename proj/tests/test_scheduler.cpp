#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "freebs/channel.hpp"
#include "freebs/scheduler.hpp"

using namespace freebs;

namespace {

// N=2 worked instance: P=100 everywhere, L=1, T=1, base 2,
// Y=(0.5, 2.0), Z=0.3, bs gains (0.5, 0.1), gain user0->user1 = 0.02.
// Expected values frozen from a 50-digit evaluation of the rate/threshold
// coupling and the per-slot objective.
struct Instance {
    SimConfig cfg = make_config(2);
    GainMatrix gains;
    VirtualQueueState queues;

    Instance() {
        gains.bs_to_user = {0.5, 0.1};
        gains.user_to_user = {{1.0, 0.02}, {0.01, 1.0}};
        queues.y = {0.5, 2.0};
        queues.z = 0.3;
    }
};

constexpr double kObj11 = 2.7471125696833354;   // i=1, relay j=1
constexpr double kObj2None = 2.7132805521046336;  // i=2, no relay
constexpr double kMu2Rank1 = 0.8237085656111179;
constexpr double kMu2Rank2 = 0.7109351736821121;

VirtualQueueState random_queues(std::mt19937_64& eng, int n) {
    VirtualQueueState q;
    q.y.resize(static_cast<std::size_t>(n));
    for (auto& y : q.y) y = 5.0 * uniform01(eng);
    q.z = 5.0 * uniform01(eng);
    return q;
}

}  // namespace

TEST_CASE("descending_gain_order sorts by gain, ties by index") {
    CHECK(descending_gain_order({0.5, 0.1}) == std::vector<int>{0, 1});
    CHECK(descending_gain_order({0.1, 0.5}) == std::vector<int>{1, 0});
    CHECK(descending_gain_order({0.3, 0.7, 0.3}) == std::vector<int>{1, 0, 2});
}

TEST_CASE("evaluate_candidate on the worked instance") {
    const Instance in;
    const auto order = descending_gain_order(in.gains.bs_to_user);

    auto c11 = evaluate_candidate(order, 1, 1, in.gains, in.queues, in.cfg);
    REQUIRE(c11.has_value());
    CHECK(c11->mu2 == doctest::Approx(kMu2Rank1).epsilon(1e-12));
    CHECK(c11->objective == doctest::Approx(kObj11).epsilon(1e-12));

    auto c2 = evaluate_candidate(order, 2, std::nullopt, in.gains, in.queues,
                                 in.cfg);
    REQUIRE(c2.has_value());
    CHECK(c2->mu2 == doctest::Approx(kMu2Rank2).epsilon(1e-12));
    CHECK(c2->objective == doctest::Approx(kObj2None).epsilon(1e-12));

    // zero queue weights: every candidate objective collapses to 0
    VirtualQueueState zero;
    zero.y = {0.0, 0.0};
    zero.z = 0.0;
    auto c = evaluate_candidate(order, 1, 1, in.gains, zero, in.cfg);
    REQUIRE(c.has_value());
    CHECK(c->objective == 0.0);

    CHECK_THROWS_AS(
        evaluate_candidate(order, 1, 2, in.gains, in.queues, in.cfg),
        std::invalid_argument);
}

TEST_CASE("evaluate_candidate flags infeasible rates") {
    Instance in;
    in.gains.bs_to_user = {0.005, 0.004};  // both below the L/T feasibility gain
    const auto order = descending_gain_order(in.gains.bs_to_user);
    CHECK_FALSE(
        evaluate_candidate(order, 1, std::nullopt, in.gains, in.queues, in.cfg));
}

TEST_CASE("free_bs chooses the relay candidate on the worked instance") {
    const Instance in;
    const auto d = free_bs_decide(in.gains, in.queues, true, in.cfg);
    CHECK(d.objective == doctest::Approx(kObj11).epsilon(1e-12));
    REQUIRE(d.phase1_threshold.has_value());
    CHECK(*d.phase1_threshold == 0.5);
    REQUIRE(d.relay.has_value());
    CHECK(*d.relay == 0);
    REQUIRE(d.relay_threshold.has_value());
    CHECK(*d.relay_threshold ==
          doctest::Approx(0.0131983405930135).epsilon(1e-12));
    CHECK(d.decoded == std::vector<std::uint8_t>{1, 1});
    CHECK(d.mu1 + d.mu2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_FALSE(d.packet_lost);
}

TEST_CASE("baseline serves both users directly on the worked instance") {
    const Instance in;
    const auto d = baseline_decide(in.gains, in.queues, true, in.cfg);
    CHECK(d.objective == doctest::Approx(kObj2None).epsilon(1e-12));
    REQUIRE(d.phase1_threshold.has_value());
    CHECK(*d.phase1_threshold == 0.1);
    CHECK_FALSE(d.relay.has_value());
    CHECK(d.decoded == std::vector<std::uint8_t>{1, 1});
}

TEST_CASE("zero user queues reduce the objective to the z term") {
    Instance in;
    in.queues.y = {0.0, 0.0};

    // free_bs: picks the max-gain threshold, no relay needed (tie -> none)
    auto d = free_bs_decide(in.gains, in.queues, true, in.cfg);
    CHECK(d.objective == doctest::Approx(0.3 * kMu2Rank1).epsilon(1e-12));
    REQUIRE(d.phase1_threshold.has_value());
    CHECK(*d.phase1_threshold == 0.5);
    CHECK_FALSE(d.relay.has_value());

    auto b = baseline_decide(in.gains, in.queues, true, in.cfg);
    CHECK(b.objective == doctest::Approx(0.3 * kMu2Rank1).epsilon(1e-12));
}

TEST_CASE("single user never relays") {
    SimConfig cfg = make_config(1);
    GainMatrix gains;
    gains.bs_to_user = {0.4};
    gains.user_to_user = {{1.0}};
    VirtualQueueState queues;
    queues.y = {1.0};
    queues.z = 0.5;
    const auto d = free_bs_decide(gains, queues, true, cfg);
    REQUIRE(d.phase1_threshold.has_value());
    CHECK(*d.phase1_threshold == 0.4);
    CHECK_FALSE(d.relay.has_value());
}

TEST_CASE("no arrival yields an idle slot") {
    const Instance in;
    const auto d = free_bs_decide(in.gains, in.queues, false, in.cfg);
    CHECK_FALSE(d.arrival);
    CHECK_FALSE(d.phase1_threshold.has_value());
    CHECK(d.mu2 == in.cfg.slot_duration);
    CHECK_FALSE(d.relay.has_value());
    CHECK(d.decoded == std::vector<std::uint8_t>{0, 0});
    CHECK_FALSE(d.packet_lost);
    CHECK(d.aux_r == 1);  // z = 0.3 < V
}

TEST_CASE("all-infeasible slot drops the packet and idles") {
    Instance in;
    in.gains.bs_to_user = {0.009, 0.004};  // below the 0.01 feasibility gain
    const auto d = free_bs_decide(in.gains, in.queues, true, in.cfg);
    CHECK(d.arrival);
    CHECK(d.packet_lost);
    CHECK_FALSE(d.phase1_threshold.has_value());
    CHECK(d.mu2 == in.cfg.slot_duration);
    CHECK(d.decoded == std::vector<std::uint8_t>{0, 0});

    const auto bf = brute_force_decide(in.gains, in.queues, true, in.cfg);
    CHECK(bf.objective == d.objective);
}

TEST_CASE("allow_idle exposes the no-transmission candidate") {
    Instance in;
    in.queues.y = {0.0, 0.0};  // only the z term matters
    in.queues.z = 0.3;

    auto served = free_bs_decide(in.gains, in.queues, true, in.cfg);
    CHECK(served.phase1_threshold.has_value());  // idle not considered

    in.cfg.allow_idle = true;
    auto idled = free_bs_decide(in.gains, in.queues, true, in.cfg);
    CHECK_FALSE(idled.phase1_threshold.has_value());
    CHECK(idled.mu2 == in.cfg.slot_duration);
    CHECK(idled.objective == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(idled.packet_lost);

    const auto bf = brute_force_decide(in.gains, in.queues, true, in.cfg);
    CHECK(bf.objective == idled.objective);
}

TEST_CASE("brute force agrees with the worked instance") {
    const Instance in;
    const auto bf = brute_force_decide(in.gains, in.queues, true, in.cfg);
    CHECK(bf.objective == doctest::Approx(kObj11).epsilon(1e-12));

    VirtualQueueState zero;
    zero.y = {0.0, 0.0};
    zero.z = 0.0;
    const auto tie = brute_force_decide(in.gains, zero, true, in.cfg);
    CHECK(tie.objective == 0.0);
}

TEST_CASE("oracle equivalence over random slots, N in 1..6") {
    for (int n = 1; n <= 6; ++n) {
        const SimConfig cfg = make_config(n);
        const auto report = verify_against_oracle(cfg, 300, 0, 555 + n);
        CHECK(report.objective_mismatches == 0);
        CHECK(report.max_objective_gap == 0.0);
    }
}

TEST_CASE("threshold continuum never beats the gain grid") {
    for (int n : {2, 5}) {
        const SimConfig cfg = make_config(n);
        const auto report = verify_against_oracle(cfg, 100, 100, 77 + n);
        CHECK(report.max_grid_excess <= 1e-9);
    }
}

TEST_CASE("decision invariants over random slots") {
    const SimConfig cfg = make_config(5);
    const FadingModel model{321};
    std::mt19937_64 eng(321);
    for (int slot = 1; slot <= 500; ++slot) {
        const auto gains =
            sample_slot_gains(model, cfg, static_cast<std::uint64_t>(slot));
        const auto queues = random_queues(eng, 5);
        const auto d = free_bs_decide(gains, queues, true, cfg);

        // constraint: the two phases partition the slot
        CHECK(std::abs(d.mu1 + d.mu2 - cfg.slot_duration) <= 1e-12);
        CHECK(d.mu1 >= 0.0);
        CHECK(d.mu2 >= 0.0);

        // at most one relay, and it decoded in phase I
        if (d.relay) {
            REQUIRE(d.phase1_threshold.has_value());
            CHECK(gains.bs_to_user[static_cast<std::size_t>(*d.relay)] >=
                  *d.phase1_threshold);
        }

        // complexity bound on candidate evaluations
        const int n = cfg.n_users;
        CHECK(d.candidates_evaluated <= n * (n + 1) / 2 + n + 1);
    }
}

TEST_CASE("phase-I decode set weakly grows as the threshold rank deepens") {
    const SimConfig cfg = make_config(6);
    const FadingModel model{11};
    VirtualQueueState queues;
    queues.y.assign(6, 1.0);
    queues.z = 1.0;
    for (int slot = 1; slot <= 100; ++slot) {
        const auto gains =
            sample_slot_gains(model, cfg, static_cast<std::uint64_t>(slot));
        const auto order = descending_gain_order(gains.bs_to_user);
        int prev_count = 0;
        for (int rank = 1; rank <= 6; ++rank) {
            const double gamma0 =
                gains.bs_to_user[static_cast<std::size_t>(order[rank - 1])];
            const int count = static_cast<int>(
                std::count_if(gains.bs_to_user.begin(), gains.bs_to_user.end(),
                              [gamma0](double g) { return g >= gamma0; }));
            CHECK(count >= prev_count);
            prev_count = count;
        }
    }
}

TEST_CASE("relaying never lowers the objective") {
    const SimConfig cfg = make_config(5);
    const FadingModel model{222};
    std::mt19937_64 eng(222);
    for (int slot = 1; slot <= 200; ++slot) {
        const auto gains =
            sample_slot_gains(model, cfg, static_cast<std::uint64_t>(slot));
        const auto queues = random_queues(eng, 5);
        const auto order = descending_gain_order(gains.bs_to_user);
        for (int rank_i = 1; rank_i <= 5; ++rank_i) {
            const auto none = evaluate_candidate(order, rank_i, std::nullopt,
                                                 gains, queues, cfg);
            if (!none) continue;
            for (int rank_j = 1; rank_j <= rank_i; ++rank_j) {
                const auto with = evaluate_candidate(order, rank_i, rank_j,
                                                     gains, queues, cfg);
                REQUIRE(with.has_value());
                CHECK(with->objective >= none->objective);
            }
        }
    }
}

TEST_CASE("positive scaling of the queues keeps the argmax") {
    const SimConfig cfg = make_config(4);
    const FadingModel model{424};
    std::mt19937_64 eng(424);
    for (int slot = 1; slot <= 200; ++slot) {
        const auto gains =
            sample_slot_gains(model, cfg, static_cast<std::uint64_t>(slot));
        const auto queues = random_queues(eng, 4);
        const auto base = free_bs_decide(gains, queues, true, cfg);
        for (double c : {0.5, 2.0, 1024.0}) {  // powers of two scale exactly
            VirtualQueueState scaled = queues;
            for (auto& y : scaled.y) y *= c;
            scaled.z *= c;
            const auto d = free_bs_decide(gains, scaled, true, cfg);
            CHECK(d.objective == base.objective * c);
            CHECK(d.phase1_threshold == base.phase1_threshold);
            CHECK(d.relay == base.relay);
        }
    }
}

TEST_CASE("relay-disabled config turns free_bs into the baseline") {
    Instance in;
    in.cfg.relay_enabled = false;
    const auto d = free_bs_decide(in.gains, in.queues, true, in.cfg);
    const auto b = baseline_decide(in.gains, in.queues, true, in.cfg);
    CHECK(d.objective == b.objective);
    CHECK(d.phase1_threshold == b.phase1_threshold);
    CHECK_FALSE(d.relay.has_value());
}
