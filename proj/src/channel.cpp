#include "freebs/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace freebs {

std::uint64_t split_mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 slot_engine(std::uint64_t seed, std::uint64_t slot,
                            std::uint64_t stream) {
    std::uint64_t key = split_mix(seed);
    key = split_mix(key ^ slot);
    key = split_mix(key ^ (stream * 0xD6E8FEB86659FD93ULL));
    return std::mt19937_64(key);
}

double uniform01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

double exponential(std::mt19937_64& eng, double mean) {
    // (j + 0.5) / 2^52 lies strictly inside (0,1), so the result is > 0.
    const double u = (static_cast<double>(eng() >> 12) + 0.5) * 0x1.0p-52;
    return -mean * std::log(u);
}

GainMatrix sample_slot_gains(const FadingModel& model, const SimConfig& cfg,
                             std::uint64_t slot_index) {
    auto eng = slot_engine(model.seed, slot_index, kChannelStream);
    const auto n = static_cast<std::size_t>(cfg.n_users);

    GainMatrix gains;
    gains.bs_to_user.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        gains.bs_to_user[i] = exponential(eng, cfg.mean_gain_bs[i]);
    }
    gains.user_to_user.assign(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            gains.user_to_user[i][j] = exponential(eng, cfg.mean_gain_d2d[i][j]);
        }
    }
    return gains;
}

namespace {

constexpr double kLn2 = 0.6931471805599453;

}  // namespace

double rate_from_threshold(double power, double gamma, LogBase base) {
    const double nats = std::log1p(power * gamma);
    return base == LogBase::two ? nats / kLn2 : nats;
}

double threshold_from_rate(double power, double rate, LogBase base) {
    const double nats = base == LogBase::two ? rate * kLn2 : rate;
    return std::expm1(nats) / power;
}

std::optional<double> phase1_duration(double packet_bits, double power,
                                      double gamma, double slot_duration,
                                      LogBase base) {
    const double rate = rate_from_threshold(power, gamma, base);
    if (!(rate > 0.0)) {
        return std::nullopt;
    }
    const double mu1 = packet_bits / rate;
    if (mu1 > slot_duration) {
        return std::nullopt;
    }
    return mu1;
}

double relay_threshold(double packet_bits, double mu2, double relay_power,
                       LogBase base) {
    if (!(mu2 > 0.0)) {
        throw std::domain_error("relay_threshold: phase II is empty (mu2 <= 0)");
    }
    return threshold_from_rate(relay_power, packet_bits / mu2, base);
}

}  // namespace freebs
