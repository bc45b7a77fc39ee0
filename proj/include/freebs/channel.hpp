#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "freebs/model.hpp"

namespace freebs {

// Substream ids so arrivals, gains and test draws never collide.
inline constexpr std::uint64_t kArrivalStream = 0;
inline constexpr std::uint64_t kChannelStream = 1;
inline constexpr std::uint64_t kStateStream = 2;

// splitmix64 finalizer; used to derive well-separated engine seeds.
std::uint64_t split_mix(std::uint64_t x);

// Fresh engine keyed by (seed, slot, stream). Same key, same stream of
// numbers, on any platform; slots can therefore be sampled in any order.
std::mt19937_64 slot_engine(std::uint64_t seed, std::uint64_t slot,
                            std::uint64_t stream);

// Uniform on [0, 1). 53-bit resolution; bit-stable across platforms
// (std::uniform_real_distribution is implementation-defined, this is not).
double uniform01(std::mt19937_64& eng);

// Exponential with the given mean, strictly positive.
double exponential(std::mt19937_64& eng, double mean);

// Block fading: one independent realization of every link per slot.
struct FadingModel {
    std::uint64_t seed = 0;
};

GainMatrix sample_slot_gains(const FadingModel& model, const SimConfig& cfg,
                             std::uint64_t slot_index);

// R = log(1 + power * gamma); bits per slot in base two, nats in base e.
double rate_from_threshold(double power, double gamma, LogBase base);

// Exact inverse: gamma = (base^rate - 1) / power.
double threshold_from_rate(double power, double rate, LogBase base);

// mu1 = L / R(gamma). Empty when the packet cannot fit in the slot
// (mu1 > T, in particular gamma == 0).
std::optional<double> phase1_duration(double packet_bits, double power,
                                      double gamma, double slot_duration,
                                      LogBase base);

// Minimum gain a receiver needs to decode a packet relayed over mu2 at rate
// L/mu2. Throws std::domain_error when mu2 <= 0: an empty phase II cannot
// carry a transmission.
double relay_threshold(double packet_bits, double mu2, double relay_power,
                       LogBase base);

}  // namespace freebs
