#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace freebs {

enum class LogBase { two, e };

// All system and algorithm parameters for one simulation run. Powers and
// gains are linear (config files take powers in dB, see config_from_json).
// Per-user fields always have exactly n_users entries; scalar values in a
// config file are broadcast at load time.
struct SimConfig {
    int n_users = 0;
    double slot_duration = 1.0;  // T, normalized slot length
    double packet_bits = 1.0;    // L, bits per packet
    double bs_power = 100.0;     // P0, linear
    std::vector<double> user_powers;
    std::vector<double> mean_gain_bs;                 // mean of BS->user gain
    std::vector<std::vector<double>> mean_gain_d2d;   // mean of user->user gain
    std::vector<double> qos;                          // q_i in [0,1]
    double arrival_rate = 1.0;   // Bernoulli arrival probability per slot
    double control_v = 1000.0;   // V > 0
    std::int64_t n_slots = 100000;
    std::uint64_t seed = 1;
    LogBase log_base = LogBase::two;
    bool allow_idle = false;
    bool relay_enabled = true;
};

// Uniform config with default physical parameters (20 dB powers, mean gain
// 0.3 on every link, q = 0.9, unit packet and slot).
SimConfig make_config(int n_users);

// Returns one message per violated invariant; empty means the config is valid.
std::vector<std::string> validate_config(const SimConfig& cfg);

class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

  private:
    std::vector<std::string> errors_;
};

// Flat JSON document with the SimConfig field names; powers carry a _db
// suffix and are converted to linear. Per-user fields accept a scalar or an
// array (n x n array for mean_gain_d2d). Throws ConfigError.
SimConfig config_from_json_text(const std::string& text);
SimConfig load_config_file(const std::string& path);

// Virtual queues: y_i tracks user i's service deficit, z couples the
// auxiliary reward to the realized phase-II duration. Both stay >= 0.
struct VirtualQueueState {
    std::vector<double> y;
    double z = 0.0;
};

// One slot's channel realization. user_to_user[i][j] is the gain from
// transmitter i to receiver j; the diagonal is never read.
struct GainMatrix {
    std::vector<double> bs_to_user;
    std::vector<std::vector<double>> user_to_user;
};

// Outcome of the per-slot scheduling decision. mu1 + mu2 == slot_duration
// always holds; an empty phase1_threshold means the BS stays silent for the
// whole slot (no arrival, forced-idle, or an explicit idle choice).
struct SlotDecision {
    bool arrival = false;
    std::optional<double> phase1_threshold;
    double phase1_rate = 0.0;
    double mu1 = 0.0;
    double mu2 = 0.0;
    std::optional<int> relay;       // user index of the phase-II transmitter
    std::optional<double> relay_rate;
    std::optional<double> relay_threshold;
    int aux_r = 0;                  // r in {0,1}
    std::vector<std::uint8_t> decoded;
    double objective = 0.0;         // attained per-slot objective value
    bool packet_lost = false;       // arrival that no user decoded
    int candidates_evaluated = 0;
};

struct RunSummary {
    double offloading_factor = 0.0;          // mean mu2/T
    std::vector<double> delivery_ratio;      // decoded / arrivals, per user
    double throughput = 0.0;                 // mean decoded packets per slot
    std::vector<double> y_drift;             // Y_i(K)/K
    double z_drift = 0.0;                    // Z(K)/K
    std::vector<std::uint8_t> qos_met;
};

// Y_i(k+1) = (Y_i(k) + a q_i - 1{decoded})^+
double update_user_queue(double y, bool arrival, double qos, bool decoded);

// Z(k+1) = (Z(k) + r - mu2)^+ with mu2 in normalized slots so it is
// commensurable with r in [0,1].
double update_z_queue(double z, int aux_r, double mu2);

// Bang-bang auxiliary rule: r = 1 iff z < v (r = 0 on the boundary).
int choose_auxiliary(double z, double v);

// (sum_i (q_i^2 + 1) + 1 + T^2) / 2, the additive constant of the
// drift bound; the long-run optimality gap scales as C/V.
double drift_constant(const SimConfig& cfg);

}  // namespace freebs
