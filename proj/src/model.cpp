#include "freebs/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace freebs {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string out = "invalid config:";
    for (const auto& e : errors) {
        out += "\n  - " + e;
    }
    return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

SimConfig make_config(int n_users) {
    SimConfig cfg;
    cfg.n_users = n_users;
    const int n = std::max(n_users, 0);
    cfg.user_powers.assign(n, 100.0);
    cfg.mean_gain_bs.assign(n, 0.3);
    cfg.mean_gain_d2d.assign(n, std::vector<double>(n, 0.3));
    cfg.qos.assign(n, 0.9);
    return cfg;
}

std::vector<std::string> validate_config(const SimConfig& cfg) {
    std::vector<std::string> errors;
    auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };

    if (cfg.n_users < 1) {
        fail("n_users must be >= 1");
        return errors;  // per-user checks are meaningless without a size
    }
    const auto n = static_cast<std::size_t>(cfg.n_users);
    if (!(cfg.slot_duration > 0.0)) fail("slot_duration must be > 0");
    if (!(cfg.packet_bits > 0.0)) fail("packet_bits must be > 0");
    if (!(cfg.bs_power > 0.0)) fail("bs_power must be > 0");

    if (cfg.user_powers.size() != n) {
        fail("user_powers must have one entry per user");
    } else if (std::any_of(cfg.user_powers.begin(), cfg.user_powers.end(),
                           [](double p) { return !(p > 0.0); })) {
        fail("user_powers must all be > 0");
    }

    if (cfg.mean_gain_bs.size() != n) {
        fail("mean_gain_bs must have one entry per user");
    } else if (std::any_of(cfg.mean_gain_bs.begin(), cfg.mean_gain_bs.end(),
                           [](double g) { return !(g > 0.0); })) {
        fail("mean_gain_bs must all be > 0");
    }

    if (cfg.mean_gain_d2d.size() != n) {
        fail("mean_gain_d2d must be an n_users x n_users matrix");
    } else {
        bool shape_ok = true;
        bool positive = true;
        for (const auto& row : cfg.mean_gain_d2d) {
            if (row.size() != n) shape_ok = false;
            for (double g : row) {
                if (!(g > 0.0)) positive = false;
            }
        }
        if (!shape_ok) fail("mean_gain_d2d must be an n_users x n_users matrix");
        if (!positive) fail("mean_gain_d2d must all be > 0");
    }

    if (cfg.qos.size() != n) {
        fail("qos must have one entry per user");
    } else if (std::any_of(cfg.qos.begin(), cfg.qos.end(), [](double q) {
                   return !(q >= 0.0 && q <= 1.0);
               })) {
        fail("qos out of range");
    }

    if (!(cfg.arrival_rate >= 0.0 && cfg.arrival_rate <= 1.0)) {
        fail("arrival_rate out of range");
    }
    if (!(cfg.control_v > 0.0)) fail("control_v must be > 0");
    if (cfg.n_slots < 1) fail("n_slots must be >= 1");
    return errors;
}

namespace {

using nlohmann::json;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) {
        throw ConfigError({key + " must be a number"});
    }
    return j.get<double>();
}

// Scalar broadcast or per-user array.
std::vector<double> get_per_user(const json& j, const std::string& key, int n) {
    if (j.is_number()) {
        return std::vector<double>(static_cast<std::size_t>(std::max(n, 0)),
                                   j.get<double>());
    }
    if (j.is_array()) {
        std::vector<double> out;
        out.reserve(j.size());
        for (const auto& v : j) out.push_back(get_number(v, key));
        return out;
    }
    throw ConfigError({key + " must be a number or an array"});
}

std::vector<std::vector<double>> get_pair_matrix(const json& j,
                                                 const std::string& key, int n) {
    const auto un = static_cast<std::size_t>(std::max(n, 0));
    if (j.is_number()) {
        return std::vector<std::vector<double>>(
            un, std::vector<double>(un, j.get<double>()));
    }
    if (j.is_array()) {
        std::vector<std::vector<double>> out;
        out.reserve(j.size());
        for (const auto& row : j) {
            if (!row.is_array()) {
                throw ConfigError({key + " must be a number or a square array"});
            }
            std::vector<double> r;
            r.reserve(row.size());
            for (const auto& v : row) r.push_back(get_number(v, key));
            out.push_back(std::move(r));
        }
        return out;
    }
    throw ConfigError({key + " must be a number or a square array"});
}

LogBase get_log_base(const json& j) {
    if (j.is_number() && j.get<double>() == 2.0) return LogBase::two;
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "2") return LogBase::two;
        if (s == "e") return LogBase::e;
    }
    throw ConfigError({"log_base must be 2 or \"e\""});
}

}  // namespace

SimConfig config_from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("malformed JSON: ") + e.what()});
    }
    if (!doc.is_object()) {
        throw ConfigError({"config must be a JSON object"});
    }

    static const char* known[] = {
        "n_users",      "slot_duration",  "packet_bits",  "bs_power_db",
        "user_powers_db", "mean_gain_bs", "mean_gain_d2d", "qos",
        "arrival_rate", "control_v",      "n_slots",      "seed",
        "log_base",     "allow_idle",     "relay_enabled"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return it.key() == k; }) ==
            std::end(known)) {
            throw ConfigError({"unknown config key: " + it.key()});
        }
    }

    if (!doc.contains("n_users")) {
        throw ConfigError({"n_users is required"});
    }
    if (!doc["n_users"].is_number_integer()) {
        throw ConfigError({"n_users must be an integer"});
    }

    SimConfig cfg = make_config(doc["n_users"].get<int>());
    const int n = cfg.n_users;

    if (doc.contains("slot_duration"))
        cfg.slot_duration = get_number(doc["slot_duration"], "slot_duration");
    if (doc.contains("packet_bits"))
        cfg.packet_bits = get_number(doc["packet_bits"], "packet_bits");
    if (doc.contains("bs_power_db"))
        cfg.bs_power = db_to_linear(get_number(doc["bs_power_db"], "bs_power_db"));
    if (doc.contains("user_powers_db")) {
        cfg.user_powers = get_per_user(doc["user_powers_db"], "user_powers_db", n);
        for (auto& p : cfg.user_powers) p = db_to_linear(p);
    }
    if (doc.contains("mean_gain_bs"))
        cfg.mean_gain_bs = get_per_user(doc["mean_gain_bs"], "mean_gain_bs", n);
    if (doc.contains("mean_gain_d2d"))
        cfg.mean_gain_d2d = get_pair_matrix(doc["mean_gain_d2d"], "mean_gain_d2d", n);
    if (doc.contains("qos")) cfg.qos = get_per_user(doc["qos"], "qos", n);
    if (doc.contains("arrival_rate"))
        cfg.arrival_rate = get_number(doc["arrival_rate"], "arrival_rate");
    if (doc.contains("control_v"))
        cfg.control_v = get_number(doc["control_v"], "control_v");
    if (doc.contains("n_slots")) {
        if (!doc["n_slots"].is_number_integer()) {
            throw ConfigError({"n_slots must be an integer"});
        }
        cfg.n_slots = doc["n_slots"].get<std::int64_t>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_integer()) {
            throw ConfigError({"seed must be an integer"});
        }
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("log_base")) cfg.log_base = get_log_base(doc["log_base"]);
    if (doc.contains("allow_idle")) {
        if (!doc["allow_idle"].is_boolean()) {
            throw ConfigError({"allow_idle must be a boolean"});
        }
        cfg.allow_idle = doc["allow_idle"].get<bool>();
    }
    if (doc.contains("relay_enabled")) {
        if (!doc["relay_enabled"].is_boolean()) {
            throw ConfigError({"relay_enabled must be a boolean"});
        }
        cfg.relay_enabled = doc["relay_enabled"].get<bool>();
    }

    auto errors = validate_config(cfg);
    if (!errors.empty()) {
        throw ConfigError(std::move(errors));
    }
    return cfg;
}

SimConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError({"cannot open config file: " + path});
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return config_from_json_text(buf.str());
}

double update_user_queue(double y, bool arrival, double qos, bool decoded) {
    const double next = y + (arrival ? qos : 0.0) - (decoded ? 1.0 : 0.0);
    return std::max(0.0, next);
}

double update_z_queue(double z, int aux_r, double mu2) {
    return std::max(0.0, z + static_cast<double>(aux_r) - mu2);
}

int choose_auxiliary(double z, double v) { return z < v ? 1 : 0; }

double drift_constant(const SimConfig& cfg) {
    double sum = 0.0;
    for (double q : cfg.qos) {
        sum += q * q + 1.0;
    }
    return (sum + 1.0 + cfg.slot_duration * cfg.slot_duration) / 2.0;
}

}  // namespace freebs
