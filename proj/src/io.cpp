#include "freebs/io.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace freebs {

std::string format_sig9(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", value);
    return buf;
}

void write_trace_header(std::ostream& out, int n_users) {
    out << "slot,arrival,gamma0,mu1,mu2,relay,r,decoded_count";
    for (int m = 0; m < n_users; ++m) out << ",d" << m;
    for (int m = 0; m < n_users; ++m) out << ",y" << m;
    out << ",z\n";
}

void write_trace_row(std::ostream& out, const SlotRecord& record) {
    out << record.slot << ',' << (record.arrival ? 1 : 0) << ','
        << format_sig9(record.phase1_threshold) << ','
        << format_sig9(record.mu1) << ',' << format_sig9(record.mu2) << ','
        << record.relay << ',' << record.aux_r << ',' << record.decoded_count;
    for (std::uint8_t bit : record.decoded) {
        out << ',' << (bit ? 1 : 0);
    }
    for (double y : record.y_after) {
        out << ',' << format_sig9(y);
    }
    out << ',' << format_sig9(record.z_after) << '\n';
}

std::string summary_to_json(const RunSummary& summary) {
    nlohmann::json j;
    j["offloading_factor"] = summary.offloading_factor;
    j["delivery_ratio"] = summary.delivery_ratio;
    j["throughput"] = summary.throughput;
    j["queue_drift"] = {{"y", summary.y_drift}, {"z", summary.z_drift}};
    std::vector<bool> qos_met(summary.qos_met.begin(), summary.qos_met.end());
    j["qos_met"] = qos_met;
    return j.dump(2);
}

}  // namespace freebs
