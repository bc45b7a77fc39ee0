#pragma once

#include <iosfwd>
#include <string>

#include "freebs/engine.hpp"
#include "freebs/model.hpp"

namespace freebs {

// %.9g: enough digits to keep CSV diffs byte-stable across identical runs.
std::string format_sig9(double value);

void write_trace_header(std::ostream& out, int n_users);
void write_trace_row(std::ostream& out, const SlotRecord& record);

// JSON object mirroring the RunSummary field names.
std::string summary_to_json(const RunSummary& summary);

}  // namespace freebs
