#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "sdmaq/sim.hpp"
#include "sdmaq/stability.hpp"

namespace sdmaq::report {

using Json = nlohmann::ordered_json;

Json to_json(const SystemParams& params);
/// {params, index_set, d, vertices}
Json to_json(const StabilityPolytope& polytope);
/// Summary metrics; per-packet samples are reduced to counts and means.
Json to_json(const sim::SimMetrics& metrics);

/// {inputs, bits_real, bits, variant, bound_curve: [[t, value], ...]}
Json budget_record(Json inputs, double bits_real, int bits, std::string variant,
                   const std::vector<std::pair<double, double>>& bound_curve);

/// slot, q_1..q_L, decision, departures (bitmasks as integers).
void write_trace_csv(std::ostream& os, const std::vector<sim::SlotRecord>& trace,
                     int queues);

/// Formats a double for CSV output independently of the global locale.
std::string format_number(double x);

}  // namespace sdmaq::report
