#include "sdmaq/report.hpp"

#include <charconv>
#include <cmath>

namespace sdmaq::report {

Json to_json(const SystemParams& params) {
  Json j;
  j["antennas"] = params.antennas;
  j["power"] = params.power;
  j["threshold"] = params.threshold;
  if (params.feedback_bits) {
    j["feedback_bits"] = *params.feedback_bits;
  } else {
    j["feedback_bits"] = nullptr;
  }
  return j;
}

Json to_json(const StabilityPolytope& polytope) {
  Json j;
  j["params"] = to_json(polytope.params);
  j["index_set"] = polytope.index_set;
  j["d"] = polytope.rates;
  j["vertices"] = polytope.vertices;
  Json decisions = Json::array();
  for (const auto& v : polytope.vertex_decisions) decisions.push_back(v.bits());
  j["vertex_decisions"] = std::move(decisions);
  j["max_sum_rate"] = polytope.max_sum_rate;
  return j;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

}  // namespace

Json to_json(const sim::SimMetrics& m) {
  Json j;
  j["measured_slots"] = m.measured_slots;
  j["departure_rate"] = m.departure_rate;
  j["mean_queue_length"] = m.mean_queue_length;
  j["mean_total_queue"] = m.mean_total_queue;
  j["mean_total_queue_stderr"] = m.mean_total_queue_stderr;
  j["packets"] = m.delays.size();
  j["mean_delay"] = mean_of(m.delays);
  j["mean_wait"] = mean_of(m.waits);
  j["verdict"] = sim::to_string(m.verdict);
  j["growth"] = m.growth;
  j["growth_stderr"] = m.growth_stderr;
  j["degenerate_slots"] = m.degenerate_slots;
  j["total_arrivals"] = m.total_arrivals;
  j["total_departures"] = m.total_departures;
  j["final_queues"] = m.final_queues;
  return j;
}

Json budget_record(Json inputs, double bits_real, int bits, std::string variant,
                   const std::vector<std::pair<double, double>>& bound_curve) {
  Json j;
  j["inputs"] = std::move(inputs);
  j["bits_real"] = bits_real;
  j["bits"] = bits;
  j["variant"] = std::move(variant);
  Json curve = Json::array();
  for (const auto& [t, v] : bound_curve) curve.push_back({t, v});
  j["bound_curve"] = std::move(curve);
  return j;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  // Shortest representation that round-trips; independent of the locale.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& os, const std::vector<sim::SlotRecord>& trace,
                     int queues) {
  os << "slot";
  for (int q = 1; q <= queues; ++q) os << ",q_" << q;
  os << ",decision,departures\n";
  for (const auto& r : trace) {
    os << r.slot;
    for (auto len : r.queues) os << ',' << len;
    os << ',' << r.decision << ',' << r.departures << '\n';
  }
}

}  // namespace sdmaq::report
