#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "wdsched/pipeline.hpp"

namespace wdsched {

using Json = nlohmann::ordered_json;

/// Rationals travel as [num, den].
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

/// {nodes, links: [[src, dst, c_num, c_den]], phi, flows: [{src, dst, lambda, tau, route?}]}.
/// Link ids are positions in `links`. Flows without a route get the shortest
/// one; flow ids are 1-based positions.
Scenario scenario_from_json(const Json& j);
Json scenario_to_json(const Scenario& scn);

/// {period, slots: [[link ids]]}.
Json schedule_to_json(const CyclicSchedule& schedule);
CyclicSchedule schedule_from_json(const Json& j);

/// {sets: [[link ids]], k: [ints]}.
Json coloring_to_json(const ColoringInstance& inst, const WgcResult& wgc);

/// {widths: [{flow, link, width}]} with flow as a 0-based index.
Json slices_to_json(const SliceAssignment& slices);
SliceAssignment slices_from_json(const Json& j);

/// Per-flow verdicts, delays, delay ratio lambda*D/sum(w), measured kbar and deficits.
Json solve_summary(const Scenario& scn, const SolveResult& r);

inline constexpr double kSlotMicroseconds = 125.0;

/// Wall-clock duration of `slots` slots.
inline double slots_to_ms(std::int64_t slots, double slot_us = kSlotMicroseconds) {
  return static_cast<double>(slots) * slot_us / 1000.0;
}

/// Run-length text: "3x{0,2} 1x{1}".
std::string run_length(const CyclicSchedule& schedule);

/// slot,flow,link,volume rows from a trace recorded with queue logging.
void write_trace_csv(std::ostream& os, const Scenario& scn, const SimTrace& trace);

void write_sweep_header(std::ostream& os);
void write_sweep_row(std::ostream& os, const SweepRow& row);
std::vector<SweepRow> read_sweep_csv(std::istream& is);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);
Scenario load_scenario(const std::string& path);

}  // namespace wdsched
