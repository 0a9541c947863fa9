#ifndef COLLSCHED_IO_HPP_
#define COLLSCHED_IO_HPP_

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "collsched/demand.hpp"
#include "collsched/schedule.hpp"
#include "collsched/simulator.hpp"
#include "collsched/topology.hpp"

namespace collsched {

using Json = nlohmann::ordered_json;

// Parse errors and missing fields throw Error(kInvalidInput).
Json topology_to_json(const Topology& t);
Topology topology_from_json(const Json& j);

Json demand_to_json(const Demand& d);
Demand demand_from_json(const Json& j);

Json schedule_to_json(const Schedule& s);
Schedule schedule_from_json(const Json& j);

Json report_to_json(const SimReport& r);

std::string report_csv_header();
// One CSV row: label, completion epoch, transfer time, max per-node and
// aggregate bandwidth, violation count.
std::string report_csv_row(const std::string& label, const SimReport& r);

Json read_json_file(const std::string& path);
// Writes `j` indented by two spaces with a trailing newline.
void write_json_file(const std::string& path, const Json& j);

}  // namespace collsched

#endif  // COLLSCHED_IO_HPP_
