#include "collsched/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "collsched/error.hpp"

namespace collsched {
namespace {

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kInvalidInput, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidInput,
                std::string("bad field '") + key + "': " + e.what());
  }
}

template <typename T>
T field_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return field<T>(j, key);
}

}  // namespace

Json topology_to_json(const Topology& t) {
  Json j;
  Json nodes = Json::array();
  for (int n = 0; n < t.num_nodes(); ++n) {
    nodes.push_back({{"id", n}, {"is_switch", t.is_switch(n)}});
  }
  j["nodes"] = nodes;
  Json edges = Json::array();
  for (const Edge& e : t.edges()) {
    edges.push_back({{"src", e.src},
                     {"dst", e.dst},
                     {"capacity_bytes_per_sec", e.capacity_bytes_per_sec},
                     {"alpha_sec", e.alpha_sec}});
  }
  j["edges"] = edges;
  Json overrides = Json::array();
  for (const CapacityOverride& o : t.overrides()) {
    overrides.push_back({{"edge", o.edge},
                         {"epoch", o.epoch},
                         {"capacity_bytes_per_sec", o.capacity_bytes_per_sec}});
  }
  j["capacity_overrides"] = overrides;
  return j;
}

Topology topology_from_json(const Json& j) {
  const Json nodes = field<Json>(j, "nodes");
  if (!nodes.is_array()) throw Error(ErrorKind::kInvalidInput, "'nodes' must be a list");
  const int n = static_cast<int>(nodes.size());
  std::vector<bool> is_switch(n, false);
  std::vector<bool> seen(n, false);
  for (const Json& node : nodes) {
    const int id = field<int>(node, "id");
    if (id < 0 || id >= n || seen[id]) {
      throw Error(ErrorKind::kInvalidInput, "node ids must be 0..n-1 without repeats");
    }
    seen[id] = true;
    is_switch[id] = field_or<bool>(node, "is_switch", false);
  }
  std::vector<Edge> edges;
  for (const Json& e : field<Json>(j, "edges")) {
    edges.push_back({field<int>(e, "src"), field<int>(e, "dst"),
                     field<double>(e, "capacity_bytes_per_sec"),
                     field_or<double>(e, "alpha_sec", 0.0)});
  }
  std::vector<CapacityOverride> overrides;
  for (const Json& o : field_or<Json>(j, "capacity_overrides", Json::array())) {
    overrides.push_back({field<int>(o, "edge"), field<int>(o, "epoch"),
                         field<double>(o, "capacity_bytes_per_sec")});
  }
  return Topology(std::move(is_switch), std::move(edges), std::move(overrides));
}

Json demand_to_json(const Demand& d) {
  Json j;
  j["chunk_size_bytes"] = d.chunk_size_bytes();
  j["chunk_count"] = d.chunk_count();
  Json entries = Json::array();
  for (const DemandEntry& e : d.entries()) {
    entries.push_back({{"src", e.src}, {"chunk", e.chunk}, {"dst", e.dst}});
  }
  j["entries"] = entries;
  return j;
}

Demand demand_from_json(const Json& j) {
  std::vector<DemandEntry> entries;
  for (const Json& e : field<Json>(j, "entries")) {
    entries.push_back({field<int>(e, "src"), field<int>(e, "chunk"),
                       field<int>(e, "dst")});
  }
  int chunks = 0;
  for (const DemandEntry& e : entries) chunks = std::max(chunks, e.chunk + 1);
  return Demand(field<double>(j, "chunk_size_bytes"), field_or<int>(j, "chunk_count", chunks),
                std::move(entries));
}

Json schedule_to_json(const Schedule& s) {
  Json j;
  j["tau_sec"] = s.tau_sec;
  j["chunk_size_bytes"] = s.chunk_size_bytes;
  j["num_epochs"] = s.num_epochs;
  j["transmission"] = std::string(to_string(s.transmission));
  j["switch_mode"] = std::string(to_string(s.switch_mode));
  j["capacity_mode"] = std::string(to_string(s.capacity_mode));
  j["completion_epoch"] = s.completion_epoch;
  j["transfer_time_sec"] = s.transfer_time_sec();
  Json events = Json::array();
  for (const ScheduleEvent& ev : s.events) {
    events.push_back({{"src_rank", ev.src},
                      {"chunk", ev.chunk},
                      {"from", ev.from},
                      {"to", ev.to},
                      {"epoch", ev.epoch},
                      {"fraction", ev.fraction}});
  }
  j["events"] = events;
  return j;
}

Schedule schedule_from_json(const Json& j) {
  Schedule s;
  s.tau_sec = field<double>(j, "tau_sec");
  s.chunk_size_bytes = field<double>(j, "chunk_size_bytes");
  s.num_epochs = field_or<int>(j, "num_epochs", 0);
  const std::string tr = field_or<std::string>(j, "transmission", "whole-chunk");
  if (tr == "whole-chunk") {
    s.transmission = Transmission::kWholeChunk;
  } else if (tr == "fluid") {
    s.transmission = Transmission::kFluid;
  } else {
    throw Error(ErrorKind::kInvalidInput, "unknown transmission '" + tr + "'");
  }
  s.switch_mode = parse_switch_mode(field_or<std::string>(j, "switch_mode", "copy"));
  s.capacity_mode =
      parse_capacity_mode(field_or<std::string>(j, "capacity_mode", "plain"));
  s.completion_epoch = field_or<int>(j, "completion_epoch", -1);
  for (const Json& e : field<Json>(j, "events")) {
    s.events.push_back({field<int>(e, "epoch"), field<int>(e, "src_rank"),
                        field<int>(e, "from"), field<int>(e, "to"),
                        field<int>(e, "chunk"), field_or<double>(e, "fraction", 1.0)});
  }
  s.sort_events();
  return s;
}

Json report_to_json(const SimReport& r) {
  Json j;
  j["ok"] = r.ok();
  Json violations = Json::array();
  for (const Violation& v : r.violations) {
    violations.push_back({{"kind", std::string(to_string(v.kind))},
                          {"location", v.location},
                          {"epoch", v.epoch}});
  }
  j["violations"] = violations;
  j["completion_epoch"] = r.completion_epoch;
  j["transfer_time_sec"] = r.transfer_time_sec;
  j["completion_epoch_per_node"] = r.completion_epoch_per_node;
  j["output_buffer_bytes"] = r.output_buffer_bytes;
  if (r.ok()) {
    const Bandwidth bw = algorithmic_bandwidth(r);
    j["algbw_bytes_per_sec"] = bw.max_node;
    j["algbw_aggregate_bytes_per_sec"] = bw.aggregate;
    j["algbw_per_node_bytes_per_sec"] = bw.per_node;
  }
  return j;
}

std::string report_csv_header() {
  return "label,completion_epoch,transfer_time_sec,algbw_bytes_per_sec,"
         "algbw_aggregate_bytes_per_sec,violations";
}

std::string report_csv_row(const std::string& label, const SimReport& r) {
  std::ostringstream out;
  out.precision(12);
  double max_node = 0.0;
  double aggregate = 0.0;
  if (r.ok()) {
    const Bandwidth bw = algorithmic_bandwidth(r);
    max_node = bw.max_node;
    aggregate = bw.aggregate;
  }
  out << label << ',' << r.completion_epoch << ',' << r.transfer_time_sec << ','
      << max_node << ',' << aggregate << ',' << r.violations.size();
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kInvalidInput, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kInvalidInput, "cannot parse '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kInvalidInput, "cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace collsched
