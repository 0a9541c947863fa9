#include "collsched/topology.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <sstream>

#include "collsched/error.hpp"

namespace collsched {

Topology::Topology(std::vector<bool> is_switch, std::vector<Edge> edges,
                   std::vector<CapacityOverride> overrides)
    : is_switch_(std::move(is_switch)),
      edges_(std::move(edges)),
      overrides_(std::move(overrides)),
      out_(is_switch_.size()),
      in_(is_switch_.size()) {
  const int n = num_nodes();
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& edge = edges_[e];
    if (edge.src < 0 || edge.src >= n || edge.dst < 0 || edge.dst >= n) {
      std::ostringstream msg;
      msg << "edge " << e << " (" << edge.src << "->" << edge.dst
          << ") references an unknown node";
      throw Error(ErrorKind::kInvalidInput, msg.str());
    }
    out_[edge.src].push_back(e);
    in_[edge.dst].push_back(e);
  }
  for (const CapacityOverride& o : overrides_) {
    if (o.edge < 0 || o.edge >= num_edges() || o.epoch < 0) {
      throw Error(ErrorKind::kInvalidInput,
                  "capacity override references an unknown edge or epoch");
    }
    override_index_[{o.edge, o.epoch}] = o.capacity_bytes_per_sec;
  }
}

int Topology::find_edge(int src, int dst) const {
  if (src < 0 || src >= num_nodes()) return -1;
  for (int e : out_[src]) {
    if (edges_[e].dst == dst) return e;
  }
  return -1;
}

double Topology::capacity(int e, int epoch) const {
  if (!override_index_.empty()) {
    auto it = override_index_.find({e, epoch});
    if (it != override_index_.end()) return it->second;
  }
  return edges_[e].capacity_bytes_per_sec;
}

std::vector<int> Topology::gpus() const {
  std::vector<int> out;
  for (int v = 0; v < num_nodes(); ++v) {
    if (!is_switch_[v]) out.push_back(v);
  }
  return out;
}

std::vector<int> Topology::switches() const {
  std::vector<int> out;
  for (int v = 0; v < num_nodes(); ++v) {
    if (is_switch_[v]) out.push_back(v);
  }
  return out;
}

double Topology::min_capacity() const {
  double best = std::numeric_limits<double>::infinity();
  for (const Edge& e : edges_) best = std::min(best, e.capacity_bytes_per_sec);
  return best;
}

double Topology::max_capacity() const {
  double best = 0.0;
  for (const Edge& e : edges_) best = std::max(best, e.capacity_bytes_per_sec);
  return best;
}

std::vector<TopologyViolation> validate_topology(const Topology& t) {
  std::vector<TopologyViolation> out;
  std::set<std::pair<int, int>> seen;
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& edge = t.edge(e);
    std::ostringstream where;
    where << "edge " << edge.src << "->" << edge.dst;
    if (!(edge.capacity_bytes_per_sec > 0.0)) {
      out.push_back({"non-positive capacity", where.str()});
    }
    if (!(edge.alpha_sec >= 0.0)) {
      out.push_back({"negative alpha", where.str()});
    }
    if (edge.src == edge.dst) {
      out.push_back({"self-loop", where.str()});
    }
    if (!seen.insert({edge.src, edge.dst}).second) {
      out.push_back({"duplicate edge", where.str()});
    }
  }
  for (const CapacityOverride& o : t.overrides()) {
    if (!(o.capacity_bytes_per_sec > 0.0)) {
      std::ostringstream where;
      where << "override on edge " << o.edge << " epoch " << o.epoch;
      out.push_back({"non-positive capacity", where.str()});
    }
  }
  for (int v = 0; v < t.num_nodes(); ++v) {
    if (!t.is_switch(v)) continue;
    if (t.in_edges(v).empty() || t.out_edges(v).empty()) {
      out.push_back({"dangling switch",
                     "switch " + std::to_string(v) +
                         " needs at least one incoming and one outgoing edge"});
    }
  }
  return out;
}

void require_valid(const Topology& t) {
  std::vector<TopologyViolation> violations = validate_topology(t);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << "invalid topology:";
  for (const TopologyViolation& v : violations) {
    msg << " [" << v.kind << ": " << v.detail << "]";
  }
  throw Error(ErrorKind::kInvalidInput, msg.str());
}

}  // namespace collsched
