#ifndef COLLSCHED_TOPOLOGY_HPP_
#define COLLSCHED_TOPOLOGY_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace collsched {

// A unidirectional link. A bidirectional link is two edges.
struct Edge {
  int src = 0;
  int dst = 0;
  double capacity_bytes_per_sec = 0.0;
  double alpha_sec = 0.0;
};

// Replaces the capacity of one edge during one epoch.
struct CapacityOverride {
  int edge = 0;
  int epoch = 0;
  double capacity_bytes_per_sec = 0.0;
};

// Directed graph of GPU and switch nodes. Node ids are dense, 0..n-1.
class Topology {
 public:
  Topology() = default;
  // Throws Error(kInvalidInput) if an edge or override names a node or edge
  // that does not exist. Everything else is reported by validate_topology.
  Topology(std::vector<bool> is_switch, std::vector<Edge> edges,
           std::vector<CapacityOverride> overrides = {});

  int num_nodes() const { return static_cast<int>(is_switch_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  bool is_switch(int node) const { return is_switch_[node]; }
  const std::vector<bool>& switch_flags() const { return is_switch_; }
  const Edge& edge(int e) const { return edges_[e]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& out_edges(int node) const { return out_[node]; }
  const std::vector<int>& in_edges(int node) const { return in_[node]; }
  const std::vector<CapacityOverride>& overrides() const { return overrides_; }

  // Returns the edge index of (src, dst), or -1.
  int find_edge(int src, int dst) const;
  // Capacity of edge e during epoch k, honoring overrides.
  double capacity(int e, int epoch) const;

  std::vector<int> gpus() const;
  std::vector<int> switches() const;
  double min_capacity() const;
  double max_capacity() const;

 private:
  std::vector<bool> is_switch_;
  std::vector<Edge> edges_;
  std::vector<CapacityOverride> overrides_;
  std::map<std::pair<int, int>, double> override_index_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

struct TopologyViolation {
  std::string kind;
  std::string detail;
};

// Empty iff the topology is well formed.
std::vector<TopologyViolation> validate_topology(const Topology& t);

// Throws Error(kInvalidInput) listing every violation.
void require_valid(const Topology& t);

}  // namespace collsched

#endif  // COLLSCHED_TOPOLOGY_HPP_
