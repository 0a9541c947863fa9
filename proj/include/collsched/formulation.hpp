#ifndef COLLSCHED_FORMULATION_HPP_
#define COLLSCHED_FORMULATION_HPP_

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "collsched/epoch.hpp"
#include "collsched/topology.hpp"

namespace collsched {

enum class SwitchMode { kCopy, kNoCopy, kHyperEdge };
enum class CapacityMode { kPlain, kWindowed };

std::string_view to_string(SwitchMode mode);
std::string_view to_string(CapacityMode mode);
std::string_view to_string(DurationMode mode);

// Inverses of to_string. Throw Error(kInvalidInput) for an unknown name.
SwitchMode parse_switch_mode(std::string_view name);
CapacityMode parse_capacity_mode(std::string_view name);
DurationMode parse_duration_mode(std::string_view name);

struct ModelOptions {
  SwitchMode switch_mode = SwitchMode::kCopy;
  // Chunks a GPU may hold at the start of any epoch. `node_buffer_limits`
  // overrides the global limit per node.
  std::optional<int> buffer_limit;
  std::map<int, int> node_buffer_limits;
  CapacityMode capacity_mode = CapacityMode::kPlain;
  // Solve the relaxation: F and B become continuous in [0, 1] and capacities
  // are not floored.
  bool relax_integrality = false;

  bool has_buffer_limits() const {
    return buffer_limit.has_value() || !node_buffer_limits.empty();
  }
  std::optional<int> limit_at(int node) const;
};

// Capacity mode implied by an epoch duration mode: fastest-link epochs need
// sliding windows on slower links.
CapacityMode default_capacity_mode(DurationMode mode);

struct LinkTiming {
  int delta = 0;  // ceil(alpha / tau)
  int kappa = 1;  // epochs one chunk occupies the link
  // A chunk sent at epoch k arrives by the end of epoch k + lag and can be
  // forwarded from epoch k + lag + 1.
  int lag = 0;
};

// Plain mode uses kappa = 1 everywhere. Windowed mode uses
// kappa = ceil(chunk / (T * tau)) and lag = delta + kappa - 1.
std::vector<LinkTiming> link_timings(const Topology& t, double tau_sec,
                                     double chunk_size_bytes,
                                     CapacityMode mode);

// Topology with every switch replaced by direct GPU-to-GPU hyper-edges.
// Switch nodes stay in the node list without edges.
struct HyperEdgeTopology {
  Topology network;
  // Per edge of `network`: the switch it crosses, or -1 for a plain link.
  std::vector<int> via;
  // Per switch: its hyper-edges and the per-epoch budget
  // min(in-degree, out-degree).
  std::map<int, std::vector<int>> omega;
  std::map<int, int> budget;
};

// A hyper-edge (i, j) through switch s exists when (i, s) and (s, j) are
// links, i != j, both are GPUs and (i, j) is not already a link. Its capacity
// is the smaller of the two hops and its latency their sum. A pair reachable
// through several switches uses the lowest switch id. Throws
// Error(kInvalidInput) for a switch with no incoming or outgoing link.
HyperEdgeTopology make_hyper_edge_topology(const Topology& t);

// Earliest epoch at which each node could send a chunk, given the epochs at
// which it first becomes available at some nodes. Unreachable nodes get
// kNever.
inline constexpr int kNever = 1 << 29;
std::vector<int> earliest_send_epochs(const Topology& t,
                                      const std::vector<LinkTiming>& timing,
                                      const std::vector<int>& available_from);

// Latest epoch at which each node could still send a chunk of `src` so that
// it reaches one of `dsts` by the end of epoch `K - 1`, or kMinusInf. Links
// into `src` are ignored.
inline constexpr int kMinusInf = -(1 << 29);
std::vector<int> latest_send_epochs(const Topology& t,
                                    const std::vector<LinkTiming>& timing,
                                    int src, const std::vector<int>& dsts,
                                    int K);

// Latest epoch in which a chunk may arrive at `node` and still be useful
// given latest_send_epochs(): K - 1 for a destination, otherwise one less
// than the node's latest send.
int arrival_deadline(const std::vector<int>& latest,
                     const std::vector<bool>& is_dst, int node, int K);

}  // namespace collsched

#endif  // COLLSCHED_FORMULATION_HPP_
