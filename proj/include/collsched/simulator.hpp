#ifndef COLLSCHED_SIMULATOR_HPP_
#define COLLSCHED_SIMULATOR_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "collsched/demand.hpp"
#include "collsched/schedule.hpp"
#include "collsched/topology.hpp"

namespace collsched {

enum class ViolationKind {
  kCapacity,
  kCausality,
  kSwitchBuffer,
  kUnmetDemand,
  kHyperEdgeBudget
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kCapacity;
  std::string location;
  int epoch = 0;
};

struct SimReport {
  std::vector<Violation> violations;
  // Per node: last epoch in which a chunk it wants arrives, -1 if it wants
  // none or never receives everything.
  std::vector<int> completion_epoch_per_node;
  int completion_epoch = -1;
  double transfer_time_sec = 0.0;
  std::vector<double> output_buffer_bytes;
  double total_output_bytes = 0.0;

  bool ok() const { return violations.empty(); }
};

struct Bandwidth {
  // Output buffer of each node over the transfer time.
  std::vector<double> per_node;
  // Largest per-node value: the usual collective bandwidth figure.
  double max_node = 0.0;
  // Sum of all output buffers over the transfer time.
  double aggregate = 0.0;
};

// Replays the schedule epoch by epoch. A chunk sent at epoch k over a link
// with lag L is usable at the receiver from epoch k + L + 1. Switches keep
// nothing across epochs; in no-copy mode they forward each arrival exactly
// once. Fluid schedules never duplicate data: sends consume what a node
// holds. Throws Error(kValidation) for a malformed schedule (unknown node,
// negative epoch, fraction outside (0, 1]).
SimReport simulate(const Schedule& s, const Topology& t, const Demand& d);

// Throws Error(kValidation) if the report has violations, or the transfer
// time is zero while something was delivered. Empty demand gives zeros.
Bandwidth algorithmic_bandwidth(const SimReport& report);

}  // namespace collsched

#endif  // COLLSCHED_SIMULATOR_HPP_
