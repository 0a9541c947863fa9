#ifndef COLLSCHED_SCHEDULE_HPP_
#define COLLSCHED_SCHEDULE_HPP_

#include <compare>
#include <iosfwd>
#include <string_view>
#include <tuple>
#include <vector>

#include "collsched/demand.hpp"
#include "collsched/formulation.hpp"
#include "collsched/milp_general.hpp"
#include "collsched/solver.hpp"
#include "collsched/topology.hpp"

namespace collsched {

// Whole-chunk schedules come from the MILP and A*: every event moves one full
// chunk and links follow the capacity mode. Fluid schedules come from the LP:
// events move fractions, links carry fractional capacity every epoch and a
// chunk is never duplicated.
enum class Transmission { kWholeChunk, kFluid };

std::string_view to_string(Transmission t);

struct ScheduleEvent {
  int epoch = 0;
  int src = 0;
  int from = 0;
  int to = 0;
  int chunk = 0;
  double fraction = 1.0;

  // Orders by (epoch, src, from, to, chunk).
  auto operator<=>(const ScheduleEvent& o) const {
    return std::tie(epoch, src, from, to, chunk) <=>
           std::tie(o.epoch, o.src, o.from, o.to, o.chunk);
  }
  bool operator==(const ScheduleEvent& o) const = default;
};

struct Schedule {
  double tau_sec = 1.0;
  double chunk_size_bytes = 1.0;
  int num_epochs = 0;
  Transmission transmission = Transmission::kWholeChunk;
  SwitchMode switch_mode = SwitchMode::kCopy;
  CapacityMode capacity_mode = CapacityMode::kPlain;
  std::vector<ScheduleEvent> events;
  // Last epoch in which a demanded chunk arrives; -1 for an empty demand.
  int completion_epoch = -1;

  double transfer_time_sec() const { return (completion_epoch + 1) * tau_sec; }
  void sort_events();
};

// The graph and link timings a schedule's events refer to: the topology
// itself, or its hyper-edge form in hyper-edge mode.
struct ScheduleNetwork {
  Topology network;
  std::vector<int> via;
  std::vector<LinkTiming> timing;
  HyperEdgeTopology hyper;
};

ScheduleNetwork schedule_network(const Schedule& s, const Topology& t);

// Keeps only whole-chunk events needed to deliver each demanded chunk, traced
// backwards from every destination. Ties go to the earliest arrival, then the
// lowest sending node. Throws Error(kValidation) if a demanded chunk cannot be
// traced to its source.
Schedule prune_schedule(const Schedule& s, const Topology& t, const Demand& d);

// Zeroes every flow not needed by some delivery and recomputes buffers to
// match. Delivery variables and the objective are unchanged. Throws
// Error(kValidation) if a demanded chunk cannot be traced.
Solution prune_unused_flows(const GeneralModel& gm, const Solution& sol);

// One event per positive flow, with the completion epoch taken from the
// delivery variables.
Schedule extract_schedule(const GeneralModel& gm, const Solution& sol);

// Simplified MSCCL-style step list, one step per epoch.
void export_msccl(const Schedule& s, const Topology& t, std::ostream& out);

}  // namespace collsched

#endif  // COLLSCHED_SCHEDULE_HPP_
