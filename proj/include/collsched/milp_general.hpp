#ifndef COLLSCHED_MILP_GENERAL_HPP_
#define COLLSCHED_MILP_GENERAL_HPP_

#include <map>
#include <tuple>
#include <vector>

#include "collsched/demand.hpp"
#include "collsched/epoch.hpp"
#include "collsched/formulation.hpp"
#include "collsched/model.hpp"
#include "collsched/topology.hpp"

namespace collsched {

// The time-expanded MILP together with the lookup tables needed to read a
// solution back. Variables that pruning proved useless are absent; every
// lookup returns -1 for them and they count as constant 0.
//
// Epochs run 0..K-1. B has entries at 0..K: B[k] is what a node holds at the
// start of epoch k, and B[K] is what it holds once the horizon ends.
struct GeneralModel {
  Model model;
  Topology topology;  // topology as given
  Topology network;   // graph the flow variables live on
  std::vector<int> via;  // per network edge: switch it crosses, or -1
  HyperEdgeTopology hyper;  // filled in hyper-edge mode only
  Demand demand;
  EpochConfig cfg;
  ModelOptions opts;
  std::vector<Commodity> commodities;
  std::vector<LinkTiming> timing;  // per network edge

  int num_epochs() const { return cfg.num_epochs; }
  int num_commodities() const { return static_cast<int>(commodities.size()); }
  // Index of commodity (src, chunk), or -1.
  int commodity_index(int src, int chunk) const;

  int flow(int q, int e, int k) const;
  int buffer(int q, int n, int k) const;
  int drop(int q, int n, int k) const;
  // `slot` indexes commodities[q].dsts.
  int delivered(int q, int slot, int k) const;

  // Layout of the dense lookup tables.
  int nodes_ = 0;
  int edges_ = 0;
  std::vector<int> flow_;
  std::vector<int> buffer_;
  std::vector<int> drop_;
  std::vector<std::vector<int>> delivered_;  // per q: slot * K + k
  std::map<std::pair<int, int>, int> commodity_lookup_;
};

// Chunks entering the model from outside: (commodity, node, epoch) -> count.
// At a GPU the chunk is held from that epoch on; at a switch it must be sent
// in exactly that epoch.
using Injections = std::map<std::tuple<int, int, int>, double>;

// Inputs shared by the general model and the A* round models.
struct TimeExpandedSpec {
  Topology topology;
  Demand demand;
  EpochConfig cfg;
  ModelOptions opts;
  // Commodities to route; `dsts` lists the destinations still to serve.
  std::vector<Commodity> commodities;
  Injections injections;
  // Require every destination to hold its chunk by the end of the horizon.
  bool require_delivery = true;
  // Drop flows that cannot reach any destination before the horizon ends.
  bool prune_late_flows = true;
};

GeneralModel build_time_expanded(const TimeExpandedSpec& spec);

// Throws Error(kInvalidInput) if the demand names nodes absent from the
// topology, or the configuration is out of range.
GeneralModel build_general_model(const Topology& t, const Demand& d,
                                 const EpochConfig& cfg,
                                 const ModelOptions& opts);

}  // namespace collsched

#endif  // COLLSCHED_MILP_GENERAL_HPP_
