#ifndef COLLSCHED_TESTS_FIXTURES_HPP_
#define COLLSCHED_TESTS_FIXTURES_HPP_

#include "collsched/demand.hpp"
#include "collsched/epoch.hpp"
#include "collsched/generators.hpp"
#include "collsched/topology.hpp"

namespace collsched::testing {

// s=0 multicasts chunk 0 to 2, 3, 4 through switch 1.
inline Demand star3_demand() { return Demand(1.0, 1, {{0, 0, 2}, {0, 0, 3}, {0, 0, 4}}); }

// Sources 0, 1, 2 each send one chunk to 4.
inline Demand funnel_demand() { return Demand(1.0, 3, {{0, 0, 4}, {1, 1, 4}, {2, 2, 4}}); }

// s1=0 and s2=5 each send one chunk to d=4.
inline Demand chain_demand() { return Demand(1.0, 2, {{0, 0, 4}, {5, 1, 4}}); }

inline EpochConfig unit_epochs(int num_epochs) {
  EpochConfig cfg;
  cfg.tau_sec = 1.0;
  cfg.num_epochs = num_epochs;
  return cfg;
}

}  // namespace collsched::testing

#endif  // COLLSCHED_TESTS_FIXTURES_HPP_
