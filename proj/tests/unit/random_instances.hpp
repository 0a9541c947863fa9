#ifndef COLLSCHED_TESTS_RANDOM_INSTANCES_HPP_
#define COLLSCHED_TESTS_RANDOM_INSTANCES_HPP_

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "collsched/demand.hpp"
#include "collsched/formulation.hpp"
#include "collsched/topology.hpp"

namespace collsched::testing {

struct RandomInstance {
  Topology topology;
  Demand demand;
  SwitchMode switch_mode = SwitchMode::kCopy;
};

// Connected bidirectional graph on 3..6 nodes with unit tau: capacities of 1
// or 2 chunks per epoch, alpha of 0, 1 or 2 epochs, at most one switch, and
// one or two demanded chunks.
inline RandomInstance random_instance(std::mt19937& rng) {
  auto pick = [&rng](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = pick(3, 6);
  std::vector<bool> is_switch(n, false);
  if (n >= 4 && pick(0, 2) == 0) is_switch[pick(0, n - 1)] = true;

  std::set<std::pair<int, int>> pairs;
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 1; i < n; ++i) {
    const int a = order[i];
    const int b = order[pick(0, i - 1)];
    pairs.insert({std::min(a, b), std::max(a, b)});
  }
  const int extra = pick(0, n - 2);
  for (int i = 0; i < extra; ++i) {
    const int a = pick(0, n - 1);
    const int b = pick(0, n - 1);
    if (a != b) pairs.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<Edge> edges;
  for (auto [a, b] : pairs) {
    const double cap = pick(1, 2);
    const double alpha = pick(0, 2);
    edges.push_back({a, b, cap, alpha});
    edges.push_back({b, a, cap, alpha});
  }
  Topology t(is_switch, edges);

  std::vector<int> gpus = t.gpus();
  const int chunks = pick(1, 2);
  std::vector<DemandEntry> entries;
  for (int c = 0; c < chunks; ++c) {
    const int src = gpus[pick(0, static_cast<int>(gpus.size()) - 1)];
    const int fanout = pick(1, static_cast<int>(gpus.size()) - 1);
    std::vector<int> dsts;
    for (int g : gpus) {
      if (g != src) dsts.push_back(g);
    }
    std::shuffle(dsts.begin(), dsts.end(), rng);
    for (int i = 0; i < fanout; ++i) entries.push_back({src, c, dsts[i]});
  }
  RandomInstance r{std::move(t), Demand(1.0, chunks, std::move(entries)), SwitchMode::kCopy};
  if (!r.topology.switches().empty()) {
    r.switch_mode = static_cast<SwitchMode>(pick(0, 2));
  }
  return r;
}

}  // namespace collsched::testing

#endif  // COLLSCHED_TESTS_RANDOM_INSTANCES_HPP_
