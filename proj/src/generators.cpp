#include "collsched/generators.hpp"

#include <utility>

#include "collsched/error.hpp"

namespace collsched {
namespace {

constexpr double kNvFast = 50 * kGBps;
constexpr double kNvSlow = 25 * kGBps;
constexpr double kNvAlpha = 0.7 * kMicrosecond;
constexpr double kNdv2SwitchCap = 12.5 * kGBps;
constexpr double kNdv2SwitchAlpha = 1.3 * kMicrosecond;
constexpr double kDgx2SwitchCap = 125 * kGBps;
constexpr double kDgx2SwitchAlpha = 0.35 * kMicrosecond;
constexpr double kDgx2CrossCap = 12.5 * kGBps;
constexpr double kDgx2CrossAlpha = 2.6 * kMicrosecond;

void add_pair(std::vector<Edge>& edges, int a, int b, double cap,
              double alpha) {
  edges.push_back({a, b, cap, alpha});
  edges.push_back({b, a, cap, alpha});
}

// Hybrid cube mesh of one chassis, GPUs base..base+7.
void add_dgx1_chassis(std::vector<Edge>& edges, int base) {
  static constexpr std::pair<int, int> kFast[] = {
      {0, 1}, {2, 3}, {3, 1}, {4, 5}, {6, 7}, {7, 5}, {0, 4}, {2, 6}};
  static constexpr std::pair<int, int> kSlow[] = {
      {0, 2}, {0, 3}, {1, 2}, {4, 6}, {4, 7}, {5, 6}, {1, 5}, {3, 7}};
  for (auto [a, b] : kFast) add_pair(edges, base + a, base + b, kNvFast, kNvAlpha);
  for (auto [a, b] : kSlow) add_pair(edges, base + a, base + b, kNvSlow, kNvAlpha);
}

void require_positive(int value, const char* what) {
  if (value < 1) {
    throw Error(ErrorKind::kInvalidInput, std::string(what) + " must be >= 1");
  }
}

}  // namespace

Topology make_dgx1() { return make_ndv2(1); }

Topology make_ndv2(int chassis) {
  require_positive(chassis, "chassis");
  const int gpus = 8 * chassis;
  const bool with_switch = chassis > 1;
  std::vector<bool> is_switch(gpus + (with_switch ? 1 : 0), false);
  std::vector<Edge> edges;
  for (int c = 0; c < chassis; ++c) add_dgx1_chassis(edges, 8 * c);
  if (with_switch) {
    const int sw = gpus;
    is_switch[sw] = true;
    for (int c = 0; c < chassis; ++c) {
      edges.push_back({8 * c, sw, kNdv2SwitchCap, kNdv2SwitchAlpha});
      edges.push_back({sw, 8 * c + 1, kNdv2SwitchCap, kNdv2SwitchAlpha});
    }
  }
  return Topology(std::move(is_switch), std::move(edges));
}

Topology make_dgx2(int chassis) {
  require_positive(chassis, "chassis");
  const int per = 17;
  std::vector<bool> is_switch(per * chassis, false);
  std::vector<Edge> edges;
  for (int c = 0; c < chassis; ++c) {
    const int sw = per * c + 16;
    is_switch[sw] = true;
    for (int g = 0; g < 16; ++g) {
      add_pair(edges, per * c + g, sw, kDgx2SwitchCap, kDgx2SwitchAlpha);
    }
  }
  if (chassis > 1) {
    for (int c = 0; c < chassis; ++c) {
      const int next = (c + 1) % chassis;
      for (int g = 0; g < 8; ++g) {
        edges.push_back(
            {per * c + g, per * next + 8 + g, kDgx2CrossCap, kDgx2CrossAlpha});
      }
    }
  }
  return Topology(std::move(is_switch), std::move(edges));
}

Topology make_star(int leaves, double capacity_bytes_per_sec,
                   double alpha_sec) {
  require_positive(leaves, "leaves");
  std::vector<bool> is_switch(leaves + 1, false);
  is_switch[0] = true;
  std::vector<Edge> edges;
  for (int v = 1; v <= leaves; ++v) {
    add_pair(edges, 0, v, capacity_bytes_per_sec, alpha_sec);
  }
  return Topology(std::move(is_switch), std::move(edges));
}

Topology make_line(int n, double capacity_bytes_per_sec, double alpha_sec) {
  require_positive(n, "nodes");
  std::vector<Edge> edges;
  for (int v = 0; v + 1 < n; ++v) {
    add_pair(edges, v, v + 1, capacity_bytes_per_sec, alpha_sec);
  }
  return Topology(std::vector<bool>(n, false), std::move(edges));
}

Topology make_ring(int n, double capacity_bytes_per_sec, double alpha_sec) {
  if (n < 3) return make_line(n, capacity_bytes_per_sec, alpha_sec);
  std::vector<Edge> edges;
  for (int v = 0; v < n; ++v) {
    add_pair(edges, v, (v + 1) % n, capacity_bytes_per_sec, alpha_sec);
  }
  return Topology(std::vector<bool>(n, false), std::move(edges));
}

Topology make_broadcast_star() {
  std::vector<bool> is_switch = {false, true, false, false, false};
  std::vector<Edge> edges = {
      {0, 1, 1.0, 0.0}, {1, 2, 1.0, 0.0}, {1, 3, 1.0, 0.0}, {1, 4, 1.0, 0.0}};
  return Topology(std::move(is_switch), std::move(edges));
}

Topology make_funnel() {
  std::vector<Edge> edges = {
      {0, 3, 1.0, 0.0}, {1, 3, 1.0, 0.0}, {2, 3, 1.0, 0.0}, {3, 4, 2.0, 0.0}};
  return Topology(std::vector<bool>(5, false), std::move(edges));
}

Topology make_diamond(double source_capacity) {
  std::vector<Edge> edges = {{0, 1, source_capacity, 0.0},
                             {0, 2, source_capacity, 0.0},
                             {1, 3, 1.0, 0.0},
                             {2, 3, 1.0, 0.0}};
  return Topology(std::vector<bool>(4, false), std::move(edges));
}

Topology make_latency_chain(double alpha1, double alpha2) {
  std::vector<Edge> edges = {{0, 1, 1.0, alpha1},
                             {1, 2, 1.0, alpha1},
                             {2, 3, 1.0, alpha1},
                             {3, 4, 1.0, 0.0},
                             {5, 3, 1.0, alpha2}};
  return Topology(std::vector<bool>(6, false), std::move(edges));
}

}  // namespace collsched
