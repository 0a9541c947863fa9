#ifndef COLLSCHED_GENERATORS_HPP_
#define COLLSCHED_GENERATORS_HPP_

#include "collsched/topology.hpp"

namespace collsched {

// Link parameters of the NVLink-class hardware models.
inline constexpr double kGBps = 1e9;
inline constexpr double kMicrosecond = 1e-6;

// One DGX1-style chassis: 8 GPUs in a hybrid cube mesh of 50 GBps and
// 25 GBps links, alpha 0.7us. 32 edges, no switch.
Topology make_dgx1();

// `chassis` DGX1 chassis. With more than one chassis a switch node (the last
// id) joins them: GPU 0 of each chassis feeds the switch and the switch feeds
// GPU 1 of each chassis, at 12.5 GBps and alpha 1.3us.
Topology make_ndv2(int chassis);

// `chassis` chassis of 16 GPUs behind one switch each (125 GBps, alpha
// 0.35us). GPUs 0..7 of chassis c send to GPUs 8..15 of chassis c+1 (mod
// chassis) at 12.5 GBps, alpha 2.6us.
Topology make_dgx2(int chassis);

// Hub switch (node 0) with `leaves` GPUs attached in both directions.
Topology make_star(int leaves, double capacity_bytes_per_sec, double alpha_sec);

// GPUs 0..n-1 in a path, links in both directions.
Topology make_line(int n, double capacity_bytes_per_sec, double alpha_sec);

// GPUs 0..n-1 in a cycle, links in both directions.
Topology make_ring(int n, double capacity_bytes_per_sec, double alpha_sec);

// Small fixtures with unit capacity (1 byte/s) and zero latency unless stated.

// s=0 -> switch h=1 -> d=2,3,4 (one direction only).
Topology make_broadcast_star();

// s=0,1,2 -> h=3 (capacity 1 each), h -> d=4 (capacity 2). h is a GPU.
Topology make_funnel();

// s=0 -> a=1, s -> b=2, a -> d3=3, b -> d3. The two edges out of s have
// capacity `source_capacity`, the other two capacity 1.
Topology make_diamond(double source_capacity);

// Chain s1=0 -> h1=1 -> h2=2 -> h3=3 -> d=4 plus s2=5 -> h3. Every link
// carries one byte per second. Links s1..h3 have latency alpha1, s2->h3 has
// alpha2, h3->d has none.
Topology make_latency_chain(double alpha1, double alpha2);

}  // namespace collsched

#endif  // COLLSCHED_GENERATORS_HPP_
