#include "collsched/formulation.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <utility>

#include "collsched/error.hpp"

namespace collsched {

std::string_view to_string(SwitchMode mode) {
  switch (mode) {
    case SwitchMode::kCopy: return "copy";
    case SwitchMode::kNoCopy: return "no-copy";
    case SwitchMode::kHyperEdge: return "hyper-edge";
  }
  return "unknown";
}

std::string_view to_string(CapacityMode mode) {
  return mode == CapacityMode::kPlain ? "plain" : "windowed";
}

std::string_view to_string(DurationMode mode) {
  return mode == DurationMode::kSlowestLink ? "slowest" : "fastest";
}

SwitchMode parse_switch_mode(std::string_view name) {
  for (SwitchMode m : {SwitchMode::kCopy, SwitchMode::kNoCopy, SwitchMode::kHyperEdge}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown switch mode '" + std::string(name) + "'");
}

CapacityMode parse_capacity_mode(std::string_view name) {
  for (CapacityMode m : {CapacityMode::kPlain, CapacityMode::kWindowed}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown capacity mode '" + std::string(name) + "'");
}

DurationMode parse_duration_mode(std::string_view name) {
  for (DurationMode m : {DurationMode::kSlowestLink, DurationMode::kFastestLink}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorKind::kInvalidInput, "unknown epoch mode '" + std::string(name) + "'");
}

std::optional<int> ModelOptions::limit_at(int node) const {
  auto it = node_buffer_limits.find(node);
  if (it != node_buffer_limits.end()) return it->second;
  return buffer_limit;
}

CapacityMode default_capacity_mode(DurationMode mode) {
  return mode == DurationMode::kFastestLink ? CapacityMode::kWindowed
                                            : CapacityMode::kPlain;
}

std::vector<LinkTiming> link_timings(const Topology& t, double tau_sec,
                                     double chunk_size_bytes,
                                     CapacityMode mode) {
  std::vector<LinkTiming> out(t.num_edges());
  for (int e = 0; e < t.num_edges(); ++e) {
    LinkTiming& lt = out[e];
    lt.delta = compute_delta(t.edge(e), tau_sec);
    lt.kappa = mode == CapacityMode::kWindowed
                   ? transmission_epochs(t, e, tau_sec, chunk_size_bytes)
                   : 1;
    lt.lag = lt.delta + lt.kappa - 1;
  }
  return out;
}

HyperEdgeTopology make_hyper_edge_topology(const Topology& t) {
  std::vector<Edge> edges;
  std::vector<int> via;
  for (const Edge& e : t.edges()) {
    if (t.is_switch(e.src) || t.is_switch(e.dst)) continue;
    edges.push_back(e);
    via.push_back(-1);
  }
  std::map<std::pair<int, int>, bool> taken;
  for (const Edge& e : edges) taken[{e.src, e.dst}] = true;

  HyperEdgeTopology out;
  for (int s : t.switches()) {
    const auto& ins = t.in_edges(s);
    const auto& outs = t.out_edges(s);
    if (ins.empty() || outs.empty()) {
      throw Error(ErrorKind::kInvalidInput,
                  "switch " + std::to_string(s) +
                      " has no incoming or no outgoing link");
    }
    out.budget[s] = static_cast<int>(std::min(ins.size(), outs.size()));
    std::vector<int>& omega = out.omega[s];
    for (int ein : ins) {
      const Edge& a = t.edge(ein);
      if (t.is_switch(a.src)) continue;
      for (int eout : outs) {
        const Edge& b = t.edge(eout);
        if (t.is_switch(b.dst) || a.src == b.dst) continue;
        if (taken[{a.src, b.dst}]) continue;
        taken[{a.src, b.dst}] = true;
        omega.push_back(static_cast<int>(edges.size()));
        edges.push_back({a.src, b.dst,
                         std::min(a.capacity_bytes_per_sec,
                                  b.capacity_bytes_per_sec),
                         a.alpha_sec + b.alpha_sec});
        via.push_back(s);
      }
    }
  }
  // Overrides only apply to plain links that survive the transform.
  std::vector<CapacityOverride> overrides;
  for (const CapacityOverride& o : t.overrides()) {
    const Edge& e = t.edge(o.edge);
    for (size_t k = 0; k < edges.size(); ++k) {
      if (via[k] == -1 && edges[k].src == e.src && edges[k].dst == e.dst) {
        overrides.push_back({static_cast<int>(k), o.epoch,
                             o.capacity_bytes_per_sec});
      }
    }
  }
  out.network = Topology(t.switch_flags(), std::move(edges), std::move(overrides));
  out.via = std::move(via);
  return out;
}

std::vector<int> earliest_send_epochs(const Topology& t,
                                      const std::vector<LinkTiming>& timing,
                                      const std::vector<int>& available_from) {
  std::vector<int> best = available_from;
  using Item = std::pair<int, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int v = 0; v < t.num_nodes(); ++v) {
    if (best[v] < kNever) heap.push({best[v], v});
  }
  while (!heap.empty()) {
    auto [time, v] = heap.top();
    heap.pop();
    if (time != best[v]) continue;
    for (int e : t.out_edges(v)) {
      const int w = t.edge(e).dst;
      const int next = time + timing[e].lag + 1;
      if (next < best[w]) {
        best[w] = next;
        heap.push({next, w});
      }
    }
  }
  return best;
}

int arrival_deadline(const std::vector<int>& latest,
                     const std::vector<bool>& is_dst, int node, int K) {
  int best = is_dst[node] ? K - 1 : kMinusInf;
  if (latest[node] > kMinusInf) best = std::max(best, latest[node] - 1);
  return best;
}

std::vector<int> latest_send_epochs(const Topology& t,
                                    const std::vector<LinkTiming>& timing,
                                    int src, const std::vector<int>& dsts,
                                    int K) {
  const int n = t.num_nodes();
  std::vector<int> latest(n, kMinusInf);
  std::vector<bool> is_dst(n, false);
  for (int d : dsts) is_dst[d] = true;
  for (int iter = 0; iter <= n; ++iter) {
    bool changed = false;
    for (int v = 0; v < n; ++v) {
      for (int e : t.out_edges(v)) {
        const int w = t.edge(e).dst;
        if (w == src) continue;
        const int dl = arrival_deadline(latest, is_dst, w, K);
        if (dl == kMinusInf) continue;
        const int cand = dl - timing[e].lag;
        if (cand > latest[v]) {
          latest[v] = cand;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return latest;
}

}  // namespace collsched
