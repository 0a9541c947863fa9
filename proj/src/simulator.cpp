#include "collsched/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "collsched/epoch.hpp"
#include "collsched/error.hpp"

namespace collsched {
namespace {

constexpr double kTol = 1e-6;

using Key = std::pair<int, int>;  // (src, chunk)

std::string where(int src, int chunk, int node) {
  return "src " + std::to_string(src) + " chunk " + std::to_string(chunk) +
         " at node " + std::to_string(node);
}

std::string link(int from, int to) {
  return "link " + std::to_string(from) + "->" + std::to_string(to);
}

}  // namespace

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kCapacity: return "capacity";
    case ViolationKind::kCausality: return "causality";
    case ViolationKind::kSwitchBuffer: return "switch-buffer";
    case ViolationKind::kUnmetDemand: return "unmet-demand";
    case ViolationKind::kHyperEdgeBudget: return "hyper-edge-budget";
  }
  return "unknown";
}

SimReport simulate(const Schedule& s, const Topology& t, const Demand& d) {
  if (!(s.tau_sec > 0.0) || !(s.chunk_size_bytes > 0.0)) {
    throw Error(ErrorKind::kValidation, "schedule has a non-positive tau or chunk size");
  }
  const ScheduleNetwork sn = schedule_network(s, t);
  const Topology& net = sn.network;
  const int N = net.num_nodes();
  const bool fluid = s.transmission == Transmission::kFluid;
  const bool no_copy_switch = fluid || s.switch_mode == SwitchMode::kNoCopy;

  std::vector<ScheduleEvent> events = s.events;
  std::stable_sort(events.begin(), events.end(),
                   [](const ScheduleEvent& a, const ScheduleEvent& b) {
                     return a.epoch < b.epoch;
                   });
  std::vector<int> edge_of(events.size());
  int last_epoch = -1;
  int max_lag = 0;
  for (const LinkTiming& lt : sn.timing) max_lag = std::max(max_lag, lt.lag);
  for (size_t i = 0; i < events.size(); ++i) {
    const ScheduleEvent& ev = events[i];
    if (ev.from < 0 || ev.from >= N || ev.to < 0 || ev.to >= N || ev.epoch < 0 ||
        ev.src < 0 || ev.src >= N || ev.chunk < 0) {
      throw Error(ErrorKind::kValidation, "malformed schedule event");
    }
    if (!(ev.fraction > 0.0 && ev.fraction <= 1.0 + 1e-9)) {
      throw Error(ErrorKind::kValidation, "event fraction outside (0, 1]");
    }
    edge_of[i] = net.find_edge(ev.from, ev.to);
    if (edge_of[i] < 0) {
      throw Error(ErrorKind::kValidation,
                  "event uses missing " + link(ev.from, ev.to));
    }
    last_epoch = std::max(last_epoch, ev.epoch);
  }

  std::map<Key, std::vector<int>> wanted;  // key -> destinations
  for (const DemandEntry& e : d.entries()) wanted[{e.src, e.chunk}].push_back(e.dst);

  std::map<Key, std::vector<double>> held;
  auto holdings = [&](const Key& key) -> std::vector<double>& {
    auto it = held.find(key);
    if (it != held.end()) return it->second;
    std::vector<double>& h = held[key];
    h.assign(N, 0.0);
    double supply = 1.0;
    if (fluid) {
      auto w = wanted.find(key);
      if (w != wanted.end()) supply = std::max<double>(1.0, w->second.size());
    }
    h[key.first] = supply;
    return h;
  };
  for (const auto& [key, dsts] : wanted) holdings(key);

  // Fluid delivery needs the amount each destination forwards in total.
  std::map<std::tuple<int, int, int>, double> forwarded;
  if (fluid) {
    for (const ScheduleEvent& ev : events) {
      forwarded[{ev.src, ev.chunk, ev.from}] += ev.fraction;
    }
  }
  std::map<std::tuple<int, int, int>, double> received;
  std::map<std::tuple<int, int, int>, int> delivered;  // (src, chunk, dst)
  std::set<std::tuple<int, int, int>> ever_at_switch;  // (src, chunk, node)

  SimReport rep;
  // arrivals[u] holds (key, node, amount) usable from epoch u.
  std::map<int, std::vector<std::tuple<Key, int, double>>> arrivals;
  size_t next = 0;
  const int horizon = last_epoch + max_lag + 1;
  for (int k = 0; k <= horizon; ++k) {
    std::map<std::pair<Key, int>, double> at_switch;
    for (const auto& [key, node, amount] : arrivals[k]) {
      if (net.is_switch(node)) {
        at_switch[{key, node}] += amount;
        ever_at_switch.insert({key.first, key.second, node});
        continue;
      }
      std::vector<double>& h = holdings(key);
      h[node] = fluid ? h[node] + amount : std::min(1.0, h[node] + amount);
      auto w = wanted.find(key);
      if (w == wanted.end() ||
          std::find(w->second.begin(), w->second.end(), node) == w->second.end()) {
        continue;
      }
      const std::tuple<int, int, int> id{key.first, key.second, node};
      if (delivered.count(id) != 0) continue;
      double have = h[node];
      if (fluid) {
        received[id] += amount;
        have = received[id] - forwarded[id];
      }
      if (have >= 1.0 - kTol) delivered[id] = k - 1;
    }
    arrivals.erase(k);

    // Sends of this epoch grouped by (key, sending node).
    std::map<std::pair<Key, int>, std::vector<size_t>> groups;
    while (next < events.size() && events[next].epoch < k) ++next;
    for (size_t i = next; i < events.size() && events[i].epoch == k; ++i) {
      const ScheduleEvent& ev = events[i];
      groups[{{ev.src, ev.chunk}, ev.from}].push_back(i);
    }
    for (const auto& [gk, idxs] : groups) {
      const auto& [key, node] = gk;
      double total = 0.0;
      double largest = 0.0;
      for (size_t ix : idxs) {
        total += events[ix].fraction;
        largest = std::max(largest, events[ix].fraction);
      }
      if (net.is_switch(node)) {
        auto found = at_switch.find({key, node});
        const double avail = found == at_switch.end() ? 0.0 : found->second;
        const double need = no_copy_switch ? total : largest;
        if (need > avail + kTol) {
          const bool rested = ever_at_switch.count({key.first, key.second, node}) != 0;
          rep.violations.push_back({rested ? ViolationKind::kSwitchBuffer
                                           : ViolationKind::kCausality,
                                    where(key.first, key.second, node), k});
        }
        if (found != at_switch.end()) found->second = std::max(0.0, avail - need);
        if (!no_copy_switch && found != at_switch.end()) found->second = 0.0;
      } else {
        std::vector<double>& h = holdings(key);
        const double need = fluid ? total : largest;
        if (need > h[node] + kTol) {
          rep.violations.push_back(
              {ViolationKind::kCausality, where(key.first, key.second, node), k});
        }
        if (fluid) h[node] = std::max(0.0, h[node] - total);
      }
      for (size_t ix : idxs) {
        const ScheduleEvent& ev = events[ix];
        const int u = k + sn.timing[edge_of[ix]].lag + 1;
        arrivals[u].push_back({key, ev.to, ev.fraction});
      }
    }
    if (no_copy_switch) {
      for (const auto& [sk, left] : at_switch) {
        if (left > kTol) {
          rep.violations.push_back({ViolationKind::kSwitchBuffer,
                                    where(sk.first.first, sk.first.second, sk.second),
                                    k});
        }
      }
    }
  }

  // Link capacity.
  std::map<std::pair<int, int>, double> load;  // (edge, epoch)
  for (size_t i = 0; i < events.size(); ++i) {
    load[{edge_of[i], events[i].epoch}] += events[i].fraction;
  }
  for (int e = 0; e < net.num_edges(); ++e) {
    const int kappa = fluid ? 1 : sn.timing[e].kappa;
    for (int k = 0; k <= last_epoch; ++k) {
      double used = 0.0;
      bool any = false;
      for (int j = std::max(0, k - kappa + 1); j <= k; ++j) {
        auto it = load.find({e, j});
        if (it != load.end()) {
          used += it->second;
          any = true;
        }
      }
      if (!any) continue;
      const double cap =
          fluid ? chunks_per_epoch(net, e, k, s.tau_sec, s.chunk_size_bytes)
                : window_capacity(net, e, k, kappa, s.tau_sec, s.chunk_size_bytes);
      if (used > cap + kTol) {
        rep.violations.push_back({ViolationKind::kCapacity,
                                  link(net.edge(e).src, net.edge(e).dst), k});
      }
    }
  }

  if (s.switch_mode == SwitchMode::kHyperEdge) {
    std::map<std::pair<int, int>, double> per_switch;  // (switch, epoch)
    std::map<std::tuple<int, int, int>, double> out_use, in_use;  // (sw, node, k)
    for (size_t i = 0; i < events.size(); ++i) {
      const int sw = sn.via[edge_of[i]];
      if (sw < 0) continue;
      const ScheduleEvent& ev = events[i];
      per_switch[{sw, ev.epoch}] += ev.fraction;
      out_use[{sw, ev.from, ev.epoch}] += ev.fraction;
      in_use[{sw, ev.to, ev.epoch}] += ev.fraction;
    }
    for (const auto& [key, used] : per_switch) {
      if (used > sn.hyper.budget.at(key.first) + kTol) {
        rep.violations.push_back({ViolationKind::kHyperEdgeBudget,
                                  "switch " + std::to_string(key.first), key.second});
      }
    }
    for (const auto* use : {&out_use, &in_use}) {
      for (const auto& [key, used] : *use) {
        if (used > 1.0 + kTol) {
          rep.violations.push_back(
              {ViolationKind::kHyperEdgeBudget,
               "switch " + std::to_string(std::get<0>(key)) + " node " +
                   std::to_string(std::get<1>(key)),
               std::get<2>(key)});
        }
      }
    }
  }

  rep.completion_epoch_per_node.assign(N, -1);
  rep.output_buffer_bytes.assign(N, 0.0);
  std::vector<bool> complete(N, true);
  for (const DemandEntry& e : d.entries()) {
    if (e.dst >= N) {
      throw Error(ErrorKind::kValidation, "demand names a node outside the topology");
    }
    rep.output_buffer_bytes[e.dst] += d.chunk_size_bytes();
    auto it = delivered.find({e.src, e.chunk, e.dst});
    if (it == delivered.end()) {
      complete[e.dst] = false;
      rep.violations.push_back({ViolationKind::kUnmetDemand,
                                where(e.src, e.chunk, e.dst), horizon});
      continue;
    }
    rep.completion_epoch_per_node[e.dst] =
        std::max(rep.completion_epoch_per_node[e.dst], it->second);
    rep.completion_epoch = std::max(rep.completion_epoch, it->second);
  }
  for (int n = 0; n < N; ++n) {
    if (!complete[n]) rep.completion_epoch_per_node[n] = -1;
    rep.total_output_bytes += rep.output_buffer_bytes[n];
  }
  rep.transfer_time_sec = d.empty() ? 0.0 : (rep.completion_epoch + 1) * s.tau_sec;
  std::stable_sort(rep.violations.begin(), rep.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return a.epoch < b.epoch;
                   });
  return rep;
}

Bandwidth algorithmic_bandwidth(const SimReport& report) {
  if (!report.ok()) {
    throw Error(ErrorKind::kValidation,
                "bandwidth is undefined for a schedule with violations");
  }
  Bandwidth bw;
  bw.per_node.assign(report.output_buffer_bytes.size(), 0.0);
  if (report.total_output_bytes <= 0.0) return bw;
  if (!(report.transfer_time_sec > 0.0)) {
    throw Error(ErrorKind::kValidation, "zero transfer time with nonzero demand");
  }
  for (size_t n = 0; n < bw.per_node.size(); ++n) {
    bw.per_node[n] = report.output_buffer_bytes[n] / report.transfer_time_sec;
    bw.max_node = std::max(bw.max_node, bw.per_node[n]);
  }
  bw.aggregate = report.total_output_bytes / report.transfer_time_sec;
  return bw;
}

}  // namespace collsched
