#include "collsched/schedule.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>

#include "collsched/error.hpp"

namespace collsched {
namespace {

constexpr int kForever = std::numeric_limits<int>::max() / 4;

// A whole-chunk move on edge `edge` of the traced network.
struct Move {
  int src = 0;
  int chunk = 0;
  int edge = 0;
  int epoch = 0;
};

// A node keeps a chunk from the start of epoch `from` up to epoch `until - 1`.
struct HoldInterval {
  int src = 0;
  int chunk = 0;
  int node = 0;
  int from = 0;
  int until = 0;
};

struct TraceResult {
  std::vector<bool> keep;
  std::vector<HoldInterval> holds;
  // Per demand entry (in demand order): epoch in which the chunk arrives.
  std::vector<int> arrival_epoch;
};

// `held(src, chunk, node, from, until)` reports whether a node that has the
// chunk at the start of `from` still has it at the start of `until - 1`.
using HeldFn = std::function<bool(int, int, int, int, int)>;

TraceResult trace_moves(const std::vector<Move>& moves, const Topology& net,
                        const std::vector<LinkTiming>& timing, SwitchMode mode,
                        const Demand& demand, int dst_until, const HeldFn& held) {
  TraceResult out;
  out.keep.assign(moves.size(), false);
  std::map<std::pair<int, int>, std::vector<int>> by_commodity;
  for (size_t i = 0; i < moves.size(); ++i) {
    by_commodity[{moves[i].src, moves[i].chunk}].push_back(static_cast<int>(i));
  }
  auto usable = [&](const Move& mv) {
    return mv.epoch + timing[mv.edge].lag + 1;
  };

  for (const Commodity& c : demand.commodities()) {
    // Arrivals per node sorted by (usable epoch, sending node).
    std::map<int, std::vector<int>> arrivals;
    auto it = by_commodity.find({c.src, c.chunk});
    if (it != by_commodity.end()) {
      for (int i : it->second) arrivals[net.edge(moves[i].edge).dst].push_back(i);
    }
    for (auto& [node, list] : arrivals) {
      std::sort(list.begin(), list.end(), [&](int a, int b) {
        const int ua = usable(moves[a]);
        const int ub = usable(moves[b]);
        if (ua != ub) return ua < ub;
        const int fa = net.edge(moves[a].edge).src;
        const int fb = net.edge(moves[b].edge).src;
        if (fa != fb) return fa < fb;
        return a < b;
      });
    }
    std::set<std::pair<int, int>> done;
    std::set<int> consumed;

    std::function<int(int, int)> require = [&](int node, int until) -> int {
      if (node == c.src) {
        out.holds.push_back({c.src, c.chunk, node, 0, until});
        return 0;
      }
      const bool sw = net.is_switch(node);
      const bool exclusive = sw && mode == SwitchMode::kNoCopy;
      if (!exclusive && done.count({node, until}) != 0) return 0;
      auto found = arrivals.find(node);
      if (found != arrivals.end()) {
        for (int i : found->second) {
          const int u = usable(moves[i]);
          if (sw ? u != until : u > until) continue;
          if (exclusive && consumed.count(i) != 0) continue;
          if (!sw && !held(c.src, c.chunk, node, u, until)) continue;
          if (!exclusive && out.keep[i]) {
            done.insert({node, until});
            if (!sw) out.holds.push_back({c.src, c.chunk, node, u, until});
            return u;
          }
          out.keep[i] = true;
          consumed.insert(i);
          done.insert({node, until});
          if (!sw) out.holds.push_back({c.src, c.chunk, node, u, until});
          require(net.edge(moves[i].edge).src, moves[i].epoch);
          return u;
        }
      }
      throw Error(ErrorKind::kValidation,
                  "cannot trace chunk " + std::to_string(c.chunk) +
                      " of source " + std::to_string(c.src) + " to node " +
                      std::to_string(node) + " before epoch " +
                      std::to_string(until));
    };
    for (int d : c.dsts) {
      out.arrival_epoch.push_back(require(d, dst_until) - 1);
    }
  }
  return out;
}

std::vector<Move> moves_of(const Schedule& s, const Topology& net) {
  std::vector<Move> moves;
  moves.reserve(s.events.size());
  for (const ScheduleEvent& ev : s.events) {
    const int e = net.find_edge(ev.from, ev.to);
    if (e < 0) {
      throw Error(ErrorKind::kValidation,
                  "event uses missing link " + std::to_string(ev.from) + "->" +
                      std::to_string(ev.to));
    }
    moves.push_back({ev.src, ev.chunk, e, ev.epoch});
  }
  return moves;
}

}  // namespace

std::string_view to_string(Transmission t) {
  return t == Transmission::kWholeChunk ? "whole-chunk" : "fluid";
}

void Schedule::sort_events() { std::sort(events.begin(), events.end()); }

ScheduleNetwork schedule_network(const Schedule& s, const Topology& t) {
  ScheduleNetwork out;
  if (s.switch_mode == SwitchMode::kHyperEdge) {
    out.hyper = make_hyper_edge_topology(t);
    out.network = out.hyper.network;
    out.via = out.hyper.via;
  } else {
    out.network = t;
    out.via.assign(t.num_edges(), -1);
  }
  const CapacityMode mode = s.transmission == Transmission::kFluid
                                ? CapacityMode::kPlain
                                : s.capacity_mode;
  out.timing = link_timings(out.network, s.tau_sec, s.chunk_size_bytes, mode);
  return out;
}

Schedule prune_schedule(const Schedule& s, const Topology& t, const Demand& d) {
  if (s.transmission == Transmission::kFluid) return s;
  const ScheduleNetwork sn = schedule_network(s, t);
  const std::vector<Move> moves = moves_of(s, sn.network);
  const TraceResult tr =
      trace_moves(moves, sn.network, sn.timing, s.switch_mode, d, kForever,
                  [](int, int, int, int, int) { return true; });
  Schedule out = s;
  out.events.clear();
  for (size_t i = 0; i < moves.size(); ++i) {
    if (tr.keep[i]) out.events.push_back(s.events[i]);
  }
  out.completion_epoch = -1;
  for (int a : tr.arrival_epoch) out.completion_epoch = std::max(out.completion_epoch, a);
  out.sort_events();
  return out;
}

Solution prune_unused_flows(const GeneralModel& gm, const Solution& sol) {
  if (!sol.has_values()) {
    throw Error(ErrorKind::kValidation, "cannot prune a solution without values");
  }
  if (gm.opts.relax_integrality) {
    throw Error(ErrorKind::kValidation, "cannot prune a relaxed solution");
  }
  const int K = gm.num_epochs();
  const int Q = gm.num_commodities();
  const int N = gm.network.num_nodes();
  std::vector<Move> moves;
  std::vector<int> move_var;
  for (int q = 0; q < Q; ++q) {
    for (int e = 0; e < gm.network.num_edges(); ++e) {
      for (int k = 0; k < K; ++k) {
        const int f = gm.flow(q, e, k);
        if (f >= 0 && sol.values[f] > 0.5) {
          moves.push_back({gm.commodities[q].src, gm.commodities[q].chunk, e, k});
          move_var.push_back(f);
        }
      }
    }
  }
  const bool limited = gm.opts.has_buffer_limits();
  HeldFn held = [&](int src, int chunk, int node, int from, int until) {
    if (!limited) return true;
    const int q = gm.commodity_index(src, chunk);
    for (int j = from; j < until && j <= K; ++j) {
      const int b = gm.buffer(q, node, j);
      if (b < 0 || sol.values[b] < 0.5) return false;
    }
    return true;
  };
  const TraceResult tr = trace_moves(moves, gm.network, gm.timing,
                                     gm.opts.switch_mode, gm.demand, K + 1, held);

  Solution out = sol;
  for (size_t i = 0; i < moves.size(); ++i) {
    if (!tr.keep[i]) out.values[move_var[i]] = 0.0;
  }
  // needed[q][n] marks the epochs in which n must hold commodity q.
  std::vector<std::vector<std::vector<char>>> needed(
      Q, std::vector<std::vector<char>>(N, std::vector<char>(K + 1, 0)));
  for (const HoldInterval& h : tr.holds) {
    const int q = gm.commodity_index(h.src, h.chunk);
    for (int j = h.from; j < h.until && j <= K; ++j) needed[q][h.node][j] = 1;
  }
  auto arrivals = [&](int q, int n, int k) {
    double arrived = 0.0;
    for (int e : gm.network.in_edges(n)) {
      arrived += out.value(gm.flow(q, e, k - gm.timing[e].lag));
    }
    return arrived;
  };
  for (int q = 0; q < Q; ++q) {
    for (int n = 0; n < N; ++n) {
      if (gm.network.is_switch(n)) continue;
      const bool node_limited = gm.opts.limit_at(n).has_value();
      if (!node_limited) {
        // Without X the recurrence is an equality: holdings follow the kept
        // arrivals.
        double have = out.value(gm.buffer(q, n, 0));
        for (int j = 1; j <= K; ++j) {
          have = std::min(1.0, have + arrivals(q, n, j - 1));
          const int b = gm.buffer(q, n, j);
          if (b >= 0) out.values[b] = have;
        }
        continue;
      }
      for (int j = 0; j <= K; ++j) {
        const int b = gm.buffer(q, n, j);
        if (b < 0 || (j == 0 && gm.model.variable(b).lower > 0.5)) continue;
        out.values[b] = needed[q][n][j] ? 1.0 : 0.0;
      }
      for (int j = 1; j <= K; ++j) {
        const int x = gm.drop(q, n, j - 1);
        if (x < 0) continue;
        // Chunks injected at epoch j only occur at the source in epoch 0.
        const double before = out.value(gm.buffer(q, n, j - 1));
        const double after = out.value(gm.buffer(q, n, j));
        out.values[x] = std::max(0.0, before + arrivals(q, n, j - 1) - after);
      }
    }
  }
  return out;
}

Schedule extract_schedule(const GeneralModel& gm, const Solution& sol) {
  if (!sol.has_values()) {
    throw Error(ErrorKind::kValidation, "cannot extract a schedule without values");
  }
  Schedule s;
  s.tau_sec = gm.cfg.tau_sec;
  s.chunk_size_bytes = gm.demand.chunk_size_bytes();
  s.num_epochs = gm.num_epochs();
  s.transmission = Transmission::kWholeChunk;
  s.switch_mode = gm.opts.switch_mode;
  s.capacity_mode = gm.opts.capacity_mode;
  const int K = gm.num_epochs();
  for (int q = 0; q < gm.num_commodities(); ++q) {
    const Commodity& c = gm.commodities[q];
    for (int e = 0; e < gm.network.num_edges(); ++e) {
      for (int k = 0; k < K; ++k) {
        const int f = gm.flow(q, e, k);
        if (f >= 0 && sol.values[f] > 0.5) {
          s.events.push_back({k, c.src, gm.network.edge(e).src,
                              gm.network.edge(e).dst, c.chunk, 1.0});
        }
      }
    }
    for (size_t slot = 0; slot < c.dsts.size(); ++slot) {
      int first = -1;
      for (int k = 0; k < K; ++k) {
        const int r = gm.delivered(q, static_cast<int>(slot), k);
        if (r >= 0 && sol.values[r] > 1.0 - 1e-6) {
          first = k;
          break;
        }
      }
      if (first < 0) {
        throw Error(ErrorKind::kValidation,
                    "destination " + std::to_string(c.dsts[slot]) +
                        " never receives chunk " + std::to_string(c.chunk));
      }
      s.completion_epoch = std::max(s.completion_epoch, first);
    }
  }
  s.sort_events();
  return s;
}

void export_msccl(const Schedule& s, const Topology& t, std::ostream& out) {
  std::map<int, std::map<int, std::vector<const ScheduleEvent*>>> sends;
  std::map<int, std::map<int, std::vector<const ScheduleEvent*>>> recvs;
  for (const ScheduleEvent& ev : s.events) {
    sends[ev.from][ev.to].push_back(&ev);
    recvs[ev.to][ev.from].push_back(&ev);
  }
  int chunks = 0;
  for (const ScheduleEvent& ev : s.events) chunks = std::max(chunks, ev.chunk + 1);
  out << "<algo name=\"collsched\" proto=\"Simple\" nchunksperloop=\"" << chunks
      << "\" ngpus=\"" << t.gpus().size() << "\" coll=\"custom\" inplace=\"0\">\n";
  for (int n = 0; n < t.num_nodes(); ++n) {
    out << "  <gpu id=\"" << n << "\" switch=\"" << (t.is_switch(n) ? 1 : 0)
        << "\">\n";
    int tb = 0;
    for (const auto& [peer, list] : sends[n]) {
      out << "    <tb id=\"" << tb++ << "\" send=\"" << peer
          << "\" recv=\"-1\" chan=\"0\">\n";
      int step = 0;
      for (const ScheduleEvent* ev : list) {
        out << "      <step s=\"" << step++ << "\" type=\"s\" epoch=\""
            << ev->epoch << "\" src_rank=\"" << ev->src << "\" chunk=\""
            << ev->chunk << "\" cnt=\"" << ev->fraction << "\"/>\n";
      }
      out << "    </tb>\n";
    }
    for (const auto& [peer, list] : recvs[n]) {
      out << "    <tb id=\"" << tb++ << "\" send=\"-1\" recv=\"" << peer
          << "\" chan=\"0\">\n";
      int step = 0;
      for (const ScheduleEvent* ev : list) {
        out << "      <step s=\"" << step++ << "\" type=\"r\" epoch=\""
            << ev->epoch << "\" src_rank=\"" << ev->src << "\" chunk=\""
            << ev->chunk << "\" cnt=\"" << ev->fraction << "\"/>\n";
      }
      out << "    </tb>\n";
    }
    out << "  </gpu>\n";
  }
  out << "</algo>\n";
}

}  // namespace collsched
