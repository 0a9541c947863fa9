#include "collsched/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace collsched {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

DistanceTable floyd_warshall(const Topology& t, const std::vector<double>& weight) {
  const int n = t.num_nodes();
  DistanceTable fw;
  fw.dist.assign(n, std::vector<double>(n, kInf));
  for (int v = 0; v < n; ++v) fw.dist[v][v] = 0.0;
  for (int e = 0; e < t.num_edges(); ++e) {
    double& cell = fw.dist[t.edge(e).src][t.edge(e).dst];
    cell = std::min(cell, weight[e]);
  }
  for (int m = 0; m < n; ++m) {
    for (int i = 0; i < n; ++i) {
      if (fw.dist[i][m] == kInf) continue;
      for (int j = 0; j < n; ++j) {
        const double via = fw.dist[i][m] + fw.dist[m][j];
        if (via < fw.dist[i][j]) fw.dist[i][j] = via;
      }
    }
  }
  return fw;
}

Topology model_network(const Topology& t, const ModelOptions& opts) {
  if (opts.switch_mode == SwitchMode::kHyperEdge) {
    return make_hyper_edge_topology(t).network;
  }
  return t;
}

std::string idx(std::initializer_list<int> parts) {
  std::string out;
  for (int p : parts) {
    out += '_';
    out += std::to_string(p);
  }
  return out;
}

}  // namespace

DistanceTable floyd_warshall_alpha(const Topology& t) {
  std::vector<double> w(t.num_edges());
  for (int e = 0; e < t.num_edges(); ++e) w[e] = t.edge(e).alpha_sec;
  return floyd_warshall(t, w);
}

DistanceTable floyd_warshall_epochs(const Topology& t,
                                    const std::vector<LinkTiming>& timing) {
  std::vector<double> w(t.num_edges());
  for (int e = 0; e < t.num_edges(); ++e) w[e] = timing[e].lag + 1.0;
  return floyd_warshall(t, w);
}

void require_reachable(const DistanceTable& fw, const Demand& d) {
  for (const DemandEntry& e : d.entries()) {
    if (e.src >= fw.size() || e.dst >= fw.size() || fw.at(e.src, e.dst) == kInf) {
      throw Error(ErrorKind::kInvalidInput,
                  "node " + std::to_string(e.dst) + " is unreachable from " +
                      std::to_string(e.src));
    }
  }
}

int RoundState::residual_entries() const {
  int total = 0;
  for (const Commodity& c : residual) total += static_cast<int>(c.dsts.size());
  return total;
}

RoundState initial_round_state(const Demand& d) {
  RoundState st;
  st.residual = d.commodities();
  for (int q = 0; q < static_cast<int>(st.residual.size()); ++q) {
    st.carry[{q, st.residual[q].src, 0}] = 1.0;
  }
  return st;
}

int RoundModel::carry(int q, int n, int kp) const {
  auto it = carry_var.find({q, n, kp});
  return it == carry_var.end() ? -1 : it->second;
}

int RoundModel::progress(int loc, int d, int kp) const {
  auto it = progress_var.find({loc, d, kp});
  return it == progress_var.end() ? -1 : it->second;
}

int max_lookahead(const Topology& t, const Demand& d, const EpochConfig& cfg,
                  const ModelOptions& opts) {
  const Topology net = model_network(t, opts);
  int best = 0;
  for (const LinkTiming& lt :
       link_timings(net, cfg.tau_sec, d.chunk_size_bytes(), opts.capacity_mode)) {
    best = std::max(best, lt.lag);
  }
  return best;
}

RoundModel build_round_model(const Topology& t, const Demand& d,
                             const RoundState& state, const EpochConfig& cfg,
                             const ModelOptions& opts, const DistanceTable& fw,
                             double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw Error(ErrorKind::kInvalidInput, "gamma must be in (0, 1)");
  }
  if (opts.has_buffer_limits()) {
    throw Error(ErrorKind::kInvalidInput, "A* rounds do not support buffer limits");
  }
  const int L = max_lookahead(t, d, cfg, opts);
  const int K = cfg.num_epochs;
  if (K <= L) {
    throw Error(ErrorKind::kInvalidInput,
                "a round needs more than " + std::to_string(L) +
                    " epochs so in-flight chunks land within the next round");
  }

  RoundModel rm;
  rm.lookahead = L;
  TimeExpandedSpec spec;
  spec.topology = t;
  spec.demand = d;
  spec.cfg = cfg;
  spec.opts = opts;
  spec.require_delivery = false;
  spec.prune_late_flows = false;
  std::vector<int> local(state.residual.size(), -1);
  for (size_t g = 0; g < state.residual.size(); ++g) {
    if (state.residual[g].dsts.empty()) continue;
    local[g] = static_cast<int>(spec.commodities.size());
    spec.commodities.push_back(state.residual[g]);
    rm.global_commodity.push_back(static_cast<int>(g));
  }
  for (const auto& [key, amount] : state.carry) {
    const auto [g, n, kp] = key;
    if (g < 0 || g >= static_cast<int>(local.size()) || local[g] < 0) continue;
    spec.injections[{local[g], n, kp}] += amount;
  }
  rm.core = build_time_expanded(spec);
  GeneralModel& gm = rm.core;
  Model& m = gm.model;
  const Topology& net = gm.network;
  const int N = net.num_nodes();
  const int Q = gm.num_commodities();

  auto arrivals = [&](int q, int n, int a) {
    LinearExpr expr;
    for (int e : net.in_edges(n)) expr.add(gm.flow(q, e, a - gm.timing[e].lag), 1.0);
    return expr;
  };

  for (int q = 0; q < Q; ++q) {
    const Commodity& c = gm.commodities[q];
    const std::string tag = idx({c.src, c.chunk});
    for (int n = 0; n < N; ++n) {
      const bool sw = net.is_switch(n);
      int prev = -1;
      for (int kp = 0; kp <= L; ++kp) {
        LinearExpr expr = arrivals(q, n, K + kp - 1);
        if (!sw) {
          if (kp == 0) {
            expr = LinearExpr();
            expr.add(gm.buffer(q, n, K), 1.0);
          } else {
            expr.add(prev, 1.0);
          }
        }
        if (expr.terms.empty()) continue;
        // A no-copy switch must forward what it receives inside the round.
        const bool pinned = sw && opts.switch_mode == SwitchMode::kNoCopy;
        const double hi =
            pinned ? 0.0 : sw ? static_cast<double>(net.in_edges(n).size()) : 1.0;
        const int v = m.add_variable("Q" + tag + idx({n, kp}), VarType::kContinuous,
                                     0.0, hi);
        LinearExpr row;
        row.add(v, 1.0).add(expr, -1.0);
        m.add_row("carry" + tag + idx({n, kp}), row, RowSense::kEqual, 0.0);
        rm.carry_var[{q, n, kp}] = v;
        if (!sw) prev = v;
      }
    }
  }

  std::map<int, int> residual_count;
  for (const Commodity& c : gm.commodities) {
    for (int dst : c.dsts) ++residual_count[dst];
  }
  for (const auto& [dst, count] : residual_count) {
    for (int kp = 0; kp <= L; ++kp) {
      LinearExpr total;
      for (int loc = 0; loc < N; ++loc) {
        const double dist = fw.at(loc, dst);
        if (dist == std::numeric_limits<double>::infinity()) continue;
        LinearExpr held;
        for (int q = 0; q < Q; ++q) {
          const auto& ds = gm.commodities[q].dsts;
          if (std::find(ds.begin(), ds.end(), dst) == ds.end()) continue;
          held.add(rm.carry(q, loc, kp), 1.0);
        }
        if (held.terms.empty()) continue;
        const double weight = loc == dst ? 1.0 / (kp + 1)
                                         : gamma / ((kp + 1) * (1.0 + dist));
        const int p = m.add_variable("P" + idx({loc, dst, kp}), VarType::kContinuous,
                                     0.0, count, weight);
        rm.progress_var[{loc, dst, kp}] = p;
        LinearExpr row;
        row.add(p, 1.0).add(held, -1.0);
        m.add_row("prog" + idx({loc, dst, kp}), row, RowSense::kLessEqual, 0.0);
        total.add(p, 1.0);
      }
      m.add_row("progsum" + idx({dst, kp}), total, RowSense::kEqual, count);
    }
  }
  return rm;
}

AStarResult astar_solve(const Topology& t, const Demand& d,
                        const EpochConfig& cfg, const ModelOptions& model_opts,
                        const AStarOptions& opts) {
  require_valid(t);
  check_demand_against(t, d);
  if (model_opts.has_buffer_limits()) {
    throw Error(ErrorKind::kInvalidInput, "A* does not support buffer limits");
  }
  if (model_opts.relax_integrality) {
    throw Error(ErrorKind::kInvalidInput, "A* needs integral flows");
  }
  if (opts.max_rounds < 1) {
    throw Error(ErrorKind::kInvalidInput, "max_rounds must be positive");
  }
  const Topology net = model_network(t, model_opts);
  const std::vector<LinkTiming> timing =
      link_timings(net, cfg.tau_sec, d.chunk_size_bytes(), model_opts.capacity_mode);
  const DistanceTable fw = floyd_warshall_epochs(net, timing);
  require_reachable(fw, d);

  const int L = max_lookahead(t, d, cfg, model_opts);
  const int per_round = opts.epochs_per_round > 0 ? opts.epochs_per_round
                                                  : std::max(4, L + 1);
  EpochConfig round_cfg = cfg;
  round_cfg.num_epochs = per_round;

  AStarResult res;
  res.epochs_per_round = per_round;
  RoundState state = initial_round_state(d);
  res.residual_history.push_back(state.residual_entries());
  std::vector<ScheduleEvent> events;

  while (state.residual_entries() > 0 && res.rounds < opts.max_rounds) {
    const RoundModel rm =
        build_round_model(t, d, state, round_cfg, model_opts, fw, opts.gamma);
    const Solution sol = solve(rm.core.model, opts.solver);
    res.solver_wall_time_sec += sol.wall_time_sec;
    if (!sol.has_values()) {
      if (sol.status == SolveStatus::kTimeout) {
        throw Error(ErrorKind::kTimeout,
                    "round " + std::to_string(res.rounds) + " timed out");
      }
      throw Error(ErrorKind::kInternal,
                  "round " + std::to_string(res.rounds) + " has no feasible solution");
    }
    const GeneralModel& gm = rm.core;
    const int offset = res.rounds * per_round;
    for (int q = 0; q < gm.num_commodities(); ++q) {
      const Commodity& c = gm.commodities[q];
      for (int e = 0; e < gm.network.num_edges(); ++e) {
        for (int k = 0; k < per_round; ++k) {
          const int f = gm.flow(q, e, k);
          if (f >= 0 && sol.values[f] > 0.5) {
            events.push_back({offset + k, c.src, gm.network.edge(e).src,
                              gm.network.edge(e).dst, c.chunk, 1.0});
          }
        }
      }
    }

    Carry next_carry;
    for (int q = 0; q < gm.num_commodities(); ++q) {
      const int g = rm.global_commodity[q];
      std::vector<int>& dsts = state.residual[g].dsts;
      for (int n = 0; n < gm.network.num_nodes(); ++n) {
        const bool sw = gm.network.is_switch(n);
        double prev = 0.0;
        for (int kp = 0; kp <= rm.lookahead; ++kp) {
          const double v = std::round(sol.value(rm.carry(q, n, kp)));
          const double amount = sw ? v : v - prev;
          if (amount > 0.5) next_carry[{g, n, kp}] = amount;
          if (!sw) prev = std::max(prev, v);
        }
      }
      std::vector<int> still;
      for (int dst : dsts) {
        bool reached = false;
        if (opts.strict_last_lookahead) {
          reached = sol.value(rm.carry(q, dst, rm.lookahead)) > 0.5;
        } else {
          for (int kp = 0; kp <= rm.lookahead; ++kp) {
            reached = reached || sol.value(rm.carry(q, dst, kp)) > 0.5;
          }
        }
        if (!reached) still.push_back(dst);
      }
      dsts = std::move(still);
    }
    for (auto it = next_carry.begin(); it != next_carry.end();) {
      if (state.residual[std::get<0>(it->first)].dsts.empty()) {
        it = next_carry.erase(it);
      } else {
        ++it;
      }
    }
    state.carry = std::move(next_carry);
    ++res.rounds;
    ++state.round;
    res.residual_history.push_back(state.residual_entries());
  }

  Schedule s;
  s.tau_sec = cfg.tau_sec;
  s.chunk_size_bytes = d.chunk_size_bytes();
  s.num_epochs = res.rounds * per_round;
  s.transmission = Transmission::kWholeChunk;
  s.switch_mode = model_opts.switch_mode;
  s.capacity_mode = model_opts.capacity_mode;
  s.events = std::move(events);
  s.sort_events();
  if (state.residual_entries() > 0) {
    res.schedule = std::move(s);
    throw AStarIncomplete("A* stopped after " + std::to_string(res.rounds) +
                              " rounds with " +
                              std::to_string(state.residual_entries()) +
                              " demanded chunks undelivered",
                          std::move(res));
  }
  res.schedule = prune_schedule(s, t, d);
  return res;
}

}  // namespace collsched
