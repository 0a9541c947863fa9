#include "collsched/milp_general.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "collsched/error.hpp"

namespace collsched {
namespace {

std::string idx(std::initializer_list<int> parts) {
  std::string out;
  for (int p : parts) {
    out += '_';
    out += std::to_string(p);
  }
  return out;
}

}  // namespace

int GeneralModel::commodity_index(int src, int chunk) const {
  auto it = commodity_lookup_.find({src, chunk});
  return it == commodity_lookup_.end() ? -1 : it->second;
}

int GeneralModel::flow(int q, int e, int k) const {
  const int K = cfg.num_epochs;
  if (q < 0 || e < 0 || k < 0 || k >= K) return -1;
  return flow_[(static_cast<size_t>(q) * edges_ + e) * K + k];
}

int GeneralModel::buffer(int q, int n, int k) const {
  const int K = cfg.num_epochs;
  if (q < 0 || k < 0 || k > K) return -1;
  return buffer_[(static_cast<size_t>(q) * nodes_ + n) * (K + 1) + k];
}

int GeneralModel::drop(int q, int n, int k) const {
  const int K = cfg.num_epochs;
  if (q < 0 || k < 0 || k >= K || drop_.empty()) return -1;
  return drop_[(static_cast<size_t>(q) * nodes_ + n) * K + k];
}

int GeneralModel::delivered(int q, int slot, int k) const {
  const int K = cfg.num_epochs;
  if (q < 0 || k < 0 || k >= K) return -1;
  return delivered_[q][static_cast<size_t>(slot) * K + k];
}

GeneralModel build_time_expanded(const TimeExpandedSpec& spec) {
  spec.cfg.validate();
  GeneralModel gm;
  gm.topology = spec.topology;
  gm.demand = spec.demand;
  gm.cfg = spec.cfg;
  gm.opts = spec.opts;
  gm.commodities = spec.commodities;

  const Topology& t = gm.topology;
  const bool hyper = spec.opts.switch_mode == SwitchMode::kHyperEdge;
  if (hyper) {
    gm.hyper = make_hyper_edge_topology(t);
    gm.network = gm.hyper.network;
    gm.via = gm.hyper.via;
  } else {
    gm.network = t;
    gm.via.assign(t.num_edges(), -1);
  }
  const Topology& net = gm.network;
  const int K = spec.cfg.num_epochs;
  const int N = net.num_nodes();
  const int E = net.num_edges();
  const int Q = static_cast<int>(gm.commodities.size());
  const double tau = spec.cfg.tau_sec;
  const double chunk = spec.demand.chunk_size_bytes();
  const bool relax = spec.opts.relax_integrality;
  gm.timing = link_timings(net, tau, chunk, spec.opts.capacity_mode);
  gm.nodes_ = N;
  gm.edges_ = E;
  gm.flow_.assign(static_cast<size_t>(Q) * E * K, -1);
  gm.buffer_.assign(static_cast<size_t>(Q) * N * (K + 1), -1);
  bool any_limit = false;
  for (int n = 0; n < N; ++n) any_limit = any_limit || spec.opts.limit_at(n).has_value();
  if (any_limit) gm.drop_.assign(static_cast<size_t>(Q) * N * K, -1);
  gm.delivered_.resize(Q);
  for (int q = 0; q < Q; ++q) {
    gm.commodity_lookup_[{gm.commodities[q].src, gm.commodities[q].chunk}] = q;
  }

  std::vector<std::map<std::pair<int, int>, double>> inject(Q);
  for (const auto& [key, amount] : spec.injections) {
    const auto [q, n, k] = key;
    if (q < 0 || q >= Q || n < 0 || n >= N || k < 0) {
      throw Error(ErrorKind::kInternal, "injection outside the model");
    }
    if (amount != 0.0) inject[q][{n, k}] += amount;
  }
  auto inj = [&](int q, int n, int k) {
    auto it = inject[q].find({n, k});
    return it == inject[q].end() ? 0.0 : it->second;
  };

  Model& m = gm.model;
  const VarType bin = relax ? VarType::kContinuous : VarType::kBinary;
  const double chunk_count = std::max(1, spec.demand.chunk_count());

  auto arrivals = [&](int q, int n, int a) {
    LinearExpr expr;
    for (int e : net.in_edges(n)) expr.add(gm.flow(q, e, a - gm.timing[e].lag), 1.0);
    return expr;
  };

  for (int q = 0; q < Q; ++q) {
    const Commodity& c = gm.commodities[q];
    const std::string tag = idx({c.src, c.chunk});
    std::vector<int> avail(N, kNever);
    for (const auto& [nk, amount] : inject[q]) {
      avail[nk.first] = std::min(avail[nk.first], nk.second);
    }
    const std::vector<int> earliest = earliest_send_epochs(net, gm.timing, avail);
    std::vector<int> latest;
    std::vector<bool> is_dst(N, false);
    for (int d : c.dsts) is_dst[d] = true;
    if (spec.prune_late_flows) {
      latest = latest_send_epochs(net, gm.timing, c.src, c.dsts, K);
    }
    auto deadline = [&](int j) { return arrival_deadline(latest, is_dst, j, K); };

    for (int e = 0; e < E; ++e) {
      const Edge& ed = net.edge(e);
      if (ed.dst == c.src || earliest[ed.src] >= kNever) continue;
      for (int k = earliest[ed.src]; k < K; ++k) {
        if (spec.prune_late_flows && k + gm.timing[e].lag > deadline(ed.dst)) break;
        gm.flow_[(static_cast<size_t>(q) * E + e) * K + k] = m.add_variable(
            "F" + tag + idx({ed.src, ed.dst, k}), bin, 0.0, 1.0);
      }
    }

    for (int n = 0; n < N; ++n) {
      if (net.is_switch(n) || earliest[n] >= kNever) continue;
      const std::optional<int> limit = spec.opts.limit_at(n);
      for (int k = earliest[n]; k <= K; ++k) {
        double lo = 0.0;
        double hi = 1.0;
        if (k == 0) lo = hi = std::min(1.0, inj(q, n, 0));
        gm.buffer_[(static_cast<size_t>(q) * N + n) * (K + 1) + k] =
            m.add_variable("B" + tag + idx({n, k}), bin, lo, hi);
      }
      // X[k] may also discard what arrives during epoch k.
      if (!limit) continue;
      for (int k = std::max(0, earliest[n] - 1); k < K; ++k) {
        gm.drop_[(static_cast<size_t>(q) * N + n) * K + k] = m.add_variable(
            "X" + tag + idx({n, k}), VarType::kContinuous, 0.0, chunk_count);
      }
    }

    for (int n = 0; n < N; ++n) {
      if (earliest[n] >= kNever) continue;
      if (!net.is_switch(n)) {
        for (int k = 1; k <= K; ++k) {
          const int b = gm.buffer(q, n, k);
          if (b < 0) continue;
          LinearExpr rhs = arrivals(q, n, k - 1);
          rhs.add(gm.buffer(q, n, k - 1), 1.0);
          rhs.add(gm.drop(q, n, k - 1), -1.0);
          rhs.add_constant(inj(q, n, k));
          LinearExpr row;
          row.add(b, 1.0).add(rhs, -1.0);
          m.add_row("buf" + tag + idx({n, k}), row, RowSense::kEqual, 0.0);
        }
        for (int e : net.out_edges(n)) {
          for (int k = 0; k < K; ++k) {
            const int f = gm.flow(q, e, k);
            if (f < 0) continue;
            LinearExpr row;
            row.add(f, 1.0);
            if (k == 0) {
              row.add(gm.buffer(q, n, 0), -1.0);
            } else {
              row.add(gm.buffer(q, n, k - 1), -1.0);
              row.add(arrivals(q, n, k - 1), -1.0);
              row.add_constant(-inj(q, n, k));
            }
            m.add_row("cons" + tag + idx({n, net.edge(e).dst, k}), row,
                      RowSense::kLessEqual, 0.0);
          }
        }
      } else if (spec.opts.switch_mode == SwitchMode::kCopy) {
        for (int e : net.out_edges(n)) {
          for (int k = 0; k < K; ++k) {
            const int f = gm.flow(q, e, k);
            if (f < 0) continue;
            LinearExpr row;
            row.add(f, 1.0).add(arrivals(q, n, k - 1), -1.0);
            row.add_constant(-inj(q, n, k));
            m.add_row("sw" + tag + idx({n, net.edge(e).dst, k}), row,
                      RowSense::kLessEqual, 0.0);
          }
        }
      } else {
        const int last = spec.require_delivery ? K : K - 1;
        for (int k = 0; k <= last; ++k) {
          LinearExpr row;
          for (int e : net.out_edges(n)) row.add(gm.flow(q, e, k), 1.0);
          row.add(arrivals(q, n, k - 1), -1.0);
          row.add_constant(-inj(q, n, k));
          if (row.terms.empty() && row.constant == 0.0) continue;
          m.add_row("swnc" + tag + idx({n, k}), row, RowSense::kEqual, 0.0);
        }
      }
    }

    gm.delivered_[q].assign(c.dsts.size() * static_cast<size_t>(K), -1);
    for (size_t slot = 0; slot < c.dsts.size(); ++slot) {
      const int d = c.dsts[slot];
      if (spec.require_delivery && earliest[d] > K) {
        m.mark_infeasible("destination " + std::to_string(d) +
                          " cannot receive chunk " + std::to_string(c.chunk) +
                          " of source " + std::to_string(c.src) + " within " +
                          std::to_string(K) + " epochs");
      }
      int prev = -1;
      for (int k = 0; k < K; ++k) {
        const int b = gm.buffer(q, d, k + 1);
        if (b < 0) continue;
        const double lo = spec.require_delivery && k == K - 1 ? 1.0 : 0.0;
        const int r = m.add_variable("R" + tag + idx({d, k}), VarType::kContinuous,
                                     lo, 1.0, 1.0 / (k + 1));
        gm.delivered_[q][slot * K + k] = r;
        LinearExpr cap;
        cap.add(r, 1.0).add(b, -1.0);
        m.add_row("dst" + tag + idx({d, k}), cap, RowSense::kLessEqual, 0.0);
        if (prev >= 0) {
          LinearExpr mono;
          mono.add(prev, 1.0).add(r, -1.0);
          m.add_row("mono" + tag + idx({d, k}), mono, RowSense::kLessEqual, 0.0);
        }
        prev = r;
      }
    }
  }

  for (int n = 0; n < N; ++n) {
    const std::optional<int> limit = spec.opts.limit_at(n);
    if (!limit || net.is_switch(n)) continue;
    for (int k = 0; k <= K; ++k) {
      LinearExpr row;
      for (int q = 0; q < Q; ++q) row.add(gm.buffer(q, n, k), 1.0);
      if (static_cast<int>(row.terms.size()) <= *limit) continue;
      m.add_row("lim" + idx({n, k}), row, RowSense::kLessEqual, *limit);
    }
  }

  for (int e = 0; e < E; ++e) {
    const int kappa = gm.timing[e].kappa;
    for (int k = 0; k < K; ++k) {
      LinearExpr row;
      for (int j = std::max(0, k - kappa + 1); j <= k; ++j) {
        for (int q = 0; q < Q; ++q) row.add(gm.flow(q, e, j), 1.0);
      }
      if (row.terms.empty()) continue;
      double cap = 0.0;
      if (relax) {
        for (int j = k - kappa + 1; j <= k; ++j) {
          cap += chunks_per_epoch(net, e, j, tau, chunk);
        }
      } else {
        cap = window_capacity(net, e, k, kappa, tau, chunk);
      }
      if (static_cast<double>(row.terms.size()) <= cap) continue;
      m.add_row("cap" + idx({net.edge(e).src, net.edge(e).dst, k}), row,
                RowSense::kLessEqual, cap);
    }
  }

  if (hyper) {
    for (const auto& [s, omega] : gm.hyper.omega) {
      const int budget = gm.hyper.budget.at(s);
      std::set<int> ends;
      for (int e : omega) {
        ends.insert(net.edge(e).src);
        ends.insert(net.edge(e).dst);
      }
      for (int k = 0; k < K; ++k) {
        LinearExpr total;
        for (int e : omega) {
          for (int q = 0; q < Q; ++q) total.add(gm.flow(q, e, k), 1.0);
        }
        if (static_cast<int>(total.terms.size()) > budget) {
          m.add_row("hbud" + idx({s, k}), total, RowSense::kLessEqual, budget);
        }
        for (int v : ends) {
          LinearExpr out;
          LinearExpr in;
          for (int e : omega) {
            for (int q = 0; q < Q; ++q) {
              if (net.edge(e).src == v) out.add(gm.flow(q, e, k), 1.0);
              if (net.edge(e).dst == v) in.add(gm.flow(q, e, k), 1.0);
            }
          }
          if (out.terms.size() > 1) {
            m.add_row("hout" + idx({s, v, k}), out, RowSense::kLessEqual, 1.0);
          }
          if (in.terms.size() > 1) {
            m.add_row("hin" + idx({s, v, k}), in, RowSense::kLessEqual, 1.0);
          }
        }
      }
    }
  }
  return gm;
}

GeneralModel build_general_model(const Topology& t, const Demand& d,
                                 const EpochConfig& cfg,
                                 const ModelOptions& opts) {
  cfg.validate();
  require_valid(t);
  check_demand_against(t, d);
  TimeExpandedSpec spec;
  spec.topology = t;
  spec.demand = d;
  spec.cfg = cfg;
  spec.opts = opts;
  spec.commodities = d.commodities();
  std::map<int, int> initial;
  for (int q = 0; q < static_cast<int>(spec.commodities.size()); ++q) {
    const int src = spec.commodities[q].src;
    spec.injections[{q, src, 0}] = 1.0;
    ++initial[src];
  }
  for (const auto& [node, count] : initial) {
    const std::optional<int> limit = opts.limit_at(node);
    if (limit && *limit < count) {
      throw Error(ErrorKind::kInvalidInput,
                  "buffer limit " + std::to_string(*limit) + " at node " +
                      std::to_string(node) + " is below its " +
                      std::to_string(count) + " initial chunks");
    }
  }
  return build_time_expanded(spec);
}

}  // namespace collsched
