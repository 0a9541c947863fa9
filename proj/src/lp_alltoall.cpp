#include "collsched/lp_alltoall.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "collsched/error.hpp"

namespace collsched {
namespace {

constexpr double kArcEps = 1e-10;
constexpr double kResidue = 1e-6;

std::string idx(std::initializer_list<int> parts) {
  std::string out;
  for (int p : parts) {
    out += '_';
    out += std::to_string(p);
  }
  return out;
}

}  // namespace

int LpModel::flow(int si, int e, int k) const {
  const int K = cfg.num_epochs;
  if (e < 0 || k < 0 || k >= K) return -1;
  return flow_[(static_cast<size_t>(si) * edges_ + e) * K + k];
}

int LpModel::buffer(int si, int n, int k) const {
  const int K = cfg.num_epochs;
  if (k < 0 || k > K) return -1;
  return buffer_[(static_cast<size_t>(si) * nodes_ + n) * (K + 1) + k];
}

int LpModel::read(int si, int slot, int k) const {
  const int K = cfg.num_epochs;
  if (k < 0 || k >= K) return -1;
  return read_[si][static_cast<size_t>(slot) * K + k];
}

int LpModel::cumulative(int si, int slot, int k) const {
  const int K = cfg.num_epochs;
  if (k < 0 || k >= K) return -1;
  return cumulative_[si][static_cast<size_t>(slot) * K + k];
}

LpModel build_lp_model(const Topology& t, const Demand& d,
                       const EpochConfig& cfg, const ModelOptions& opts) {
  cfg.validate();
  require_valid(t);
  check_demand_against(t, d);
  if (opts.switch_mode == SwitchMode::kHyperEdge) {
    throw Error(ErrorKind::kInvalidInput, "the LP does not support hyper-edge switches");
  }
  LpModel lp;
  lp.topology = t;
  lp.demand = d;
  lp.cfg = cfg;
  lp.opts = opts;
  const int K = cfg.num_epochs;
  const int N = t.num_nodes();
  const int E = t.num_edges();
  lp.timing = link_timings(t, cfg.tau_sec, d.chunk_size_bytes(), CapacityMode::kPlain);
  lp.nodes_ = N;
  lp.edges_ = E;

  std::map<int, std::map<int, int>> per_pair;  // src -> dst -> chunks
  for (const DemandEntry& e : d.entries()) ++per_pair[e.src][e.dst];
  for (const auto& [src, row] : per_pair) {
    lp.sources.push_back(src);
    std::vector<int> dsts;
    std::vector<int> counts;
    double total = 0.0;
    for (const auto& [dst, count] : row) {
      dsts.push_back(dst);
      counts.push_back(count);
      total += count;
    }
    lp.dsts.push_back(dsts);
    lp.demand_count.push_back(counts);
    lp.supply.push_back(total);
  }
  const int S = static_cast<int>(lp.sources.size());
  lp.flow_.assign(static_cast<size_t>(S) * E * K, -1);
  lp.buffer_.assign(static_cast<size_t>(S) * N * (K + 1), -1);
  lp.read_.resize(S);
  lp.cumulative_.resize(S);
  Model& m = lp.model;

  auto arrivals = [&](int si, int n, int a) {
    LinearExpr expr;
    for (int e : t.in_edges(n)) expr.add(lp.flow(si, e, a - lp.timing[e].lag), 1.0);
    return expr;
  };
  auto departures = [&](int si, int n, int k) {
    LinearExpr expr;
    for (int e : t.out_edges(n)) expr.add(lp.flow(si, e, k), 1.0);
    return expr;
  };

  for (int si = 0; si < S; ++si) {
    const int s = lp.sources[si];
    const std::string tag = idx({s});
    std::vector<int> avail(N, kNever);
    avail[s] = 0;
    const std::vector<int> earliest = earliest_send_epochs(t, lp.timing, avail);
    const std::vector<int> latest = latest_send_epochs(t, lp.timing, s, lp.dsts[si], K);
    std::vector<bool> is_dst(N, false);
    for (int dst : lp.dsts[si]) is_dst[dst] = true;

    for (int e = 0; e < E; ++e) {
      const Edge& ed = t.edge(e);
      if (ed.dst == s || earliest[ed.src] >= kNever) continue;
      const int deadline = arrival_deadline(latest, is_dst, ed.dst, K);
      for (int k = earliest[ed.src]; k < K && k + lp.timing[e].lag <= deadline; ++k) {
        const double cap =
            chunks_per_epoch(t, e, k, cfg.tau_sec, d.chunk_size_bytes());
        lp.flow_[(static_cast<size_t>(si) * E + e) * K + k] = m.add_variable(
            "F" + tag + idx({ed.src, ed.dst, k}), VarType::kContinuous, 0.0, cap);
      }
    }
    for (int n = 0; n < N; ++n) {
      if (t.is_switch(n) || earliest[n] >= kNever) continue;
      for (int k = earliest[n]; k <= K; ++k) {
        lp.buffer_[(static_cast<size_t>(si) * N + n) * (K + 1) + k] = m.add_variable(
            "B" + tag + idx({n, k}), VarType::kContinuous, 0.0, lp.supply[si]);
      }
    }
    lp.read_[si].assign(lp.dsts[si].size() * static_cast<size_t>(K), -1);
    lp.cumulative_[si].assign(lp.dsts[si].size() * static_cast<size_t>(K), -1);
    for (size_t slot = 0; slot < lp.dsts[si].size(); ++slot) {
      const int dst = lp.dsts[si][slot];
      const double need = lp.demand_count[si][slot];
      if (earliest[dst] > K) {
        m.mark_infeasible("destination " + std::to_string(dst) +
                          " cannot hear from source " + std::to_string(s) +
                          " within " + std::to_string(K) + " epochs");
      }
      int prev = -1;
      for (int k = std::max(0, earliest[dst] - 1); k < K; ++k) {
        const int r = m.add_variable("R" + tag + idx({dst, k}), VarType::kContinuous,
                                     0.0, need);
        const double lo = k == K - 1 ? need : 0.0;
        const int cum = m.add_variable("C" + tag + idx({dst, k}), VarType::kContinuous,
                                       lo, need, 1.0 / (k + 1));
        lp.read_[si][slot * K + k] = r;
        lp.cumulative_[si][slot * K + k] = cum;
        LinearExpr row;
        row.add(cum, 1.0).add(prev, -1.0).add(r, -1.0);
        m.add_row("cum" + tag + idx({dst, k}), row, RowSense::kEqual, 0.0);
        prev = cum;
      }
    }

    for (int n = 0; n < N; ++n) {
      if (earliest[n] >= kNever) continue;
      int slot = -1;
      for (size_t j = 0; j < lp.dsts[si].size(); ++j) {
        if (lp.dsts[si][j] == n) slot = static_cast<int>(j);
      }
      if (t.is_switch(n)) {
        for (int k = 0; k < K; ++k) {
          LinearExpr row = arrivals(si, n, k);
          row.add(departures(si, n, k + 1), -1.0);
          if (row.terms.empty()) continue;
          m.add_row("sw" + tag + idx({n, k}), row, RowSense::kEqual, 0.0);
        }
        LinearExpr first = departures(si, n, 0);
        if (!first.terms.empty()) {
          m.add_row("sw0" + tag + idx({n}), first, RowSense::kEqual, 0.0);
        }
        continue;
      }
      LinearExpr init;
      init.add(lp.buffer(si, n, 0), 1.0).add(departures(si, n, 0), 1.0);
      m.add_row("init" + tag + idx({n}), init, RowSense::kEqual,
                n == s ? lp.supply[si] : 0.0);
      for (int k = 0; k < K; ++k) {
        LinearExpr row = arrivals(si, n, k);
        row.add(lp.buffer(si, n, k), 1.0);
        row.add(lp.buffer(si, n, k + 1), -1.0);
        row.add(departures(si, n, k + 1), -1.0);
        if (slot >= 0) row.add(lp.read(si, slot, k), -1.0);
        if (row.terms.empty()) continue;
        m.add_row("cons" + tag + idx({n, k}), row, RowSense::kEqual, 0.0);
      }
    }
  }

  for (int e = 0; e < E; ++e) {
    for (int k = 0; k < K; ++k) {
      LinearExpr row;
      for (int si = 0; si < S; ++si) row.add(lp.flow(si, e, k), 1.0);
      if (row.terms.size() < 2) continue;
      m.add_row("cap" + idx({t.edge(e).src, t.edge(e).dst, k}), row,
                RowSense::kLessEqual,
                chunks_per_epoch(t, e, k, cfg.tau_sec, d.chunk_size_bytes()));
    }
  }
  for (int n = 0; n < N; ++n) {
    const std::optional<int> limit = opts.limit_at(n);
    if (!limit || t.is_switch(n)) continue;
    for (int k = 0; k <= K; ++k) {
      LinearExpr row;
      for (int si = 0; si < S; ++si) row.add(lp.buffer(si, n, k), 1.0);
      if (row.terms.empty()) continue;
      m.add_row("lim" + idx({n, k}), row, RowSense::kLessEqual, *limit);
    }
  }
  return lp;
}

int lp_completion_epoch(const LpModel& lp, const Solution& sol) {
  if (!sol.has_values()) {
    throw Error(ErrorKind::kValidation, "cannot read a solution without values");
  }
  int completion = -1;
  for (size_t si = 0; si < lp.sources.size(); ++si) {
    for (size_t slot = 0; slot < lp.dsts[si].size(); ++slot) {
      const double need = lp.demand_count[si][slot];
      int first = -1;
      for (int k = 0; k < lp.num_epochs() && first < 0; ++k) {
        const int c = lp.cumulative(static_cast<int>(si), static_cast<int>(slot), k);
        if (c >= 0 && sol.values[c] >= need - kResidue * std::max(1.0, need)) first = k;
      }
      if (first < 0) {
        throw Error(ErrorKind::kValidation, "LP solution misses a demand");
      }
      completion = std::max(completion, first);
    }
  }
  return completion;
}

Schedule lp_rates_to_schedule(const LpModel& lp, const Solution& sol) {
  if (!sol.has_values()) {
    throw Error(ErrorKind::kValidation, "cannot decompose a solution without values");
  }
  const Topology& t = lp.topology;
  const int K = lp.num_epochs();
  const int E = t.num_edges();
  const int N = t.num_nodes();
  std::map<std::tuple<int, int, int, int, int>, double> merged;

  for (size_t si_u = 0; si_u < lp.sources.size(); ++si_u) {
    const int si = static_cast<int>(si_u);
    const int s = lp.sources[si];
    std::vector<double> fres(static_cast<size_t>(E) * K, 0.0);
    std::vector<double> hres(static_cast<size_t>(N) * K, 0.0);
    for (int e = 0; e < E; ++e) {
      for (int k = 0; k < K; ++k) fres[e * K + k] = std::max(0.0, sol.value(lp.flow(si, e, k)));
    }
    for (int n = 0; n < N; ++n) {
      for (int k = 0; k < K; ++k) hres[n * K + k] = std::max(0.0, sol.value(lp.buffer(si, n, k)));
    }

    for (size_t slot = 0; slot < lp.dsts[si].size(); ++slot) {
      const int dst = lp.dsts[si][slot];
      std::vector<int> chunks;
      for (const DemandEntry& de : lp.demand.entries()) {
        if (de.src == s && de.dst == dst) chunks.push_back(de.chunk);
      }
      std::sort(chunks.begin(), chunks.end());
      size_t ci = 0;
      double filled = 0.0;

      for (int k = 0; k < K; ++k) {
        double remaining = std::max(0.0, sol.value(lp.read(si, static_cast<int>(slot), k)));
        int guard = 0;
        while (remaining > 1e-9) {
          if (++guard > 100000) {
            throw Error(ErrorKind::kValidation, "conservation residue: trace does not converge");
          }
          // Arcs on the path: edge >= 0 is a send (edge, epoch), edge < 0 a hold
          // (node, epoch).
          std::vector<std::pair<int, int>> arcs;
          double amount = remaining;
          int node = dst;
          int time = k + 1;
          bool stuck = false;
          while (!(node == s && time == 0)) {
            int best_edge = -2;
            int best_epoch = 0;
            int best_from = 0;
            for (int e : t.in_edges(node)) {
              const int ks = time - lp.timing[e].lag - 1;
              if (ks < 0 || ks >= K || fres[e * K + ks] <= kArcEps) continue;
              const int from = t.edge(e).src;
              if (best_edge == -2 || ks < best_epoch ||
                  (ks == best_epoch && from < best_from)) {
                best_edge = e;
                best_epoch = ks;
                best_from = from;
              }
            }
            if (time >= 1 && hres[node * K + time - 1] > kArcEps) {
              const bool better = best_edge == -2 || time - 1 < best_epoch ||
                                  (time - 1 == best_epoch && node < best_from);
              if (better) {
                best_edge = -1;
                best_epoch = time - 1;
                best_from = node;
              }
            }
            if (best_edge == -2) {
              stuck = true;
              break;
            }
            if (best_edge >= 0) {
              amount = std::min(amount, fres[best_edge * K + best_epoch]);
              arcs.push_back({best_edge, best_epoch});
            } else {
              amount = std::min(amount, hres[node * K + best_epoch]);
              arcs.push_back({-1 - node, best_epoch});
            }
            node = best_from;
            time = best_epoch;
          }
          if (stuck) {
            if (remaining < kResidue) break;
            throw Error(ErrorKind::kValidation,
                        "conservation residue: read of source " + std::to_string(s) +
                            " at node " + std::to_string(dst) + " cannot be traced");
          }
          for (const auto& [a, k2] : arcs) {
            if (a >= 0) {
              fres[a * K + k2] -= amount;
            } else {
              hres[(-1 - a) * K + k2] -= amount;
            }
          }
          remaining -= amount;

          double left = amount;
          while (left > 1e-9) {
            if (ci >= chunks.size()) {
              if (left < kResidue) break;
              throw Error(ErrorKind::kValidation,
                          "conservation residue: reads exceed the demand of " +
                              std::to_string(s) + "->" + std::to_string(dst));
            }
            const double part = std::min(left, 1.0 - filled);
            for (const auto& [a, k2] : arcs) {
              if (a < 0) continue;
              merged[{k2, s, t.edge(a).src, t.edge(a).dst, chunks[ci]}] += part;
            }
            filled += part;
            left -= part;
            if (filled >= 1.0 - 1e-7) {
              ++ci;
              filled = 0.0;
            }
          }
        }
      }
      if (ci < chunks.size() && !(ci + 1 == chunks.size() && filled >= 1.0 - kResidue)) {
        throw Error(ErrorKind::kValidation,
                    "conservation residue: demand of " + std::to_string(s) + "->" +
                        std::to_string(dst) + " is not fully read");
      }
    }
  }

  Schedule out;
  out.tau_sec = lp.cfg.tau_sec;
  out.chunk_size_bytes = lp.demand.chunk_size_bytes();
  out.num_epochs = K;
  out.transmission = Transmission::kFluid;
  out.switch_mode = lp.opts.switch_mode;
  out.capacity_mode = CapacityMode::kPlain;
  for (const auto& [key, frac] : merged) {
    const auto [epoch, src, from, to, chunk] = key;
    // Copies of one chunk for several destinations can exceed one unit.
    for (double left = frac; left > 1e-9; left -= 1.0) {
      out.events.push_back({epoch, src, from, to, chunk, std::min(1.0, left)});
    }
  }
  out.completion_epoch = lp_completion_epoch(lp, sol);
  out.sort_events();
  return out;
}

}  // namespace collsched
