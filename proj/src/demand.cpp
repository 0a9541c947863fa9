#include "collsched/demand.hpp"

#include <algorithm>
#include <sstream>

#include "collsched/error.hpp"

namespace collsched {

Demand::Demand(double chunk_size_bytes, int chunk_count,
               std::vector<DemandEntry> entries)
    : chunk_size_bytes_(chunk_size_bytes),
      chunk_count_(chunk_count),
      entries_(std::move(entries)) {
  if (!(chunk_size_bytes_ > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "chunk_size must be positive");
  }
  if (chunk_count_ < 0) {
    throw Error(ErrorKind::kInvalidInput, "chunk_count must be non-negative");
  }
  for (const DemandEntry& e : entries_) {
    if (e.src == e.dst) {
      throw Error(ErrorKind::kInvalidInput,
                  "self-demand at node " + std::to_string(e.src));
    }
    if (e.chunk < 0 || e.chunk >= chunk_count_) {
      throw Error(ErrorKind::kInvalidInput,
                  "chunk id " + std::to_string(e.chunk) + " outside [0, " +
                      std::to_string(chunk_count_) + ")");
    }
    if (e.src < 0 || e.dst < 0) {
      throw Error(ErrorKind::kInvalidInput, "negative node id in demand");
    }
  }
  std::sort(entries_.begin(), entries_.end());
  entries_.erase(std::unique(entries_.begin(), entries_.end()), entries_.end());
  // A chunk id belongs to exactly one source.
  std::vector<int> owner(chunk_count_, -1);
  for (const DemandEntry& e : entries_) {
    if (owner[e.chunk] == -1) {
      owner[e.chunk] = e.src;
    } else if (owner[e.chunk] != e.src) {
      throw Error(ErrorKind::kInvalidInput,
                  "chunk id " + std::to_string(e.chunk) +
                      " is used by two sources");
    }
  }
}

bool Demand::wants(int src, int chunk, int dst) const {
  return std::binary_search(entries_.begin(), entries_.end(),
                            DemandEntry{src, chunk, dst});
}

std::vector<Commodity> Demand::commodities() const {
  std::vector<Commodity> out;
  for (const DemandEntry& e : entries_) {
    if (out.empty() || out.back().src != e.src || out.back().chunk != e.chunk) {
      out.push_back({e.src, e.chunk, {}});
    }
    out.back().dsts.push_back(e.dst);
  }
  return out;
}

int Demand::demanded_at(int dst) const {
  return static_cast<int>(std::count_if(
      entries_.begin(), entries_.end(),
      [dst](const DemandEntry& e) { return e.dst == dst; }));
}

Demand generate_demand(CollectiveKind kind, const Topology& t,
                       int chunks_per_pair, double chunk_size_bytes) {
  if (chunks_per_pair < 1) {
    throw Error(ErrorKind::kInvalidInput, "chunks_per_pair must be >= 1");
  }
  const std::vector<int> gpus = t.gpus();
  const int n = static_cast<int>(gpus.size());
  if (n < 2) {
    throw Error(ErrorKind::kInvalidInput,
                "a collective needs at least two non-switch nodes");
  }
  std::vector<DemandEntry> entries;
  int next_chunk = 0;
  if (kind == CollectiveKind::kAllGather) {
    for (int s : gpus) {
      for (int m = 0; m < chunks_per_pair; ++m) {
        for (int d : gpus) {
          if (d != s) entries.push_back({s, next_chunk, d});
        }
        ++next_chunk;
      }
    }
  } else {
    for (int s : gpus) {
      for (int d : gpus) {
        if (d == s) continue;
        for (int m = 0; m < chunks_per_pair; ++m) {
          entries.push_back({s, next_chunk++, d});
        }
      }
    }
  }
  return Demand(chunk_size_bytes, next_chunk, std::move(entries));
}

Demand merge_demands(const std::vector<Demand>& demands) {
  if (demands.empty()) {
    throw Error(ErrorKind::kInvalidInput, "nothing to merge");
  }
  const double chunk_size = demands.front().chunk_size_bytes();
  std::vector<DemandEntry> entries;
  int offset = 0;
  for (const Demand& d : demands) {
    if (d.chunk_size_bytes() != chunk_size) {
      throw Error(ErrorKind::kInvalidInput, "chunk_size mismatch in merge");
    }
    for (const DemandEntry& e : d.entries()) {
      entries.push_back({e.src, e.chunk + offset, e.dst});
    }
    offset += d.chunk_count();
  }
  return Demand(chunk_size, offset, std::move(entries));
}

void check_demand_against(const Topology& t, const Demand& d) {
  for (const DemandEntry& e : d.entries()) {
    for (int node : {e.src, e.dst}) {
      if (node >= t.num_nodes()) {
        throw Error(ErrorKind::kInvalidInput,
                    "demand references node " + std::to_string(node) +
                        " which is absent from the topology");
      }
      if (t.is_switch(node)) {
        throw Error(ErrorKind::kInvalidInput,
                    "switch " + std::to_string(node) +
                        " cannot be a demand source or destination");
      }
    }
  }
}

}  // namespace collsched
