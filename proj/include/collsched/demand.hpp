#ifndef COLLSCHED_DEMAND_HPP_
#define COLLSCHED_DEMAND_HPP_

#include <compare>
#include <vector>

#include "collsched/topology.hpp"

namespace collsched {

// Destination `dst` wants chunk `chunk` of source `src`.
struct DemandEntry {
  int src = 0;
  int chunk = 0;
  int dst = 0;

  auto operator<=>(const DemandEntry&) const = default;
};

// One (source, chunk) pair together with every node that wants it.
struct Commodity {
  int src = 0;
  int chunk = 0;
  std::vector<int> dsts;
};

// Sparse binary demand tensor D[s,c,d]. Chunk ids are global: two sources
// never share a chunk id.
class Demand {
 public:
  Demand() = default;
  // Sorts and deduplicates entries. Throws Error(kInvalidInput) on
  // self-demand, out-of-range chunk ids or a non-positive chunk size.
  Demand(double chunk_size_bytes, int chunk_count,
         std::vector<DemandEntry> entries);

  double chunk_size_bytes() const { return chunk_size_bytes_; }
  int chunk_count() const { return chunk_count_; }
  const std::vector<DemandEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  int size() const { return static_cast<int>(entries_.size()); }

  bool wants(int src, int chunk, int dst) const;
  // Sorted by (src, chunk); destinations sorted ascending.
  std::vector<Commodity> commodities() const;
  // Number of chunks node `dst` must receive.
  int demanded_at(int dst) const;

 private:
  double chunk_size_bytes_ = 1.0;
  int chunk_count_ = 0;
  std::vector<DemandEntry> entries_;
};

enum class CollectiveKind { kAllGather, kAllToAll };

// AllGather: source i (in GPU order) owns chunk ids
// [i*chunks_per_pair, (i+1)*chunks_per_pair) and every other GPU wants them.
// AllToAll: every ordered GPU pair gets chunks_per_pair fresh chunk ids.
Demand generate_demand(CollectiveKind kind, const Topology& t,
                       int chunks_per_pair, double chunk_size_bytes);

// Shifts the chunk ids of each demand past the previous ones and unions them.
Demand merge_demands(const std::vector<Demand>& demands);

// Throws Error(kInvalidInput) if the demand names nodes outside the topology
// or uses a switch as a source or destination.
void check_demand_against(const Topology& t, const Demand& d);

}  // namespace collsched

#endif  // COLLSCHED_DEMAND_HPP_
