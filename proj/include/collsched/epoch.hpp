#ifndef COLLSCHED_EPOCH_HPP_
#define COLLSCHED_EPOCH_HPP_

#include "collsched/topology.hpp"

namespace collsched {

enum class DurationMode { kSlowestLink, kFastestLink };

// Epochs are indexed 0..num_epochs-1. A horizon of K epochs ends at
// (K * tau_sec) seconds.
struct EpochConfig {
  double tau_sec = 1.0;
  int num_epochs = 1;
  DurationMode duration_mode = DurationMode::kFastestLink;
  int epoch_multiplier = 1;

  // Throws Error(kInvalidInput) if a field is out of range.
  void validate() const;
};

// ceil/floor that ignore relative noise below 1e-9, so that 1.4000000001
// epochs of latency rounds like 1.4 and 0.99999999999 chunks floors to 1.
int ceil_tolerant(double x);
int floor_tolerant(double x);

// Link latency in whole epochs: ceil(alpha / tau).
int compute_delta(double alpha_sec, double tau_sec);
int compute_delta(const Edge& e, double tau_sec);

// Slowest mode: em * chunk / min capacity. Fastest mode: em * chunk / max
// capacity.
double epoch_duration(const Topology& t, double chunk_size_bytes,
                      DurationMode mode, int em);

// Chunks edge e can carry during epoch k: T * tau / chunk_size.
double chunks_per_epoch(const Topology& t, int e, int epoch, double tau_sec,
                        double chunk_size_bytes);

// Epochs one whole chunk occupies edge e: ceil(chunk_size / (T * tau)).
int transmission_epochs(const Topology& t, int e, double tau_sec,
                        double chunk_size_bytes);

// Upper bound on whole chunks sent on edge e in the window of `kappa` epochs
// ending at epoch k. With kappa == 1 this is floor(chunks_per_epoch).
int window_capacity(const Topology& t, int e, int k, int kappa,
                    double tau_sec, double chunk_size_bytes);

}  // namespace collsched

#endif  // COLLSCHED_EPOCH_HPP_
