#include "collsched/epoch.hpp"

#include <algorithm>
#include <cmath>

#include "collsched/error.hpp"

namespace collsched {
namespace {

constexpr double kRelTol = 1e-9;

double slack(double x) { return kRelTol * std::max(1.0, std::fabs(x)); }

}  // namespace

void EpochConfig::validate() const {
  if (!(tau_sec > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "epoch duration must be positive");
  }
  if (num_epochs < 1) {
    throw Error(ErrorKind::kInvalidInput, "need at least one epoch");
  }
  if (epoch_multiplier < 1) {
    throw Error(ErrorKind::kInvalidInput, "epoch multiplier must be >= 1");
  }
}

int ceil_tolerant(double x) {
  return static_cast<int>(std::ceil(x - slack(x)));
}

int floor_tolerant(double x) {
  return static_cast<int>(std::floor(x + slack(x)));
}

int compute_delta(double alpha_sec, double tau_sec) {
  if (!(tau_sec > 0.0)) {
    throw Error(ErrorKind::kInvalidInput, "epoch duration must be positive");
  }
  if (alpha_sec <= 0.0) return 0;
  return ceil_tolerant(alpha_sec / tau_sec);
}

int compute_delta(const Edge& e, double tau_sec) {
  return compute_delta(e.alpha_sec, tau_sec);
}

double epoch_duration(const Topology& t, double chunk_size_bytes,
                      DurationMode mode, int em) {
  if (t.num_edges() == 0) {
    throw Error(ErrorKind::kInvalidInput, "topology has no edges");
  }
  if (em < 1) {
    throw Error(ErrorKind::kInvalidInput, "epoch multiplier must be >= 1");
  }
  const double cap = mode == DurationMode::kSlowestLink ? t.min_capacity()
                                                         : t.max_capacity();
  return em * chunk_size_bytes / cap;
}

double chunks_per_epoch(const Topology& t, int e, int epoch, double tau_sec,
                        double chunk_size_bytes) {
  return t.capacity(e, epoch) * tau_sec / chunk_size_bytes;
}

int transmission_epochs(const Topology& t, int e, double tau_sec,
                        double chunk_size_bytes) {
  const double per_epoch =
      t.edge(e).capacity_bytes_per_sec * tau_sec / chunk_size_bytes;
  return std::max(1, ceil_tolerant(1.0 / per_epoch));
}

int window_capacity(const Topology& t, int e, int k, int kappa,
                    double tau_sec, double chunk_size_bytes) {
  double total = 0.0;
  for (int j = k - kappa + 1; j <= k; ++j) {
    total += chunks_per_epoch(t, e, j, tau_sec, chunk_size_bytes);
  }
  return floor_tolerant(total);
}

}  // namespace collsched
