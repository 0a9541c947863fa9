#include <gtest/gtest.h>

#include "collsched/epoch.hpp"
#include "collsched/error.hpp"
#include "collsched/formulation.hpp"
#include "collsched/generators.hpp"

namespace collsched {
namespace {

TEST(CeilTolerant, IgnoresFloatingNoise) {
  EXPECT_EQ(ceil_tolerant(1.4), 2);
  EXPECT_EQ(ceil_tolerant(2.0000000000001), 2);
  EXPECT_EQ(floor_tolerant(0.99999999999), 1);
  EXPECT_EQ(floor_tolerant(1.5), 1);
}

TEST(ComputeDelta, Examples) {
  EXPECT_EQ(compute_delta(0.0, 0.5e-6), 0);
  EXPECT_EQ(compute_delta(0.7e-6, 0.5e-6), 2);
  EXPECT_EQ(compute_delta(1.3e-6, 1.3e-6), 1);
}

TEST(EpochDuration, Dgx1Modes) {
  const Topology t = make_dgx1();
  EXPECT_NEAR(epoch_duration(t, 25e3, DurationMode::kFastestLink, 1), 0.5e-6, 1e-15);
  EXPECT_NEAR(epoch_duration(t, 25e3, DurationMode::kSlowestLink, 1), 1.0e-6, 1e-15);
  EXPECT_NEAR(epoch_duration(t, 25e3, DurationMode::kFastestLink, 3), 1.5e-6, 1e-15);
}

TEST(EpochDuration, UniformLinks) {
  const Topology t = make_ring(4, 1.0, 0.0);
  EXPECT_DOUBLE_EQ(epoch_duration(t, 1.0, DurationMode::kFastestLink, 1), 1.0);
  EXPECT_DOUBLE_EQ(epoch_duration(t, 1.0, DurationMode::kSlowestLink, 1), 1.0);
}

TEST(EpochConfig, ValidateRejectsBadFields) {
  EpochConfig cfg;
  cfg.num_epochs = 0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg.num_epochs = 1;
  cfg.tau_sec = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
}

// Half-speed and quarter-speed links next to a full-speed one.
Topology mixed_speed() {
  return Topology({false, false, false, false},
                  {{0, 1, 4.0, 0.0}, {0, 2, 2.0, 0.0}, {0, 3, 1.0, 0.0}});
}

TEST(Window, KappaPerLink) {
  const Topology t = mixed_speed();
  const double tau = epoch_duration(t, 4.0, DurationMode::kFastestLink, 1);
  EXPECT_DOUBLE_EQ(tau, 1.0);
  EXPECT_EQ(transmission_epochs(t, 0, tau, 4.0), 1);
  EXPECT_EQ(transmission_epochs(t, 1, tau, 4.0), 2);
  EXPECT_EQ(transmission_epochs(t, 2, tau, 4.0), 4);
  const auto timing = link_timings(t, tau, 4.0, CapacityMode::kWindowed);
  EXPECT_EQ(timing[0].kappa, 1);
  EXPECT_EQ(timing[1].kappa, 2);
  EXPECT_EQ(timing[2].kappa, 4);
  EXPECT_EQ(timing[2].lag, 3);
  const auto plain = link_timings(t, tau, 4.0, CapacityMode::kPlain);
  for (const LinkTiming& lt : plain) EXPECT_EQ(lt.kappa, 1);
}

TEST(Window, HalfSpeedWindowAdmitsOneChunk) {
  const Topology t = mixed_speed();
  EXPECT_EQ(window_capacity(t, 1, 5, 2, 1.0, 4.0), 1);
  EXPECT_EQ(window_capacity(t, 0, 5, 1, 1.0, 4.0), 1);
  EXPECT_DOUBLE_EQ(chunks_per_epoch(t, 1, 0, 1.0, 4.0), 0.5);
}

TEST(Window, LagAddsLatencyAndTransmission) {
  const Topology t({false, false}, {{0, 1, 1.0, 1.5}});
  const auto timing = link_timings(t, 0.5, 1.0, CapacityMode::kWindowed);
  EXPECT_EQ(timing[0].delta, 3);
  EXPECT_EQ(timing[0].kappa, 2);
  EXPECT_EQ(timing[0].lag, 4);
}

TEST(DefaultCapacityMode, FollowsDurationMode) {
  EXPECT_EQ(default_capacity_mode(DurationMode::kFastestLink), CapacityMode::kWindowed);
  EXPECT_EQ(default_capacity_mode(DurationMode::kSlowestLink), CapacityMode::kPlain);
}

TEST(ParseModes, RoundTrip) {
  for (SwitchMode m : {SwitchMode::kCopy, SwitchMode::kNoCopy, SwitchMode::kHyperEdge}) {
    EXPECT_EQ(parse_switch_mode(to_string(m)), m);
  }
  EXPECT_EQ(parse_duration_mode("slowest"), DurationMode::kSlowestLink);
  EXPECT_THROW(parse_capacity_mode("tiled"), Error);
}

}  // namespace
}  // namespace collsched
