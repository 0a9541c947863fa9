#include <cstdio>
#include <filesystem>

#include <gtest/gtest.h>

#include "collsched/error.hpp"
#include "collsched/generators.hpp"
#include "collsched/io.hpp"
#include "fixtures.hpp"

namespace collsched {
namespace {

TEST(Io, TopologyRoundTrip) {
  const Topology t({false, true, false}, {{0, 1, 2.0, 0.5}, {1, 2, 3.0, 0.0}}, {{1, 4, 1.0}});
  const Topology back = topology_from_json(topology_to_json(t));
  EXPECT_EQ(back.switch_flags(), t.switch_flags());
  ASSERT_EQ(back.num_edges(), 2);
  EXPECT_DOUBLE_EQ(back.edge(0).alpha_sec, 0.5);
  EXPECT_DOUBLE_EQ(back.capacity(1, 4), 1.0);
  EXPECT_EQ(topology_to_json(back).dump(), topology_to_json(t).dump());
}

TEST(Io, DemandRoundTrip) {
  const Demand d = generate_demand(CollectiveKind::kAllToAll, make_ring(4, 1.0, 0.0), 2, 7.0);
  const Demand back = demand_from_json(demand_to_json(d));
  EXPECT_EQ(back.entries(), d.entries());
  EXPECT_EQ(back.chunk_count(), d.chunk_count());
  EXPECT_DOUBLE_EQ(back.chunk_size_bytes(), 7.0);
}

TEST(Io, ScheduleRoundTripSortsEvents) {
  Schedule s;
  s.tau_sec = 0.5;
  s.num_epochs = 3;
  s.transmission = Transmission::kFluid;
  s.switch_mode = SwitchMode::kNoCopy;
  s.capacity_mode = CapacityMode::kWindowed;
  s.completion_epoch = 2;
  s.events = {{2, 0, 1, 2, 0, 0.5}, {0, 0, 0, 1, 0, 1.0}};
  const Schedule back = schedule_from_json(schedule_to_json(s));
  EXPECT_EQ(back.transmission, Transmission::kFluid);
  EXPECT_EQ(back.switch_mode, SwitchMode::kNoCopy);
  EXPECT_EQ(back.capacity_mode, CapacityMode::kWindowed);
  EXPECT_EQ(back.completion_epoch, 2);
  ASSERT_EQ(back.events.size(), 2u);
  EXPECT_EQ(back.events[0].epoch, 0);
  EXPECT_DOUBLE_EQ(back.events[1].fraction, 0.5);
}

TEST(Io, MissingFieldIsInvalidInput) {
  try {
    topology_from_json(Json::parse(R"({"edges": []})"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    EXPECT_NE(std::string(e.what()).find("nodes"), std::string::npos);
  }
}

TEST(Io, UnknownSwitchModeRejected) {
  EXPECT_THROW(schedule_from_json(Json::parse(
                   R"({"tau_sec": 1, "chunk_size_bytes": 1, "switch_mode": "x", "events": []})")),
               Error);
}

TEST(Io, FileRoundTripAndCsv) {
  const auto path = std::filesystem::temp_directory_path() / "collsched_io_test.json";
  write_json_file(path.string(), demand_to_json(testing::star3_demand()));
  const Demand back = demand_from_json(read_json_file(path.string()));
  EXPECT_EQ(back.entries(), testing::star3_demand().entries());
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file("/nonexistent/collsched.json"), Error);

  SimReport r;
  r.completion_epoch = 1;
  r.transfer_time_sec = 2.0;
  r.output_buffer_bytes = {0.0, 4.0};
  r.total_output_bytes = 4.0;
  EXPECT_EQ(report_csv_row("x", r), "x,1,2,2,2,0");
  EXPECT_EQ(report_to_json(r)["algbw_bytes_per_sec"].get<double>(), 2.0);
}

TEST(Io, TopologyListsNodesWithSwitchFlag) {
  const Json j = topology_to_json(make_broadcast_star());
  ASSERT_EQ(j["nodes"].size(), 5u);
  EXPECT_EQ(j["nodes"][1]["id"], 1);
  EXPECT_EQ(j["nodes"][1]["is_switch"], true);
  EXPECT_EQ(j["nodes"][2]["is_switch"], false);
}

TEST(Io, RepeatedNodeIdRejected) {
  EXPECT_THROW(topology_from_json(Json::parse(
                   R"({"nodes": [{"id": 0}, {"id": 0}], "edges": []})")),
               Error);
}

TEST(Io, ChunkCountDefaultsToLargestId) {
  const Demand d = demand_from_json(Json::parse(
      R"({"chunk_size_bytes": 2, "entries": [{"src": 0, "chunk": 3, "dst": 1}]})"));
  EXPECT_EQ(d.chunk_count(), 4);
}

}  // namespace
}  // namespace collsched
