// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <fstream>

#include "contraflow/config.hpp"
#include "support/temp_dir.hpp"

using namespace contraflow;

namespace {

std::string error_field(const std::string& text) {
  try {
    config_from_json(nlohmann::json::parse(text));
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

}  // namespace

TEST(Config, MinimalFileGetsDefaults) {
  testkit::TempDir dir("cfg");
  const auto path = dir / "config.json";
  std::ofstream(path) << R"({"tracker": {"roi": [100, 100, 1100, 600]}})";
  const auto cfg = load_config(path);
  EXPECT_DOUBLE_EQ(cfg.ingest.confidence_threshold, 0.5);
  EXPECT_DOUBLE_EQ(cfg.ingest.nms_iou_threshold, 0.4);
  EXPECT_EQ(cfg.ingest.class_whitelist, (std::set<std::string>{"motorbike", "bus", "truck", "car"}));
  EXPECT_EQ(cfg.frame_stride, 5u);
  EXPECT_EQ(cfg.tracker.roi, (Rect{100, 100, 1100, 600}));
  EXPECT_DOUBLE_EQ(cfg.tracker.max_match_distance, 0.25 * std::hypot(1000.0, 500.0));
  EXPECT_EQ(cfg.tracker.max_frames_missing, 2);
  EXPECT_TRUE(cfg.direction.wrong_way_is_upward);
  EXPECT_DOUBLE_EQ(cfg.direction.min_displacement, 5.0);
  EXPECT_TRUE(cfg.sink.write_snapshots);
}

TEST(Config, FullFile) {
  const auto cfg = config_from_json(nlohmann::json::parse(R"({
    "ingest": {"confidence_threshold": 0.6, "nms_iou_threshold": 0.5, "class_whitelist": ["car"]},
    "tracker": {"roi": [0, 0, 640, 480], "max_match_distance": 80, "max_frames_missing": 0},
    "direction": {"wrong_way_is_upward": false, "min_displacement": 0},
    "sink": {"output_directory": "/tmp/x", "write_snapshots": false, "annotate": false},
    "frame_stride": 1
  })"));
  EXPECT_DOUBLE_EQ(cfg.ingest.confidence_threshold, 0.6);
  EXPECT_EQ(cfg.ingest.class_whitelist, (std::set<std::string>{"car"}));
  EXPECT_DOUBLE_EQ(cfg.tracker.max_match_distance, 80.0);
  EXPECT_EQ(cfg.tracker.max_frames_missing, 0);
  EXPECT_FALSE(cfg.direction.wrong_way_is_upward);
  EXPECT_EQ(cfg.sink.output_directory, "/tmp/x");
  EXPECT_FALSE(cfg.sink.annotate);
  EXPECT_EQ(cfg.frame_stride, 1u);
}

TEST(Config, InvalidRoi) {
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [500, 0, 100, 100]}})"), "tracker.roi");
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [0, 0, 100]}})"), "tracker.roi");
  EXPECT_EQ(error_field(R"({"tracker": {}})"), "tracker.roi");
  EXPECT_EQ(error_field(R"({})"), "tracker.roi");
}

TEST(Config, UnknownKeysAreErrors) {
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [0, 0, 10, 10]}, "stride": 5})"), "stride");
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [0, 0, 10, 10]}, "ingest": {"confidence": 0.6}})"),
            "ingest.confidence");
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [0, 0, 10, 10], "gate": 3}})"), "tracker.gate");
}

TEST(Config, RangeChecks) {
  const std::string roi = R"("tracker": {"roi": [0, 0, 10, 10]})";
  EXPECT_EQ(error_field("{" + roi + R"(, "frame_stride": 0})"), "frame_stride");
  EXPECT_EQ(error_field("{" + roi + R"(, "frame_stride": 2.5})"), "frame_stride");
  EXPECT_EQ(error_field("{" + roi + R"(, "ingest": {"confidence_threshold": 1.5}})"), "ingest.confidence_threshold");
  EXPECT_EQ(error_field("{" + roi + R"(, "ingest": {"nms_iou_threshold": 1.0}})"), "ingest.nms_iou_threshold");
  EXPECT_EQ(error_field("{" + roi + R"(, "ingest": {"class_whitelist": []}})"), "ingest.class_whitelist");
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [0, 0, 10, 10], "max_match_distance": 0}})"),
            "tracker.max_match_distance");
  EXPECT_EQ(error_field(R"({"tracker": {"roi": [0, 0, 10, 10], "max_frames_missing": -1}})"),
            "tracker.max_frames_missing");
  EXPECT_EQ(error_field("{" + roi + R"(, "direction": {"min_displacement": -2}})"), "direction.min_displacement");
  EXPECT_EQ(error_field("{" + roi + R"(, "direction": {"wrong_way_is_upward": 1}})"), "direction.wrong_way_is_upward");
}

TEST(Config, UnreadableOrUnparseableFile) {
  testkit::TempDir dir("cfg");
  EXPECT_THROW(load_config(dir / "missing.json"), ConfigError);
  std::ofstream(dir / "bad.json") << "{not json";
  EXPECT_THROW(load_config(dir / "bad.json"), ConfigError);
}
