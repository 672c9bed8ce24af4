// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "contraflow/detection.hpp"

using namespace contraflow;

TEST(WireFormat, GroupsRecordsByFrame) {
  const std::vector<std::string> lines{
      R"({"frame": 0, "class": "car", "conf": 0.9, "box": [0, 0, 10, 10]})",
      R"({"frame": 0, "class": "bus", "conf": 0.8, "box": [20, 20, 40, 40]})",
      R"({"frame": 1, "class": "car", "conf": 0.7, "box": [1, 1, 11, 11]})",
  };
  const auto frames = parse_stream(lines);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].frame_index, 0u);
  EXPECT_EQ(frames[0].detections.size(), 2u);
  EXPECT_EQ(frames[1].frame_index, 1u);
  ASSERT_EQ(frames[1].detections.size(), 1u);
  EXPECT_EQ(frames[1].detections[0].box, (BoundingBox{1, 1, 11, 11}));
  EXPECT_EQ(frames[0].detections[1].class_label, "bus");
}

TEST(WireFormat, EmptyInput) {
  EXPECT_TRUE(parse_stream(std::vector<std::string>{}).empty());
  std::istringstream in("");
  EXPECT_TRUE(parse_stream(in).empty());
}

TEST(WireFormat, MarkersDeclareEmptyFrames) {
  std::istringstream in("{\"frame\":0,\"marker\":true}\n"
                        "{\"frame\":3,\"marker\":true}\n"
                        "{\"frame\":3,\"class\":\"car\",\"conf\":0.6,\"box\":[1,2,3,4]}\n");
  const auto frames = parse_stream(in);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_TRUE(frames[0].detections.empty());
  EXPECT_EQ(frames[1].frame_index, 3u);
  EXPECT_EQ(frames[1].detections.size(), 1u);
}

TEST(WireFormat, RejectsBadRecords) {
  const std::vector<std::string> bad{
      R"({"frame": 0, "class": "car", "conf": 1.3, "box": [0, 0, 10, 10]})",
      R"({"frame": 0, "class": "car", "conf": -0.1, "box": [0, 0, 10, 10]})",
      R"({"frame": -1, "class": "car", "conf": 0.9, "box": [0, 0, 10, 10]})",
      R"({"frame": 1.5, "class": "car", "conf": 0.9, "box": [0, 0, 10, 10]})",
      R"({"frame": 0, "class": "", "conf": 0.9, "box": [0, 0, 10, 10]})",
      R"({"frame": 0, "class": "car", "conf": 0.9, "box": [10, 0, 10, 10]})",
      R"({"frame": 0, "class": "car", "conf": 0.9, "box": [0, 0, 10]})",
      R"({"frame": 0, "class": "car", "conf": 0.9, "box": [-1, 0, 10, 10]})",
      R"({"frame": 0, "class": "car", "conf": 0.9, "box": [0, 0, 10, 10], "extra": 1})",
      R"({"frame": 0, "class": "car", "box": [0, 0, 10, 10]})",
      R"({"frame": 0, "marker": false})",
      R"({"frame": 0, "marker": true, "class": "car"})",
      R"({"class": "car", "conf": 0.9, "box": [0, 0, 10, 10]})",
      R"([0, "car"])",
      R"(not json)",
      "",
  };
  for (const auto& line : bad) {
    EXPECT_THROW(parse_stream(std::vector<std::string>{line}), MalformedRecord) << line;
  }
}

TEST(WireFormat, MalformedRecordCarriesLineNumber) {
  std::istringstream in("{\"frame\":0,\"marker\":true}\n{\"frame\":1,\"conf\":2}\n");
  try {
    parse_stream(in);
    FAIL() << "expected MalformedRecord";
  } catch (const MalformedRecord& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(WireFormat, RejectsDecreasingFrames) {
  std::istringstream in("{\"frame\":4,\"marker\":true}\n{\"frame\":2,\"marker\":true}\n");
  try {
    parse_stream(in);
    FAIL() << "expected NonMonotonicFrame";
  } catch (const NonMonotonicFrame& e) {
    EXPECT_EQ(e.frame(), 2u);
  }
}

TEST(WireFormatProperties, SerializeParseRoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(0.0, 1200.0), size(0.5, 300.0), conf(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 6), gap(0, 3);
  const char* classes[] = {"car", "bus", "truck", "motorbike", "person"};

  for (int trial = 0; trial < 50; ++trial) {
    std::vector<FrameDetections> frames;
    FrameIndex f = 0;
    for (int i = 0; i < 20; ++i) {
      f += static_cast<FrameIndex>(gap(rng));
      if (!frames.empty() && frames.back().frame_index == f) ++f;
      FrameDetections fd{f, {}};
      for (int k = count(rng); k > 0; --k) {
        const double x = pos(rng), y = pos(rng);
        fd.detections.push_back({f, classes[k % 5], conf(rng), {x, y, x + size(rng), y + size(rng)}});
      }
      frames.push_back(fd);
    }
    std::ostringstream os;
    for (const auto& fd : frames) wire::write_frame(os, fd);
    std::istringstream in(os.str());
    const auto parsed = parse_stream(in);
    ASSERT_EQ(parsed, frames);

    std::ostringstream again;
    for (const auto& fd : parsed) wire::write_frame(again, fd);
    EXPECT_EQ(again.str(), os.str());
  }
}
