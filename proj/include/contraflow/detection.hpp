// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Detection records and the newline-delimited detection stream.
 *
 *  One JSON object per line:
 *
 *      {"frame": 12, "class": "car", "conf": 0.91, "box": [x_min, y_min, x_max, y_max]}
 *      {"frame": 13, "marker": true}
 *
 *  The marker form declares a frame that has no detections. Frame indices
 *  must be non-decreasing from line to line.
 */

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "contraflow/errors.hpp"
#include "contraflow/geometry.hpp"

namespace contraflow {

using FrameIndex = std::uint64_t;

struct Detection {
  FrameIndex frame_index = 0;
  std::string class_label;
  double confidence = 0.0;
  BoundingBox box;

  friend bool operator==(const Detection&, const Detection&) = default;
};

struct FrameDetections {
  FrameIndex frame_index = 0;
  std::vector<Detection> detections;

  friend bool operator==(const FrameDetections&, const FrameDetections&) = default;
};

namespace wire {

/// A parsed line: either a detection or a bare frame marker.
struct Record {
  FrameIndex frame_index = 0;
  std::optional<Detection> detection;
};

inline BoundingBox box_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw std::invalid_argument("box must be an array of 4 numbers");
  double v[4];
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw std::invalid_argument("box must be an array of 4 numbers");
    v[i] = j[i].get<double>();
  }
  BoundingBox b{v[0], v[1], v[2], v[3]};
  if (!is_valid(b)) throw std::invalid_argument("box must satisfy 0 <= x_min < x_max and 0 <= y_min < y_max");
  return b;
}

inline nlohmann::ordered_json box_to_json(const BoundingBox& b) {
  return nlohmann::ordered_json::array({b.x_min, b.y_min, b.x_max, b.y_max});
}

inline FrameIndex frame_from_json(const nlohmann::json& j) {
  if (j.is_number_unsigned()) return j.get<FrameIndex>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<FrameIndex>(j.get<std::int64_t>());
  throw std::invalid_argument("frame must be a non-negative integer");
}

/// Parses one line. `line_number` is 1-based and only used for error reporting.
inline Record parse_record(std::string_view line, std::size_t line_number) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedRecord(line_number, e.what());
  }
  if (!j.is_object()) throw MalformedRecord(line_number, "record must be an object");
  if (!j.contains("frame")) throw MalformedRecord(line_number, "missing 'frame'");

  try {
    Record rec;
    rec.frame_index = frame_from_json(j.at("frame"));

    if (j.contains("marker")) {
      if (j.size() != 2) throw std::invalid_argument("marker record takes only 'frame' and 'marker'");
      if (!j.at("marker").is_boolean() || !j.at("marker").get<bool>())
        throw std::invalid_argument("'marker' must be true");
      return rec;
    }

    for (const auto& [key, _] : j.items()) {
      if (key != "frame" && key != "class" && key != "conf" && key != "box")
        throw std::invalid_argument("unknown field '" + key + "'");
    }
    if (!j.contains("class") || !j.contains("conf") || !j.contains("box"))
      throw std::invalid_argument("detection record needs 'class', 'conf' and 'box'");

    Detection det;
    det.frame_index = rec.frame_index;
    const auto& cls = j.at("class");
    if (!cls.is_string() || cls.get_ref<const std::string&>().empty())
      throw std::invalid_argument("'class' must be a non-empty string");
    det.class_label = cls.get<std::string>();
    const auto& conf = j.at("conf");
    if (!conf.is_number()) throw std::invalid_argument("'conf' must be a number");
    det.confidence = conf.get<double>();
    if (!(det.confidence >= 0.0 && det.confidence <= 1.0)) throw std::invalid_argument("'conf' outside [0, 1]");
    det.box = box_from_json(j.at("box"));
    rec.detection = std::move(det);
    return rec;
  } catch (const std::invalid_argument& e) {
    throw MalformedRecord(line_number, e.what());
  } catch (const nlohmann::json::exception& e) {
    throw MalformedRecord(line_number, e.what());
  }
}

inline std::string serialize(const Detection& d) {
  nlohmann::ordered_json j;
  j["frame"] = d.frame_index;
  j["class"] = d.class_label;
  j["conf"] = d.confidence;
  j["box"] = box_to_json(d.box);
  return j.dump();
}

inline std::string serialize_marker(FrameIndex frame) {
  nlohmann::ordered_json j;
  j["frame"] = frame;
  j["marker"] = true;
  return j.dump();
}

/// Writes a frame as one line per detection, or a single marker line when empty.
inline void write_frame(std::ostream& os, const FrameDetections& f) {
  if (f.detections.empty()) {
    os << serialize_marker(f.frame_index) << '\n';
    return;
  }
  for (const auto& d : f.detections) os << serialize(d) << '\n';
}

}  // namespace wire

/// Incremental reader that groups consecutive records into frames.
class StreamReader {
 public:
  explicit StreamReader(std::istream& in) : in_(in) {}

  /// Next frame in ascending order, or nullopt at end of input.
  std::optional<FrameDetections> next() {
    if (!pending_ && !read_record()) return std::nullopt;

    FrameDetections frame;
    frame.frame_index = pending_->frame_index;
    do {
      if (pending_->detection) frame.detections.push_back(std::move(*pending_->detection));
      pending_.reset();
    } while (read_record() && pending_->frame_index == frame.frame_index);
    return frame;
  }

  std::size_t lines_read() const { return line_; }
  std::size_t detections_read() const { return detections_; }

 private:
  bool read_record() {
    std::string line;
    if (!std::getline(in_, line)) return false;
    ++line_;
    auto rec = wire::parse_record(line, line_);
    if (last_frame_ && rec.frame_index < *last_frame_) throw NonMonotonicFrame(rec.frame_index, line_);
    last_frame_ = rec.frame_index;
    if (rec.detection) ++detections_;
    pending_ = std::move(rec);
    return true;
  }

  std::istream& in_;
  std::optional<wire::Record> pending_;
  std::optional<FrameIndex> last_frame_;
  std::size_t line_ = 0;
  std::size_t detections_ = 0;
};

inline std::vector<FrameDetections> parse_stream(std::istream& in) {
  StreamReader reader(in);
  std::vector<FrameDetections> frames;
  while (auto f = reader.next()) frames.push_back(std::move(*f));
  return frames;
}

inline std::vector<FrameDetections> parse_stream(const std::vector<std::string>& lines) {
  std::vector<FrameDetections> frames;
  std::optional<FrameIndex> last;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto rec = wire::parse_record(lines[i], i + 1);
    if (last && rec.frame_index < *last) throw NonMonotonicFrame(rec.frame_index, i + 1);
    if (!last || rec.frame_index != *last) frames.push_back({rec.frame_index, {}});
    last = rec.frame_index;
    if (rec.detection) frames.back().detections.push_back(std::move(*rec.detection));
  }
  return frames;
}

}  // namespace contraflow
