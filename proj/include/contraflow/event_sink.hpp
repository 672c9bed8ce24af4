// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Violation records: `events.ndjson` plus optional PNG snapshots.
 *
 *  One line per flagged track:
 *
 *      {"track_id":3,"frame_index":120,"class":"car","h1":412.0,"h2":371.5,
 *       "box":[...],"trajectory":[[100,640.0,412.0],...],"snapshot":"violation_3_120.png"}
 *
 *  `snapshot` is only present when an image was captured. It is a file name
 *  relative to the directory that holds `events.ndjson`.
 */

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "contraflow/detection.hpp"
#include "contraflow/errors.hpp"
#include "contraflow/image.hpp"
#include "contraflow/tracker.hpp"

namespace contraflow {

struct ViolationEvent {
  TrackId track_id = 0;
  FrameIndex frame_index = 0;
  std::string class_label;
  double h1 = 0.0;
  double h2_at_flag = 0.0;
  BoundingBox last_box;
  std::vector<TrajectoryPoint> trajectory;
  std::optional<std::string> snapshot_path;

  friend bool operator==(const ViolationEvent&, const ViolationEvent&) = default;
};

inline ViolationEvent make_violation(const Track& t, FrameIndex frame) {
  return {t.id, frame, t.class_label, t.h1, t.h2, t.last_box, t.trajectory, std::nullopt};
}

inline std::string serialize(const ViolationEvent& e) {
  nlohmann::ordered_json j;
  j["track_id"] = e.track_id;
  j["frame_index"] = e.frame_index;
  j["class"] = e.class_label;
  j["h1"] = e.h1;
  j["h2"] = e.h2_at_flag;
  j["box"] = wire::box_to_json(e.last_box);
  auto traj = nlohmann::ordered_json::array();
  for (const auto& p : e.trajectory) traj.push_back({p.frame_index, p.centroid.x, p.centroid.y});
  j["trajectory"] = std::move(traj);
  if (e.snapshot_path) j["snapshot"] = *e.snapshot_path;
  return j.dump();
}

/// Inverse of serialize(). Throws std::invalid_argument on schema violations.
inline ViolationEvent parse_event(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(e.what());
  }
  try {
    ViolationEvent e;
    e.track_id = j.at("track_id").get<TrackId>();
    e.frame_index = wire::frame_from_json(j.at("frame_index"));
    e.class_label = j.at("class").get<std::string>();
    e.h1 = j.at("h1").get<double>();
    e.h2_at_flag = j.at("h2").get<double>();
    e.last_box = wire::box_from_json(j.at("box"));
    for (const auto& p : j.at("trajectory")) {
      if (!p.is_array() || p.size() != 3) throw std::invalid_argument("trajectory entries are [frame, x, y]");
      e.trajectory.push_back({wire::frame_from_json(p[0]), {p[1].get<double>(), p[2].get<double>()}});
    }
    if (j.contains("snapshot")) e.snapshot_path = j.at("snapshot").get<std::string>();
    for (const auto& [key, _] : j.items()) {
      static const std::set<std::string> known{"track_id", "frame_index", "class", "h1",
                                               "h2", "box", "trajectory", "snapshot"};
      if (!known.contains(key)) throw std::invalid_argument("unknown field '" + key + "'");
    }
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(ex.what());
  }
}

inline std::vector<ViolationEvent> read_events(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SinkIoError("cannot open " + path.string());
  std::vector<ViolationEvent> out;
  for (std::string line; std::getline(in, line);) out.push_back(parse_event(line));
  return out;
}

struct SinkConfig {
  std::filesystem::path output_directory = "contraflow-out";
  bool write_snapshots = true;
  bool annotate = true;
};

struct StoredRecord {
  std::size_t line = 0;  // 1-based line in events.ndjson
  std::optional<std::string> snapshot_path;
};

inline constexpr std::string_view kEventsFileName = "events.ndjson";

inline std::string snapshot_name(TrackId id, FrameIndex frame) {
  return "violation_" + std::to_string(id) + "_" + std::to_string(frame) + ".png";
}

/// Single-writer sink. Opening truncates any events log left by an earlier run.
class EventSink {
 public:
  explicit EventSink(SinkConfig cfg) : cfg_(std::move(cfg)) {
    std::error_code ec;
    std::filesystem::create_directories(cfg_.output_directory, ec);
    if (ec) throw SinkIoError("cannot create " + cfg_.output_directory.string() + ": " + ec.message());
    log_.open(log_path(), std::ios::out | std::ios::trunc);
    if (!log_) throw SinkIoError("cannot open " + log_path().string() + " for writing");
  }

  StoredRecord emit(ViolationEvent event, const Image* frame_image = nullptr) {
    if (event.trajectory.empty()) throw std::invalid_argument("violation event needs a trajectory");
    for (std::size_t i = 1; i < event.trajectory.size(); ++i) {
      if (event.trajectory[i].frame_index <= event.trajectory[i - 1].frame_index)
        throw std::invalid_argument("trajectory frames must strictly increase");
    }
    if (emitted_.contains(event.track_id)) throw DuplicateViolation(event.track_id);

    event.snapshot_path.reset();
    if (frame_image && cfg_.write_snapshots) {
      const auto name = snapshot_name(event.track_id, event.frame_index);
      try {
        if (cfg_.annotate) {
          Image annotated = *frame_image;
          draw_box(annotated, event.last_box, {255, 0, 0});
          write_png(cfg_.output_directory / name, annotated);
        } else {
          write_png(cfg_.output_directory / name, *frame_image);
        }
      } catch (const std::runtime_error& e) {
        throw SinkIoError(e.what());
      }
      event.snapshot_path = name;
    }

    log_ << serialize(event) << '\n';
    log_.flush();
    if (!log_) throw SinkIoError("write to " + log_path().string() + " failed");
    emitted_.insert(event.track_id);
    return {emitted_.size(), event.snapshot_path};
  }

  std::size_t count() const { return emitted_.size(); }
  std::filesystem::path log_path() const { return cfg_.output_directory / kEventsFileName; }
  const SinkConfig& config() const { return cfg_; }

 private:
  SinkConfig cfg_;
  std::ofstream log_;
  std::set<TrackId> emitted_;
};

}  // namespace contraflow
