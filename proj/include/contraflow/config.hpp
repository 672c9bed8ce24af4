// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Pipeline configuration and its strict JSON loader.
 *
 *  Only `tracker.roi` is required. Unknown keys are rejected so that a
 *  misspelled threshold cannot silently fall back to its default.
 *
 *      {
 *        "ingest":    {"confidence_threshold": 0.5, "nms_iou_threshold": 0.4,
 *                      "class_whitelist": ["motorbike", "bus", "truck", "car"]},
 *        "tracker":   {"roi": [x_min, y_min, x_max, y_max],
 *                      "max_match_distance": <0.25 * roi diagonal>, "max_frames_missing": 2},
 *        "direction": {"wrong_way_is_upward": true, "min_displacement": 5.0},
 *        "sink":      {"output_directory": "contraflow-out", "write_snapshots": true, "annotate": true},
 *        "frame_stride": 5
 *      }
 */

#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "contraflow/direction.hpp"
#include "contraflow/errors.hpp"
#include "contraflow/event_sink.hpp"
#include "contraflow/ingest.hpp"
#include "contraflow/tracker.hpp"

namespace contraflow {

struct PipelineConfig {
  IngestConfig ingest;
  TrackerConfig tracker;
  DirectionConfig direction;
  SinkConfig sink;
  std::uint64_t frame_stride = 5;
};

inline PipelineConfig make_pipeline_config(const Rect& roi) {
  PipelineConfig cfg;
  cfg.tracker = make_tracker_config(roi);
  return cfg;
}

namespace config_detail {

inline std::string join(std::string_view parent, std::string_view key) {
  return parent.empty() ? std::string(key) : std::string(parent) + "." + std::string(key);
}

inline void require_object(const nlohmann::json& j, std::string_view path,
                           std::initializer_list<std::string_view> known) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : std::string(path), "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw ConfigError(join(path, key), "unknown key");
  }
}

inline double number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
  return v;
}

inline std::int64_t integer(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline bool boolean(const nlohmann::json& j, const std::string& path) {
  if (!j.is_boolean()) throw ConfigError(path, "expected true or false");
  return j.get<bool>();
}

}  // namespace config_detail

inline PipelineConfig config_from_json(const nlohmann::json& root) {
  using namespace config_detail;
  require_object(root, "", {"ingest", "tracker", "direction", "sink", "frame_stride"});
  PipelineConfig cfg;

  if (root.contains("ingest")) {
    const auto& j = root.at("ingest");
    require_object(j, "ingest", {"confidence_threshold", "nms_iou_threshold", "class_whitelist"});
    if (j.contains("confidence_threshold")) {
      const double v = number(j.at("confidence_threshold"), "ingest.confidence_threshold");
      if (v < 0.0 || v > 1.0) throw ConfigError("ingest.confidence_threshold", "must be in [0, 1]");
      cfg.ingest.confidence_threshold = v;
    }
    if (j.contains("nms_iou_threshold")) {
      const double v = number(j.at("nms_iou_threshold"), "ingest.nms_iou_threshold");
      if (v <= 0.0 || v >= 1.0) throw ConfigError("ingest.nms_iou_threshold", "must be in (0, 1)");
      cfg.ingest.nms_iou_threshold = v;
    }
    if (j.contains("class_whitelist")) {
      const auto& w = j.at("class_whitelist");
      if (!w.is_array() || w.empty()) throw ConfigError("ingest.class_whitelist", "must be a non-empty array");
      cfg.ingest.class_whitelist.clear();
      for (const auto& c : w) {
        if (!c.is_string() || c.get_ref<const std::string&>().empty())
          throw ConfigError("ingest.class_whitelist", "entries must be non-empty strings");
        cfg.ingest.class_whitelist.insert(c.get<std::string>());
      }
    }
  }

  if (!root.contains("tracker")) throw ConfigError("tracker.roi", "required");
  {
    const auto& j = root.at("tracker");
    require_object(j, "tracker", {"roi", "max_match_distance", "max_frames_missing"});
    if (!j.contains("roi")) throw ConfigError("tracker.roi", "required");
    const auto& r = j.at("roi");
    if (!r.is_array() || r.size() != 4) throw ConfigError("tracker.roi", "expected [x_min, y_min, x_max, y_max]");
    Rect roi;
    roi.x_min = number(r[0], "tracker.roi");
    roi.y_min = number(r[1], "tracker.roi");
    roi.x_max = number(r[2], "tracker.roi");
    roi.y_max = number(r[3], "tracker.roi");
    if (!is_valid(roi)) throw ConfigError("tracker.roi", "need 0 <= x_min < x_max and 0 <= y_min < y_max");
    cfg.tracker = make_tracker_config(roi);
    if (j.contains("max_match_distance")) {
      const double v = number(j.at("max_match_distance"), "tracker.max_match_distance");
      if (v <= 0.0) throw ConfigError("tracker.max_match_distance", "must be > 0");
      cfg.tracker.max_match_distance = v;
    }
    if (j.contains("max_frames_missing")) {
      const auto v = integer(j.at("max_frames_missing"), "tracker.max_frames_missing");
      if (v < 0) throw ConfigError("tracker.max_frames_missing", "must be >= 0");
      cfg.tracker.max_frames_missing = static_cast<int>(v);
    }
  }

  if (root.contains("direction")) {
    const auto& j = root.at("direction");
    require_object(j, "direction", {"wrong_way_is_upward", "min_displacement"});
    if (j.contains("wrong_way_is_upward"))
      cfg.direction.wrong_way_is_upward = boolean(j.at("wrong_way_is_upward"), "direction.wrong_way_is_upward");
    if (j.contains("min_displacement")) {
      const double v = number(j.at("min_displacement"), "direction.min_displacement");
      if (v < 0.0) throw ConfigError("direction.min_displacement", "must be >= 0");
      cfg.direction.min_displacement = v;
    }
  }

  if (root.contains("sink")) {
    const auto& j = root.at("sink");
    require_object(j, "sink", {"output_directory", "write_snapshots", "annotate"});
    if (j.contains("output_directory")) {
      const auto& d = j.at("output_directory");
      if (!d.is_string() || d.get_ref<const std::string&>().empty())
        throw ConfigError("sink.output_directory", "expected a non-empty path");
      cfg.sink.output_directory = d.get<std::string>();
    }
    if (j.contains("write_snapshots")) cfg.sink.write_snapshots = boolean(j.at("write_snapshots"), "sink.write_snapshots");
    if (j.contains("annotate")) cfg.sink.annotate = boolean(j.at("annotate"), "sink.annotate");
  }

  if (root.contains("frame_stride")) {
    const auto v = integer(root.at("frame_stride"), "frame_stride");
    if (v < 1) throw ConfigError("frame_stride", "must be >= 1");
    cfg.frame_stride = static_cast<std::uint64_t>(v);
  }
  return cfg;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<file>", e.what());
  }
  return config_from_json(root);
}

}  // namespace contraflow
