// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Synthetic detection streams with ground truth.
 *
 *  Vehicles move in straight lines at constant velocity (pixels per frame).
 *  Randomness comes from std::mt19937_64 seeded with `ScenarioSpec::seed`.
 *  Distributions are derived by hand so that output is bit-identical across
 *  standard libraries:
 *    - uniform in [0, 1): (next() >> 11) * 2^-53
 *    - normal: Box-Muller, sqrt(-2 ln(1 - u1)) * cos(2 pi u2), no caching
 *  Per live vehicle and frame, draws happen in this order: dropout, x noise
 *  (two uniforms), y noise (two uniforms), confidence. All draws are taken
 *  even when the detection ends up dropped.
 */

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "contraflow/detection.hpp"
#include "contraflow/direction.hpp"
#include "contraflow/errors.hpp"
#include "contraflow/geometry.hpp"

namespace contraflow {

struct Velocity {
  double vx = 0.0;
  double vy = 0.0;
};

struct Size2 {
  double width = 0.0;
  double height = 0.0;
};

struct VehicleScript {
  std::string class_label = "car";
  Point start;  // box center at spawn_frame
  Velocity velocity;
  Size2 box_size{40.0, 40.0};
  FrameIndex spawn_frame = 0;
  FrameIndex despawn_frame = 1;  // exclusive
};

struct ScenarioSpec {
  Size2 frame_size{1280.0, 720.0};
  Rect roi{0.0, 0.0, 1280.0, 720.0};
  std::vector<VehicleScript> vehicles;
  std::optional<FrameIndex> num_frames;  // default: last despawn frame, at least 1
  double noise_sigma = 0.0;
  double dropout_prob = 0.0;
  double confidence_lo = 0.6;
  double confidence_hi = 1.0;
  std::uint64_t seed = 0;

  FrameIndex frame_count() const {
    if (num_frames) return *num_frames;
    FrameIndex n = 1;
    for (const auto& v : vehicles) n = std::max(n, v.despawn_frame);
    return n;
  }
};

enum class TrueDirection { Toward, Away, Stationary };

struct VehicleTruth {
  TrueDirection direction = TrueDirection::Stationary;
  bool wrong_way = false;  // under a default DirectionConfig, stride 1
};

struct TrueBox {
  std::size_t vehicle = 0;
  BoundingBox box;                     // noiseless, unclamped
  std::optional<BoundingBox> emitted;  // what went into the stream, if anything
};

struct GroundTruth {
  Rect roi;
  FrameIndex num_frames = 0;
  std::vector<VehicleScript> vehicles;
  std::vector<VehicleTruth> per_vehicle;
  std::vector<std::vector<TrueBox>> frames;  // indexed by frame
};

struct Scenario {
  std::string stream;  // detection wire format
  GroundTruth truth;
};

inline Point scripted_center(const VehicleScript& v, FrameIndex frame) {
  const double k = static_cast<double>(frame - v.spawn_frame);
  return {v.start.x + k * v.velocity.vx, v.start.y + k * v.velocity.vy};
}

inline void validate(const ScenarioSpec& spec) {
  const auto fail = [](const std::string& why) { throw InvalidSpec(why); };
  if (!(spec.frame_size.width > 0 && spec.frame_size.height > 0)) fail("frame_size must be positive");
  if (!is_valid(spec.roi)) fail("roi is not a valid rectangle");
  if (spec.roi.x_max > spec.frame_size.width || spec.roi.y_max > spec.frame_size.height)
    fail("roi must lie inside the frame");
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) fail("noise_sigma must be >= 0");
  if (!(spec.dropout_prob >= 0.0 && spec.dropout_prob < 1.0)) fail("dropout_prob must be in [0, 1)");
  if (!(spec.confidence_lo > 0.5 && spec.confidence_lo <= spec.confidence_hi && spec.confidence_hi <= 1.0))
    fail("confidence_range must satisfy 0.5 < lo <= hi <= 1");
  if (spec.num_frames && *spec.num_frames == 0) fail("num_frames must be >= 1");
  for (std::size_t i = 0; i < spec.vehicles.size(); ++i) {
    const auto& v = spec.vehicles[i];
    const auto where = "vehicles[" + std::to_string(i) + "]: ";
    if (v.class_label.empty()) fail(where + "class must be non-empty");
    if (!(v.box_size.width > 0 && v.box_size.height > 0)) fail(where + "box_size must be positive");
    if (v.despawn_frame <= v.spawn_frame) fail(where + "despawn_frame must exceed spawn_frame");
    if (!std::isfinite(v.start.x) || !std::isfinite(v.start.y) || !std::isfinite(v.velocity.vx) ||
        !std::isfinite(v.velocity.vy))
      fail(where + "start and velocity must be finite");
  }
}

/// Set of vehicle indices that should be flagged, worked out from the
/// scripts alone: registration at the first processed frame whose noiseless
/// center is inside the ROI, then the two-height rule on every following
/// processed frame until the center leaves the ROI.
inline std::set<std::size_t> expected_violations(const GroundTruth& gt, const DirectionConfig& dcfg,
                                                 FrameIndex frame_stride = 1) {
  std::set<std::size_t> out;
  for (std::size_t i = 0; i < gt.vehicles.size(); ++i) {
    const auto& v = gt.vehicles[i];
    std::optional<double> h1;
    const FrameIndex end = std::min(v.despawn_frame, gt.num_frames);
    for (FrameIndex f = v.spawn_frame; f < end; ++f) {
      if (f % frame_stride != 0) continue;
      const Point c = scripted_center(v, f);
      const bool inside = gt.roi.x_min <= c.x && c.x <= gt.roi.x_max && gt.roi.y_min <= c.y && c.y <= gt.roi.y_max;
      if (!inside) {
        if (h1) break;
        continue;
      }
      if (!h1) h1 = c.y;
      const double rise = c.y - *h1;  // > 0: moving down the frame
      if (std::abs(rise) < dcfg.min_displacement) continue;
      const bool upward = !(rise > 0.0);
      if (upward == dcfg.wrong_way_is_upward) {
        out.insert(i);
        break;
      }
    }
  }
  return out;
}

namespace detail {

class ScenarioRng {
 public:
  explicit ScenarioRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace detail

inline Scenario generate(const ScenarioSpec& spec) {
  validate(spec);
  detail::ScenarioRng rng(spec.seed);

  Scenario out;
  auto& gt = out.truth;
  gt.roi = spec.roi;
  gt.num_frames = spec.frame_count();
  gt.vehicles = spec.vehicles;
  gt.frames.resize(gt.num_frames);

  std::ostringstream stream;
  for (FrameIndex f = 0; f < gt.num_frames; ++f) {
    FrameDetections frame{f, {}};
    for (std::size_t i = 0; i < spec.vehicles.size(); ++i) {
      const auto& v = spec.vehicles[i];
      if (f < v.spawn_frame || f >= v.despawn_frame) continue;

      const Point c = scripted_center(v, f);
      const double hw = v.box_size.width / 2.0;
      const double hh = v.box_size.height / 2.0;
      TrueBox truth{i, {c.x - hw, c.y - hh, c.x + hw, c.y + hh}, std::nullopt};

      const bool dropped = rng.uniform() < spec.dropout_prob;
      const double nx = spec.noise_sigma * rng.normal();
      const double ny = spec.noise_sigma * rng.normal();
      const double conf = spec.confidence_lo + (spec.confidence_hi - spec.confidence_lo) * rng.uniform();

      const double cx = c.x + nx;
      const double cy = c.y + ny;
      BoundingBox box{std::clamp(cx - hw, 0.0, spec.frame_size.width), std::clamp(cy - hh, 0.0, spec.frame_size.height),
                      std::clamp(cx + hw, 0.0, spec.frame_size.width), std::clamp(cy + hh, 0.0, spec.frame_size.height)};
      if (!dropped && is_valid(box)) {
        truth.emitted = box;
        frame.detections.push_back({f, v.class_label, conf, box});
      }
      gt.frames[f].push_back(truth);
    }
    wire::write_frame(stream, frame);
  }
  out.stream = stream.str();

  const auto wrong = expected_violations(gt, DirectionConfig{});
  for (std::size_t i = 0; i < spec.vehicles.size(); ++i) {
    const double vy = spec.vehicles[i].velocity.vy;
    gt.per_vehicle.push_back({vy > 0 ? TrueDirection::Toward : vy < 0 ? TrueDirection::Away : TrueDirection::Stationary,
                              wrong.contains(i)});
  }
  return out;
}

// ---- structured config (JSON) ----

namespace detail {

inline void check_keys(const nlohmann::json& j, std::initializer_list<std::string_view> known, const std::string& where) {
  if (!j.is_object()) throw InvalidSpec(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) throw InvalidSpec("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
  }
}

inline std::pair<double, double> pair_of(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidSpec(where + " must be an array of 2 numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  detail::check_keys(j,
                     {"frame_size", "roi", "vehicles", "num_frames", "noise_sigma", "dropout_prob",
                      "confidence_range", "seed"},
                     "");
  ScenarioSpec spec;
  try {
    if (j.contains("frame_size")) {
      auto [w, h] = detail::pair_of(j.at("frame_size"), "frame_size");
      spec.frame_size = {w, h};
      spec.roi = {0.0, 0.0, w, h};
    }
    if (j.contains("roi")) {
      const auto& r = j.at("roi");
      if (!r.is_array() || r.size() != 4) throw InvalidSpec("roi must be [x_min, y_min, x_max, y_max]");
      spec.roi = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
    }
    if (j.contains("num_frames")) spec.num_frames = j.at("num_frames").get<FrameIndex>();
    if (j.contains("noise_sigma")) spec.noise_sigma = j.at("noise_sigma").get<double>();
    if (j.contains("dropout_prob")) spec.dropout_prob = j.at("dropout_prob").get<double>();
    if (j.contains("confidence_range")) {
      std::tie(spec.confidence_lo, spec.confidence_hi) = detail::pair_of(j.at("confidence_range"), "confidence_range");
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("vehicles")) {
      std::size_t i = 0;
      for (const auto& vj : j.at("vehicles")) {
        const auto where = "vehicles[" + std::to_string(i++) + "]";
        detail::check_keys(vj, {"class", "start", "velocity", "box_size", "spawn_frame", "despawn_frame"}, where);
        VehicleScript v;
        if (vj.contains("class")) v.class_label = vj.at("class").get<std::string>();
        auto [sx, sy] = detail::pair_of(vj.at("start"), where + ".start");
        v.start = {sx, sy};
        auto [vx, vy] = detail::pair_of(vj.at("velocity"), where + ".velocity");
        v.velocity = {vx, vy};
        if (vj.contains("box_size")) {
          auto [w, h] = detail::pair_of(vj.at("box_size"), where + ".box_size");
          v.box_size = {w, h};
        }
        if (vj.contains("spawn_frame")) v.spawn_frame = vj.at("spawn_frame").get<FrameIndex>();
        v.despawn_frame = vj.at("despawn_frame").get<FrameIndex>();
        spec.vehicles.push_back(std::move(v));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(e.what());
  }
  validate(spec);
  return spec;
}

inline ScenarioSpec load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidSpec("cannot open " + path.string());
  try {
    return scenario_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidSpec(e.what());
  }
}

inline nlohmann::ordered_json truth_to_json(const GroundTruth& gt) {
  nlohmann::ordered_json j;
  j["num_frames"] = gt.num_frames;
  auto vehicles = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < gt.per_vehicle.size(); ++i) {
    const auto& t = gt.per_vehicle[i];
    nlohmann::ordered_json v;
    v["vehicle"] = i;
    v["class"] = gt.vehicles[i].class_label;
    v["direction"] = t.direction == TrueDirection::Toward ? "toward"
                     : t.direction == TrueDirection::Away ? "away"
                                                          : "stationary";
    v["wrong_way"] = t.wrong_way;
    vehicles.push_back(std::move(v));
  }
  j["vehicles"] = std::move(vehicles);
  return j;
}

}  // namespace contraflow
