// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scenario sampling and scoring shared by the integration and acceptance
// suites.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "contraflow/contraflow.hpp"

namespace contraflow::testkit {

inline const Rect kLaneRoi{140.0, 120.0, 1140.0, 620.0};
inline constexpr double kLaneSpacing = 100.0;
inline constexpr double kMaxSpeed = 12.0;

/// Random lane scene: 1-10 vehicles, one per vertical lane (lanes 100 px
/// apart), integer speeds 3-12 px/frame up or down the frame, even box
/// sizes so every centroid is exact. About one vehicle in five despawns early,
/// sometimes inside the dead-band.
inline ScenarioSpec sample_lane_scenario(std::uint64_t seed, double noise_sigma = 0.0, double dropout = 0.0) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  ScenarioSpec spec;
  spec.roi = kLaneRoi;
  spec.noise_sigma = noise_sigma;
  spec.dropout_prob = dropout;
  spec.confidence_lo = 0.6;
  spec.confidence_hi = 0.99;
  spec.seed = seed;

  std::vector<int> lanes(10);
  for (int i = 0; i < 10; ++i) lanes[i] = i;
  std::shuffle(lanes.begin(), lanes.end(), rng);
  const int n = pick(1, 10);
  static const char* kClasses[] = {"car", "bus", "truck", "motorbike"};
  for (int i = 0; i < n; ++i) {
    VehicleScript v;
    v.class_label = kClasses[pick(0, 3)];
    const bool toward = pick(0, 1) == 1;
    const int speed = pick(3, static_cast<int>(kMaxSpeed));
    v.velocity = {0.0, toward ? double(speed) : -double(speed)};
    v.start = {190.0 + kLaneSpacing * lanes[i], toward ? double(pick(40, 100)) : double(pick(640, 700))};
    v.box_size = {double(2 * pick(20, 40)), double(2 * pick(20, 40))};
    v.spawn_frame = static_cast<FrameIndex>(pick(0, 20));
    const int crossing = 720 / speed + 5;
    const int life = pick(0, 4) == 0 ? pick(1, crossing) : crossing;
    v.despawn_frame = v.spawn_frame + static_cast<FrameIndex>(life);
    spec.vehicles.push_back(v);
  }
  return spec;
}

/// Checks the spacing precondition for identity stability: every vehicle
/// moves at most `d` per frame and co-present vehicles stay more than 2d
/// apart, with d below the association gate.
inline bool respects_spacing(const ScenarioSpec& spec, double gate) {
  double d = 0.0;
  for (const auto& v : spec.vehicles) d = std::max(d, std::hypot(v.velocity.vx, v.velocity.vy));
  if (!(d < gate)) return false;
  const auto frames = spec.frame_count();
  for (FrameIndex f = 0; f < frames; ++f) {
    for (std::size_t a = 0; a < spec.vehicles.size(); ++a) {
      const auto& va = spec.vehicles[a];
      if (f < va.spawn_frame || f >= va.despawn_frame) continue;
      for (std::size_t b = a + 1; b < spec.vehicles.size(); ++b) {
        const auto& vb = spec.vehicles[b];
        if (f < vb.spawn_frame || f >= vb.despawn_frame) continue;
        if (euclidean_distance(scripted_center(va, f), scripted_center(vb, f)) <= 2.0 * d) return false;
      }
    }
  }
  return true;
}

inline PipelineConfig scenario_pipeline_config(const std::filesystem::path& out_dir, double gate = 50.0) {
  auto cfg = make_pipeline_config(kLaneRoi);
  cfg.frame_stride = 1;
  cfg.tracker.max_match_distance = gate;
  cfg.sink.output_directory = out_dir;
  return cfg;
}

struct ScenarioOutcome {
  std::set<std::size_t> expected;
  std::set<std::size_t> flagged;  // vehicles owning a flagged track
  std::size_t events = 0;
  std::size_t unattributed_events = 0;
  std::size_t id_switches = 0;
  RunSummary summary;
};

/// Runs the pipeline over a generated scenario and attributes tracks and
/// events back to scripted vehicles by exact box identity.
inline ScenarioOutcome run_scenario(const ScenarioSpec& spec, const PipelineConfig& cfg) {
  const auto scenario = generate(spec);
  const auto& gt = scenario.truth;

  auto vehicle_of = [&](FrameIndex frame, const BoundingBox& box) -> std::optional<std::size_t> {
    if (frame >= gt.frames.size()) return std::nullopt;
    for (const auto& tb : gt.frames[frame])
      if (tb.emitted && *tb.emitted == box) return tb.vehicle;
    return std::nullopt;
  };

  std::map<std::size_t, TrackId> last_track_of_vehicle;
  std::size_t switches = 0;
  auto observer = [&](const FrameDetections& frame, const StepResult&, const TrackerState& state) {
    for (const auto& t : state.tracks) {
      if (t.trajectory.empty() || t.trajectory.back().frame_index != frame.frame_index) continue;
      const auto v = vehicle_of(frame.frame_index, t.last_box);
      if (!v) continue;
      auto [it, inserted] = last_track_of_vehicle.emplace(*v, t.id);
      if (!inserted && it->second != t.id) {
        ++switches;
        it->second = t.id;
      }
    }
  };

  std::istringstream in(scenario.stream);
  ScenarioOutcome out;
  out.summary = run(cfg, in, std::nullopt, observer);
  out.expected = expected_violations(gt, cfg.direction, cfg.frame_stride);
  out.id_switches = switches;
  for (const auto& e : read_events(cfg.sink.output_directory / kEventsFileName)) {
    ++out.events;
    const auto v = vehicle_of(e.trajectory.back().frame_index, e.last_box);
    if (v) {
      out.flagged.insert(*v);
    } else {
      ++out.unattributed_events;
    }
  }
  return out;
}

}  // namespace contraflow::testkit
