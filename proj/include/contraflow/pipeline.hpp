// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief End-to-end driver: stride -> filter -> NMS -> track -> classify -> emit.
 *
 *  Only frames with `index % frame_stride == 0` are processed. Skipped frames
 *  are invisible to the tracker. Frame indices missing from the stream are
 *  treated as frames without detections, so a processed index that the
 *  stream jumps over still ages the live tracks.
 */

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <string>

#include <json.hpp>

#include "contraflow/config.hpp"
#include "contraflow/detection.hpp"
#include "contraflow/direction.hpp"
#include "contraflow/event_sink.hpp"
#include "contraflow/image.hpp"
#include "contraflow/ingest.hpp"
#include "contraflow/tracker.hpp"

namespace contraflow {

struct RunSummary {
  std::uint64_t frames_seen = 0;  // highest frame index + 1
  std::uint64_t frames_processed = 0;
  std::uint64_t tracks_created = 0;
  std::uint64_t violations = 0;
  double wall_time = 0.0;  // seconds
};

inline nlohmann::ordered_json to_json(const RunSummary& s) {
  nlohmann::ordered_json j;
  j["frames_seen"] = s.frames_seen;
  j["frames_processed"] = s.frames_processed;
  j["tracks_created"] = s.tracks_created;
  j["violations"] = s.violations;
  j["wall_time"] = s.wall_time;
  return j;
}

class Pipeline {
 public:
  /// Called after every processed frame with the filtered input, the tracker
  /// step and the tracker state after the step.
  using Observer = std::function<void(const FrameDetections&, const StepResult&, const TrackerState&)>;

  explicit Pipeline(PipelineConfig cfg, std::optional<std::filesystem::path> image_dir = std::nullopt)
      : cfg_(std::move(cfg)), image_dir_(std::move(image_dir)), sink_(cfg_.sink) {
    if (cfg_.frame_stride < 1) throw ConfigError("frame_stride", "must be >= 1");
  }

  void set_observer(Observer obs) { observer_ = std::move(obs); }

  /// Frames must arrive with strictly increasing indices.
  void push(const FrameDetections& frame) {
    if (seen_any_ && frame.frame_index < next_frame_) throw NonMonotonicFrame(frame.frame_index, 0);
    skip_to(frame.frame_index);
    if (frame.frame_index % cfg_.frame_stride == 0) process(frame);
    next_frame_ = frame.frame_index + 1;
    seen_any_ = true;
  }

  RunSummary summary() const {
    RunSummary s;
    s.frames_seen = seen_any_ ? next_frame_ : 0;
    s.frames_processed = processed_;
    s.tracks_created = state_.next_id;
    s.violations = sink_.count();
    return s;
  }

  const TrackerState& state() const { return state_; }
  const PipelineConfig& config() const { return cfg_; }
  const EventSink& sink() const { return sink_; }

 private:
  // Runs the processed indices in [next_frame_, target) as empty frames.
  void skip_to(FrameIndex target) {
    const auto stride = cfg_.frame_stride;
    FrameIndex g = (next_frame_ + stride - 1) / stride * stride;
    while (g < target && !state_.tracks.empty()) {
      process(FrameDetections{g, {}});
      g += stride;
    }
    // No live tracks: the remaining empty frames cannot change anything.
    if (g < target) processed_ += (target - 1 - g) / stride + 1;
  }

  void process(const FrameDetections& raw) {
    ++processed_;
    const auto kept = non_max_suppression(filter_detections(raw, cfg_.ingest), cfg_.ingest.nms_iou_threshold);
    const auto step_result = step(state_, kept, cfg_.tracker);
    const auto verdicts = evaluate_tracks(state_.tracks, cfg_.direction);

    std::optional<Image> image;
    bool image_looked_up = false;
    for (const auto& v : verdicts) {
      if (!v.newly_flagged) continue;
      const auto& track = *std::lower_bound(state_.tracks.begin(), state_.tracks.end(), v.track_id,
                                            [](const Track& t, TrackId id) { return t.id < id; });
      if (!image_looked_up) {
        image = load_image(raw.frame_index);
        image_looked_up = true;
      }
      sink_.emit(make_violation(track, raw.frame_index), image ? &*image : nullptr);
    }
    if (observer_) observer_(kept, step_result, state_);
  }

  std::optional<Image> load_image(FrameIndex frame) const {
    if (!image_dir_ || !cfg_.sink.write_snapshots) return std::nullopt;
    const auto path = find_frame_image(*image_dir_, frame);
    if (!path) return std::nullopt;
    try {
      return read_png(*path);
    } catch (const std::runtime_error& e) {
      throw SinkIoError(e.what());
    }
  }

  PipelineConfig cfg_;
  std::optional<std::filesystem::path> image_dir_;
  EventSink sink_;
  TrackerState state_;
  Observer observer_;
  FrameIndex next_frame_ = 0;
  bool seen_any_ = false;
  std::uint64_t processed_ = 0;
};

/// Reads the whole stream and returns the totals. Throws StreamError,
/// SinkIoError or ConfigError.
inline RunSummary run(const PipelineConfig& cfg, std::istream& stream,
                      const std::optional<std::filesystem::path>& image_dir = std::nullopt,
                      Pipeline::Observer observer = {}) {
  const auto start = std::chrono::steady_clock::now();
  Pipeline pipeline(cfg, image_dir);
  if (observer) pipeline.set_observer(std::move(observer));
  StreamReader reader(stream);
  while (auto frame = reader.next()) pipeline.push(*frame);
  auto summary = pipeline.summary();
  summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

}  // namespace contraflow
