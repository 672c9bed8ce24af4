// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Centroid tracker gated by a rectangular region of interest.
 *
 *  Each processed frame, detection centroids inside the ROI are associated
 *  with live tracks by repeatedly taking the globally closest unmatched
 *  (track, detection) pair. Leftover detections become new tracks; leftover
 *  tracks age and are dropped after `max_frames_missing` consecutive misses.
 */

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "contraflow/detection.hpp"
#include "contraflow/geometry.hpp"

namespace contraflow {

using TrackId = std::uint64_t;

struct TrajectoryPoint {
  FrameIndex frame_index = 0;
  Point centroid;

  friend bool operator==(const TrajectoryPoint&, const TrajectoryPoint&) = default;
};

struct Track {
  TrackId id = 0;
  Point centroid;
  double h1 = 0.0;  // centroid y at registration, never changes
  double h2 = 0.0;  // centroid y at the latest match
  BoundingBox last_box;
  std::string class_label;
  int frames_missing = 0;
  bool flagged_wrong_way = false;
  std::vector<TrajectoryPoint> trajectory;  // every matched centroid, oldest first
};

struct TrackerConfig {
  Rect roi;
  double max_match_distance = 0.0;
  int max_frames_missing = 2;
};

/// Default association gate: a quarter of the ROI diagonal.
inline double default_match_distance(const Rect& roi) { return 0.25 * diagonal(roi); }

inline TrackerConfig make_tracker_config(const Rect& roi) {
  return {roi, default_match_distance(roi), 2};
}

struct TrackerState {
  std::vector<Track> tracks;  // sorted by id
  TrackId next_id = 0;
};

struct StepResult {
  std::vector<std::pair<TrackId, Detection>> matched;
  std::vector<TrackId> registered;
  std::vector<TrackId> deregistered;
};

struct IdPoint {
  std::uint64_t key = 0;  // track id on the old side, detection index on the new side
  Point point;
};

struct Assignment {
  TrackId track_id = 0;
  std::size_t detection_index = 0;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

/// Greedy global minimum-distance matching. Pairs are taken in order of
/// increasing distance; ties go to the lower track id, then the lower
/// detection index. Stops once the closest remaining pair is farther than
/// `max_match_distance`. Output is in selection order.
inline std::vector<Assignment> associate(const std::vector<IdPoint>& old_centroids,
                                         const std::vector<IdPoint>& new_centroids, double max_match_distance) {
  const std::size_t rows = old_centroids.size();
  const std::size_t cols = new_centroids.size();
  std::vector<double> dist(rows * cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      dist[r * cols + c] = euclidean_distance(old_centroids[r].point, new_centroids[c].point);

  std::vector<bool> row_used(rows, false);
  std::vector<bool> col_used(cols, false);
  std::vector<Assignment> out;
  const std::size_t limit = std::min(rows, cols);
  while (out.size() < limit) {
    std::size_t best_r = rows;
    std::size_t best_c = cols;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < rows; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (col_used[c]) continue;
        const double d = dist[r * cols + c];
        bool better = d < best;
        if (!better && d == best && best_r < rows) {
          const auto id = old_centroids[r].key;
          const auto best_id = old_centroids[best_r].key;
          better = id < best_id || (id == best_id && new_centroids[c].key < new_centroids[best_c].key);
        }
        if (better) {
          best = d;
          best_r = r;
          best_c = c;
        }
      }
    }
    if (best_r == rows || best > max_match_distance) break;
    row_used[best_r] = true;
    col_used[best_c] = true;
    out.push_back({old_centroids[best_r].key, static_cast<std::size_t>(new_centroids[best_c].key)});
  }
  return out;
}

/// Advances the tracker by one processed frame. The frame is expected to be
/// filtered and NMS-reduced already.
inline StepResult step(TrackerState& state, const FrameDetections& frame, const TrackerConfig& cfg) {
  StepResult result;

  std::vector<IdPoint> incoming;
  for (std::size_t i = 0; i < frame.detections.size(); ++i) {
    const Point c = centroid_of(frame.detections[i].box);
    if (contains(cfg.roi, c)) incoming.push_back({i, c});
  }

  std::vector<IdPoint> existing;
  existing.reserve(state.tracks.size());
  for (const auto& t : state.tracks) existing.push_back({t.id, t.centroid});

  const auto pairs = associate(existing, incoming, cfg.max_match_distance);

  std::vector<bool> track_matched(state.tracks.size(), false);
  std::vector<bool> det_matched(frame.detections.size(), false);
  for (const auto& [id, det_index] : pairs) {
    // tracks are sorted by id
    auto it = std::lower_bound(state.tracks.begin(), state.tracks.end(), id,
                               [](const Track& t, TrackId key) { return t.id < key; });
    const auto& det = frame.detections[det_index];
    const Point c = centroid_of(det.box);
    it->centroid = c;
    it->last_box = det.box;
    it->h2 = c.y;
    it->frames_missing = 0;
    it->trajectory.push_back({frame.frame_index, c});
    track_matched[static_cast<std::size_t>(it - state.tracks.begin())] = true;
    det_matched[det_index] = true;
    result.matched.emplace_back(id, det);
  }

  std::vector<Track> survivors;
  survivors.reserve(state.tracks.size() + incoming.size());
  for (std::size_t i = 0; i < state.tracks.size(); ++i) {
    auto& t = state.tracks[i];
    if (!track_matched[i] && ++t.frames_missing > cfg.max_frames_missing) {
      result.deregistered.push_back(t.id);
      continue;
    }
    if (!contains(cfg.roi, t.centroid)) {
      result.deregistered.push_back(t.id);
      continue;
    }
    survivors.push_back(std::move(t));
  }

  for (const auto& in : incoming) {
    if (det_matched[in.key]) continue;
    const auto& det = frame.detections[in.key];
    Track t;
    t.id = state.next_id++;
    t.centroid = in.point;
    t.h1 = in.point.y;
    t.h2 = in.point.y;
    t.last_box = det.box;
    t.class_label = det.class_label;
    t.trajectory.push_back({frame.frame_index, in.point});
    result.registered.push_back(t.id);
    survivors.push_back(std::move(t));
  }

  state.tracks = std::move(survivors);
  return result;
}

/// Snapshot of the live tracks, ascending by id.
inline std::vector<Track> live_tracks(const TrackerState& state) { return state.tracks; }

}  // namespace contraflow
