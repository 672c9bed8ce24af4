// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Wrong-way decision from registration height vs. current height.
 *
 *  With the origin at the top of the frame, a growing centroid y means the
 *  vehicle is coming toward the camera.
 */

#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include "contraflow/tracker.hpp"

namespace contraflow {

struct DirectionConfig {
  /// true: moving up the frame (away from the camera) is the violation.
  bool wrong_way_is_upward = true;
  /// Dead-band in pixels. 0 makes a stationary vehicle count as wrong-way.
  double min_displacement = 5.0;
};

enum class DirectionVerdict { Undecided, RightWay, WrongWay };

inline std::string_view to_string(DirectionVerdict v) {
  switch (v) {
    case DirectionVerdict::Undecided: return "undecided";
    case DirectionVerdict::RightWay: return "right_way";
    case DirectionVerdict::WrongWay: return "wrong_way";
  }
  return "?";
}

inline DirectionVerdict classify(double h1, double h2, const DirectionConfig& cfg) {
  const double delta = h2 - h1;
  if (std::abs(delta) < cfg.min_displacement) return DirectionVerdict::Undecided;
  const bool downward = delta > 0.0;
  return downward == cfg.wrong_way_is_upward ? DirectionVerdict::RightWay : DirectionVerdict::WrongWay;
}

struct TrackVerdict {
  TrackId track_id = 0;
  DirectionVerdict verdict = DirectionVerdict::Undecided;
  bool newly_flagged = false;
};

/// Classifies every track and sets `flagged_wrong_way` on first WrongWay.
/// Flagged tracks are reported WrongWay without re-evaluation, so each id
/// produces at most one `newly_flagged` verdict over its lifetime.
inline std::vector<TrackVerdict> evaluate_tracks(std::span<Track> tracks, const DirectionConfig& cfg) {
  std::vector<TrackVerdict> out;
  out.reserve(tracks.size());
  for (auto& t : tracks) {
    if (t.flagged_wrong_way) {
      out.push_back({t.id, DirectionVerdict::WrongWay, false});
      continue;
    }
    const auto v = classify(t.h1, t.h2, cfg);
    const bool flag = v == DirectionVerdict::WrongWay;
    if (flag) t.flagged_wrong_way = true;
    out.push_back({t.id, v, flag});
  }
  return out;
}

}  // namespace contraflow
