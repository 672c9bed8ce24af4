// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Per-frame detection filtering: confidence and class gating, then
 *  greedy per-class non-max suppression.
 */

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "contraflow/detection.hpp"
#include "contraflow/geometry.hpp"

namespace contraflow {

struct IngestConfig {
  double confidence_threshold = 0.5;
  double nms_iou_threshold = 0.4;
  std::set<std::string> class_whitelist{"motorbike", "bus", "truck", "car"};
};

/// Keeps detections with confidence strictly above the threshold whose class
/// is whitelisted. Order is preserved.
inline FrameDetections filter_detections(const FrameDetections& f, const IngestConfig& cfg) {
  FrameDetections out{f.frame_index, {}};
  for (const auto& d : f.detections) {
    if (d.confidence > cfg.confidence_threshold && cfg.class_whitelist.contains(d.class_label))
      out.detections.push_back(d);
  }
  return out;
}

/// Greedy NMS, run independently per class. Output is in descending
/// confidence order; equal confidences keep their input order.
inline FrameDetections non_max_suppression(const FrameDetections& f, double iou_threshold) {
  const auto& dets = f.detections;
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  std::vector<bool> suppressed(dets.size(), false);
  FrameDetections out{f.frame_index, {}};
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& kept = dets[order[i]];
    if (suppressed[order[i]]) continue;
    out.detections.push_back(kept);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const auto& other = dets[order[j]];
      if (!suppressed[order[j]] && other.class_label == kept.class_label && iou(kept.box, other.box) > iou_threshold)
        suppressed[order[j]] = true;
    }
  }
  return out;
}

}  // namespace contraflow
