// SPDX-License-Identifier: Apache-2.0
#pragma once

/*! \file
 *  \brief Pixel-space primitives: points, boxes, distances, overlap.
 *
 *  Image coordinates have their origin at the top-left corner with y
 *  growing downward. Every direction rule in the library depends on this.
 */

#include <algorithm>
#include <cmath>

namespace contraflow {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

/// Region of interest. Same shape and invariants as a bounding box.
using Rect = BoundingBox;

inline bool is_valid(const Point& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && p.x >= 0.0 && p.y >= 0.0;
}

inline bool is_valid(const BoundingBox& b) {
  return std::isfinite(b.x_min) && std::isfinite(b.y_min) && std::isfinite(b.x_max) &&
         std::isfinite(b.y_max) && b.x_min >= 0.0 && b.y_min >= 0.0 && b.x_min < b.x_max &&
         b.y_min < b.y_max;
}

inline double euclidean_distance(const Point& a, const Point& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

inline Point centroid_of(const BoundingBox& b) {
  return {(b.x_min + b.x_max) / 2.0, (b.y_min + b.y_max) / 2.0};
}

/// Closed-boundary containment: a point on the edge is inside.
inline bool contains(const Rect& r, const Point& p) {
  return r.x_min <= p.x && p.x <= r.x_max && r.y_min <= p.y && p.y <= r.y_max;
}

inline double diagonal(const Rect& r) { return std::hypot(r.width(), r.height()); }

inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  if (inter == 0.0) return 0.0;
  return inter / (a.area() + b.area() - inter);
}

}  // namespace contraflow
