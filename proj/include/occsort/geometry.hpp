// geometry.hpp: axis-aligned bounding boxes and the overlap metrics used
// for association and occlusion detection.

#pragma once

#include <algorithm>
#include <stdexcept>

namespace occsort {

/// Axis-aligned pixel rectangle stored as corner pairs. Degenerate
/// (zero-area) boxes are permitted; negative extents are not.
struct BoundingBox {
  double left = 0.0;
  double top = 0.0;
  double right = 0.0;
  double bottom = 0.0;

  double width() const { return right - left; }
  double height() const { return bottom - top; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (left + right); }
  double center_y() const { return 0.5 * (top + bottom); }
  bool valid() const { return right >= left && bottom >= top; }

  static BoundingBox from_ltwh(double left, double top, double width, double height) {
    return {left, top, left + width, top + height};
  }

  bool operator==(const BoundingBox&) const = default;
};

/// Intersection area of two boxes. Zero for disjoint boxes, symmetric.
inline double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.right, b.right) - std::max(a.left, b.left);
  const double h = std::min(a.bottom, b.bottom) - std::max(a.top, b.top);
  return std::max(0.0, w) * std::max(0.0, h);
}

/// Intersection over union. Two zero-area boxes yield 0 so that degenerate
/// detections silently fail to match instead of aborting a frame.
inline double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

/// Fraction of `target`'s own area covered by `other`. Not symmetric: the
/// denominator is always the first argument's area, which is what makes the
/// metric usable when a large near object covers a small far one.
inline double covered_percent(const BoundingBox& target, const BoundingBox& other) {
  const double area = target.area();
  if (area <= 0.0) {
    throw std::invalid_argument("covered_percent: target box has zero area");
  }
  return intersection_area(target, other) / area;
}

/// Scales a box symmetrically about its center by (1 + rate * time_since_observed)
/// on each side length. Center and aspect ratio are preserved exactly.
inline BoundingBox extend_box(const BoundingBox& bb, int time_since_observed, double rate) {
  const double grow = 1.0 + rate * static_cast<double>(time_since_observed);
  const double half_w = 0.5 * bb.width() * grow;
  const double half_h = 0.5 * bb.height() * grow;
  const double cx = bb.center_x();
  const double cy = bb.center_y();
  return {cx - half_w, cy - half_h, cx + half_w, cy + half_h};
}

/// Overlap score between a detection and an uncertainty-extended target box.
/// The intersection uses the extended box while the denominator keeps the
/// original target area, so the score grows with the extension but is not
/// diluted by it. Equals iou(det, target) when ext_target == target.
inline double extended_iou(const BoundingBox& det, const BoundingBox& target,
                           const BoundingBox& ext_target) {
  const double inter = intersection_area(det, ext_target);
  const double denom = det.area() + target.area() - inter;
  if (denom <= 0.0) {
    throw std::domain_error("extended_iou: nonpositive denominator");
  }
  return inter / denom;
}

}  // namespace occsort
