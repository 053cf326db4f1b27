// scenario.hpp: deterministic synthetic sequences. Actors move on exact
// linear trajectories; a detector model degrades the ground truth with
// seeded jitter, misses and a depth-based occlusion rule (bigger box is
// nearer the camera). Identical specs give byte-identical output.

#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "occsort/geometry.hpp"
#include "occsort/mot_io.hpp"

namespace occsort::sim {

enum class OcclusionMode {
  None,      // detector ignores overlap entirely
  Suppress,  // drop the detection once coverage reaches the threshold
  Shrink     // emit the largest visible strip until the threshold, then drop
};

struct DetectorModel {
  double miss_probability = 0.0;
  double jitter_sigma = 0.0;  // px, applied to center and size
  double score_min = 1.0;
  double score_max = 1.0;
  OcclusionMode occlusion = OcclusionMode::None;
  double coverage_threshold = 0.9;
};

struct Actor {
  int entry = 1;  // first live frame (inclusive)
  int exit = 1;   // last live frame (inclusive)
  BoundingBox start;
  double vx = 0.0;  // px per frame
  double vy = 0.0;
};

struct ScenarioSpec {
  std::uint64_t seed = 0;
  int frame_count = 0;
  std::vector<Actor> actors;
  DetectorModel detector;

  void validate() const {
    if (frame_count < 1) throw std::invalid_argument("scenario: frame_count must be >= 1");
    for (const Actor& a : actors) {
      if (!(1 <= a.entry && a.entry < a.exit && a.exit <= frame_count)) {
        throw std::invalid_argument("scenario: need 1 <= entry < exit <= frame_count");
      }
      if (!a.start.valid() || a.start.area() <= 0.0) {
        throw std::invalid_argument("scenario: start box must have positive area");
      }
    }
    const DetectorModel& d = detector;
    if (!(0.0 <= d.miss_probability && d.miss_probability < 1.0)) {
      throw std::invalid_argument("scenario: miss_probability must be in [0, 1)");
    }
    if (d.jitter_sigma < 0.0) throw std::invalid_argument("scenario: jitter_sigma must be >= 0");
    if (d.score_min > d.score_max) {
      throw std::invalid_argument("scenario: score_min must be <= score_max");
    }
    if (!(0.0 < d.coverage_threshold && d.coverage_threshold <= 1.0)) {
      throw std::invalid_argument("scenario: coverage_threshold must be in (0, 1]");
    }
  }
};

struct ScenarioOutput {
  io::FrameMap ground_truth;  // score field carries the considered flag (1 or 0)
  io::FrameMap detections;    // score field carries the detector confidence
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace detail {

// Per-actor stream with a fixed draw count per live frame, so one actor's
// outcomes never shift another's and a miss consumes as much entropy as a
// hit.
struct DrawStream {
  std::mt19937_64 engine;

  explicit DrawStream(std::uint64_t seed) : engine(seed) {}

  double uniform01() { return static_cast<double>(engine() >> 11) * 0x1.0p-53; }

  std::pair<double, double> normal_pair() {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }
};

inline BoundingBox actor_box(const Actor& a, int frame) {
  const double dx = a.vx * static_cast<double>(frame - a.entry);
  const double dy = a.vy * static_cast<double>(frame - a.entry);
  return {a.start.left + dx, a.start.top + dy, a.start.right + dx, a.start.bottom + dy};
}

/// Largest strip of `box` left uncovered by `cover` (the four rectangles
/// beside/above/below their overlap). Zero-area when fully covered.
inline BoundingBox visible_strip(const BoundingBox& box, const BoundingBox& cover) {
  const double l = std::max(box.left, cover.left);
  const double t = std::max(box.top, cover.top);
  const double r = std::min(box.right, cover.right);
  const double b = std::min(box.bottom, cover.bottom);
  if (r <= l || b <= t) return box;
  const BoundingBox candidates[4] = {
      {box.left, box.top, l, box.bottom},
      {r, box.top, box.right, box.bottom},
      {box.left, box.top, box.right, t},
      {box.left, b, box.right, box.bottom},
  };
  const BoundingBox* best = &candidates[0];
  for (const BoundingBox& c : candidates) {
    if (c.area() > best->area()) best = &c;
  }
  return *best;
}

}  // namespace detail

inline ScenarioOutput generate(const ScenarioSpec& spec) {
  spec.validate();
  const DetectorModel& det = spec.detector;

  std::vector<detail::DrawStream> streams;
  streams.reserve(spec.actors.size());
  for (std::size_t i = 0; i < spec.actors.size(); ++i) {
    streams.emplace_back(splitmix64(spec.seed + static_cast<std::uint64_t>(i)));
  }

  ScenarioOutput out;
  std::vector<int> live;
  std::vector<BoundingBox> boxes(spec.actors.size());
  for (int frame = 1; frame <= spec.frame_count; ++frame) {
    live.clear();
    for (int i = 0; i < static_cast<int>(spec.actors.size()); ++i) {
      const Actor& a = spec.actors[i];
      if (a.entry <= frame && frame <= a.exit) {
        live.push_back(i);
        boxes[i] = detail::actor_box(a, frame);
      }
    }

    for (int i : live) {
      // Coverage by the single most-covering nearer (strictly larger) actor.
      double covered = 0.0;
      int cover_by = -1;
      for (int j : live) {
        if (j == i || boxes[j].area() <= boxes[i].area()) continue;
        const double cp = covered_percent(boxes[i], boxes[j]);
        if (cp > covered) {
          covered = cp;
          cover_by = j;
        }
      }
      const bool occludable = det.occlusion != OcclusionMode::None;
      const bool hidden = occludable && covered >= det.coverage_threshold;
      out.ground_truth[frame].push_back(
          {static_cast<std::int64_t>(i) + 1, boxes[i], hidden ? 0.0 : 1.0});

      detail::DrawStream& rng = streams[static_cast<std::size_t>(i)];
      const double miss_u = rng.uniform01();
      const auto [n1, n2] = rng.normal_pair();
      const auto [n3, n4] = rng.normal_pair();
      const double score_u = rng.uniform01();

      if (hidden || miss_u < det.miss_probability) continue;
      BoundingBox visible = boxes[i];
      if (det.occlusion == OcclusionMode::Shrink && cover_by >= 0 && covered > 0.0) {
        visible = detail::visible_strip(boxes[i], boxes[cover_by]);
        if (visible.area() <= 0.0) continue;
      }
      const double cx = visible.center_x() + det.jitter_sigma * n1;
      const double cy = visible.center_y() + det.jitter_sigma * n2;
      const double w = std::max(1.0, visible.width() + det.jitter_sigma * n3);
      const double h = std::max(1.0, visible.height() + det.jitter_sigma * n4);
      const double score = det.score_min + score_u * (det.score_max - det.score_min);
      out.detections[frame].push_back(
          {-1, {cx - w / 2.0, cy - h / 2.0, cx + w / 2.0, cy + h / 2.0}, score});
    }
  }
  return out;
}

/// Two actors, one static and large, one small crossing behind it at
/// 8 px/frame. With the Suppress rule at 0.9 coverage the small actor has
/// no detections in frames 24 through 28, a five-frame full occlusion.
inline ScenarioSpec crossing_scenario(std::uint64_t seed = 42) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.frame_count = 60;
  spec.actors = {
      {1, 60, {270.0, 160.0, 330.0, 240.0}, 0.0, 0.0},
      {1, 50, {85.0, 180.0, 115.0, 220.0}, 8.0, 0.0},
  };
  spec.detector.occlusion = OcclusionMode::Suppress;
  spec.detector.coverage_threshold = 0.9;
  return spec;
}

/// Three well-separated actors with staggered entries and exits plus a
/// noisy detector: the birth/death fixture. Each actor stays inside its own
/// horizontal band, so emissions are attributable by position alone.
inline ScenarioSpec staggered_scenario(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.seed = seed;
  spec.frame_count = 80;
  spec.actors = {
      {1, 60, {100.0, 100.0, 140.0, 160.0}, 2.0, 0.5},
      {13, 70, {700.0, 100.0, 745.0, 165.0}, -1.5, 1.0},
      {27, 80, {1300.0, 100.0, 1350.0, 170.0}, 1.0, -0.5},
  };
  spec.detector.miss_probability = 0.1;
  spec.detector.jitter_sigma = 0.4;
  spec.detector.score_min = 0.35;
  spec.detector.score_max = 1.0;
  return spec;
}

/// Horizontal band [min_x, max_x) holding everything actor k of
/// staggered_scenario can ever touch; bands of different actors are
/// disjoint, so a box is attributed by which band its center falls in.
inline std::pair<double, double> staggered_band(int actor_index) {
  const double left = 600.0 * actor_index - 150.0;
  return {left, left + 600.0};
}

}  // namespace occsort::sim
