// tracker.hpp: the per-frame tracking state machine. Predicts every track,
// associates detections in a cascade (plain IoU, then extended-box
// re-identification), classifies confident unmatched tracks as occluded,
// creates targets from three-frame detection chains and retires stale ones.

#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "occsort/assignment.hpp"
#include "occsort/geometry.hpp"
#include "occsort/motion.hpp"

namespace occsort {

enum class TrackStatus { Active, Occluded };

struct Track {
  std::int64_t id = 0;
  MotionState motion;
  int age = 0;                  // frames since creation
  int time_since_observed = 0;  // consecutive frames without a matched detection
  int time_since_updated = 0;   // consecutive frames without a measurement correction
  TrackStatus status = TrackStatus::Active;
  int hit_count = 0;            // total matched frames
};

struct TrackerConfig {
  double alpha = 1.0;             // confidence scale
  double conf_object = 0.75;      // C_O: occluded-by-object confidence threshold
  double conf_target = 0.35;      // C_T: occluded-by-target confidence threshold
  double min_coverage = 0.5;      // CP_min: coverage needed for target-target occlusion
  double iou_gate = 0.3;          // minimum overlap for a valid association
  int k_min = 3;                  // unmatched tracks retained at least this long
  int k_max = 30;                 // and at most this long
  double c_k = 10.0;              // age-proportional retention divisor
  int min_hits = 3;               // opening frames where every detection spawns a track
  double extension_rate = 0.3;    // per-unobserved-frame box growth for re-identification
  double detection_score_threshold = 0.3;
  bool require_reid_support = true;   // re-identification also needs a prior-frame detection
  bool emit_occluded = false;         // include occluded estimates in the output
  bool occluded_resets_tsu = true;    // occluded frames reset (vs freeze) time_since_updated

  /// Throws on hard violations (k_min > k_max, c_k <= 0); returns
  /// recommendation warnings for the rest.
  std::vector<std::string> validate() const {
    if (k_min > k_max) throw std::invalid_argument("TrackerConfig: k_min > k_max");
    if (c_k <= 0.0) throw std::invalid_argument("TrackerConfig: c_k must be > 0");
    std::vector<std::string> warnings;
    if (!(0.0 <= conf_target && conf_target <= conf_object && conf_object <= 1.0)) {
      warnings.push_back("recommended ordering 0 <= conf_target <= conf_object <= 1 not satisfied");
    }
    return warnings;
  }
};

struct FrameDiagnostics {
  int matched = 0;
  int occluded = 0;
  int created = 0;
  int removed = 0;
  int unmatched_detections = 0;
};

struct FrameOutput {
  std::int64_t frame = 0;
  std::vector<std::pair<std::int64_t, BoundingBox>> emitted;  // (track id, box)
  FrameDiagnostics diagnostics;
};

/// Track confidence: min(1, alpha * Age/t_so * A/A_avg). The max(t_so, 1)
/// guard makes the function total when the track was observed this frame.
inline double confidence(const Track& track, double avg_area, double alpha) {
  const double area = box_from_state(track.motion).area();
  const double unobserved = static_cast<double>(std::max(track.time_since_observed, 1));
  return std::min(1.0, alpha * (static_cast<double>(track.age) / unobserved) * (area / avg_area));
}

/// Mean predicted box area over all tracks; 1.0 for an empty track list so
/// downstream ratios stay defined.
inline double average_area(const std::vector<Track>& tracks) {
  if (tracks.empty()) return 1.0;
  double sum = 0.0;
  for (const Track& t : tracks) sum += box_from_state(t.motion).area();
  return sum / static_cast<double>(tracks.size());
}

/// Retention limit for an unmatched track of the given age.
inline double removal_deadline(const TrackerConfig& cfg, int age) {
  return std::min(cfg.k_min + static_cast<double>(age) / cfg.c_k, static_cast<double>(cfg.k_max));
}

inline bool should_remove(const TrackerConfig& cfg, const Track& track) {
  return static_cast<double>(track.time_since_updated) > removal_deadline(cfg, track.age);
}

/// Per-frame association outcome. Indices refer to the `tracks` and
/// `detections` arguments of associate().
struct AssociationResult {
  std::vector<std::pair<int, int>> matches;  // (track index, detection index)
  std::vector<int> occluded;                 // tracks classified occluded this frame
  std::vector<int> unmatched_tracks;         // plain unmatched tracks
  std::vector<int> unmatched_detections;     // detections left over for creation
};

/// Cascade association over predicted tracks (occluded ones included):
///   1. gated IoU assignment between detections and every predicted box,
///   2. re-identification of still-unmatched tracks through their extended
///      boxes, confirmed against the previous frame's unmatched detections,
///   3. confidence/coverage classification of the remaining tracks as
///      occluded or plain unmatched.
/// Detections are expected to be score-thresholded already.
inline AssociationResult associate(const std::vector<Track>& tracks,
                                   const std::vector<BoundingBox>& detections, double avg_area,
                                   const std::vector<BoundingBox>& prev_unmatched,
                                   const TrackerConfig& cfg) {
  std::vector<BoundingBox> predicted;
  predicted.reserve(tracks.size());
  for (const Track& t : tracks) predicted.push_back(box_from_state(t.motion));

  AssociationResult result;

  // Cascade step: rows are detections, cols are tracks.
  ScoreMatrix overlap(static_cast<int>(detections.size()), static_cast<int>(tracks.size()));
  for (int d = 0; d < overlap.rows(); ++d) {
    for (int t = 0; t < overlap.cols(); ++t) overlap(d, t) = iou(detections[d], predicted[t]);
  }
  Assignment cascade = gated_assign(overlap, cfg.iou_gate);
  for (const auto& [d, t] : cascade.matches) result.matches.emplace_back(t, d);

  std::vector<int> free_dets = cascade.unmatched_rows;
  std::vector<int> free_tracks = cascade.unmatched_cols;

  // Re-identification step on extended boxes.
  if (!free_dets.empty() && !free_tracks.empty()) {
    ScoreMatrix ext(static_cast<int>(free_dets.size()), static_cast<int>(free_tracks.size()));
    for (int c = 0; c < ext.rows(); ++c) {
      for (int b = 0; b < ext.cols(); ++b) {
        const Track& track = tracks[free_tracks[b]];
        const BoundingBox& box = predicted[free_tracks[b]];
        const BoundingBox grown = extend_box(box, track.time_since_observed, cfg.extension_rate);
        ext(c, b) = extended_iou(detections[free_dets[c]], box, grown);
      }
    }

    std::vector<std::pair<int, int>> confirmed;  // (free det slot, free track slot)
    if (cfg.require_reid_support) {
      ScoreMatrix support(static_cast<int>(free_dets.size()),
                          static_cast<int>(prev_unmatched.size()));
      for (int c = 0; c < support.rows(); ++c) {
        for (int a = 0; a < support.cols(); ++a) {
          support(c, a) = iou(detections[free_dets[c]], prev_unmatched[a]);
        }
      }
      for (const TwoStepMatch& m : two_step_match(ext, support, cfg.iou_gate)) {
        confirmed.emplace_back(m.row, m.primary_col);
      }
    } else {
      confirmed = gated_assign(ext, cfg.iou_gate).matches;
    }

    std::vector<char> det_taken(free_dets.size(), 0), track_taken(free_tracks.size(), 0);
    for (const auto& [c, b] : confirmed) {
      result.matches.emplace_back(free_tracks[b], free_dets[c]);
      det_taken[c] = 1;
      track_taken[b] = 1;
    }
    std::vector<int> still_free_dets, still_free_tracks;
    for (std::size_t i = 0; i < free_dets.size(); ++i) {
      if (!det_taken[i]) still_free_dets.push_back(free_dets[i]);
    }
    for (std::size_t i = 0; i < free_tracks.size(); ++i) {
      if (!track_taken[i]) still_free_tracks.push_back(free_tracks[i]);
    }
    free_dets = std::move(still_free_dets);
    free_tracks = std::move(still_free_tracks);
  }

  // Occlusion step: every predicted track is a cover candidate.
  for (int u : free_tracks) {
    const double conf = confidence(tracks[u], avg_area, cfg.alpha);
    double coverage = 0.0;
    for (int j = 0; j < static_cast<int>(tracks.size()); ++j) {
      if (j == u) continue;
      coverage = std::max(coverage, covered_percent(predicted[u], predicted[j]));
    }
    if (conf > cfg.conf_object) {
      result.occluded.push_back(u);
    } else if (conf > cfg.conf_target && coverage > cfg.min_coverage) {
      result.occluded.push_back(u);
    } else {
      result.unmatched_tracks.push_back(u);
    }
  }

  result.unmatched_detections = std::move(free_dets);
  std::sort(result.matches.begin(), result.matches.end());
  return result;
}

/// One confirmed three-frame detection chain; indices point into the three
/// pools passed to find_new_target_chains.
struct ChainMatch {
  int now_index = -1;
  int prev_index = -1;
  int prev2_index = -1;
};

/// Three-frame target creation: the middle pool is IoU-matched against both
/// the newest and the oldest pool, and only middle detections matched in
/// both directions produce a chain. Pool indices are returned so the caller
/// can consume the detections.
inline std::vector<ChainMatch> find_new_target_chains(const std::vector<BoundingBox>& pool_now,
                                                      const std::vector<BoundingBox>& pool_prev,
                                                      const std::vector<BoundingBox>& pool_prev2,
                                                      const TrackerConfig& cfg) {
  std::vector<ChainMatch> chains;
  if (pool_now.empty() || pool_prev.empty() || pool_prev2.empty()) return chains;
  ScoreMatrix now_link(static_cast<int>(pool_prev.size()), static_cast<int>(pool_now.size()));
  for (int c = 0; c < now_link.rows(); ++c) {
    for (int b = 0; b < now_link.cols(); ++b) now_link(c, b) = iou(pool_prev[c], pool_now[b]);
  }
  ScoreMatrix back_link(static_cast<int>(pool_prev.size()), static_cast<int>(pool_prev2.size()));
  for (int c = 0; c < back_link.rows(); ++c) {
    for (int a = 0; a < back_link.cols(); ++a) back_link(c, a) = iou(pool_prev[c], pool_prev2[a]);
  }
  for (const TwoStepMatch& m : two_step_match(now_link, back_link, cfg.iou_gate)) {
    chains.push_back({m.primary_col, m.row, m.support_col});
  }
  return chains;
}

/// Sequential multi-object tracker. One step() call per frame, frames in
/// strictly increasing order; instances are independent of each other.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}, NoiseConfig noise = {})
      : cfg_(std::move(cfg)), noise_(noise) {
    cfg_.validate();
  }

  const TrackerConfig& config() const { return cfg_; }
  const NoiseConfig& noise() const { return noise_; }
  const std::vector<Track>& tracks() const { return tracks_; }

  /// Advances the tracker by one frame and returns the emitted boxes plus
  /// per-frame diagnostics. Detections must already be score-thresholded.
  FrameOutput step(std::int64_t frame, const std::vector<BoundingBox>& detections) {
    if (last_frame_ && frame <= *last_frame_) {
      throw std::invalid_argument("Tracker::step: frame indices must be strictly increasing");
    }
    last_frame_ = frame;
    ++frames_seen_;

    for (Track& t : tracks_) t.motion = predict(t.motion, noise_);
    const double avg_area = average_area(tracks_);
    AssociationResult assoc = associate(tracks_, detections, avg_area, prev_unmatched_, cfg_);

    FrameOutput out;
    out.frame = frame;

    for (const auto& [ti, di] : assoc.matches) {
      Track& t = tracks_[ti];
      t.motion = correct(t.motion, state_from_box(detections[di]), noise_);
      t.time_since_observed = 0;
      t.time_since_updated = 0;
      t.status = TrackStatus::Active;
      ++t.hit_count;
      out.emitted.emplace_back(t.id, box_from_state(t.motion));
    }
    for (int ti : assoc.occluded) {
      Track& t = tracks_[ti];
      t.motion = occluded_update(t.motion);
      t.time_since_observed += 1;
      if (cfg_.occluded_resets_tsu) {
        t.time_since_updated = 0;
      } else {
        t.time_since_updated += 1;
      }
      t.status = TrackStatus::Occluded;
      if (cfg_.emit_occluded) out.emitted.emplace_back(t.id, box_from_state(t.motion));
    }
    for (int ti : assoc.unmatched_tracks) {
      Track& t = tracks_[ti];
      t.time_since_observed += 1;
      t.time_since_updated += 1;
      t.status = TrackStatus::Active;
    }

    // Target creation from the unmatched-detection pools.
    std::vector<BoundingBox> pool;
    pool.reserve(assoc.unmatched_detections.size());
    for (int di : assoc.unmatched_detections) pool.push_back(detections[di]);

    std::vector<Track> born;
    if (frames_seen_ < cfg_.min_hits) {
      // Opening frames: every unmatched detection becomes a target at once.
      for (const BoundingBox& bb : pool) born.push_back(make_track(bb, bb));
      pool.clear();
    } else {
      std::vector<char> now_taken(pool.size(), 0), prev_taken(prev_unmatched_.size(), 0);
      for (const ChainMatch& chain :
           find_new_target_chains(pool, prev_unmatched_, prev2_unmatched_, cfg_)) {
        born.push_back(make_track(pool[chain.now_index], prev2_unmatched_[chain.prev2_index]));
        now_taken[chain.now_index] = 1;
        prev_taken[chain.prev_index] = 1;
      }
      erase_taken(pool, now_taken);
      erase_taken(prev_unmatched_, prev_taken);
    }

    for (const Track& t : born) out.emitted.emplace_back(t.id, box_from_state(t.motion));
    out.diagnostics.created = static_cast<int>(born.size());
    for (Track& t : born) tracks_.push_back(std::move(t));

    // Retire plain-unmatched tracks past their deadline; occluded tracks are
    // exempt by construction (they are not in unmatched_tracks).
    std::vector<char> drop(tracks_.size(), 0);
    for (int ti : assoc.unmatched_tracks) {
      if (should_remove(cfg_, tracks_[ti])) drop[ti] = 1;
    }
    std::size_t kept = 0;
    for (std::size_t i = 0; i < tracks_.size(); ++i) {
      if (drop[i]) {
        ++out.diagnostics.removed;
      } else {
        if (kept != i) tracks_[kept] = std::move(tracks_[i]);
        ++kept;
      }
    }
    tracks_.resize(kept);

    for (Track& t : tracks_) ++t.age;

    prev2_unmatched_ = std::move(prev_unmatched_);
    prev_unmatched_ = std::move(pool);

    out.diagnostics.matched = static_cast<int>(assoc.matches.size());
    out.diagnostics.occluded = static_cast<int>(assoc.occluded.size());
    out.diagnostics.unmatched_detections = static_cast<int>(prev_unmatched_.size());
    std::sort(out.emitted.begin(), out.emitted.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

 private:
  static void erase_taken(std::vector<BoundingBox>& boxes, const std::vector<char>& taken) {
    std::size_t kept = 0;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (!taken[i]) boxes[kept++] = boxes[i];
    }
    boxes.resize(kept);
  }

  /// New target from the newest detection of a chain; the velocity comes
  /// from the displacement across the chain (zero for single-frame births
  /// or degenerate chains).
  Track make_track(const BoundingBox& newest, const BoundingBox& oldest) {
    Track t;
    t.id = next_id_++;
    t.motion = init_track_state(newest, noise_);
    if (!(newest == oldest)) {
      try {
        const Measurement z_new = state_from_box(newest);
        const Measurement z_old = state_from_box(oldest);
        t.motion.mean(4) = (z_new(0) - z_old(0)) / 2.0;
        t.motion.mean(5) = (z_new(1) - z_old(1)) / 2.0;
        t.motion.mean(6) = (z_new(2) - z_old(2)) / 2.0;
      } catch (const std::invalid_argument&) {
        // degenerate chain boxes: keep zero velocity
      }
    }
    t.age = 0;  // incremented with everyone else at end of frame
    t.hit_count = 1;
    return t;
  }

  TrackerConfig cfg_;
  NoiseConfig noise_;
  std::vector<Track> tracks_;
  std::vector<BoundingBox> prev_unmatched_;   // last frame's leftover detections
  std::vector<BoundingBox> prev2_unmatched_;  // the frame before that
  std::int64_t next_id_ = 1;
  std::optional<std::int64_t> last_frame_;
  std::int64_t frames_seen_ = 0;
};

}  // namespace occsort
