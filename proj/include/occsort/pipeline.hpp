// pipeline.hpp: glue from parsed detection files to result rows. Applies the
// score threshold, steps the tracker over every frame of the sequence and
// reports the time spent inside the tracker separately from any I/O the
// caller does.

#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "occsort/mot_io.hpp"
#include "occsort/tracker.hpp"

namespace occsort {

struct SequenceResult {
  io::FrameMap outputs;
  std::int64_t frames = 0;
  double core_seconds = 0.0;  // time inside Tracker::step only
};

/// Runs one tracker over one sequence. Every frame from 1 to
/// max(frame_count, last detection frame) is stepped, including empty ones,
/// so track aging and removal behave the same with and without detections.
inline SequenceResult run_sequence(const TrackerConfig& cfg, const io::FrameMap& detections,
                                   std::int64_t frame_count = 0, const NoiseConfig& noise = {}) {
  const io::FrameMap kept = io::threshold_detections(detections, cfg.detection_score_threshold);
  std::int64_t last_frame = frame_count;
  if (!kept.empty()) last_frame = std::max(last_frame, kept.rbegin()->first);

  Tracker tracker(cfg, noise);
  SequenceResult result;
  result.frames = last_frame;
  std::vector<BoundingBox> boxes;
  static const std::vector<io::FrameRecord> kNone;

  using clock = std::chrono::steady_clock;
  for (std::int64_t frame = 1; frame <= last_frame; ++frame) {
    const auto it = kept.find(frame);
    const auto& records = it == kept.end() ? kNone : it->second;
    boxes.clear();
    for (const io::FrameRecord& r : records) boxes.push_back(r.box);

    const auto start = clock::now();
    FrameOutput out = tracker.step(frame, boxes);
    result.core_seconds += std::chrono::duration<double>(clock::now() - start).count();

    if (!out.emitted.empty()) {
      auto& rows = result.outputs[frame];
      for (const auto& [id, box] : out.emitted) rows.push_back({id, box, 1.0});
    }
  }
  return result;
}

}  // namespace occsort
