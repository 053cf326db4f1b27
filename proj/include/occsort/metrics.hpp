// metrics.hpp: CLEAR-MOT evaluation. Correspondences persist from the
// previous frame while still valid, the remainder is re-solved by maximum
// IoU assignment, and the usual counts (FP, FN, IDS, FM, MT, ML) fall out.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "occsort/assignment.hpp"
#include "occsort/geometry.hpp"
#include "occsort/mot_io.hpp"

namespace occsort::metrics {

struct EvalReport {
  double mota = 0.0;
  double motp = 0.0;  // mean IoU over matched pairs
  std::int64_t ids = 0;
  std::int64_t fm = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t mt = 0;
  std::int64_t ml = 0;
  double mt_fraction = 0.0;
  double ml_fraction = 0.0;
  std::int64_t gt_total = 0;      // scored ground-truth boxes
  std::int64_t trajectories = 0;  // distinct scored ground-truth ids
  std::int64_t matches = 0;       // matched box pairs across all frames
};

namespace detail {

struct TrajectoryState {
  std::int64_t present = 0;  // frames the gt id exists
  std::int64_t tracked = 0;  // frames it was matched
  bool ever_tracked = false;
  bool in_gap = false;  // tracked before, currently not
};

}  // namespace detail

/// Evaluates hypothesis tracks against ground truth. Ground-truth rows use
/// the score field as a considered flag: rows with score == 0 are excluded
/// from scoring, and hypotheses overlapping such ignored rows are discarded
/// rather than counted as false positives. A match requires
/// IoU >= iou_threshold.
inline EvalReport evaluate(const io::FrameMap& ground_truth, const io::FrameMap& hypotheses,
                           double iou_threshold = 0.5) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw std::invalid_argument("evaluate: iou_threshold must be in (0, 1]");
  }

  std::vector<std::int64_t> frames;
  for (const auto& [f, _] : ground_truth) frames.push_back(f);
  for (const auto& [f, _] : hypotheses) frames.push_back(f);
  std::sort(frames.begin(), frames.end());
  frames.erase(std::unique(frames.begin(), frames.end()), frames.end());

  EvalReport report;
  double iou_sum = 0.0;
  std::map<std::int64_t, std::int64_t> active;    // gt id -> hyp id, from previous frame
  std::map<std::int64_t, std::int64_t> last_hyp;  // gt id -> last hyp ever matched
  std::map<std::int64_t, detail::TrajectoryState> trajectories;

  static const std::vector<io::FrameRecord> kNone;
  for (std::int64_t frame : frames) {
    const auto gt_it = ground_truth.find(frame);
    const auto hyp_it = hypotheses.find(frame);
    const auto& hyp_rows = hyp_it == hypotheses.end() ? kNone : hyp_it->second;

    std::vector<const io::FrameRecord*> gt_rows, ignored_rows;
    if (gt_it != ground_truth.end()) {
      for (const io::FrameRecord& r : gt_it->second) {
        if (r.id <= 0) throw std::invalid_argument("evaluate: ground-truth ids must be positive");
        if (r.score != 0.0) gt_rows.push_back(&r);
        else ignored_rows.push_back(&r);
      }
    }
    report.gt_total += static_cast<std::int64_t>(gt_rows.size());

    std::vector<char> gt_used(gt_rows.size(), 0), hyp_used(hyp_rows.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> matched;  // (gt slot, hyp slot)

    // Keep last frame's correspondences that still overlap enough.
    std::map<std::int64_t, std::int64_t> next_active;
    for (std::size_t g = 0; g < gt_rows.size(); ++g) {
      const auto prev = active.find(gt_rows[g]->id);
      if (prev == active.end()) continue;
      for (std::size_t h = 0; h < hyp_rows.size(); ++h) {
        if (hyp_used[h] || hyp_rows[h].id != prev->second) continue;
        if (iou(gt_rows[g]->box, hyp_rows[h].box) >= iou_threshold) {
          gt_used[g] = 1;
          hyp_used[h] = 1;
          matched.emplace_back(g, h);
        }
        break;
      }
    }

    // Re-solve the remainder on IoU.
    std::vector<std::size_t> free_gt, free_hyp;
    for (std::size_t g = 0; g < gt_rows.size(); ++g) {
      if (!gt_used[g]) free_gt.push_back(g);
    }
    for (std::size_t h = 0; h < hyp_rows.size(); ++h) {
      if (!hyp_used[h]) free_hyp.push_back(h);
    }
    if (!free_gt.empty() && !free_hyp.empty()) {
      ScoreMatrix overlap(static_cast<int>(free_gt.size()), static_cast<int>(free_hyp.size()));
      for (int r = 0; r < overlap.rows(); ++r) {
        for (int c = 0; c < overlap.cols(); ++c) {
          overlap(r, c) = iou(gt_rows[free_gt[r]]->box, hyp_rows[free_hyp[c]].box);
        }
      }
      for (const auto& [r, c] : gated_assign(overlap, iou_threshold).matches) {
        matched.emplace_back(free_gt[r], free_hyp[c]);
        gt_used[free_gt[r]] = 1;
        hyp_used[free_hyp[c]] = 1;
      }
    }

    for (const auto& [g, h] : matched) {
      const std::int64_t gt_id = gt_rows[g]->id;
      const std::int64_t hyp_id = hyp_rows[h].id;
      const auto last = last_hyp.find(gt_id);
      if (last != last_hyp.end() && last->second != hyp_id) ++report.ids;
      last_hyp[gt_id] = hyp_id;
      next_active[gt_id] = hyp_id;
      iou_sum += iou(gt_rows[g]->box, hyp_rows[h].box);
      ++report.matches;
    }
    report.fn += static_cast<std::int64_t>(gt_rows.size() - matched.size());

    // Leftover hypotheses lying on ignored ground truth do not count as
    // false positives.
    std::int64_t discarded = 0;
    if (!ignored_rows.empty()) {
      for (std::size_t h = 0; h < hyp_rows.size(); ++h) {
        if (hyp_used[h]) continue;
        for (const io::FrameRecord* ignored : ignored_rows) {
          if (iou(hyp_rows[h].box, ignored->box) >= iou_threshold) {
            ++discarded;
            break;
          }
        }
      }
    }
    report.fp += static_cast<std::int64_t>(hyp_rows.size() - matched.size()) - discarded;

    std::vector<char> gt_matched(gt_rows.size(), 0);
    for (const auto& [g, _] : matched) gt_matched[g] = 1;
    for (std::size_t g = 0; g < gt_rows.size(); ++g) {
      detail::TrajectoryState& traj = trajectories[gt_rows[g]->id];
      ++traj.present;
      if (gt_matched[g]) {
        ++traj.tracked;
        if (traj.in_gap) ++report.fm;  // interruption closed by renewed tracking
        traj.in_gap = false;
        traj.ever_tracked = true;
      } else if (traj.ever_tracked) {
        traj.in_gap = true;  // counts as FM only if tracking resumes later
      }
    }

    active = std::move(next_active);
  }

  report.trajectories = static_cast<std::int64_t>(trajectories.size());
  for (const auto& [_, traj] : trajectories) {
    const double ratio = static_cast<double>(traj.tracked) / static_cast<double>(traj.present);
    if (ratio >= 0.8) ++report.mt;
    if (ratio <= 0.2) ++report.ml;
  }
  report.mota = report.gt_total == 0
                    ? 1.0
                    : 1.0 - static_cast<double>(report.fn + report.fp + report.ids) /
                                static_cast<double>(report.gt_total);
  report.motp = report.matches == 0 ? 0.0 : iou_sum / static_cast<double>(report.matches);
  report.mt_fraction = report.trajectories == 0
                           ? 0.0
                           : static_cast<double>(report.mt) / static_cast<double>(report.trajectories);
  report.ml_fraction = report.trajectories == 0
                           ? 0.0
                           : static_cast<double>(report.ml) / static_cast<double>(report.trajectories);
  return report;
}

/// Aggregates per-sequence reports the way the benchmark does: counts add,
/// MOTA is recomputed from the pooled counts, MOTP is match-weighted.
inline EvalReport combine(const std::vector<EvalReport>& reports) {
  EvalReport total;
  double iou_sum = 0.0;
  for (const EvalReport& r : reports) {
    total.ids += r.ids;
    total.fm += r.fm;
    total.fp += r.fp;
    total.fn += r.fn;
    total.mt += r.mt;
    total.ml += r.ml;
    total.gt_total += r.gt_total;
    total.trajectories += r.trajectories;
    total.matches += r.matches;
    iou_sum += r.motp * static_cast<double>(r.matches);
  }
  total.mota = total.gt_total == 0
                   ? 1.0
                   : 1.0 - static_cast<double>(total.fn + total.fp + total.ids) /
                               static_cast<double>(total.gt_total);
  total.motp = total.matches == 0 ? 0.0 : iou_sum / static_cast<double>(total.matches);
  total.mt_fraction = total.trajectories == 0
                          ? 0.0
                          : static_cast<double>(total.mt) / static_cast<double>(total.trajectories);
  total.ml_fraction = total.trajectories == 0
                          ? 0.0
                          : static_cast<double>(total.ml) / static_cast<double>(total.trajectories);
  return total;
}

}  // namespace occsort::metrics
