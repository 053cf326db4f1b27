// mot_io.hpp: readers and writers for the MOTChallenge text formats.
// Detection/ground-truth files are CSV with a frame index, a track id,
// a left-top-width-height box and a score (or considered flag); sequence
// metadata lives in an INI file.

#pragma once

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "occsort/geometry.hpp"

namespace occsort::io {

struct FrameRecord {
  std::int64_t id = -1;  // -1 for anonymous detections
  BoundingBox box;
  double score = 0.0;
  double world_x = -1.0;  // pass-through columns, unused by the tracker
  double world_y = -1.0;
  double world_z = -1.0;
};

/// Frame index -> records for that frame. Ordered so iteration replays the
/// sequence in frame order.
using FrameMap = std::map<std::int64_t, std::vector<FrameRecord>>;

struct ParseResult {
  FrameMap frames;
  std::vector<std::string> rejected;  // "line N: reason" for each bad row
};

namespace detail {

inline bool parse_double(std::string_view text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

inline bool parse_int(std::string_view text, std::int64_t& out) {
  double value = 0.0;
  if (!parse_double(text, value)) return false;
  out = static_cast<std::int64_t>(value);
  return static_cast<double>(out) == value;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace detail

/// Parses `frame,id,left,top,width,height,score[,x,y,z]` rows. Structurally
/// malformed rows (too few fields, non-numeric values) throw with the line
/// number; rows failing validation (nonpositive frame or box extent) are
/// skipped and reported in `rejected`.
inline ParseResult parse_detections(std::istream& in) {
  ParseResult result;
  std::string line;
  std::int64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = detail::trim(line);
    if (text.empty()) continue;
    const auto fail = [&](const char* reason) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + reason);
    };

    const auto fields = detail::split_csv(text);
    if (fields.size() < 7) fail("expected at least 7 comma-separated fields");
    std::int64_t frame = 0, id = 0;
    double l = 0, t = 0, w = 0, h = 0, score = 0;
    if (!detail::parse_int(detail::trim(fields[0]), frame)) fail("bad frame field");
    if (!detail::parse_int(detail::trim(fields[1]), id)) fail("bad id field");
    if (!detail::parse_double(detail::trim(fields[2]), l)) fail("bad left field");
    if (!detail::parse_double(detail::trim(fields[3]), t)) fail("bad top field");
    if (!detail::parse_double(detail::trim(fields[4]), w)) fail("bad width field");
    if (!detail::parse_double(detail::trim(fields[5]), h)) fail("bad height field");
    if (!detail::parse_double(detail::trim(fields[6]), score)) fail("bad score field");
    double world[3] = {-1.0, -1.0, -1.0};
    for (std::size_t k = 7; k < fields.size() && k < 10; ++k) {
      if (!detail::parse_double(detail::trim(fields[k]), world[k - 7])) fail("bad numeric field");
    }

    if (frame <= 0) {
      result.rejected.push_back("line " + std::to_string(line_no) + ": frame must be positive");
      continue;
    }
    if (w <= 0.0 || h <= 0.0) {
      result.rejected.push_back("line " + std::to_string(line_no) + ": nonpositive box extent");
      continue;
    }
    result.frames[frame].push_back(
        {id, BoundingBox::from_ltwh(l, t, w, h), score, world[0], world[1], world[2]});
  }
  return result;
}

inline ParseResult parse_detections(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_detections(in);
}

/// Keeps records with score >= threshold (inclusive, so a threshold equal to
/// a detector's minimum score keeps everything).
inline FrameMap threshold_detections(const FrameMap& frames, double threshold) {
  FrameMap kept;
  for (const auto& [frame, records] : frames) {
    for (const FrameRecord& r : records) {
      if (r.score >= threshold) kept[frame].push_back(r);
    }
  }
  return kept;
}

/// Writes tracker output rows `frame,id,left,top,width,height,1,-1,-1,-1`
/// with two-decimal box coordinates, sorted by frame then id.
inline void write_results(std::ostream& out, const FrameMap& frames) {
  char buf[160];
  for (const auto& [frame, records] : frames) {
    std::vector<const FrameRecord*> sorted;
    sorted.reserve(records.size());
    for (const FrameRecord& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(),
              [](const FrameRecord* a, const FrameRecord* b) { return a->id < b->id; });
    for (const FrameRecord* r : sorted) {
      const int n = std::snprintf(buf, sizeof buf, "%lld,%lld,%.2f,%.2f,%.2f,%.2f,1,-1,-1,-1\n",
                                  static_cast<long long>(frame), static_cast<long long>(r->id),
                                  r->box.left, r->box.top, r->box.width(), r->box.height());
      out.write(buf, n);
    }
  }
}

inline void write_results(const std::filesystem::path& path, const FrameMap& frames) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_results(out, frames);
}

struct SequenceInfo {
  std::string name;
  std::int64_t seq_length = 0;
  double frame_rate = 0.0;
  int im_width = 0;
  int im_height = 0;
};

/// Parses the `[Sequence]` INI block of a seqinfo.ini. Unknown keys are
/// ignored; a missing name or nonpositive seqLength throws.
inline SequenceInfo parse_seqinfo(std::istream& in) {
  SequenceInfo info;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view text = detail::trim(line);
    if (text.empty() || text.front() == '[' || text.front() == ';' || text.front() == '#') {
      continue;
    }
    const std::size_t eq = text.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string_view key = detail::trim(text.substr(0, eq));
    const std::string_view value = detail::trim(text.substr(eq + 1));
    if (key == "name") {
      info.name = std::string(value);
    } else if (key == "seqLength") {
      if (!detail::parse_int(value, info.seq_length)) {
        throw std::runtime_error("seqinfo: bad seqLength value");
      }
    } else if (key == "frameRate") {
      if (!detail::parse_double(value, info.frame_rate)) {
        throw std::runtime_error("seqinfo: bad frameRate value");
      }
    } else if (key == "imWidth") {
      std::int64_t v = 0;
      if (!detail::parse_int(value, v)) throw std::runtime_error("seqinfo: bad imWidth value");
      info.im_width = static_cast<int>(v);
    } else if (key == "imHeight") {
      std::int64_t v = 0;
      if (!detail::parse_int(value, v)) throw std::runtime_error("seqinfo: bad imHeight value");
      info.im_height = static_cast<int>(v);
    }
  }
  if (info.name.empty()) throw std::runtime_error("seqinfo: missing name");
  if (info.seq_length <= 0) throw std::runtime_error("seqinfo: seqLength must be positive");
  return info;
}

inline SequenceInfo parse_seqinfo(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_seqinfo(in);
}

}  // namespace occsort::io
