// occsort command-line tool. Subcommands:
//   track     run the tracker over detection files or MOT-layout sequences
//   eval      score a results file against ground truth
//   sweep     grid-evaluate C_O x C_T and report the MOTA spread
//   simulate  write a synthetic sequence (gt + detections) to disk
//   bench     time the tracker core on a generated detection stream
//
// Configuration precedence: command line > OCCSORT_* environment > --config
// JSON file > built-in defaults. Exit codes: 0 success, 1 usage error,
// 2 data error.

#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "occsort/occsort.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

// One tracker flag per TrackerConfig field, each with an OCCSORT_* env
// fallback. The option map lets the JSON config fill only fields the
// command line and environment left untouched.
struct TrackerFlags {
  occsort::TrackerConfig cfg;
  std::string config_path;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* cmd) {
    const auto add = [&](const std::string& name, auto& field, const std::string& help) {
      CLI::Option* opt = cmd->add_option("--" + name, field, help);
      opt->envname("OCCSORT_" + upper(name));
      options[name] = opt;
    };
    add("alpha", cfg.alpha, "confidence scale factor");
    add("conf_object", cfg.conf_object, "confidence above which an unmatched track is occluded");
    add("conf_target", cfg.conf_target, "confidence floor for coverage-based occlusion");
    add("min_coverage", cfg.min_coverage, "coverage fraction for target-target occlusion");
    add("iou_gate", cfg.iou_gate, "minimum IoU for a valid association");
    add("k_min", cfg.k_min, "minimum unmatched-track retention (frames)");
    add("k_max", cfg.k_max, "maximum unmatched-track retention (frames)");
    add("c_k", cfg.c_k, "age divisor in the retention deadline");
    add("min_hits", cfg.min_hits, "opening frames where every detection spawns a track");
    add("extension_rate", cfg.extension_rate, "per-frame box growth for re-identification");
    add("detection_score_threshold", cfg.detection_score_threshold,
        "detections below this score are dropped");
    add("require_reid_support", cfg.require_reid_support,
        "re-identification also needs a prior-frame unmatched detection");
    add("emit_occluded", cfg.emit_occluded, "write occluded estimates to the results");
    add("occluded_resets_tsu", cfg.occluded_resets_tsu,
        "occluded frames reset (vs accumulate) the removal counter");
    cmd->add_option("--config", config_path,
                    "JSON config file; flags and environment take precedence")
        ->envname("OCCSORT_CONFIG");
  }

  // Applies the config file, then validates; call once after parsing.
  occsort::TrackerConfig resolve() {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw std::runtime_error("cannot open config file " + config_path);
      json doc = json::parse(in);
      if (!doc.is_object()) throw std::runtime_error("config file must hold a JSON object");
      for (const auto& [key, value] : doc.items()) {
        const auto it = options.find(key);
        if (it == options.end()) throw std::runtime_error("config file: unknown key '" + key + "'");
        if (it->second->count() > 0) continue;
        assign(key, value);
      }
    }
    for (const std::string& warning : cfg.validate()) {
      std::cerr << "warning: " << warning << "\n";
    }
    return cfg;
  }

 private:
  void assign(const std::string& key, const json& value) {
    if (key == "alpha") cfg.alpha = value.get<double>();
    else if (key == "conf_object") cfg.conf_object = value.get<double>();
    else if (key == "conf_target") cfg.conf_target = value.get<double>();
    else if (key == "min_coverage") cfg.min_coverage = value.get<double>();
    else if (key == "iou_gate") cfg.iou_gate = value.get<double>();
    else if (key == "k_min") cfg.k_min = value.get<int>();
    else if (key == "k_max") cfg.k_max = value.get<int>();
    else if (key == "c_k") cfg.c_k = value.get<double>();
    else if (key == "min_hits") cfg.min_hits = value.get<int>();
    else if (key == "extension_rate") cfg.extension_rate = value.get<double>();
    else if (key == "detection_score_threshold") cfg.detection_score_threshold = value.get<double>();
    else if (key == "require_reid_support") cfg.require_reid_support = value.get<bool>();
    else if (key == "emit_occluded") cfg.emit_occluded = value.get<bool>();
    else if (key == "occluded_resets_tsu") cfg.occluded_resets_tsu = value.get<bool>();
  }
};

struct SequenceInput {
  std::string name;
  fs::path det_file;
  fs::path gt_file;           // empty when unavailable
  std::int64_t frame_count = 0;  // 0 = derive from detections
};

SequenceInput load_sequence_dir(const fs::path& dir) {
  SequenceInput seq;
  seq.det_file = dir / "det" / "det.txt";
  if (!fs::exists(seq.det_file)) {
    throw std::runtime_error("no detection file at " + seq.det_file.string());
  }
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();
  const fs::path info_path = dir / "seqinfo.ini";
  if (fs::exists(info_path)) {
    const occsort::io::SequenceInfo info = occsort::io::parse_seqinfo(info_path);
    if (!info.name.empty()) seq.name = info.name;
    seq.frame_count = info.seq_length;
  }
  const fs::path gt = dir / "gt" / "gt.txt";
  if (fs::exists(gt)) seq.gt_file = gt;
  return seq;
}

// A path may be a detection file, one MOT-layout sequence directory, or a
// directory of sequence directories (e.g. a train/ split).
std::vector<SequenceInput> resolve_inputs(const std::vector<std::string>& paths) {
  std::vector<SequenceInput> sequences;
  for (const std::string& raw : paths) {
    const fs::path path(raw);
    if (!fs::exists(path)) throw std::runtime_error("input path does not exist: " + raw);
    if (fs::is_regular_file(path)) {
      SequenceInput seq;
      seq.name = path.stem().string();
      seq.det_file = path;
      sequences.push_back(std::move(seq));
      continue;
    }
    if (fs::exists(path / "det" / "det.txt")) {
      sequences.push_back(load_sequence_dir(path));
      continue;
    }
    std::vector<fs::path> children;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_directory() && fs::exists(entry.path() / "det" / "det.txt")) {
        children.push_back(entry.path());
      }
    }
    if (children.empty()) {
      throw std::runtime_error("no detection files found under " + raw);
    }
    std::sort(children.begin(), children.end());
    for (const fs::path& child : children) sequences.push_back(load_sequence_dir(child));
  }
  return sequences;
}

// Runs jobs 0..count-1 on `threads` workers; rethrows the first failure.
void run_jobs(int threads, std::size_t count, const std::function<void(std::size_t)>& job) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> workers;
  const int n = std::min<int>(threads, static_cast<int>(count));
  for (int w = 0; w < n; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : workers) t.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void write_overlay(const fs::path& path, const occsort::io::FrameMap& frames) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "frame,id,left,top,width,height,center_x,center_y\n";
  char buf[200];
  for (const auto& [frame, rows] : frames) {
    for (const occsort::io::FrameRecord& r : rows) {
      const int n = std::snprintf(buf, sizeof buf, "%lld,%lld,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f\n",
                                  static_cast<long long>(frame), static_cast<long long>(r.id),
                                  r.box.left, r.box.top, r.box.width(), r.box.height(),
                                  r.box.center_x(), r.box.center_y());
      out.write(buf, n);
    }
  }
}

// --- track ---------------------------------------------------------------

struct TrackArgs {
  TrackerFlags flags;
  std::vector<std::string> inputs;
  std::string out_dir = "results";
  int threads = 1;
  bool overlay = false;
};

int cmd_track(TrackArgs& args) {
  const occsort::TrackerConfig cfg = args.flags.resolve();
  const std::vector<SequenceInput> sequences = resolve_inputs(args.inputs);
  fs::create_directories(args.out_dir);

  struct RunStats {
    std::int64_t frames = 0;
    double core_seconds = 0.0;
    double wall_seconds = 0.0;
    std::string warnings;
  };
  std::vector<RunStats> stats(sequences.size());

  run_jobs(args.threads, sequences.size(), [&](std::size_t i) {
    const SequenceInput& seq = sequences[i];
    const auto wall_start = std::chrono::steady_clock::now();
    occsort::io::ParseResult parsed = occsort::io::parse_detections(seq.det_file);
    if (!parsed.rejected.empty()) {
      std::ostringstream warn;
      for (const std::string& r : parsed.rejected) {
        warn << "warning: " << seq.det_file.string() << " " << r << "\n";
      }
      stats[i].warnings = warn.str();
    }
    occsort::SequenceResult result = occsort::run_sequence(cfg, parsed.frames, seq.frame_count);
    occsort::io::write_results(fs::path(args.out_dir) / (seq.name + ".txt"), result.outputs);
    if (args.overlay) {
      write_overlay(fs::path(args.out_dir) / (seq.name + ".overlay.csv"), result.outputs);
    }
    stats[i].frames = result.frames;
    stats[i].core_seconds = result.core_seconds;
    stats[i].wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  });

  std::printf("%-24s %8s %10s %10s %10s\n", "sequence", "frames", "core_s", "wall_s", "fps");
  std::int64_t total_frames = 0;
  double total_core = 0.0, total_wall = 0.0;
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    if (!stats[i].warnings.empty()) std::cerr << stats[i].warnings;
    const double fps = stats[i].core_seconds > 0.0
                           ? static_cast<double>(stats[i].frames) / stats[i].core_seconds
                           : 0.0;
    std::printf("%-24s %8lld %10.3f %10.3f %10.1f\n", sequences[i].name.c_str(),
                static_cast<long long>(stats[i].frames), stats[i].core_seconds,
                stats[i].wall_seconds, fps);
    total_frames += stats[i].frames;
    total_core += stats[i].core_seconds;
    total_wall += stats[i].wall_seconds;
  }
  const double total_fps = total_core > 0.0 ? static_cast<double>(total_frames) / total_core : 0.0;
  std::printf("%-24s %8lld %10.3f %10.3f %10.1f\n", "TOTAL",
              static_cast<long long>(total_frames), total_core, total_wall, total_fps);
  return 0;
}

// --- eval ----------------------------------------------------------------

occsort::io::FrameMap load_gt(const fs::path& path) {
  fs::path file = path;
  if (fs::is_directory(path)) {
    file = path / "gt" / "gt.txt";
    if (!fs::exists(file)) throw std::runtime_error("no ground truth at " + file.string());
  }
  occsort::io::ParseResult parsed = occsort::io::parse_detections(file);
  for (const std::string& r : parsed.rejected) {
    std::cerr << "warning: " << file.string() << " " << r << "\n";
  }
  return std::move(parsed.frames);
}

void print_report(const occsort::metrics::EvalReport& r) {
  std::printf("%-14s %12s\n", "metric", "value");
  std::printf("%-14s %12.4f\n", "MOTA", r.mota);
  std::printf("%-14s %12.4f\n", "MOTP", r.motp);
  std::printf("%-14s %12lld\n", "IDS", static_cast<long long>(r.ids));
  std::printf("%-14s %12lld\n", "FM", static_cast<long long>(r.fm));
  std::printf("%-14s %12lld\n", "FP", static_cast<long long>(r.fp));
  std::printf("%-14s %12lld\n", "FN", static_cast<long long>(r.fn));
  std::printf("%-14s %12lld\n", "MT", static_cast<long long>(r.mt));
  std::printf("%-14s %12lld\n", "ML", static_cast<long long>(r.ml));
  std::printf("%-14s %12.4f\n", "MT_fraction", r.mt_fraction);
  std::printf("%-14s %12.4f\n", "ML_fraction", r.ml_fraction);
  std::printf("%-14s %12lld\n", "gt_total", static_cast<long long>(r.gt_total));
  std::printf("%-14s %12lld\n", "trajectories", static_cast<long long>(r.trajectories));
  std::printf("\n");
  std::printf("mota=%.6f\n", r.mota);
  std::printf("motp=%.6f\n", r.motp);
  std::printf("ids=%lld\n", static_cast<long long>(r.ids));
  std::printf("fm=%lld\n", static_cast<long long>(r.fm));
  std::printf("fp=%lld\n", static_cast<long long>(r.fp));
  std::printf("fn=%lld\n", static_cast<long long>(r.fn));
  std::printf("mt=%lld\n", static_cast<long long>(r.mt));
  std::printf("ml=%lld\n", static_cast<long long>(r.ml));
  std::printf("mt_fraction=%.6f\n", r.mt_fraction);
  std::printf("ml_fraction=%.6f\n", r.ml_fraction);
  std::printf("gt_total=%lld\n", static_cast<long long>(r.gt_total));
  std::printf("trajectories=%lld\n", static_cast<long long>(r.trajectories));
}

struct EvalArgs {
  std::string gt_path;
  std::string results_path;
  double gate = 0.5;
};

int cmd_eval(const EvalArgs& args) {
  const occsort::io::FrameMap gt = load_gt(args.gt_path);
  occsort::io::ParseResult results = occsort::io::parse_detections(fs::path(args.results_path));
  for (const std::string& r : results.rejected) {
    std::cerr << "warning: " << args.results_path << " " << r << "\n";
  }
  print_report(occsort::metrics::evaluate(gt, results.frames, args.gate));
  return 0;
}

// --- sweep ---------------------------------------------------------------

// "a:b:step" or a comma-separated list; both inclusive of the end point.
std::vector<double> parse_range(const std::string& text, const std::string& flag) {
  std::vector<double> values;
  const auto parse_one = [&](const std::string& token) {
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    } catch (const std::exception&) {
      throw UsageError(flag + ": cannot parse '" + token + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw UsageError(flag + ": range must be start:stop:step");
    const double start = parse_one(parts[0]);
    const double stop = parse_one(parts[1]);
    const double step = parse_one(parts[2]);
    if (step <= 0.0) throw UsageError(flag + ": step must be positive");
    for (double v = start; v <= stop + 1e-9; v += step) values.push_back(v);
  } else {
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) values.push_back(parse_one(part));
    }
  }
  if (values.empty()) throw UsageError(flag + ": empty range");
  return values;
}

struct SweepArgs {
  TrackerFlags flags;
  std::vector<std::string> inputs;
  std::string co_range;
  std::string ct_range;
  std::string out_file;
  double gate = 0.5;
  int threads = 1;
};

int cmd_sweep(SweepArgs& args) {
  const occsort::TrackerConfig base = args.flags.resolve();
  const std::vector<double> co_values = parse_range(args.co_range, "--co");
  const std::vector<double> ct_values = parse_range(args.ct_range, "--ct");

  std::vector<SequenceInput> sequences = resolve_inputs(args.inputs);
  struct LoadedSequence {
    occsort::io::FrameMap detections;
    occsort::io::FrameMap gt;
    std::int64_t frame_count = 0;
  };
  std::vector<LoadedSequence> loaded;
  for (const SequenceInput& seq : sequences) {
    if (seq.gt_file.empty()) {
      throw std::runtime_error("sweep needs ground truth; none found for " + seq.name);
    }
    LoadedSequence l;
    l.detections = occsort::io::parse_detections(seq.det_file).frames;
    l.gt = load_gt(seq.gt_file);
    l.frame_count = seq.frame_count;
    loaded.push_back(std::move(l));
  }

  struct GridPoint {
    double co = 0.0, ct = 0.0;
    occsort::metrics::EvalReport report;
  };
  std::vector<GridPoint> grid;
  for (double co : co_values) {
    for (double ct : ct_values) grid.push_back({co, ct, {}});
  }

  run_jobs(args.threads, grid.size(), [&](std::size_t i) {
    occsort::TrackerConfig cfg = base;
    cfg.conf_object = grid[i].co;
    cfg.conf_target = grid[i].ct;
    std::vector<occsort::metrics::EvalReport> reports;
    for (const LoadedSequence& seq : loaded) {
      const occsort::SequenceResult run =
          occsort::run_sequence(cfg, seq.detections, seq.frame_count);
      reports.push_back(occsort::metrics::evaluate(seq.gt, run.outputs, args.gate));
    }
    grid[i].report = occsort::metrics::combine(reports);
  });

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.out_file.empty()) {
    file.open(args.out_file);
    if (!file) throw std::runtime_error("cannot open " + args.out_file + " for writing");
    out = &file;
  }
  *out << "co,ct,mota,ids,fm\n";
  char buf[160];
  for (const GridPoint& p : grid) {
    const int n = std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6f,%lld,%lld\n", p.co, p.ct,
                                p.report.mota, static_cast<long long>(p.report.ids),
                                static_cast<long long>(p.report.fm));
    out->write(buf, n);
  }

  const auto minmax = [&](auto getter) {
    double lo = getter(grid.front()), hi = lo;
    for (const GridPoint& p : grid) {
      lo = std::min(lo, getter(p));
      hi = std::max(hi, getter(p));
    }
    return std::pair<double, double>(lo, hi);
  };
  const auto [mota_lo, mota_hi] = minmax([](const GridPoint& p) { return p.report.mota; });
  const auto [ids_lo, ids_hi] =
      minmax([](const GridPoint& p) { return static_cast<double>(p.report.ids); });
  const auto [fm_lo, fm_hi] =
      minmax([](const GridPoint& p) { return static_cast<double>(p.report.fm); });
  std::printf("# grid points: %zu\n", grid.size());
  std::printf("# mota min=%.6f max=%.6f spread=%.6f\n", mota_lo, mota_hi, mota_hi - mota_lo);
  std::printf("# ids  min=%lld max=%lld\n", static_cast<long long>(ids_lo),
              static_cast<long long>(ids_hi));
  std::printf("# fm   min=%lld max=%lld\n", static_cast<long long>(fm_lo),
              static_cast<long long>(fm_hi));
  return 0;
}

// --- simulate ------------------------------------------------------------

occsort::sim::ScenarioSpec parse_scenario_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario spec " + path.string());
  json doc = json::parse(in);
  occsort::sim::ScenarioSpec spec;
  spec.seed = doc.value("seed", 0ULL);
  spec.frame_count = doc.at("frame_count").get<int>();
  for (const json& actor : doc.at("actors")) {
    occsort::sim::Actor a;
    a.entry = actor.at("entry").get<int>();
    a.exit = actor.at("exit").get<int>();
    const json& box = actor.at("box");
    if (!box.is_array() || box.size() != 4) {
      throw std::runtime_error("scenario: actor box must be [left, top, right, bottom]");
    }
    a.start = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
    a.vx = actor.value("vx", 0.0);
    a.vy = actor.value("vy", 0.0);
    spec.actors.push_back(a);
  }
  if (doc.contains("detector")) {
    const json& d = doc["detector"];
    occsort::sim::DetectorModel& m = spec.detector;
    m.miss_probability = d.value("miss_probability", m.miss_probability);
    m.jitter_sigma = d.value("jitter_sigma", m.jitter_sigma);
    m.score_min = d.value("score_min", m.score_min);
    m.score_max = d.value("score_max", m.score_max);
    m.coverage_threshold = d.value("coverage_threshold", m.coverage_threshold);
    const std::string mode = d.value("occlusion", std::string("none"));
    if (mode == "none") m.occlusion = occsort::sim::OcclusionMode::None;
    else if (mode == "suppress") m.occlusion = occsort::sim::OcclusionMode::Suppress;
    else if (mode == "shrink") m.occlusion = occsort::sim::OcclusionMode::Shrink;
    else throw std::runtime_error("scenario: occlusion must be none, suppress or shrink");
  }
  return spec;
}

void write_scenario(const fs::path& dir, const occsort::sim::ScenarioSpec& spec) {
  const occsort::sim::ScenarioOutput out = occsort::sim::generate(spec);
  fs::create_directories(dir / "det");
  fs::create_directories(dir / "gt");

  std::ofstream det(dir / "det" / "det.txt");
  if (!det) throw std::runtime_error("cannot write " + (dir / "det" / "det.txt").string());
  char buf[200];
  for (const auto& [frame, rows] : out.detections) {
    for (const occsort::io::FrameRecord& r : rows) {
      const int n = std::snprintf(buf, sizeof buf, "%lld,-1,%.2f,%.2f,%.2f,%.2f,%.6f,-1,-1,-1\n",
                                  static_cast<long long>(frame), r.box.left, r.box.top,
                                  r.box.width(), r.box.height(), r.score);
      det.write(buf, n);
    }
  }

  std::ofstream gt(dir / "gt" / "gt.txt");
  if (!gt) throw std::runtime_error("cannot write " + (dir / "gt" / "gt.txt").string());
  for (const auto& [frame, rows] : out.ground_truth) {
    for (const occsort::io::FrameRecord& r : rows) {
      const int considered = r.score != 0.0 ? 1 : 0;
      const int n = std::snprintf(buf, sizeof buf, "%lld,%lld,%.2f,%.2f,%.2f,%.2f,%d,1,%d\n",
                                  static_cast<long long>(frame), static_cast<long long>(r.id),
                                  r.box.left, r.box.top, r.box.width(), r.box.height(), considered,
                                  considered);
      gt.write(buf, n);
    }
  }

  std::ofstream info(dir / "seqinfo.ini");
  if (!info) throw std::runtime_error("cannot write " + (dir / "seqinfo.ini").string());
  std::string name = dir.filename().string();
  if (name.empty()) name = "synthetic";
  info << "[Sequence]\n"
       << "name=" << name << "\n"
       << "imDir=img1\n"
       << "frameRate=30\n"
       << "seqLength=" << spec.frame_count << "\n"
       << "imWidth=1920\n"
       << "imHeight=1080\n"
       << "imExt=.jpg\n";
}

struct SimulateArgs {
  std::string spec_path;
  std::string preset;
  std::string out_dir;
  std::int64_t seed = -1;
};

int cmd_simulate(const SimulateArgs& args) {
  if (args.spec_path.empty() == args.preset.empty()) {
    throw UsageError("simulate: give exactly one of --spec or --preset");
  }
  occsort::sim::ScenarioSpec spec;
  if (!args.spec_path.empty()) {
    spec = parse_scenario_file(args.spec_path);
  } else if (args.preset == "crossing") {
    spec = occsort::sim::crossing_scenario();
  } else if (args.preset == "staggered") {
    spec = occsort::sim::staggered_scenario(7);
  } else {
    throw UsageError("simulate: unknown preset '" + args.preset + "' (crossing, staggered)");
  }
  if (args.seed >= 0) spec.seed = static_cast<std::uint64_t>(args.seed);
  write_scenario(args.out_dir, spec);
  std::printf("wrote %s (%d frames, %zu actors)\n", args.out_dir.c_str(), spec.frame_count,
              spec.actors.size());
  return 0;
}

// --- bench ---------------------------------------------------------------

struct BenchArgs {
  TrackerFlags flags;
  int frames = 1000;
  int actors = 50;
  std::int64_t seed = 7;
};

int cmd_bench(BenchArgs& args) {
  const occsort::TrackerConfig cfg = args.flags.resolve();
  occsort::sim::ScenarioSpec spec;
  spec.seed = static_cast<std::uint64_t>(args.seed);
  spec.frame_count = args.frames;
  for (int i = 0; i < args.actors; ++i) {
    const double x = 150.0 * (i % 10);
    const double y = 200.0 * (i / 10);
    const double vx = ((i * 7) % 5) - 2.0;
    const double vy = ((i * 3) % 5) - 2.0;
    spec.actors.push_back(
        {1, spec.frame_count, {x, y, x + 40.0 + i % 7, y + 60.0 + i % 9}, vx, vy});
  }
  spec.detector.miss_probability = 0.02;
  spec.detector.jitter_sigma = 0.5;
  spec.detector.score_min = 0.5;
  const occsort::sim::ScenarioOutput data = occsort::sim::generate(spec);

  std::int64_t detections = 0;
  for (const auto& [_, rows] : data.detections) detections += static_cast<std::int64_t>(rows.size());

  const occsort::SequenceResult result = occsort::run_sequence(cfg, data.detections, spec.frame_count);
  const double fps = result.core_seconds > 0.0
                         ? static_cast<double>(result.frames) / result.core_seconds
                         : 0.0;
  std::printf("frames=%lld\n", static_cast<long long>(result.frames));
  std::printf("detections=%lld\n", static_cast<long long>(detections));
  std::printf("core_seconds=%.4f\n", result.core_seconds);
  std::printf("fps=%.1f\n", fps);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"occsort: online multi-object tracking with occlusion handling"};
  app.require_subcommand(1);

  TrackArgs track_args;
  CLI::App* track = app.add_subcommand("track", "run the tracker over detection inputs");
  track->add_option("inputs", track_args.inputs,
                    "detection files, sequence directories, or directories of sequences")
      ->required();
  track->add_option("-o,--out", track_args.out_dir, "output directory for result files");
  track->add_option("--threads", track_args.threads, "parallel sequences")
      ->check(CLI::Range(1, 256));
  track->add_flag("--overlay", track_args.overlay, "also write per-frame overlay CSVs");
  track_args.flags.attach(track);

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "score results against ground truth");
  eval->add_option("gt", eval_args.gt_path, "ground-truth file or sequence directory")->required();
  eval->add_option("results", eval_args.results_path, "results file")->required();
  eval->add_option("--gate", eval_args.gate, "IoU threshold for a valid match");

  SweepArgs sweep_args;
  CLI::App* sweep = app.add_subcommand("sweep", "grid-evaluate conf_object x conf_target");
  sweep->add_option("inputs", sweep_args.inputs, "sequence directories with ground truth")
      ->required();
  sweep->add_option("--co", sweep_args.co_range, "conf_object values: start:stop:step or list")
      ->required();
  sweep->add_option("--ct", sweep_args.ct_range, "conf_target values: start:stop:step or list")
      ->required();
  sweep->add_option("-o,--out", sweep_args.out_file, "write the CSV grid here instead of stdout");
  sweep->add_option("--gate", sweep_args.gate, "IoU threshold for evaluation");
  sweep->add_option("--threads", sweep_args.threads, "parallel grid points")
      ->check(CLI::Range(1, 256));
  sweep_args.flags.attach(sweep);

  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "write a synthetic sequence to disk");
  simulate->add_option("--spec", sim_args.spec_path, "scenario spec JSON file");
  simulate->add_option("--preset", sim_args.preset, "built-in scenario: crossing or staggered");
  simulate->add_option("-o,--out", sim_args.out_dir, "output sequence directory")->required();
  simulate->add_option("--seed", sim_args.seed, "override the scenario seed");

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "time the tracker core on a generated stream");
  bench->add_option("--frames", bench_args.frames, "frame count")->check(CLI::Range(1, 1000000));
  bench->add_option("--actors", bench_args.actors, "actor count")->check(CLI::Range(1, 10000));
  bench->add_option("--seed", bench_args.seed, "stream seed");
  bench_args.flags.attach(bench);

  try {
    app.parse(argc, argv);
    if (*track) return cmd_track(track_args);
    if (*eval) return cmd_eval(eval_args);
    if (*sweep) return cmd_sweep(sweep_args);
    if (*simulate) return cmd_simulate(sim_args);
    if (*bench) return cmd_bench(bench_args);
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
