#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "labelprop/augment.hpp"
#include "labelprop/beams.hpp"
#include "labelprop/eval/report.hpp"
#include "labelprop/io/config.hpp"
#include "labelprop/io/data_dir.hpp"
#include "labelprop/io/dataset.hpp"
#include "labelprop/io/label_io.hpp"
#include "labelprop/io/pose_io.hpp"
#include "labelprop/io/prediction_store.hpp"
#include "labelprop/io/scan_io.hpp"
#include "labelprop/pipeline.hpp"
#include "labelprop/synthetic.hpp"

namespace fs = std::filesystem;
using namespace labelprop;

namespace {

struct SequencePaths {
  std::string scans;
  std::string labels;
  std::string poses;
  std::string calib;
};

// KITTI odometry layout under a dataset root; explicit paths win.
SequencePaths resolve_sequence(const std::string& root, const std::string& seq,
                               SequencePaths overrides) {
  SequencePaths p = std::move(overrides);
  if (!root.empty() && !seq.empty()) {
    const fs::path base = fs::path(root) / "sequences" / seq;
    if (p.scans.empty()) p.scans = (base / "velodyne").string();
    if (p.labels.empty() && fs::exists(base / "labels"))
      p.labels = (base / "labels").string();
    if (p.poses.empty()) p.poses = (base / "poses.txt").string();
    if (p.calib.empty() && fs::exists(base / "calib.txt"))
      p.calib = (base / "calib.txt").string();
  }
  if (p.scans.empty())
    throw std::runtime_error("no scan directory (use --scans or --dataset-root)");
  return p;
}

std::vector<std::pair<std::int64_t, fs::path>> list_frames(
    const std::string& dir, const std::string& extension) {
  std::vector<std::pair<std::int64_t, fs::path>> frames;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != extension)
      continue;
    frames.emplace_back(std::stoll(entry.path().stem().string()), entry.path());
  }
  std::sort(frames.begin(), frames.end());
  return frames;
}

std::string frame_name(std::int64_t index, const char* extension) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06lld%s", static_cast<long long>(index),
                extension);
  return buf;
}

io::DatasetLabels load_labels_config(const std::string& spec) {
  if (fs::exists(spec)) return io::DatasetLabels::load(spec);
  return io::DatasetLabels::load(io::dataset_labels_path(spec));
}

void print_timing(const char* stage, double seconds) {
  std::printf("  %-12s %8.1f ms\n", stage, seconds * 1e3);
}

struct TimingTotals {
  FrameTiming sum;
  std::size_t frames = 0;

  void add(const FrameTiming& t) {
    sum.accumulate_s += t.accumulate_s;
    sum.propagate_s += t.propagate_s;
    sum.cluster_s += t.cluster_s;
    sum.segment_s += t.segment_s;
    sum.fuse_s += t.fuse_s;
    sum.total_s += t.total_s;
    ++frames;
  }

  void print() const {
    if (frames == 0) return;
    std::printf("per-stage wall time, averaged over %zu frames:\n", frames);
    const double n = static_cast<double>(frames);
    print_timing("accumulate", sum.accumulate_s / n);
    print_timing("propagate", sum.propagate_s / n);
    print_timing("cluster", sum.cluster_s / n);
    print_timing("segment", sum.segment_s / n);
    print_timing("fuse", sum.fuse_s / n);
    print_timing("total", sum.total_s / n);
    std::printf("throughput: %.2f frames/s\n", n / sum.total_s);
  }
};

// Shared frame iteration for the pipeline and propagate subcommands.
struct SequenceRun {
  SequencePaths paths;
  std::vector<std::pair<std::int64_t, fs::path>> scans;
  std::vector<Pose> poses;

  SequenceRun(const std::string& root, const std::string& seq,
              SequencePaths overrides, int start, int count) {
    paths = resolve_sequence(root, seq, std::move(overrides));
    scans = list_frames(paths.scans, ".bin");
    if (scans.empty()) throw std::runtime_error("no .bin scans in " + paths.scans);
    if (start > 0)
      scans.erase(scans.begin(),
                  scans.begin() + std::min<std::size_t>(start, scans.size()));
    if (count >= 0 && static_cast<std::size_t>(count) < scans.size())
      scans.resize(count);

    std::unique_ptr<io::Calibration> calib;
    if (!paths.calib.empty())
      calib = std::make_unique<io::Calibration>(io::read_calibration(paths.calib));
    poses = io::read_poses(paths.poses, calib.get());
  }

  Frame load_frame(std::size_t i, bool keep_reflectivity) const {
    const auto& [index, path] = scans[i];
    if (index < 0 || static_cast<std::size_t>(index) >= poses.size())
      throw std::runtime_error("no pose for frame " + std::to_string(index));
    Frame frame;
    frame.cloud = io::read_scan(path.string());
    if (!keep_reflectivity) frame.cloud.reflectivity.clear();
    frame.pose = poses[static_cast<std::size_t>(index)];
    frame.index = index;
    return frame;
  }

  std::vector<std::int32_t> load_truth(std::int64_t index,
                                       const io::DatasetLabels& ds) const {
    if (paths.labels.empty())
      throw std::runtime_error("this run needs ground-truth labels "
                               "(--labels or a labels/ directory)");
    const auto path = fs::path(paths.labels) / frame_name(index, ".label");
    return ds.to_train(io::read_labels(path.string()).labels);
  }
};

int run_pipeline(const std::string& root, const std::string& seq,
                 SequencePaths overrides, const io::PipelineConfig& config,
                 const std::string& labels_config, const std::string& predictions,
                 const std::string& output, int start, int count,
                 bool write_confidence) {
  const io::DatasetLabels ds = load_labels_config(labels_config);
  SequenceRun run(root, seq, std::move(overrides), start, count);

  std::shared_ptr<Segmenter> segmenter;
  std::map<std::int64_t, std::vector<std::int32_t>> truth_cache;
  if (config.backend == "oracle") {
    auto lookup = [&run, &ds, &truth_cache](const PointOrigin& o) -> std::int32_t {
      auto it = truth_cache.find(o.frame);
      if (it == truth_cache.end())
        it = truth_cache.emplace(o.frame, run.load_truth(o.frame, ds)).first;
      return o.point < it->second.size() ? it->second[o.point] : kNoLabel;
    };
    segmenter = std::make_shared<OracleSegmenter>(ds.schema.num_labels, lookup,
                                                  config.oracle_noise, config.seed);
  } else if (config.backend == "files") {
    if (predictions.empty())
      throw std::runtime_error("backend 'files' needs --predictions");
    // Stores hold raw dataset ids, the same encoding the pipeline writes.
    segmenter = std::make_shared<FileSegmenter>(
        ds.schema.num_labels,
        std::make_shared<io::DirectoryPredictionSource>(
            predictions, seq,
            [ds](std::int32_t raw) { return ds.to_train(raw); }));
  } else if (config.backend == "constant") {
    segmenter = std::make_shared<ConstantSegmenter>(ds.schema.num_labels,
                                                    config.constant_label);
  } else {
    throw std::runtime_error("unknown backend '" + config.backend + "'");
  }

  if (!output.empty()) fs::create_directories(output);
  SequencePipeline pipeline(config.params(ds.schema), segmenter);
  TimingTotals totals;
  for (std::size_t i = 0; i < run.scans.size(); ++i) {
    const Frame frame = run.load_frame(i, config.use_reflectivity);
    const FrameResult result = pipeline.process_frame(frame);
    totals.add(result.timing);
    while (truth_cache.size() > 64) truth_cache.erase(truth_cache.begin());
    if (output.empty()) continue;
    std::vector<std::int32_t> raw(result.final_state.size());
    for (std::size_t p = 0; p < raw.size(); ++p)
      raw[p] = ds.to_raw(result.final_state.labels[p]);
    io::write_labels((fs::path(output) / frame_name(frame.index, ".label")).string(),
                     raw);
    if (write_confidence)
      io::write_confidence(
          (fs::path(output) / frame_name(frame.index, ".conf")).string(),
          result.final_state.confidence);
  }
  totals.print();
  return 0;
}

int run_propagate(const std::string& root, const std::string& seq,
                  SequencePaths overrides, const io::PipelineConfig& config,
                  const std::string& labels_config, int start, int count) {
  const io::DatasetLabels ds = load_labels_config(labels_config);
  SequenceRun run(root, seq, std::move(overrides), start, count);

  const PipelineParams params = config.params(ds.schema);
  GroundTruthPropagationRun gt_run(params.accumulation, params.propagation,
                                   ds.schema);
  for (std::size_t i = 0; i < run.scans.size(); ++i) {
    const Frame frame = run.load_frame(i, false);
    const auto truth = run.load_truth(frame.index, ds);
    gt_run.process_frame(frame, truth);
  }
  const PropagationStats& s = gt_run.total();
  std::printf("frames:                %zu\n", run.scans.size());
  std::printf("static points:         %zu\n", s.static_total);
  std::printf("static coverage:       %.1f%%\n", 100.0 * s.static_coverage());
  std::printf("static accuracy:       %.1f%%\n", 100.0 * s.static_accuracy());
  std::printf("dynamic points:        %zu\n", s.dynamic_total);
  std::printf("dynamic mislabel rate: %.1f%%\n",
              100.0 * s.dynamic_mislabel_rate());
  return 0;
}

int run_evaluate(const std::string& truth_dir, const std::string& pred_dir,
                 const std::string& mapping_spec, const std::string& truth_side,
                 const std::string& pred_side, const std::string& convention,
                 const std::string& csv_out) {
  const eval::LabelMapping mapping =
      fs::exists(mapping_spec)
          ? eval::LabelMapping::load(mapping_spec)
          : eval::LabelMapping::load(io::mapping_path(mapping_spec));
  auto side_of = [&](const std::string& which) -> const eval::MappingSide& {
    if (which == "source") return mapping.source;
    if (which == "target") return mapping.target;
    throw std::runtime_error("side must be 'source' or 'target'");
  };
  const auto& t_side = side_of(truth_side);
  const auto& p_side = side_of(pred_side.empty() ? truth_side : pred_side);

  eval::ConfusionMatrix matrix(mapping.num_coarse());
  std::size_t files = 0;
  for (const auto& [index, truth_path] : list_frames(truth_dir, ".label")) {
    const fs::path pred_path = fs::path(pred_dir) / truth_path.filename();
    if (!fs::exists(pred_path))
      throw std::runtime_error("missing prediction file " + pred_path.string());
    const auto truth =
        eval::remap(io::read_labels(truth_path.string()).labels, t_side);
    const auto pred =
        eval::remap(io::read_labels(pred_path.string()).labels, p_side);
    if (truth.size() != pred.size())
      throw std::runtime_error(pred_path.string() + ": point count mismatch");
    for (std::size_t i = 0; i < truth.size(); ++i) matrix.add(truth[i], pred[i]);
    ++files;
  }
  if (files == 0) throw std::runtime_error("no .label files in " + truth_dir);

  const auto rule = convention == "exclude" ? eval::ZeroUnionRule::Exclude
                                            : eval::ZeroUnionRule::CountAsZero;
  const auto result = eval::compute_iou(matrix, rule);
  std::printf("%s", eval::report_text(result, mapping.coarse_names).c_str());
  std::printf("evaluated %zu frames, %lld points (%lld ignored)\n", files,
              static_cast<long long>(matrix.total()),
              static_cast<long long>(matrix.ignored()));
  if (!csv_out.empty()) {
    std::ofstream out(csv_out);
    out << eval::report_csv(result, mapping.coarse_names);
  }
  return 0;
}

int run_decimate(const std::string& scans, const std::string& output,
                 int keep_every, int beams, const std::string& labels,
                 const std::string& labels_output) {
  fs::create_directories(output);
  if (!labels.empty()) fs::create_directories(labels_output);
  std::size_t done = 0;
  for (const auto& [index, path] : list_frames(scans, ".bin")) {
    Frame frame;
    frame.cloud = io::read_scan(path.string());
    frame.index = index;
    const auto fiber = recover_beams(frame.cloud, beams);
    const auto kept = decimation_keep_indices(fiber, keep_every);

    PointCloud out;
    out.reserve(kept.size());
    for (const auto i : kept) out.append_from(frame.cloud, i);
    io::write_scan((fs::path(output) / path.filename()).string(), out);

    if (!labels.empty()) {
      const auto label_path = fs::path(labels) / frame_name(index, ".label");
      const auto full = io::read_labels(label_path.string());
      if (full.labels.size() != frame.cloud.size())
        throw std::runtime_error(label_path.string() +
                                 ": label/scan size mismatch");
      std::vector<std::int32_t> lbl;
      std::vector<std::uint16_t> inst;
      for (const auto i : kept) {
        lbl.push_back(full.labels[i]);
        inst.push_back(full.instances[i]);
      }
      io::write_labels(
          (fs::path(labels_output) / frame_name(index, ".label")).string(), lbl,
          &inst);
    }
    ++done;
  }
  std::printf("decimated %zu scans (kept 1 of %d fibers)\n", done, keep_every);
  return 0;
}

int run_bench(int frames, double extent, double step, double sample_probability,
              const io::PipelineConfig& config) {
  SyntheticSceneParams sp;
  sp.num_frames = frames;
  sp.ground_extent_x = extent;
  sp.ground_extent_y = extent / 2.0;
  sp.ground_step = step;
  sp.wall_step = step;
  sp.sample_probability = sample_probability;
  sp.seed = config.seed;
  const SyntheticScene scene = make_synthetic_scene(sp);

  auto segmenter = std::make_shared<ConstantSegmenter>(scene.schema.num_labels, 1);
  SequencePipeline pipeline(config.params(scene.schema), segmenter);

  TimingTotals totals;
  std::size_t max_acc = 0, max_current = 0;
  for (const auto& frame : scene.frames) {
    const auto result = pipeline.process_frame(frame);
    totals.add(result.timing);
    max_acc = std::max(max_acc, result.timing.accumulated_points);
    max_current = std::max(max_current, frame.cloud.size());
  }
  std::printf("synthetic scene: %d frames, up to %zu points per frame, "
              "up to %zu accumulated points\n",
              frames, max_current, max_acc);
  totals.print();
  return 0;
}

int run_augment(const std::string& input, const std::string& output,
                const AugmentSpec& spec, std::uint64_t seed) {
  const PointCloud cloud = io::read_scan(input);
  io::write_scan(output, augment(cloud, spec, seed));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequence-based LiDAR semantic segmentation pipeline"};
  app.require_subcommand(1);
  app.fallthrough();  // global --config/--preset/--seed after subcommands

  std::string config_file;
  std::string preset;
  std::uint64_t seed = 1;
  bool seed_given = false;
  app.add_option("--config", config_file, "key = value configuration file");
  app.add_option("--preset", preset,
                 "parameter preset: semantickitti (N_c=10, stride=1) or "
                 "nuscenes (N_c=20, stride=5)");
  app.add_option("--seed", seed, "random seed override")
      ->each([&](const std::string&) { seed_given = true; });

  std::string root;
  if (const char* env = std::getenv("LABELPROP_DATASET_ROOT")) root = env;
  std::string sequence;
  SequencePaths paths;
  std::string labels_config = "semantickitti";
  int start = 0, count = -1;

  auto add_sequence_options = [&](CLI::App* cmd) {
    cmd->add_option("--dataset-root", root,
                    "dataset root with sequences/<seq>/ (or env "
                    "LABELPROP_DATASET_ROOT)");
    cmd->add_option("--sequence", sequence, "sequence name, e.g. 08");
    cmd->add_option("--scans", paths.scans, "scan directory override");
    cmd->add_option("--labels", paths.labels, "ground-truth label directory");
    cmd->add_option("--poses", paths.poses, "pose file override");
    cmd->add_option("--calib", paths.calib, "calibration file override");
    cmd->add_option("--labels-config", labels_config,
                    "dataset label config name or path");
    cmd->add_option("--start", start, "first frame offset");
    cmd->add_option("--frames", count, "number of frames to process");
  };

  auto* pipeline_cmd =
      app.add_subcommand("pipeline", "run the full pipeline over a sequence");
  std::string backend = "oracle", predictions, output;
  double oracle_noise = 0.0;
  int constant_label = 0;
  bool write_confidence = false;
  add_sequence_options(pipeline_cmd);
  pipeline_cmd->add_option("--backend", backend, "oracle | files | constant");
  pipeline_cmd->add_option("--predictions", predictions,
                           "prediction store for the files backend");
  pipeline_cmd->add_option("--oracle-noise", oracle_noise,
                           "oracle label flip probability");
  pipeline_cmd->add_option("--constant-label", constant_label,
                           "class id for the constant backend");
  pipeline_cmd->add_option("--output", output, "directory for .label output");
  pipeline_cmd->add_flag("--write-confidence", write_confidence,
                         "also write .conf sidecars");

  auto* propagate_cmd = app.add_subcommand(
      "propagate", "ground-truth-fed propagation statistics over a sequence");
  add_sequence_options(propagate_cmd);

  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "score prediction label files against ground truth");
  std::string truth_dir, pred_dir, mapping = "sk_sp";
  std::string truth_side = "target", pred_side, convention = "zero", csv_out;
  evaluate_cmd->add_option("--truth", truth_dir, "ground truth .label directory")
      ->required();
  evaluate_cmd->add_option("--pred", pred_dir, "prediction .label directory")
      ->required();
  evaluate_cmd->add_option("--mapping", mapping,
                           "mapping name (sk_sp, sk_ns, sk_ps, ns_sp, ns_ps, "
                           "ns_sk) or file path");
  evaluate_cmd->add_option("--truth-side", truth_side,
                           "mapping side of the truth labels (target|source)");
  evaluate_cmd->add_option("--pred-side", pred_side,
                           "mapping side of the predictions (defaults to "
                           "--truth-side)");
  evaluate_cmd->add_option("--zero-union", convention,
                           "zero-union classes in the mean: zero | exclude");
  evaluate_cmd->add_option("--csv", csv_out, "also write the report as CSV");

  auto* decimate_cmd = app.add_subcommand(
      "decimate", "remove fibers from scans (SemanticKITTI32 generation)");
  std::string dec_scans, dec_output, dec_labels, dec_labels_output;
  int keep_every = 2, nominal_beams = 64;
  decimate_cmd->add_option("--scans", dec_scans, "input scan directory")
      ->required();
  decimate_cmd->add_option("--output", dec_output, "output scan directory")
      ->required();
  decimate_cmd->add_option("--keep-every", keep_every,
                           "keep fibers with index = 0 mod this");
  decimate_cmd->add_option("--beams", nominal_beams, "nominal fiber count");
  decimate_cmd->add_option("--labels", dec_labels,
                           "label directory to decimate alongside");
  decimate_cmd->add_option("--labels-output", dec_labels_output,
                           "output directory for decimated labels");

  auto* bench_cmd = app.add_subcommand(
      "bench", "synthetic throughput benchmark with per-stage timing");
  int bench_frames = 10;
  double bench_extent = 60.0, bench_step = 0.14, bench_sample = 0.3;
  bench_cmd->add_option("--frames", bench_frames, "frames to process");
  bench_cmd->add_option("--extent", bench_extent, "scene extent, meters");
  bench_cmd->add_option("--step", bench_step, "scene sampling step, meters");
  bench_cmd->add_option("--sample-probability", bench_sample,
                        "fraction of scene nodes sampled per frame");

  auto* augment_cmd =
      app.add_subcommand("augment", "apply geometric augmentations to a scan");
  std::string aug_input, aug_output;
  AugmentSpec spec;
  double rotate_z = 0.0, fixed_scale = 1.0;
  augment_cmd->add_option("--input", aug_input, "input .bin scan")->required();
  augment_cmd->add_option("--output", aug_output, "output .bin scan")->required();
  augment_cmd->add_flag("--center", spec.center, "move barycenter to origin");
  auto* rz =
      augment_cmd->add_option("--rotate-z", rotate_z, "fixed z rotation, radians");
  augment_cmd->add_flag("--random-rotation", spec.random_rotation_z,
                        "uniform random z rotation");
  auto* sc = augment_cmd->add_option("--scale", fixed_scale, "fixed scale factor");
  auto* rs =
      augment_cmd->add_flag("--random-scale", "uniform scale in [0.95, 1.05]");
  augment_cmd->add_option("--noise", spec.noise_sigma, "gaussian noise sigma");
  augment_cmd->add_flag("--flip-x", spec.flip_x, "mirror x");
  augment_cmd->add_flag("--flip-y", spec.flip_y, "mirror y");
  augment_cmd->add_flag("--random-flip-x", spec.random_flip_x,
                        "mirror x with p=0.5");
  augment_cmd->add_flag("--random-flip-y", spec.random_flip_y,
                        "mirror y with p=0.5");

  CLI11_PARSE(app, argc, argv);

  try {
    io::PipelineConfig config;
    if (!config_file.empty()) config = io::load_config(config_file);
    if (!preset.empty()) config.apply_preset(preset);
    if (seed_given) config.seed = seed;
    if (pipeline_cmd->parsed()) {
      config.backend = backend;
      config.oracle_noise = oracle_noise;
      config.constant_label = constant_label;
      return run_pipeline(root, sequence, paths, config, labels_config,
                          predictions, output, start, count, write_confidence);
    }
    if (propagate_cmd->parsed())
      return run_propagate(root, sequence, paths, config, labels_config, start,
                           count);
    if (evaluate_cmd->parsed())
      return run_evaluate(truth_dir, pred_dir, mapping, truth_side, pred_side,
                          convention, csv_out);
    if (decimate_cmd->parsed())
      return run_decimate(dec_scans, dec_output, keep_every, nominal_beams,
                          dec_labels, dec_labels_output);
    if (bench_cmd->parsed())
      return run_bench(bench_frames, bench_extent, bench_step, bench_sample,
                       config);
    if (augment_cmd->parsed()) {
      if (*rz) spec.rotation_z = rotate_z;
      if (*sc) spec.scale = fixed_scale;
      if (*rs) spec.random_scale = {{0.95, 1.05}};
      return run_augment(aug_input, aug_output, spec, config.seed);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
