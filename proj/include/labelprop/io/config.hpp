#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "labelprop/eval/label_mapping.hpp"
#include "labelprop/pipeline.hpp"

namespace labelprop::io {

/// Every tunable of the processing pipeline with its default value. The
/// defaults are the configuration the method is normally run with; presets
/// change only the cluster count and the accumulation stride.
struct PipelineConfig {
  double subsample_voxel = 0.05;   // v_s, meters
  double propagation_radius = 0.30;// d_prop, meters
  double densify_voxel = 2.0;      // V_c, meters
  int num_clusters = 10;           // N_c
  int n_frames = 20;               // N_f
  int stride = 1;
  double crop_radius = 60.0;
  double fusion_propagation = 0.0; // w1
  double fusion_segmenter = 1.0;   // w2
  std::uint64_t seed = 1;
  std::string backend = "oracle";  // oracle | files | constant
  double oracle_noise = 0.0;
  int constant_label = 0;
  bool use_reflectivity = false;   // parsed from scans but unused by default
  std::string labels_config;       // path to a DatasetLabels file

  void apply_preset(const std::string& preset) {
    if (preset == "semantickitti") {
      num_clusters = 10;
      stride = 1;
    } else if (preset == "nuscenes") {
      num_clusters = 20;
      stride = 5;
    } else {
      throw std::invalid_argument("unknown preset '" + preset +
                                  "' (expected semantickitti or nuscenes)");
    }
  }

  void set(const std::string& key, const std::string& value) {
    if (key == "v_s" || key == "subsample_voxel")
      subsample_voxel = std::stod(value);
    else if (key == "d_prop" || key == "propagation_radius")
      propagation_radius = std::stod(value);
    else if (key == "v_c" || key == "densify_voxel")
      densify_voxel = std::stod(value);
    else if (key == "n_c" || key == "num_clusters")
      num_clusters = std::stoi(value);
    else if (key == "n_f" || key == "n_frames")
      n_frames = std::stoi(value);
    else if (key == "stride")
      stride = std::stoi(value);
    else if (key == "crop_radius")
      crop_radius = std::stod(value);
    else if (key == "w1" || key == "fusion_propagation")
      fusion_propagation = std::stod(value);
    else if (key == "w2" || key == "fusion_segmenter")
      fusion_segmenter = std::stod(value);
    else if (key == "seed")
      seed = std::stoull(value);
    else if (key == "backend")
      backend = value;
    else if (key == "oracle_noise")
      oracle_noise = std::stod(value);
    else if (key == "constant_label")
      constant_label = std::stoi(value);
    else if (key == "use_reflectivity")
      use_reflectivity = (value == "true" || value == "1");
    else if (key == "labels_config")
      labels_config = value;
    else if (key == "preset")
      apply_preset(value);
    else
      throw std::invalid_argument("unknown config key '" + key + "'");
  }

  PipelineParams params(const LabelSchema& schema) const {
    PipelineParams p;
    p.accumulation.n_frames = n_frames;
    p.accumulation.stride = stride;
    p.accumulation.voxel_size = subsample_voxel;
    p.accumulation.crop_radius = crop_radius;
    p.propagation.d_prop = propagation_radius;
    p.densify.densify_voxel_size = densify_voxel;
    p.densify.num_clusters = num_clusters;
    p.fusion.propagation = fusion_propagation;
    p.fusion.segmenter = fusion_segmenter;
    p.schema = schema;
    p.seed = seed;
    p.check();
    return p;
  }
};

/// `key = value` lines, '#' comments.
inline PipelineConfig load_config(const std::string& path,
                                  PipelineConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = eval::detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected key = value");
    try {
      base.set(eval::detail::trim(line.substr(0, eq)),
               eval::detail::trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
    }
  }
  return base;
}

}  // namespace labelprop::io
