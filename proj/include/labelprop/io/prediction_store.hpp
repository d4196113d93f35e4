#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "labelprop/io/label_io.hpp"
#include "labelprop/segmenter.hpp"

namespace labelprop::io {

/// Per-frame prediction files on disk: <root>/<%06d>.label with an optional
/// <%06d>.conf sidecar of float32 confidences in the same point order. A
/// projection (usually DatasetLabels::to_train) turns stored raw ids into
/// schema labels, so the pipeline's own outputs can be replayed directly;
/// without one the stored values are used as-is.
class DirectoryPredictionSource final : public PredictionSource {
 public:
  using Projection = std::function<std::int32_t(std::int32_t)>;

  explicit DirectoryPredictionSource(std::string root, std::string sequence,
                                     Projection project = {})
      : root_(std::move(root)),
        sequence_(std::move(sequence)),
        project_(std::move(project)) {}

  Prediction fetch(std::int64_t frame, std::uint32_t point) override {
    const FrameData& data = frame_data(frame);
    if (point >= data.labels.size())
      throw std::runtime_error("prediction store " + sequence_ + ": frame " +
                               std::to_string(frame) + " has no point " +
                               std::to_string(point) + " (" +
                               std::to_string(data.labels.size()) + " stored)");
    Prediction p;
    p.label = data.labels[point];
    p.confidence = data.confidence.empty() ? 1.0f : data.confidence[point];
    return p;
  }

  std::string sequence_name() const override { return sequence_; }

 private:
  struct FrameData {
    std::vector<std::int32_t> labels;
    std::vector<float> confidence;
  };

  const FrameData& frame_data(std::int64_t frame) {
    auto it = cache_.find(frame);
    if (it != cache_.end()) return it->second;
    char name[32];
    std::snprintf(name, sizeof(name), "%06lld", static_cast<long long>(frame));
    const auto label_path = std::filesystem::path(root_) / (std::string(name) + ".label");
    if (!std::filesystem::exists(label_path))
      throw std::runtime_error("prediction store " + sequence_ +
                               ": missing predictions for frame " +
                               std::to_string(frame) + " (" +
                               label_path.string() + ")");
    FrameData data;
    data.labels = read_labels(label_path.string()).labels;
    if (project_)
      for (auto& label : data.labels) label = project_(label);
    const auto conf_path = std::filesystem::path(root_) / (std::string(name) + ".conf");
    if (std::filesystem::exists(conf_path)) {
      data.confidence = read_confidence(conf_path.string());
      if (data.confidence.size() != data.labels.size())
        throw std::runtime_error(conf_path.string() +
                                 ": confidence / label count mismatch");
    }
    // The window only reaches a bounded distance into the past.
    while (cache_.size() >= 64) cache_.erase(cache_.begin());
    return cache_.emplace(frame, std::move(data)).first->second;
  }

  std::string root_;
  std::string sequence_;
  Projection project_;
  std::map<std::int64_t, FrameData> cache_;
};

}  // namespace labelprop::io
