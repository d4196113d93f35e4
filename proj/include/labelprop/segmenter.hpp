#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "labelprop/accumulate.hpp"
#include "labelprop/densify.hpp"
#include "labelprop/rng.hpp"
#include "labelprop/semantics.hpp"

namespace labelprop {

/// Row-major (points x classes) score matrix. Rows sum to 1.
struct ScoreMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  ScoreMatrix() = default;
  ScoreMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t r) { return data.data() + r * cols; }
  const double* row(std::size_t r) const { return data.data() + r * cols; }

  void check_rows_normalized(double tol = 1e-6) const {
    for (std::size_t r = 0; r < rows; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < cols; ++c) {
        const double v = row(r)[c];
        if (!(v >= 0.0) || !std::isfinite(v))
          throw std::runtime_error("segmenter scores must be finite and >= 0");
        sum += v;
      }
      if (std::abs(sum - 1.0) > tol)
        throw std::runtime_error("segmenter score row does not sum to 1");
    }
  }
};

/// What a segmenter sees for one cluster: seed points first, then support
/// points, in world coordinates, with per-point provenance.
struct ClusterInput {
  PointCloud points;
  std::vector<PointOrigin> origins;
  std::size_t seed_count = 0;
};

inline ClusterInput make_cluster_input(const Cluster& cluster,
                                       const PointCloud& current_world,
                                       std::int64_t current_frame_index,
                                       const AccumulatedCloud& acc) {
  ClusterInput in;
  in.seed_count = cluster.seed_indices.size();
  in.points.reserve(cluster.seed_indices.size() + cluster.support_indices.size());
  in.origins.reserve(in.points.points.capacity());
  for (std::uint32_t i : cluster.seed_indices) {
    in.points.points.push_back(current_world.points[i]);
    in.origins.push_back({current_frame_index, i});
  }
  for (std::uint32_t i : cluster.support_indices) {
    in.points.points.push_back(acc.cloud.points[i]);
    in.origins.push_back(acc.origins[i]);
  }
  return in;
}

/// Per-cluster classifier seam. Implementations must return one score row
/// per input point (seeds and support alike), rows summing to 1.
class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual ScoreMatrix segment(const ClusterInput& input) = 0;
  virtual std::int32_t num_labels() const = 0;
};

/// Looks up a ground-truth label by provenance; kNoLabel when unknown.
using TruthLookup = std::function<std::int32_t(const PointOrigin&)>;

/// Emits the true label one-hot, flipping a seeded fraction of points to a
/// uniformly drawn other label. Points without truth get a uniform row.
class OracleSegmenter final : public Segmenter {
 public:
  OracleSegmenter(std::int32_t num_labels, TruthLookup truth, double noise = 0.0,
                  std::uint64_t seed = 0)
      : num_labels_(num_labels),
        truth_(std::move(truth)),
        noise_(noise),
        gen_(seed) {
    if (num_labels_ < 2) throw std::invalid_argument("oracle needs >= 2 labels");
    if (noise_ < 0.0 || noise_ > 1.0)
      throw std::invalid_argument("noise must be in [0,1]");
  }

  ScoreMatrix segment(const ClusterInput& input) override {
    ScoreMatrix scores(input.origins.size(), num_labels_);
    for (std::size_t r = 0; r < scores.rows; ++r) {
      std::int32_t label = truth_(input.origins[r]);
      if (label < 0 || label >= num_labels_) {
        const double u = 1.0 / static_cast<double>(num_labels_);
        for (std::size_t c = 0; c < scores.cols; ++c) scores.row(r)[c] = u;
        continue;
      }
      if (noise_ > 0.0 && uniform_unit(gen_) < noise_) {
        auto flipped = static_cast<std::int32_t>(
            uniform_index(gen_, static_cast<std::size_t>(num_labels_) - 1));
        if (flipped >= label) ++flipped;
        label = flipped;
      }
      scores.row(r)[label] = 1.0;
    }
    return scores;
  }

  std::int32_t num_labels() const override { return num_labels_; }

 private:
  std::int32_t num_labels_;
  TruthLookup truth_;
  double noise_;
  std::mt19937_64 gen_;
};

/// Store of externally produced per-point predictions, keyed by
/// (sequence, frame, point index). Backed in practice by .label files plus
/// optional confidence sidecars; see io/prediction_store.hpp.
class PredictionSource {
 public:
  virtual ~PredictionSource() = default;
  struct Prediction {
    std::int32_t label;
    float confidence;  // 1.0 when the store has no confidence channel
  };
  virtual Prediction fetch(std::int64_t frame, std::uint32_t point) = 0;
  virtual std::string sequence_name() const = 0;
};

/// Turns stored labels into scores: confidence c on the stored label and
/// (1-c)/(K-1) on every other class, so rows still sum to 1. A stored
/// kNoLabel ("unlabeled" in the source data) becomes a uniform row.
class FileSegmenter final : public Segmenter {
 public:
  FileSegmenter(std::int32_t num_labels, std::shared_ptr<PredictionSource> source)
      : num_labels_(num_labels), source_(std::move(source)) {
    if (num_labels_ < 2) throw std::invalid_argument("need >= 2 labels");
  }

  ScoreMatrix segment(const ClusterInput& input) override {
    ScoreMatrix scores(input.origins.size(), num_labels_);
    for (std::size_t r = 0; r < scores.rows; ++r) {
      const auto& origin = input.origins[r];
      const auto pred = source_->fetch(origin.frame, origin.point);
      if (pred.label == kNoLabel) {
        const double u = 1.0 / static_cast<double>(num_labels_);
        for (std::size_t col = 0; col < scores.cols; ++col) scores.row(r)[col] = u;
        continue;
      }
      if (pred.label < 0 || pred.label >= num_labels_)
        throw std::runtime_error(
            "prediction store: label out of schema range in sequence " +
            source_->sequence_name() + ", frame " + std::to_string(origin.frame) +
            ", point " + std::to_string(origin.point));
      const double c = pred.confidence;
      const double rest = (1.0 - c) / static_cast<double>(num_labels_ - 1);
      for (std::size_t col = 0; col < scores.cols; ++col) scores.row(r)[col] = rest;
      scores.row(r)[pred.label] = c;
    }
    return scores;
  }

  std::int32_t num_labels() const override { return num_labels_; }

 private:
  std::int32_t num_labels_;
  std::shared_ptr<PredictionSource> source_;
};

/// Fixed one-hot answer for every point. Useful for throughput runs where
/// the deep model's cost is out of scope.
class ConstantSegmenter final : public Segmenter {
 public:
  ConstantSegmenter(std::int32_t num_labels, std::int32_t label)
      : num_labels_(num_labels), label_(label) {
    if (label < 0 || label >= num_labels)
      throw std::invalid_argument("constant label out of range");
  }

  ScoreMatrix segment(const ClusterInput& input) override {
    ScoreMatrix scores(input.origins.size(), num_labels_);
    for (std::size_t r = 0; r < scores.rows; ++r) scores.row(r)[label_] = 1.0;
    return scores;
  }

  std::int32_t num_labels() const override { return num_labels_; }

 private:
  std::int32_t num_labels_;
  std::int32_t label_;
};

}  // namespace labelprop
