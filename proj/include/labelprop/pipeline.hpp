#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <memory>
#include <utility>
#include <vector>

#include "labelprop/accumulate.hpp"
#include "labelprop/densify.hpp"
#include "labelprop/frame.hpp"
#include "labelprop/fusion.hpp"
#include "labelprop/kmeans.hpp"
#include "labelprop/propagation.hpp"
#include "labelprop/segmenter.hpp"

namespace labelprop {

struct PipelineParams {
  AccumulateParams accumulation;
  PropagationParams propagation;
  DensifyParams densify;
  FusionWeights fusion;
  LabelSchema schema;
  std::uint64_t seed = 1;  // k-means initialization

  void check() const {
    schema.check();
    fusion.check();
    densify.check();
    if (accumulation.voxel_size <= 0.0 || accumulation.crop_radius <= 0.0 ||
        accumulation.stride < 1 || accumulation.n_frames < 0)
      throw std::invalid_argument("invalid accumulation parameters");
  }
};

struct FrameTiming {
  double accumulate_s = 0.0;
  double propagate_s = 0.0;
  double cluster_s = 0.0;   // k-means + densification
  double segment_s = 0.0;   // backend inference + overlap averaging
  double fuse_s = 0.0;
  double total_s = 0.0;
  std::size_t accumulated_points = 0;
  std::size_t unpropagated_points = 0;
  std::size_t clusters = 0;
};

struct FrameResult {
  SemanticState final_state;      // per current-frame point, in schema space
  SemanticState propagated;       // propagation output before fusion
  FrameTiming timing;
};

/// Runs the per-frame sequence: accumulate the sliding window, propagate
/// static labels, cluster and densify the leftover points, segment, average
/// overlapping inferences and fuse. The window keeps each processed frame
/// with its final semantics for the next frames.
class SequencePipeline {
 public:
  SequencePipeline(PipelineParams params, std::shared_ptr<Segmenter> segmenter)
      : params_(std::move(params)), segmenter_(std::move(segmenter)) {
    params_.check();
    if (!segmenter_) throw std::invalid_argument("pipeline needs a segmenter");
    if (segmenter_->num_labels() != params_.schema.num_labels)
      throw std::invalid_argument("segmenter / schema class count mismatch");
  }

  FrameResult process_frame(const Frame& frame) {
    using clock = std::chrono::steady_clock;
    const auto elapsed = [](clock::time_point a, clock::time_point b) {
      return std::chrono::duration<double>(b - a).count();
    };
    FrameResult result;
    const auto t_start = clock::now();

    const AccumulatedCloud acc = accumulate(window_, frame, params_.accumulation);
    const PointCloud current_world = transform(frame.cloud, frame.pose);
    const auto t_acc = clock::now();

    result.propagated =
        propagate(current_world, acc, params_.schema, params_.propagation);
    const auto t_prop = clock::now();

    std::vector<std::uint32_t> seeds;
    for (std::uint32_t i = 0; i < result.propagated.size(); ++i)
      if (result.propagated.labels[i] == kNoLabel) seeds.push_back(i);

    std::vector<Cluster> clusters;
    if (!seeds.empty()) {
      std::vector<Vec3> seed_points(seeds.size());
      for (std::size_t s = 0; s < seeds.size(); ++s)
        seed_points[s] = current_world.points[seeds[s]];
      const KMeansResult km =
          kmeans(seed_points, params_.densify.num_clusters, params_.seed);
      const VoxelGrid vc_grid(acc.cloud, params_.densify.densify_voxel_size);
      std::vector<std::vector<std::uint32_t>> members(km.centroids.size());
      for (std::size_t s = 0; s < seeds.size(); ++s)
        members[km.assignment[s]].push_back(seeds[s]);
      clusters.reserve(members.size());
      for (auto& m : members)
        clusters.push_back(
            densify(current_world, std::move(m), acc, vc_grid, params_.densify));
    }
    const auto t_cluster = clock::now();

    // Average all score vectors landing on the same current-frame point.
    // Past points keep the semantics they were given when current.
    const std::size_t n = current_world.size();
    std::vector<std::vector<double>> score_sum(n);
    std::vector<std::uint32_t> inferences(n, 0);
    const std::size_t k = static_cast<std::size_t>(params_.schema.num_labels);
    for (const Cluster& cluster : clusters) {
      const ClusterInput input =
          make_cluster_input(cluster, current_world, frame.index, acc);
      const ScoreMatrix scores = segmenter_->segment(input);
      if (scores.rows != input.origins.size() || scores.cols != k)
        throw std::runtime_error("segmenter returned a misshapen score matrix");
      scores.check_rows_normalized();
      for (std::size_t r = 0; r < scores.rows; ++r) {
        const PointOrigin& origin = input.origins[r];
        if (origin.frame != frame.index) continue;
        auto& sum = score_sum[origin.point];
        if (sum.empty()) sum.assign(k, 0.0);
        const double* row = scores.row(r);
        for (std::size_t c = 0; c < k; ++c) sum[c] += row[c];
        ++inferences[origin.point];
      }
    }
    SemanticState deep = SemanticState::unlabeled(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (inferences[i] == 0) continue;
      const auto& sum = score_sum[i];
      std::size_t best = 0;
      for (std::size_t c = 1; c < k; ++c)
        if (sum[c] > sum[best]) best = c;
      deep.labels[i] = static_cast<std::int32_t>(best);
      deep.confidence[i] =
          static_cast<float>(sum[best] / static_cast<double>(inferences[i]));
    }
    const auto t_segment = clock::now();

    result.final_state = fuse(result.propagated, deep, params_.fusion, params_.schema);
    const auto t_fuse = clock::now();

    window_.emplace_back(frame, result.final_state);
    const std::int64_t horizon = frame.index - params_.accumulation.n_frames;
    while (!window_.empty() && window_.front().first.index <= horizon)
      window_.pop_front();

    result.timing.accumulate_s = elapsed(t_start, t_acc);
    result.timing.propagate_s = elapsed(t_acc, t_prop);
    result.timing.cluster_s = elapsed(t_prop, t_cluster);
    result.timing.segment_s = elapsed(t_cluster, t_segment);
    result.timing.fuse_s = elapsed(t_segment, t_fuse);
    result.timing.total_s = elapsed(t_start, t_fuse);
    result.timing.accumulated_points = acc.size();
    result.timing.unpropagated_points = seeds.size();
    result.timing.clusters = clusters.size();
    return result;
  }

  const std::deque<std::pair<Frame, SemanticState>>& window() const {
    return window_;
  }
  void reset() { window_.clear(); }

 private:
  PipelineParams params_;
  std::shared_ptr<Segmenter> segmenter_;
  std::deque<std::pair<Frame, SemanticState>> window_;
};

/// Feeds the sliding window with ground truth at full confidence and runs
/// only the propagation step, frame by frame. This is the measurement the
/// propagation module is judged by: coverage and accuracy over static
/// points, stray propagation onto dynamic ones.
class GroundTruthPropagationRun {
 public:
  GroundTruthPropagationRun(AccumulateParams accumulation,
                            PropagationParams propagation, LabelSchema schema)
      : accumulation_(accumulation),
        propagation_(propagation),
        schema_(std::move(schema)) {
    schema_.check();
  }

  PropagationStats process_frame(const Frame& frame,
                                 const std::vector<std::int32_t>& truth) {
    if (truth.size() != frame.cloud.size())
      throw std::invalid_argument("truth length mismatch");
    const AccumulatedCloud acc = accumulate(window_, frame, accumulation_);
    const PointCloud current_world = transform(frame.cloud, frame.pose);
    const SemanticState predicted =
        propagate(current_world, acc, schema_, propagation_);
    const PropagationStats stats = propagation_stats(predicted, truth, schema_);
    total_.add(stats);

    SemanticState gt_state;
    gt_state.labels = truth;
    gt_state.confidence.assign(truth.size(), 0.0f);
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (truth[i] >= 0) gt_state.confidence[i] = 1.0f;
    window_.emplace_back(frame, std::move(gt_state));
    const std::int64_t horizon = frame.index - accumulation_.n_frames;
    while (!window_.empty() && window_.front().first.index <= horizon)
      window_.pop_front();
    return stats;
  }

  const PropagationStats& total() const { return total_; }

 private:
  AccumulateParams accumulation_;
  PropagationParams propagation_;
  LabelSchema schema_;
  std::deque<std::pair<Frame, SemanticState>> window_;
  PropagationStats total_;
};

}  // namespace labelprop
