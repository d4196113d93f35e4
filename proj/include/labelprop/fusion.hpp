#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "labelprop/semantics.hpp"

namespace labelprop {

struct FusionWeights {
  double propagation = 0.0;  // w1
  double segmenter = 1.0;    // w2

  void check() const {
    if (propagation < 0.0 || segmenter < 0.0 ||
        propagation + segmenter <= 0.0)
      throw std::invalid_argument("fusion weights must be >= 0 and not both zero");
  }
};

/// Mean of several score vectors for the same point, then argmax. The mean
/// score at the argmax becomes the new confidence.
inline std::pair<std::int32_t, float> aggregate_overlaps(
    const std::vector<std::vector<double>>& score_vectors) {
  if (score_vectors.empty())
    throw std::invalid_argument("aggregate_overlaps needs at least one vector");
  const std::size_t k = score_vectors.front().size();
  std::vector<double> mean(k, 0.0);
  for (const auto& v : score_vectors) {
    if (v.size() != k)
      throw std::invalid_argument("aggregate_overlaps: ragged score vectors");
    for (std::size_t c = 0; c < k; ++c) mean[c] += v[c];
  }
  std::int32_t best = 0;
  for (std::size_t c = 1; c < k; ++c)
    if (mean[c] > mean[best]) best = static_cast<std::int32_t>(c);
  const double n = static_cast<double>(score_vectors.size());
  return {best, static_cast<float>(mean[best] / n)};
}

/// Combines propagated and segmenter predictions per point with linear
/// weights: score(l) = w1 * c_prop * [l = l_prop] + w2 * c_seg * [l = l_seg].
/// A point only one module saw keeps that module's label; ties go to the
/// segmenter. A point neither module saw is a pipeline contract violation.
inline SemanticState fuse(const SemanticState& propagated,
                          const SemanticState& segmented,
                          const FusionWeights& weights,
                          const LabelSchema& schema) {
  weights.check();
  schema.check();
  if (propagated.size() != segmented.size())
    throw std::invalid_argument("fuse: state length mismatch");

  SemanticState out = SemanticState::unlabeled(propagated.size());
  for (std::size_t i = 0; i < propagated.size(); ++i) {
    const std::int32_t pl = propagated.labels[i];
    const std::int32_t sl = segmented.labels[i];
    if (pl == kNoLabel && sl == kNoLabel)
      throw std::runtime_error("fuse: point " + std::to_string(i) +
                               " has neither a propagated nor a segmenter label");
    if (sl == kNoLabel) {
      out.labels[i] = pl;
      out.confidence[i] = propagated.confidence[i];
      continue;
    }
    if (pl == kNoLabel) {
      out.labels[i] = sl;
      out.confidence[i] = segmented.confidence[i];
      continue;
    }
    const double prop_score = weights.propagation * propagated.confidence[i];
    const double seg_score = weights.segmenter * segmented.confidence[i];
    if (prop_score > seg_score) {
      out.labels[i] = pl;
      out.confidence[i] = propagated.confidence[i];
    } else {
      out.labels[i] = sl;
      out.confidence[i] = segmented.confidence[i];
    }
  }
  return out;
}

}  // namespace labelprop
