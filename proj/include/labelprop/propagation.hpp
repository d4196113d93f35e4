#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "labelprop/accumulate.hpp"
#include "labelprop/semantics.hpp"

namespace labelprop {

/// sigma = d_prop / sqrt(ln 2): a full-confidence neighbor at distance
/// exactly d_prop gets weight exactly 0.5.
inline double sigma_from_dprop(double d_prop) {
  if (d_prop <= 0.0) throw std::invalid_argument("d_prop must be > 0");
  return d_prop / std::sqrt(std::log(2.0));
}

struct PropagationParams {
  double d_prop = 0.30;
  double weight_cutoff = 0.5;  // neighbors with w <= this are discarded

  double sigma() const { return sigma_from_dprop(d_prop); }

  // Smallest radius that can still contain a surviving neighbor. At the
  // stock cutoff this is d_prop itself, by the sigma relation.
  double search_radius() const {
    if (weight_cutoff == 0.5) return d_prop;
    const double s = sigma();
    return s * std::sqrt(std::log(1.0 / weight_cutoff));
  }

  void check() const {
    if (d_prop <= 0.0) throw std::invalid_argument("d_prop must be > 0");
    if (weight_cutoff <= 0.0 || weight_cutoff >= 1.0)
      throw std::invalid_argument("weight_cutoff must be in (0,1)");
  }
};

namespace detail {

// Per-candidate-label accumulators for one query point.
struct LabelScore {
  double score = 0.0;       // sum of surviving weights w = g * c
  double gaussian_sum = 0.0;// sum of surviving gaussian factors g
};

}  // namespace detail

/// Assigns each current point the weighted majority label of its accumulated
/// neighbors within d_prop, where a neighbor n at distance d with confidence
/// c contributes weight w = exp(-d^2/sigma^2) * c and only weights > 0.5
/// count. A dynamic majority, or no surviving neighbor, yields kNoLabel. The
/// stored confidence of a propagated label is the gaussian-weighted average
/// of the winning neighbors' confidences.
inline SemanticState propagate(const PointCloud& current,
                               const AccumulatedCloud& acc,
                               const LabelSchema& schema,
                               const PropagationParams& params) {
  schema.check();
  params.check();
  if (acc.semantics.size() != acc.cloud.size())
    throw std::invalid_argument("accumulated semantics length mismatch");
  const double d_prop = params.d_prop;
  const double radius = params.search_radius();
  const double sigma = params.sigma();
  const double sigma2 = sigma * sigma;
  const double d_prop2 = d_prop * d_prop;
  const bool stock_cutoff = params.weight_cutoff == 0.5;
  const double log_cutoff = std::log(params.weight_cutoff);

  for (std::size_t n = 0; n < acc.semantics.size(); ++n) {
    const std::int32_t l = acc.semantics.labels[n];
    if (l >= schema.num_labels)
      throw std::invalid_argument("accumulated label outside schema range");
    if (l < 0 && acc.semantics.confidence[n] > 0.0f)
      throw std::invalid_argument("unlabeled accumulated point with confidence > 0");
  }

  SemanticState out = SemanticState::unlabeled(current.size());
  std::vector<detail::LabelScore> scores(schema.num_labels);
  std::vector<std::int32_t> touched;
  std::vector<Neighbor> neighbors;

  // Search through a voxelization at the propagation radius: the query
  // sphere then spans at most 27 cells instead of thousands of subsampling
  // cells, and candidates are checked in contiguous runs.
  const double cell = std::max(radius, acc.search_grid.voxel_size());
  const VoxelGrid search(acc.cloud, cell);

  // Visiting queries in voxel order keeps consecutive searches inside the
  // same grid neighborhood; per-point results do not depend on the order.
  std::vector<std::uint32_t> order(current.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  {
    std::vector<std::array<std::int32_t, 3>> qkey(current.size());
    for (std::size_t i = 0; i < current.size(); ++i) {
      const VoxelKey k = voxel_key_of(current.points[i], cell);
      qkey[i] = {k.x, k.y, k.z};
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return qkey[a] < qkey[b];
    });
  }

  for (const std::uint32_t i : order) {
    radius_neighbors_into(search, acc.cloud, current.points[i], radius,
                          neighbors);
    // Index order fixes the summation order regardless of grid layout.
    std::sort(neighbors.begin(), neighbors.end(),
              [](const Neighbor& a, const Neighbor& b) { return a.index < b.index; });

    for (std::int32_t l : touched) scores[l] = {};
    touched.clear();

    for (const Neighbor& nb : neighbors) {
      const std::int32_t label = acc.semantics.labels[nb.index];
      if (label < 0) continue;
      const double c = acc.semantics.confidence[nb.index];
      if (c <= 0.0) continue;
      // Survival means w = exp(-d^2/sigma^2) * c > weight_cutoff, evaluated
      // in squared distance. At the stock cutoff of 0.5 the threshold is
      // anchored on d_prop^2 itself, so a full-confidence neighbor at
      // exactly d_prop is excluded exactly.
      const double d2 = nb.distance * nb.distance;
      const double cutoff =
          stock_cutoff ? ((c >= 1.0) ? d_prop2 : d_prop2 + sigma2 * std::log(c))
                       : sigma2 * (std::log(c) - log_cutoff);
      if (!(d2 < cutoff)) continue;
      const double g = std::exp(-d2 / sigma2);
      auto& entry = scores[label];
      if (entry.gaussian_sum == 0.0) touched.push_back(label);
      entry.score += g * c;
      entry.gaussian_sum += g;
    }

    std::int32_t best = kNoLabel;
    double best_score = 0.0;
    for (std::int32_t l : touched) {
      if (scores[l].score > best_score ||
          (scores[l].score == best_score && best >= 0 && l < best)) {
        best = l;
        best_score = scores[l].score;
      }
    }
    if (best < 0 || schema.is_dynamic(best)) continue;  // stays kNoLabel
    out.labels[i] = best;
    out.confidence[i] =
        static_cast<float>(scores[best].score / scores[best].gaussian_sum);
  }
  return out;
}

/// How well propagation did against ground truth, split by the static /
/// dynamic nature of the true class. Truth kNoLabel points are excluded.
/// Raw counters so per-frame results can be summed over a sequence.
struct PropagationStats {
  std::size_t static_total = 0;
  std::size_t static_covered = 0;
  std::size_t static_correct = 0;
  std::size_t dynamic_total = 0;
  std::size_t dynamic_covered = 0;

  void add(const PropagationStats& o) {
    static_total += o.static_total;
    static_covered += o.static_covered;
    static_correct += o.static_correct;
    dynamic_total += o.dynamic_total;
    dynamic_covered += o.dynamic_covered;
  }

  double static_coverage() const {
    return static_total ? static_cast<double>(static_covered) / static_total : 0.0;
  }
  // NaN when no static point was covered.
  double static_accuracy() const {
    return static_covered ? static_cast<double>(static_correct) / static_covered
                          : std::numeric_limits<double>::quiet_NaN();
  }
  double dynamic_mislabel_rate() const {
    return dynamic_total ? static_cast<double>(dynamic_covered) / dynamic_total
                         : 0.0;
  }
};

inline PropagationStats propagation_stats(const SemanticState& predicted,
                                          const std::vector<std::int32_t>& truth,
                                          const LabelSchema& schema) {
  if (predicted.size() != truth.size())
    throw std::invalid_argument("propagation_stats: length mismatch");
  PropagationStats s;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0) continue;
    if (schema.is_dynamic(truth[i])) {
      ++s.dynamic_total;
      if (predicted.labels[i] != kNoLabel) ++s.dynamic_covered;
    } else {
      ++s.static_total;
      if (predicted.labels[i] != kNoLabel) {
        ++s.static_covered;
        if (predicted.labels[i] == truth[i]) ++s.static_correct;
      }
    }
  }
  return s;
}

}  // namespace labelprop
