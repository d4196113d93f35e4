#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "labelprop/eval/label_mapping.hpp"

namespace labelprop::eval {

/// Rows are truth, columns are prediction. Truth IGNORE excludes the point
/// entirely; a predicted IGNORE against valid truth lands in a dedicated
/// column and counts as a false negative of the true class only.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::int32_t num_classes)
      : num_classes_(num_classes),
        counts_(static_cast<std::size_t>(num_classes) * num_classes, 0),
        pred_ignore_(num_classes, 0) {
    if (num_classes < 1) throw std::invalid_argument("need >= 1 class");
  }

  void add(std::int32_t truth, std::int32_t pred) {
    if (truth == kIgnoreClass) {
      ++ignored_;
      return;
    }
    check_range(truth);
    if (pred == kIgnoreClass) {
      ++pred_ignore_[truth];
      return;
    }
    check_range(pred);
    ++counts_[static_cast<std::size_t>(truth) * num_classes_ + pred];
  }

  void merge(const ConfusionMatrix& o) {
    if (o.num_classes_ != num_classes_)
      throw std::invalid_argument("confusion matrix size mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += o.counts_[i];
    for (std::size_t i = 0; i < pred_ignore_.size(); ++i)
      pred_ignore_[i] += o.pred_ignore_[i];
    ignored_ += o.ignored_;
  }

  std::int64_t at(std::int32_t truth, std::int32_t pred) const {
    check_range(truth);
    check_range(pred);
    return counts_[static_cast<std::size_t>(truth) * num_classes_ + pred];
  }

  std::int64_t true_positives(std::int32_t c) const { return at(c, c); }

  std::int64_t false_positives(std::int32_t c) const {
    std::int64_t fp = 0;
    for (std::int32_t t = 0; t < num_classes_; ++t)
      if (t != c) fp += at(t, c);
    return fp;
  }

  std::int64_t false_negatives(std::int32_t c) const {
    std::int64_t fn = pred_ignore_[c];
    for (std::int32_t p = 0; p < num_classes_; ++p)
      if (p != c) fn += at(c, p);
    return fn;
  }

  std::int32_t num_classes() const { return num_classes_; }
  std::int64_t ignored() const { return ignored_; }

  std::int64_t total() const {
    std::int64_t t = ignored_;
    for (const auto v : counts_) t += v;
    for (const auto v : pred_ignore_) t += v;
    return t;
  }

 private:
  void check_range(std::int32_t c) const {
    if (c < 0 || c >= num_classes_)
      throw std::out_of_range("coarse label " + std::to_string(c) +
                              " outside 0.." + std::to_string(num_classes_ - 1));
  }

  std::int32_t num_classes_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> pred_ignore_;
  std::int64_t ignored_ = 0;
};

inline ConfusionMatrix confusion(const std::vector<std::int32_t>& truth,
                                 const std::vector<std::int32_t>& pred,
                                 std::int32_t num_classes) {
  if (truth.size() != pred.size())
    throw std::invalid_argument("confusion: truth / prediction length mismatch");
  ConfusionMatrix m(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], pred[i]);
  return m;
}

/// What to do with classes whose union is empty (never in truth nor
/// prediction). Benchmark tables conventionally keep such rows at 0.0, so
/// counting them as zero is the default; excluding them from the mean is
/// also available.
enum class ZeroUnionRule { CountAsZero, Exclude };

struct IoUResult {
  std::vector<double> per_class;  // NaN for zero-union classes
  double mean = std::numeric_limits<double>::quiet_NaN();
  ZeroUnionRule rule = ZeroUnionRule::CountAsZero;
  std::int32_t evaluable_classes = 0;

  bool has_evaluable() const { return evaluable_classes > 0; }
};

/// IoU_c = TP / (TP + FP + FN) per class, and their mean. With no evaluable
/// class at all the result carries NaN and has_evaluable() is false.
inline IoUResult compute_iou(const ConfusionMatrix& m,
                             ZeroUnionRule rule = ZeroUnionRule::CountAsZero) {
  IoUResult r;
  r.rule = rule;
  r.per_class.resize(m.num_classes(),
                     std::numeric_limits<double>::quiet_NaN());
  double sum = 0.0;
  std::int32_t counted = 0;
  for (std::int32_t c = 0; c < m.num_classes(); ++c) {
    const std::int64_t tp = m.true_positives(c);
    const std::int64_t uni = tp + m.false_positives(c) + m.false_negatives(c);
    if (uni > 0) {
      r.per_class[c] = static_cast<double>(tp) / static_cast<double>(uni);
      sum += r.per_class[c];
      ++counted;
      ++r.evaluable_classes;
    } else if (rule == ZeroUnionRule::CountAsZero) {
      ++counted;  // contributes 0
    }
  }
  if (r.evaluable_classes > 0 && counted > 0) r.mean = sum / counted;
  return r;
}

}  // namespace labelprop::eval
