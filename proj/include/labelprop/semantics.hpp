#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace labelprop {

constexpr std::int32_t kNoLabel = -1;

/// Per-point label and confidence. Label kNoLabel means "not inferred yet";
/// such points carry confidence zero.
struct SemanticState {
  std::vector<std::int32_t> labels;
  std::vector<float> confidence;

  SemanticState() = default;

  static SemanticState unlabeled(std::size_t n) {
    SemanticState s;
    s.labels.assign(n, kNoLabel);
    s.confidence.assign(n, 0.0f);
    return s;
  }

  std::size_t size() const { return labels.size(); }

  void check() const {
    if (labels.size() != confidence.size())
      throw std::invalid_argument("semantic state length mismatch");
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (confidence[i] < 0.0f || confidence[i] > 1.0f)
        throw std::invalid_argument("confidence outside [0,1] at point " +
                                    std::to_string(i));
    }
  }
};

/// Class list of a trained configuration. Labels 0..num_dynamic-1 are the
/// dynamic classes (objects that can move between scans in world coordinates),
/// num_dynamic..num_labels-1 the static ones.
struct LabelSchema {
  std::int32_t num_labels = 0;
  std::int32_t num_dynamic = 0;
  std::vector<std::string> names;

  bool is_dynamic(std::int32_t label) const {
    return label >= 0 && label < num_dynamic;
  }
  bool is_static(std::int32_t label) const {
    return label >= num_dynamic && label < num_labels;
  }

  void check() const {
    if (num_dynamic < 0 || num_dynamic > num_labels)
      throw std::invalid_argument("label schema: need 0 <= num_dynamic <= num_labels");
    if (!names.empty() && names.size() != static_cast<std::size_t>(num_labels))
      throw std::invalid_argument("label schema: name count mismatch");
  }
};

}  // namespace labelprop
