#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "labelprop/eval/label_mapping.hpp"
#include "labelprop/semantics.hpp"

namespace labelprop::io {

/// A dataset's label universe: its native (raw) label ids as stored in
/// .label files, the training classes the pipeline works in (dynamic classes
/// first), and the raw -> training projection.
struct DatasetLabels {
  std::string name;
  LabelSchema schema;  // names = training classes
  std::vector<std::pair<std::int32_t, std::string>> raw_labels;
  std::unordered_map<std::int32_t, std::int32_t> learning_map;  // raw -> train
  std::vector<std::int32_t> canonical_raw;  // train -> representative raw id

  std::int32_t to_train(std::int32_t raw) const {
    const auto it = learning_map.find(raw);
    if (it == learning_map.end())
      throw std::out_of_range(name + ": unknown raw label id " +
                              std::to_string(raw));
    return it->second;
  }

  std::vector<std::int32_t> to_train(const std::vector<std::int32_t>& raw) const {
    std::vector<std::int32_t> train(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) train[i] = to_train(raw[i]);
    return train;
  }

  /// Canonical raw id of a training class; kNoLabel maps to the first raw
  /// label that projects to IGNORE ("unlabeled" by convention).
  std::int32_t to_raw(std::int32_t train) const {
    if (train == kNoLabel) return unlabeled_raw_;
    if (train < 0 || train >= schema.num_labels)
      throw std::out_of_range(name + ": training label " +
                              std::to_string(train) + " out of range");
    return canonical_raw[train];
  }

  std::vector<std::int32_t> fine_ids() const {
    std::vector<std::int32_t> ids;
    ids.reserve(raw_labels.size());
    for (const auto& [id, unused] : raw_labels) ids.push_back(id);
    return ids;
  }

  static DatasetLabels parse(std::istream& in, const std::string& origin);
  static DatasetLabels load(const std::string& path);

  std::int32_t unlabeled_raw_ = 0;
};

inline DatasetLabels DatasetLabels::parse(std::istream& in,
                                          const std::string& origin) {
  DatasetLabels ds;
  std::unordered_map<std::string, std::int32_t> class_ids;
  std::unordered_map<std::int32_t, std::string> raw_names;
  enum class Section { None, Classes, RawLabels, LearningMap } section =
      Section::None;
  std::string line;
  int line_no = 0;
  bool have_unlabeled_raw = false;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = eval::detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line == "[classes]")
        section = Section::Classes;
      else if (line == "[raw_labels]")
        section = Section::RawLabels;
      else if (line == "[learning_map]")
        section = Section::LearningMap;
      else
        fail("unknown section " + line);
      continue;
    }

    if (section == Section::None) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) fail("expected key = value");
      const std::string key = eval::detail::trim(line.substr(0, eq));
      const std::string value = eval::detail::trim(line.substr(eq + 1));
      if (key == "name")
        ds.name = value;
      else if (key == "num_dynamic")
        ds.schema.num_dynamic = std::stoi(value);
      else
        fail("unknown key " + key);
      continue;
    }

    if (section == Section::Classes) {
      std::istringstream ls(line);
      std::int32_t id;
      std::string class_name;
      if (!(ls >> id >> class_name)) fail("expected '<id> <name>'");
      if (id != static_cast<std::int32_t>(ds.schema.names.size()))
        fail("training class ids must be dense and in order");
      class_ids[class_name] = id;
      ds.schema.names.push_back(class_name);
      continue;
    }

    if (section == Section::RawLabels) {
      std::istringstream ls(line);
      std::int32_t id;
      std::string raw_name;
      if (!(ls >> id >> raw_name)) fail("expected '<id> <name>'");
      if (raw_names.count(id)) fail("duplicate raw label id");
      raw_names[id] = raw_name;
      ds.raw_labels.emplace_back(id, raw_name);
      continue;
    }

    // [learning_map]: <raw id> -> <training class name | IGNORE>
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) fail("expected '->'");
    const std::int32_t raw = std::stoi(eval::detail::trim(line.substr(0, arrow)));
    const std::string target = eval::detail::trim(line.substr(arrow + 2));
    if (!raw_names.count(raw)) fail("raw id not declared in [raw_labels]");
    if (ds.learning_map.count(raw)) fail("duplicate learning_map entry");
    if (target == "IGNORE") {
      ds.learning_map[raw] = kNoLabel;
      if (!have_unlabeled_raw) {
        ds.unlabeled_raw_ = raw;
        have_unlabeled_raw = true;
      }
    } else {
      const auto it = class_ids.find(target);
      if (it == class_ids.end()) fail("unknown training class " + target);
      ds.learning_map[raw] = it->second;
    }
  }

  ds.schema.num_labels = static_cast<std::int32_t>(ds.schema.names.size());
  ds.schema.check();
  if (ds.schema.num_labels == 0)
    throw std::runtime_error(origin + ": no [classes] section");
  for (const auto& [raw, unused] : ds.raw_labels)
    if (!ds.learning_map.count(raw))
      throw std::runtime_error(origin + ": raw label " + std::to_string(raw) +
                               " missing from [learning_map]");
  // First raw id projecting to each class becomes its canonical output id.
  ds.canonical_raw.assign(ds.schema.num_labels, -1);
  for (const auto& [raw, unused] : ds.raw_labels) {
    const std::int32_t train = ds.learning_map.at(raw);
    if (train >= 0 && ds.canonical_raw[train] < 0) ds.canonical_raw[train] = raw;
  }
  for (std::int32_t c = 0; c < ds.schema.num_labels; ++c)
    if (ds.canonical_raw[c] < 0)
      throw std::runtime_error(origin + ": training class " +
                               ds.schema.names[c] + " has no raw label");
  return ds;
}

inline DatasetLabels DatasetLabels::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset config " + path);
  return parse(in, path);
}

}  // namespace labelprop::io
