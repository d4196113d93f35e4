#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace labelprop::eval {

constexpr std::int32_t kIgnoreClass = -1;

/// One dataset's half of a pairwise mapping: a total map from that dataset's
/// fine label ids to the shared coarse label set (or IGNORE).
struct MappingSide {
  std::string dataset;
  std::vector<std::pair<std::int32_t, std::string>> fine_labels;  // file order
  std::unordered_map<std::int32_t, std::int32_t> to_coarse;

  std::int32_t coarse_of(std::int32_t fine_id) const {
    const auto it = to_coarse.find(fine_id);
    if (it == to_coarse.end())
      throw std::out_of_range("mapping for " + dataset +
                              " has no entry for fine label id " +
                              std::to_string(fine_id));
    return it->second;
  }

  /// Coarse class of a fine label name; every id sharing the name must agree.
  std::int32_t coarse_of_name(const std::string& name) const {
    bool found = false;
    std::int32_t coarse = kIgnoreClass;
    for (const auto& [id, n] : fine_labels) {
      if (n != name) continue;
      const std::int32_t c = to_coarse.at(id);
      if (found && c != coarse)
        throw std::runtime_error("fine label name '" + name +
                                 "' maps to several coarse classes");
      coarse = c;
      found = true;
    }
    if (!found)
      throw std::out_of_range("no fine label named '" + name + "' in " + dataset);
    return coarse;
  }

  bool covers(const std::vector<std::int32_t>& fine_ids) const {
    return std::all_of(fine_ids.begin(), fine_ids.end(), [&](std::int32_t id) {
      return to_coarse.count(id) != 0;
    });
  }
};

/// Coarse-and-fine label set shared by a dataset pair, as shipped in
/// data/mappings. Coarse ids are dense 0..C-1 in declaration order.
struct LabelMapping {
  std::string name;
  std::vector<std::string> coarse_names;
  MappingSide source;
  MappingSide target;

  std::int32_t num_coarse() const {
    return static_cast<std::int32_t>(coarse_names.size());
  }

  static LabelMapping parse(std::istream& in, const std::string& origin);
  static LabelMapping load(const std::string& path);
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline LabelMapping LabelMapping::parse(std::istream& in,
                                        const std::string& origin) {
  LabelMapping mapping;
  std::unordered_map<std::string, std::int32_t> coarse_ids;
  enum class Section { None, Coarse, Source, Target } section = Section::None;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.resize(comment);
    line = detail::trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line == "[coarse]")
        section = Section::Coarse;
      else if (line == "[source]")
        section = Section::Source;
      else if (line == "[target]")
        section = Section::Target;
      else
        fail("unknown section " + line);
      continue;
    }

    if (const auto eq = line.find('='); eq != std::string::npos &&
                                        section == Section::None) {
      const std::string key = detail::trim(line.substr(0, eq));
      const std::string value = detail::trim(line.substr(eq + 1));
      if (key == "name")
        mapping.name = value;
      else if (key == "source")
        mapping.source.dataset = value;
      else if (key == "target")
        mapping.target.dataset = value;
      else
        fail("unknown key " + key);
      continue;
    }

    if (section == Section::Coarse) {
      if (coarse_ids.count(line)) fail("duplicate coarse label " + line);
      coarse_ids[line] = static_cast<std::int32_t>(mapping.coarse_names.size());
      mapping.coarse_names.push_back(line);
      continue;
    }
    if (section != Section::Source && section != Section::Target)
      fail("fine label line outside a section");

    // <id> <name> -> <coarse | IGNORE>
    const auto arrow = line.find("->");
    if (arrow == std::string::npos) fail("expected '->' in " + line);
    std::istringstream left(line.substr(0, arrow));
    std::int32_t fine_id;
    std::string fine_name;
    if (!(left >> fine_id >> fine_name)) fail("expected '<id> <name>' in " + line);
    const std::string coarse = detail::trim(line.substr(arrow + 2));
    std::int32_t coarse_id = kIgnoreClass;
    if (coarse != "IGNORE") {
      const auto it = coarse_ids.find(coarse);
      if (it == coarse_ids.end()) fail("unknown coarse label " + coarse);
      coarse_id = it->second;
    }
    MappingSide& side =
        section == Section::Source ? mapping.source : mapping.target;
    if (side.to_coarse.count(fine_id))
      fail("duplicate fine label id " + std::to_string(fine_id));
    side.fine_labels.emplace_back(fine_id, fine_name);
    side.to_coarse[fine_id] = coarse_id;
  }

  if (mapping.coarse_names.empty())
    throw std::runtime_error(origin + ": no [coarse] section");
  if (mapping.source.to_coarse.empty() || mapping.target.to_coarse.empty())
    throw std::runtime_error(origin + ": missing [source] or [target] entries");
  return mapping;
}

inline LabelMapping LabelMapping::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open mapping file " + path);
  return parse(in, path);
}

/// Applies one side of a mapping to a label array. Unknown ids are an error
/// naming the offending id.
inline std::vector<std::int32_t> remap(const std::vector<std::int32_t>& labels,
                                       const MappingSide& side) {
  std::vector<std::int32_t> coarse(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    coarse[i] = side.coarse_of(labels[i]);
  return coarse;
}

}  // namespace labelprop::eval
