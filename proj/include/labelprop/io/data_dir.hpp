#pragma once

#include <cstdlib>
#include <string>

namespace labelprop::io {

/// Directory holding the shipped mapping and dataset label files. The
/// LABELPROP_DATA_DIR environment variable overrides the build-time default.
inline std::string data_dir() {
  if (const char* env = std::getenv("LABELPROP_DATA_DIR")) return env;
#ifdef LABELPROP_DEFAULT_DATA_DIR
  return LABELPROP_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

inline std::string mapping_path(const std::string& name) {
  return data_dir() + "/mappings/" + name + ".txt";
}

inline std::string dataset_labels_path(const std::string& name) {
  return data_dir() + "/datasets/" + name + ".txt";
}

}  // namespace labelprop::io
