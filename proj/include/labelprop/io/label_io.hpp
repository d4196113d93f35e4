#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "labelprop/io/scan_io.hpp"

namespace labelprop::io {

struct LabelFile {
  std::vector<std::int32_t> labels;     // semantic class, lower 16 bits
  std::vector<std::uint16_t> instances; // instance id, upper 16 bits
};

/// Little-endian uint32 per point: class id in the lower 16 bits, instance
/// id in the upper 16.
inline LabelFile read_labels(const std::string& path) {
  const auto bytes = detail::read_file(path);
  if (bytes.size() % 4 != 0)
    throw std::runtime_error(path + ": truncated label file (" +
                             std::to_string(bytes.size()) +
                             " bytes, not a multiple of 4)");
  const std::size_t n = bytes.size() / 4;
  LabelFile out;
  out.labels.resize(n);
  out.instances.resize(n);
  const std::uint32_t* v = reinterpret_cast<const std::uint32_t*>(bytes.data());
  for (std::size_t i = 0; i < n; ++i) {
    out.labels[i] = static_cast<std::int32_t>(v[i] & 0xFFFFu);
    out.instances[i] = static_cast<std::uint16_t>(v[i] >> 16);
  }
  return out;
}

inline void write_labels(const std::string& path,
                         const std::vector<std::int32_t>& labels,
                         const std::vector<std::uint16_t>* instances = nullptr) {
  if (instances && instances->size() != labels.size())
    throw std::invalid_argument("instance channel length mismatch");
  std::vector<std::uint32_t> buffer(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0 || labels[i] > 0xFFFF)
      throw std::invalid_argument("label " + std::to_string(labels[i]) +
                                  " does not fit the 16-bit class field");
    buffer[i] = static_cast<std::uint32_t>(labels[i]);
    if (instances) buffer[i] |= static_cast<std::uint32_t>((*instances)[i]) << 16;
  }
  detail::write_file(path, reinterpret_cast<const char*>(buffer.data()),
                     buffer.size() * sizeof(std::uint32_t));
}

/// Confidence sidecar: one little-endian float32 per point, same order as
/// the paired label file.
inline std::vector<float> read_confidence(const std::string& path) {
  const auto bytes = detail::read_file(path);
  if (bytes.size() % 4 != 0)
    throw std::runtime_error(path + ": truncated confidence file");
  std::vector<float> values(bytes.size() / 4);
  std::memcpy(values.data(), bytes.data(), bytes.size());
  return values;
}

inline void write_confidence(const std::string& path,
                             const std::vector<float>& values) {
  detail::write_file(path, reinterpret_cast<const char*>(values.data()),
                     values.size() * sizeof(float));
}

}  // namespace labelprop::io
