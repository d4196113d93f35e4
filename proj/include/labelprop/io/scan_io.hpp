#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelprop/point_cloud.hpp"

namespace labelprop::io {

namespace detail {

inline std::vector<char> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::streamsize size = in.tellg();
  in.seekg(0, std::ios::beg);
  std::vector<char> bytes(static_cast<std::size_t>(size));
  if (size > 0 && !in.read(bytes.data(), size))
    throw std::runtime_error("failed reading " + path);
  return bytes;
}

inline void write_file(const std::string& path, const char* data,
                       std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  if (size > 0 && !out.write(data, static_cast<std::streamsize>(size)))
    throw std::runtime_error("failed writing " + path);
}

}  // namespace detail

/// Little-endian float32 records of (x, y, z, reflectivity). Reflectivity is
/// kept as an IO channel; the pipeline ignores it unless told otherwise.
inline PointCloud read_scan(const std::string& path) {
  const auto bytes = detail::read_file(path);
  if (bytes.size() % 16 != 0)
    throw std::runtime_error(path + ": truncated scan file (" +
                             std::to_string(bytes.size()) +
                             " bytes, not a multiple of 16)");
  const std::size_t n = bytes.size() / 16;
  PointCloud cloud;
  cloud.points.resize(n);
  cloud.reflectivity.resize(n);
  const float* f = reinterpret_cast<const float*>(bytes.data());
  for (std::size_t i = 0; i < n; ++i) {
    cloud.points[i] = {f[4 * i + 0], f[4 * i + 1], f[4 * i + 2]};
    cloud.reflectivity[i] = f[4 * i + 3];
    if (!cloud.points[i].finite())
      throw std::runtime_error(path + ": non-finite coordinates at point " +
                               std::to_string(i));
  }
  return cloud;
}

inline void write_scan(const std::string& path, const PointCloud& cloud) {
  cloud.check_channels();
  std::vector<float> buffer(cloud.size() * 4);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    buffer[4 * i + 0] = static_cast<float>(cloud.points[i].x);
    buffer[4 * i + 1] = static_cast<float>(cloud.points[i].y);
    buffer[4 * i + 2] = static_cast<float>(cloud.points[i].z);
    buffer[4 * i + 3] = cloud.has_reflectivity() ? cloud.reflectivity[i] : 0.0f;
  }
  detail::write_file(path, reinterpret_cast<const char*>(buffer.data()),
                     buffer.size() * sizeof(float));
}

}  // namespace labelprop::io
