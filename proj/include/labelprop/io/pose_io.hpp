#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "labelprop/geometry.hpp"

namespace labelprop::io {

/// Rigid transform from the LiDAR frame to the frame the pose file is
/// expressed in (camera, for KITTI-style sequences).
struct Calibration {
  Pose lidar_to_reference = Pose::identity();
};

inline Pose parse_pose_line(const std::string& line, int line_no) {
  std::istringstream in(line);
  double v[12];
  for (int i = 0; i < 12; ++i)
    if (!(in >> v[i]))
      throw std::runtime_error("pose line " + std::to_string(line_no) +
                               ": expected 12 values");
  double extra;
  if (in >> extra)
    throw std::runtime_error("pose line " + std::to_string(line_no) +
                             ": more than 12 values");
  Pose p;
  p.rotation.m = {v[0], v[1], v[2], v[4], v[5], v[6], v[8], v[9], v[10]};
  p.translation = {v[3], v[7], v[11]};
  p.validate();
  return p;
}

/// KITTI odometry calib.txt: picks the "Tr:" line (LiDAR to camera). A file
/// holding a single bare 12-value line works too.
inline Calibration read_calibration(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open calibration file " + path);
  std::string line;
  int line_no = 0;
  std::optional<std::string> bare;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.rfind("Tr:", 0) == 0)
      return {parse_pose_line(line.substr(3), line_no)};
    if (line.find(':') == std::string::npos && !line.empty()) bare = line;
  }
  if (bare) return {parse_pose_line(*bare, line_no)};
  throw std::runtime_error(path + ": no 'Tr:' calibration line found");
}

/// Poses as 3x4 row-major lines. With a calibration the chain is conjugated
/// into the LiDAR frame: P_lidar = Tr^-1 * P * Tr.
inline std::vector<Pose> read_poses(const std::string& poses_path,
                                    const Calibration* calibration = nullptr) {
  std::ifstream in(poses_path);
  if (!in) throw std::runtime_error("cannot open pose file " + poses_path);
  std::vector<Pose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    Pose p = parse_pose_line(line, line_no);
    if (calibration) {
      const Pose& tr = calibration->lidar_to_reference;
      p = tr.inverse().compose(p).compose(tr);
    }
    poses.push_back(p);
  }
  return poses;
}

}  // namespace labelprop::io
