#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace labelprop {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double px, double py, double pz) : x(px), y(py), z(pz) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double squared_norm() const { return dot(*this); }
  double norm() const { return std::sqrt(squared_norm()); }

  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

inline double squared_distance(const Vec3& a, const Vec3& b) {
  return (a - b).squared_norm();
}

inline double distance(const Vec3& a, const Vec3& b) {
  return std::sqrt(squared_distance(a, b));
}

// Row-major 3x3 matrix, just enough for rigid transforms.
struct Mat3 {
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  static Mat3 identity() { return Mat3{}; }

  static Mat3 rotation_z(double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    Mat3 r;
    r.m = {c, -s, 0, s, c, 0, 0, 0, 1};
    return r;
  }

  double operator()(int row, int col) const { return m[3 * row + col]; }
  double& operator()(int row, int col) { return m[3 * row + col]; }

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }

  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
        r(i, j) = s;
      }
    return r;
  }

  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = (*this)(j, i);
    return r;
  }

  double determinant() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) -
           m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }
};

// Rigid SE(3) transform, frame-to-world. Rotation must stay orthonormal with
// det +1 within kRotationTolerance.
struct Pose {
  Mat3 rotation;
  Vec3 translation;

  static constexpr double kRotationTolerance = 1e-6;

  static Pose identity() { return Pose{}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

  // this ∘ other: applies `other` first.
  Pose compose(const Pose& other) const {
    Pose r;
    r.rotation = rotation * other.rotation;
    r.translation = rotation * other.translation + translation;
    return r;
  }

  Pose inverse() const {
    Pose r;
    r.rotation = rotation.transposed();
    r.translation = (r.rotation * translation) * -1.0;
    return r;
  }

  bool is_rigid(double tol = kRotationTolerance) const {
    const Mat3 rtr = rotation.transposed() * rotation;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double expected = (i == j) ? 1.0 : 0.0;
        if (std::abs(rtr(i, j) - expected) > tol) return false;
      }
    return std::abs(rotation.determinant() - 1.0) <= tol;
  }

  void validate() const {
    if (!is_rigid())
      throw std::invalid_argument("pose rotation is not orthonormal with det +1");
    if (!translation.finite())
      throw std::invalid_argument("pose translation is not finite");
  }
};

}  // namespace labelprop
