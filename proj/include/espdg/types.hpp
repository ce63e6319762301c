#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace espdg {

/// Five-component state (c, sqrt(rho)u, sqrt(rho)v, sqrt(rho)w, p).
using State = std::array<double, 5>;

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  double &operator[](int d) { return d == 0 ? x : (d == 1 ? y : z); }
  double operator[](int d) const { return d == 0 ? x : (d == 1 ? y : z); }

  Vec3 operator+(const Vec3 &o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3 &o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 &operator+=(const Vec3 &o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3 &v) { return v * s; }
inline double dot(const Vec3 &a, const Vec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3 &a, const Vec3 &b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3 &v) { return std::sqrt(dot(v, v)); }

/// Block vector: one state-sized vector per space direction (x, y, z slots).
struct BlockState {
  State x{}, y{}, z{};

  const State &slot(int d) const { return d == 0 ? x : (d == 1 ? y : z); }
  State &slot(int d) { return d == 0 ? x : (d == 1 ? y : z); }
};

inline State operator+(const State &a, const State &b) {
  State r;
  for (int m = 0; m < 5; ++m) r[m] = a[m] + b[m];
  return r;
}
inline State operator-(const State &a, const State &b) {
  State r;
  for (int m = 0; m < 5; ++m) r[m] = a[m] - b[m];
  return r;
}
inline State operator*(double s, const State &a) {
  State r;
  for (int m = 0; m < 5; ++m) r[m] = s * a[m];
  return r;
}

/// Contraction of a block vector with a space vector: sum_d v_d f_d.
inline State contract(const Vec3 &v, const BlockState &f) {
  State r{};
  for (int m = 0; m < 5; ++m) r[m] = v.x * f.x[m] + v.y * f.y[m] + v.z * f.z[m];
  return r;
}

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

}  // namespace espdg
