#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace slitsphere {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(const Vec3& v) {
  double n = norm(v);
  if (n < 1e-300) throw std::invalid_argument("cannot normalize zero vector");
  return v * (1.0 / n);
}

// Point on the unit sphere; renormalized on construction.
inline Vec3 make_unit(const Vec3& v) { return normalized(v); }

inline Vec3 unit_from_polar(double colat, double azimuth) {
  double s = std::sin(colat);
  return {std::cos(azimuth) * s, std::sin(azimuth) * s, std::cos(colat)};
}

// Angle between unit vectors, stable near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

struct Mat3 {
  // row-major
  std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

  Vec3 operator*(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[3 * i + k] * o.m[3 * k + j];
        r.m[3 * i + j] = s;
      }
    return r;
  }
};

inline Mat3 rot_z(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return Mat3{{c, -s, 0, s, c, 0, 0, 0, 1}};
}

inline Mat3 mirror_x() { return Mat3{{-1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

// ---------------------------------------------------------------------------
// 1D Gauss-Legendre, 16 points on [-1,1], composite over n panels.

namespace detail {
inline const std::array<double, 8>& gl16_x() {
  static const std::array<double, 8> x = {
      0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
      0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
  return x;
}
inline const std::array<double, 8>& gl16_w() {
  static const std::array<double, 8> w = {
      0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
      0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
  return w;
}
}  // namespace detail

template <class F>
double integrate_1d(F&& f, double a, double b, int panels = 8) {
  const auto& xs = detail::gl16_x();
  const auto& ws = detail::gl16_w();
  double total = 0;
  double dx = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double lo = a + p * dx;
    double mid = lo + 0.5 * dx, half = 0.5 * dx;
    double acc = 0;
    for (int i = 0; i < 8; ++i)
      acc += ws[i] * (f(mid + half * xs[i]) + f(mid - half * xs[i]));
    total += acc * half;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Deterministic RNG (splitmix64); identical streams on any platform.

struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() {  // in (0,1)
    return (next() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }
  double normal() {
    double u1 = uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }
  Vec3 unit_vector() {
    double z = 2.0 * uniform() - 1.0;
    double phi = 2.0 * kPi * uniform();
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }
};

}  // namespace slitsphere
