#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace knotforge {

inline constexpr double kTau = 6.283185307179586;  // 2*pi

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3 operator-() const { return {-x, -y, -z}; }

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
  Vec3 normalized() const { return *this / norm(); }

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  bool operator==(const Vec3&) const = default;
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

struct Vec2 {
  double x = 0, y = 0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

// Deterministic xoshiro-free uniform helpers on top of a 64-bit state.
// std::mt19937_64 is fully specified by the standard, but distributions are
// not; we derive doubles from raw bits so reports are reproducible.
struct SplitMix64 {
  uint64_t state;
  explicit SplitMix64(uint64_t seed) : state(seed) {}
  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  // uniform in [0,1)
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }
  // uniform in [-1,1)
  double symmetric() { return 2.0 * uniform() - 1.0; }

  Vec3 unit_vector() {
    for (;;) {
      Vec3 v{symmetric(), symmetric(), symmetric()};
      double n2 = v.norm2();
      if (n2 > 1e-6 && n2 <= 1.0) return v / std::sqrt(n2);
    }
  }
};

// Rotate v by a small random angle < max_angle about a random axis.
inline Vec3 jitter_direction(const Vec3& v, SplitMix64& rng, double max_angle) {
  Vec3 axis = rng.unit_vector();
  double angle = rng.uniform() * max_angle;
  // Rodrigues rotation
  double c = std::cos(angle), s = std::sin(angle);
  Vec3 r = v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1 - c));
  return r.normalized();
}

}  // namespace knotforge
