#pragma once

#include <cmath>

namespace nlop {

/// Point / vector in at most two dimensions. One-dimensional data lives on
/// the x axis with y == 0.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }
inline Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

inline Vec2 unit_from_angle(double phi) { return {std::cos(phi), std::sin(phi)}; }
inline double angle_of(Vec2 v) { return std::atan2(v.y, v.x); }

inline Vec2 normalized(Vec2 v) {
  double n = norm(v);
  return {v.x / n, v.y / n};
}

/// Rotate by +pi/2.
inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

/// Axis-aligned box; in 1D only the x extent is meaningful.
struct Box {
  Vec2 lo;
  Vec2 hi;

  bool contains(Vec2 p, int dim) const {
    if (p.x < lo.x || p.x > hi.x) return false;
    if (dim >= 2 && (p.y < lo.y || p.y > hi.y)) return false;
    return true;
  }

  double measure(int dim) const {
    double m = hi.x - lo.x;
    if (dim >= 2) m *= hi.y - lo.y;
    return m;
  }
};

}  // namespace nlop
