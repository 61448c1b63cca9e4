#pragma once

#include <array>
#include <cmath>

namespace ads {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline Vec3& operator+=(Vec3& a, const Vec3& b) {
  a[0] += b[0];
  a[1] += b[1];
  a[2] += b[2];
  return a;
}

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Signed volume of the tetrahedron (a, b, c, d); positive for right-handed order.
inline double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return dot(b - a, cross(c - a, d - a)) / 6.0;
}

/// Barycentric coordinate gradients of a tetrahedron. grad[i] is constant over the element.
struct TetGeometry {
  std::array<Vec3, 4> x;
  std::array<Vec3, 4> grad;
  double volume = 0.0;

  static TetGeometry from_vertices(const std::array<Vec3, 4>& pts);

  std::array<double, 4> barycentric(const Vec3& p) const {
    std::array<double, 4> l{};
    for (int i = 0; i < 4; ++i) l[i] = (i == 0 ? 1.0 : 0.0) + dot(grad[i], p - x[0]);
    return l;
  }
};

inline TetGeometry TetGeometry::from_vertices(const std::array<Vec3, 4>& pts) {
  TetGeometry g;
  g.x = pts;
  const Vec3 e1 = pts[1] - pts[0];
  const Vec3 e2 = pts[2] - pts[0];
  const Vec3 e3 = pts[3] - pts[0];
  const double det = dot(e1, cross(e2, e3));
  g.volume = det / 6.0;
  // Rows of the inverse Jacobian are the gradients of lambda_1..lambda_3.
  g.grad[1] = (1.0 / det) * cross(e2, e3);
  g.grad[2] = (1.0 / det) * cross(e3, e1);
  g.grad[3] = (1.0 / det) * cross(e1, e2);
  g.grad[0] = -1.0 * (g.grad[1] + g.grad[2] + g.grad[3]);
  return g;
}

}  // namespace ads
