#pragma once

// Independent reference computations the library is tested against:
// composite quadrature for exponential averages, the Hermite-Genocchi
// divided-difference identity, and centered finite differences.

#include <array>
#include <cmath>
#include <functional>
#include <initializer_list>

#include "emfd/dualmesh.hpp"

namespace oracles {

using emfd::Vec2;

struct Vec3 {
  double x, y, z;
};

inline Vec3 lerp3(const Vec3& a, const Vec3& b) {
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * (a.z + b.z)};
}

inline Vec3 sub(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double dot3(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double triple(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) +
         a.z * (b.x * c.y - b.y * c.x);
}

// Degree-5 seven-point triangle rule applied on a 4^depth uniform refinement:
// average of fn over the triangle (a, b, c).
inline double tri_average(Vec2 a, Vec2 b, Vec2 c, const std::function<double(Vec2)>& fn, int depth = 5) {
  if (depth > 0) {
    const Vec2 mab = (a + b) * 0.5, mbc = (b + c) * 0.5, mca = (c + a) * 0.5;
    return (tri_average(a, mab, mca, fn, depth - 1) + tri_average(mab, b, mbc, fn, depth - 1) +
            tri_average(mca, mbc, c, fn, depth - 1) + tri_average(mab, mbc, mca, fn, depth - 1)) /
           4.0;
  }
  const double s15 = std::sqrt(15.0);
  const double w0 = 9.0 / 40.0;
  const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
  const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
  auto at = [&](double l0, double l1, double l2) {
    return fn({l0 * a.x + l1 * b.x + l2 * c.x, l0 * a.y + l1 * b.y + l2 * c.y});
  };
  double sum = w0 * at(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0);
  sum += w1 * (at(1 - 2 * a1, a1, a1) + at(a1, 1 - 2 * a1, a1) + at(a1, a1, 1 - 2 * a1));
  sum += w2 * (at(1 - 2 * a2, a2, a2) + at(a2, 1 - 2 * a2, a2) + at(a2, a2, 1 - 2 * a2));
  return sum;
}

// Tensor Gauss-Legendre rule in collapsed (Duffy) coordinates on a Bey
// (8 sub-tet) refinement: average of fn over the tetrahedron. For smooth
// integrands the terminal rule converges exponentially, so depth 2 already
// sits near machine precision; used as the independent quadrature oracle.
inline double tet_average(const std::array<Vec3, 4>& t, const std::function<double(Vec3)>& fn,
                          int depth = 2) {
  if (depth > 0) {
    const Vec3 &v0 = t[0], &v1 = t[1], &v2 = t[2], &v3 = t[3];
    const Vec3 m01 = lerp3(v0, v1), m02 = lerp3(v0, v2), m03 = lerp3(v0, v3);
    const Vec3 m12 = lerp3(v1, v2), m13 = lerp3(v1, v3), m23 = lerp3(v2, v3);
    const std::array<std::array<Vec3, 4>, 8> kids = {{{v0, m01, m02, m03},
                                                      {m01, v1, m12, m13},
                                                      {m02, m12, v2, m23},
                                                      {m03, m13, m23, v3},
                                                      {m01, m02, m03, m13},
                                                      {m01, m02, m12, m13},
                                                      {m02, m03, m13, m23},
                                                      {m02, m12, m13, m23}}};
    double sum = 0.0;
    for (const auto& kid : kids) sum += tet_average(kid, fn, depth - 1);
    return sum / 8.0;
  }
  // 6-point Gauss-Legendre on [0, 1]
  static const double gx[6] = {0.5 - 0.9324695142031521 / 2, 0.5 - 0.6612093864662645 / 2,
                               0.5 - 0.2386191860831969 / 2, 0.5 + 0.2386191860831969 / 2,
                               0.5 + 0.6612093864662645 / 2, 0.5 + 0.9324695142031521 / 2};
  static const double gw[6] = {0.1713244923791704 / 2, 0.3607615730481386 / 2,
                               0.4679139345726910 / 2, 0.4679139345726910 / 2,
                               0.3607615730481386 / 2, 0.1713244923791704 / 2};
  // collapsed coordinates (a,b,c) in [0,1]^3 -> reference tet with Jacobian
  // (1-a)^2 (1-b); dividing by its integral 1/6 turns the sum into an average
  double sum = 0.0;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      for (int k = 0; k < 6; ++k) {
        const double x = gx[i];
        const double y = gx[j] * (1.0 - gx[i]);
        const double z = gx[k] * (1.0 - gx[i]) * (1.0 - gx[j]);
        const double l0 = 1.0 - x - y - z;
        const double jac = (1.0 - gx[i]) * (1.0 - gx[i]) * (1.0 - gx[j]);
        sum += gw[i] * gw[j] * gw[k] * jac *
               fn({l0 * t[0].x + x * t[1].x + y * t[2].x + z * t[3].x,
                   l0 * t[0].y + x * t[1].y + y * t[2].y + z * t[3].y,
                   l0 * t[0].z + x * t[1].z + y * t[2].z + z * t[3].z});
      }
  return 6.0 * sum;
}

// Hermite-Genocchi: the average of e^l over a simplex with linear l equals
// n! times the divided difference of exp over the vertex values. Distinct
// values only.
inline double simplex_exp_average_dd(const double* phi, int n_vertices) {
  double sum = 0.0;
  for (int i = 0; i < n_vertices; ++i) {
    double denom = 1.0;
    for (int j = 0; j < n_vertices; ++j)
      if (j != i) denom *= phi[i] - phi[j];
    sum += std::exp(phi[i]) / denom;
  }
  double fact = 1.0;
  for (int k = 2; k < n_vertices; ++k) fact *= k;
  return fact * sum;
}

inline double simplex_exp_average_dd(std::initializer_list<double> phi) {
  return simplex_exp_average_dd(phi.begin(), static_cast<int>(phi.size()));
}

// Centered finite differences.
inline Vec2 fd_grad(const std::function<double(Vec2)>& f, Vec2 p, double h = 1e-6) {
  return {(f({p.x + h, p.y}) - f({p.x - h, p.y})) / (2.0 * h),
          (f({p.x, p.y + h}) - f({p.x, p.y - h})) / (2.0 * h)};
}

inline double fd_div(const std::function<Vec2(Vec2)>& f, Vec2 p, double h = 1e-6) {
  return (f({p.x + h, p.y}).x - f({p.x - h, p.y}).x) / (2.0 * h) +
         (f({p.x, p.y + h}).y - f({p.x, p.y - h}).y) / (2.0 * h);
}

inline double fd_curl(const std::function<Vec2(Vec2)>& f, Vec2 p, double h = 1e-6) {
  return (f({p.x + h, p.y}).y - f({p.x - h, p.y}).y) / (2.0 * h) -
         (f({p.x, p.y + h}).x - f({p.x, p.y - h}).x) / (2.0 * h);
}

inline double fd_laplace(const std::function<double(Vec2)>& f, Vec2 p, double h = 1e-4) {
  return (f({p.x + h, p.y}) + f({p.x - h, p.y}) + f({p.x, p.y + h}) + f({p.x, p.y - h}) -
          4.0 * f(p)) /
         (h * h);
}

}  // namespace oracles
