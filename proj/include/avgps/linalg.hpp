#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace avgps {

// Just enough fixed-size linear algebra for the 4-state filter. Row-major.
using Vec4 = std::array<double, 4>;

struct Mat4 {
  std::array<std::array<double, 4>, 4> m{};

  static Mat4 identity() {
    Mat4 r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1.0;
    return r;
  }
  static Mat4 diag(double a, double b, double c, double d) {
    Mat4 r;
    r.m[0][0] = a;
    r.m[1][1] = b;
    r.m[2][2] = c;
    r.m[3][3] = d;
    return r;
  }

  double& operator()(int i, int j) { return m[i][j]; }
  double operator()(int i, int j) const { return m[i][j]; }
};

inline Mat4 operator*(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k) {
      double aik = a.m[i][k];
      for (int j = 0; j < 4; ++j) r.m[i][j] += aik * b.m[k][j];
    }
  return r;
}

inline Vec4 operator*(const Mat4& a, const Vec4& v) {
  Vec4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i] += a.m[i][j] * v[j];
  return r;
}

inline Mat4 operator+(const Mat4& a, const Mat4& b) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
  return r;
}

inline Mat4 operator*(double s, const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m[i][j] = s * a.m[i][j];
  return r;
}

inline Mat4 transpose(const Mat4& a) {
  Mat4 r;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r.m[i][j] = a.m[j][i];
  return r;
}

inline double trace(const Mat4& a) { return a.m[0][0] + a.m[1][1] + a.m[2][2] + a.m[3][3]; }

inline void symmetrize(Mat4& a) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      double v = 0.5 * (a.m[i][j] + a.m[j][i]);
      a.m[i][j] = v;
      a.m[j][i] = v;
    }
}

inline double max_asymmetry(const Mat4& a) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) worst = std::max(worst, std::fabs(a.m[i][j] - a.m[j][i]));
  return worst;
}

}  // namespace avgps
