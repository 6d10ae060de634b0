#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace champagne {

/// Highest supported ambient dimension. Coordinates beyond the active
/// dimension are kept at zero, so norms and dot products need no dimension.
inline constexpr int kMaxDim = 5;

struct Vec {
  std::array<double, kMaxDim> c{};

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < kMaxDim; ++i) c[i] += o.c[i];
    return *this;
  }
  Vec& operator-=(const Vec& o) {
    for (int i = 0; i < kMaxDim; ++i) c[i] -= o.c[i];
    return *this;
  }
  Vec& operator*=(double s) {
    for (auto& v : c) v *= s;
    return *this;
  }
  friend Vec operator+(Vec a, const Vec& b) { return a += b; }
  friend Vec operator-(Vec a, const Vec& b) { return a -= b; }
  friend Vec operator*(Vec a, double s) { return a *= s; }
  friend Vec operator*(double s, Vec a) { return a *= s; }
  friend bool operator==(const Vec&, const Vec&) = default;
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < kMaxDim; ++i) s += a.c[i] * b.c[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Vec& a, const Vec& b) { return norm(a - b); }

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v;
  int i = 0;
  for (double x : xs) {
    if (i == kMaxDim) break;
    v.c[i++] = x;
  }
  return v;
}

}  // namespace champagne
