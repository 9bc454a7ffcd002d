#pragma once

#include <cstddef>
#include <numeric>
#include <vector>

namespace hilltails {

// Samples of a periodic function on x_i = origin + i*length/n, i = 0..n-1.
struct GridPath {
  std::vector<double> v;
  double origin = 0.0;
  double length = 1.0;

  GridPath() = default;
  GridPath(std::size_t n, double origin_ = 0.0, double length_ = 1.0)
      : v(n, 0.0), origin(origin_), length(length_) {}

  std::size_t size() const { return v.size(); }
  double h() const { return length / static_cast<double>(v.size()); }
  double x(std::size_t i) const { return origin + h() * static_cast<double>(i); }

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }

  // periodic trapezoid rule
  double integral() const { return h() * std::accumulate(v.begin(), v.end(), 0.0); }
  double mean() const { return integral() / length; }
};

inline double dot(const GridPath& a, const GridPath& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * a.h();
}

} // namespace hilltails
