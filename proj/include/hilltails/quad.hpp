#pragma once

#include <boost/math/quadrature/gauss.hpp>

namespace hilltails::quad {

// Composite Gauss-Legendre (20 nodes per panel) on [a, b].
template <class F>
double gauss_panels(F&& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    double lo = a + w * i;
    double hi = (i + 1 == panels) ? b : lo + w;
    s += boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi);
  }
  return s;
}

} // namespace hilltails::quad
