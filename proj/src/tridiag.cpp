#include "hilltails/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hilltails/error.hpp"

namespace hilltails::tridiag {

template <class T>
int count_below(const Cyclic& a, T sigma) {
  const std::size_t n = a.d.size();
  if (n < 3) throw PreconditionError("cyclic count: need n >= 3");
  const T e = a.e;
  const T e2 = e * e;
  const T tiny = std::numeric_limits<T>::min() * T(1e8) + std::numeric_limits<T>::epsilon() * std::fabs(e);
  int neg = 0;
  // LDL^T of the leading (n-1) block, carrying the border solve y = L^{-1} b
  // with b = (corner, 0, ..., 0, e) alongside
  T p = T(a.d[0]) - sigma;
  if (p == T(0)) p = -tiny;
  if (p < T(0)) ++neg;
  T y = a.corner;
  T schur = T(a.d[n - 1]) - sigma - y * y / p;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    T l = e / p;
    p = T(a.d[i]) - sigma - e2 / p;
    if (p == T(0)) p = -tiny;
    if (p < T(0)) ++neg;
    T b = (i + 2 == n) ? e : T(0);
    y = b - l * y;
    schur -= y * y / p;
  }
  return neg + (schur < T(0) ? 1 : 0);
}

template int count_below<double>(const Cyclic&, double);
template int count_below<long double>(const Cyclic&, long double);

void gershgorin(const Cyclic& a, double& lo, double& hi) {
  const double r = std::fabs(a.e) + std::fabs(a.corner);
  lo = *std::min_element(a.d.begin(), a.d.end()) - r;
  hi = *std::max_element(a.d.begin(), a.d.end()) + r;
}

double kth_eigenvalue(const Cyclic& a, int k, double tol) {
  if (k < 0 || static_cast<std::size_t>(k) >= a.d.size()) throw DomainError("kth_eigenvalue: index out of range");
  double lo, hi;
  gershgorin(a, lo, hi);
  for (int it = 0; it < 400 && hi - lo > tol; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (count_below<long double>(a, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double lowest_eigenvalue(const Cyclic& a, double upper, double tol, double init_step) {
  double hi = upper;
  double step = init_step > 0.0 ? init_step : 1e-3 * std::fabs(upper) + tol;
  double lo = upper - step;
  int guard = 0;
  while (count_below<double>(a, lo) > 0) {
    hi = lo;
    step *= 4.0;
    lo = upper - step;
    if (++guard > 200) throw ConvergenceError("lowest_eigenvalue: could not bracket");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (count_below<double>(a, mid) > 0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

} // namespace hilltails::tridiag
