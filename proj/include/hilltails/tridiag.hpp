#pragma once

#include <cstddef>
#include <vector>

namespace hilltails::tridiag {

// Symmetric cyclic tridiagonal matrix: diagonal d, constant off-diagonal e,
// and corner entries A(0,n-1) = A(n-1,0) = corner (e for periodic, -e for
// antiperiodic wraparound).
struct Cyclic {
  std::vector<double> d;
  double e = -1.0;
  double corner = -1.0;
};

// Number of eigenvalues strictly below sigma (Sylvester inertia of A - sigma).
// T is double for the Monte Carlo hot path, long double when the matrix
// carries large dynamic range.
template <class T>
int count_below(const Cyclic& a, T sigma);

// k-th smallest eigenvalue (0-based) by bisection to absolute tolerance tol.
double kth_eigenvalue(const Cyclic& a, int k, double tol);

// Smallest eigenvalue given a known upper bound (e.g. a Rayleigh quotient).
// init_step: first guess for the distance below `upper` (0 picks one).
double lowest_eigenvalue(const Cyclic& a, double upper, double tol, double init_step = 0.0);

// Gershgorin interval
void gershgorin(const Cyclic& a, double& lo, double& hi);

} // namespace hilltails::tridiag
