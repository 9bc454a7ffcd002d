#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hilltails/grid.hpp"

namespace hilltails::ratefn {

struct RateProblem {
  double a = 10.0;    // half-period; domain [-a, a)
  std::size_t n = 2048;
  double h() const { return 2.0 * a / static_cast<double>(n); }
};

struct MinimizerResult {
  GridPath f_star;
  double I_star = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double el_residual = 0.0;
  double grad_sup = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct MinimizeOptions {
  double grad_tol = 1e-8;
  int max_iter = 20000;
  int memory = 12;
};

// I(f; a) = 1/2 int (1 - f^2)^2 + 1/2 int (f')^2 over one period, with the
// fourth-order periodic stencil for the Dirichlet term.
double rate_value(const GridPath& f, double a);

// First variation -f'' + 2 f^3 - 2 f projected onto mean zero.
GridPath first_variation(const GridPath& f);

// Glued tanh competitor; continuous at +-a/2.
GridPath test_function(double a, std::size_t n);

MinimizerResult minimize(const RateProblem& problem, const GridPath* seed = nullptr,
                         const MinimizeOptions& opt = {});

// (alpha, beta) from the first-integral form 1/2 f'^2 = 1/2 f^4 - f^2 - alpha f + 1/2 beta
std::pair<double, double> multiplier_diagnostics(const MinimizerResult& r, double a);

// sup-norm residual of the first integral for given (alpha, beta)
double el_residual(const GridPath& f, double alpha, double beta);

// sign changes, located by cubic interpolation between grid points
std::vector<double> zeros(const GridPath& f);

// derivative stencils on a periodic grid
std::vector<double> d1_sixth(const GridPath& f);
std::vector<double> d2_fourth(const GridPath& f);

} // namespace hilltails::ratefn
