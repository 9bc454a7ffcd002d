#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "hilltails/elliptic.hpp"
#include "hilltails/grid.hpp"

namespace hilltails::lame {

// Simple periodic spectrum of -d^2/dx^2 + 6 k^2 sn^2(x, k) (period 2K), with
// everything expressed through eps = 1 - k^2 so the near-degenerate pairs
// keep their relative accuracy.
struct SimpleSpectrum {
  double mu = 0.0;
  double eps = 0.0;
  double s = 1.0; // sqrt(1 - k^2 + k^4)
  elliptic::EllipticContext ctx;
  std::array<double, 5> lam{};
  std::array<double, 4> gap{}; // lam[i+1] - lam[i]
  double a_plus = 0.0, a_minus = 0.0;
  double one_minus_aminus = 0.0;
  std::array<double, 5> norm{}; // L2[0,1] norms of the scaled unnormalized eigenfunctions
  double c0 = 0.0, c4 = 0.0;

  // lam[j] - lam[i], built from the gaps
  double diff(int i, int j) const;
  double scaled(int l) const { return mu * lam[static_cast<std::size_t>(l)]; }
};

SimpleSpectrum explicit_spectrum(const elliptic::EllipticContext& ctx, double mu, std::size_t norm_grid = 0);

// spectrum at a prescribed eps, independent of any period constraint
SimpleSpectrum spectrum_from_eps(double eps, double mu = 1.0);

// unnormalized eigenfunction at unscaled argument u
double phi_tilde(const SimpleSpectrum& sp, int index, double u);

// normalized phi_1^mu and its x-derivative at x
std::pair<double, double> phi1_scaled(const SimpleSpectrum& sp, double x);

// 6 mu k^2 sn^2(sqrt(mu) x)
double potential(const SimpleSpectrum& sp, double x);

struct EigenPair {
  int index = 0;
  double value = 0.0;
  GridPath function;
};

EigenPair explicit_eigenfunction(const SimpleSpectrum& sp, int index, std::size_t n);

enum class Series { principal, complementary };

struct TaggedEigenvalue {
  double value;
  Series series;
};

// lowest m period-1 eigenvalues of the second-order finite-difference operator
std::vector<double> numerical_periodic_spectrum(double mu, std::size_t n, int m);

// same, merged from the periodic and antiperiodic half-period problems
std::vector<TaggedEigenvalue> tagged_periodic_spectrum(double mu, std::size_t n, int m);

// dense eigenpairs of the finite-difference operator (n <= 4096)
std::vector<EigenPair> numerical_eigenpairs(double mu, std::size_t n, int m);

} // namespace hilltails::lame
