#pragma once

#include <functional>

#include "hilltails/lame.hpp"

namespace hilltails::discriminant {

struct Monodromy {
  double lambda = 0.0;
  double y1 = 0.0, y1p = 0.0, y2 = 0.0, y2p = 0.0; // at the potential period
  double delta = 0.0;                                // trace of the monodromy matrix
  double wronskian() const { return y1 * y2p - y1p * y2; }
};

// -y'' + q_mu y = lambda y over [0, 1/2]
Monodromy monodromy_delta(const lame::SimpleSpectrum& sp, double lambda, double tol = 1e-13);
Monodromy monodromy_delta(double mu, double lambda, double tol = 1e-13);
// arbitrary potential over [0, period]
Monodromy monodromy_delta(const std::function<double(double)>& q, double period, double lambda,
                          double tol = 1e-13);

struct GapPoints {
  double lp1 = 0.0, lp2 = 0.0;       // unscaled auxiliary points
  double delta1 = 0.0, delta2 = 0.0; // lp1 - lam1, lp2 - lam3
  double residual1 = 0.0, residual2 = 0.0; // relative gap-integral residuals
};

GapPoints solve_gap_points(const lame::SimpleSpectrum& sp, int panels = 16);

enum class Regime { below, band0, gap1, band1, gap2, above };

struct DeltaValue {
  double value = 0.0;   // may be +-inf deep in a gap; use log_abs then
  double log_abs = 0.0; // log|Delta|
  int sign = 1;
  Regime regime = Regime::below;
  double phase = 0.0;   // band regimes: Delta = 2 cos(phase)
  double y = 0.0;       // gap regimes: |Delta| = 2 cosh(y)
  double log_d2m4 = 0.0; // log(Delta^2 - 4) in gap regimes, NaN in bands
};

// Delta at the scaled spectral parameter via the abelian integral over the
// simple spectrum, scale sqrt(mu)/4 for the half-period trace.
DeltaValue hochstadt_delta(const lame::SimpleSpectrum& sp, const GapPoints& gp, double lambda_scaled,
                           int panels = 16);

// psi at lam_1^mu (full lowest band); equals pi
double psi_lambda1(const lame::SimpleSpectrum& sp, const GapPoints& gp, int panels = 16);

// int_{lam_1}^{2} N(s) ds / sqrt|P(s)| (unscaled)
double inner_integral_2(const lame::SimpleSpectrum& sp, const GapPoints& gp, int panels = 16);

struct Delta2Mu {
  double inv_root = 0.0;      // (Delta^2(2mu) - 4)^{-1/2}
  double normalized_log = 0.0; // -log(inv_root)/sqrt(mu)
  double log_d2m4 = 0.0;
  double cosh_arg = 0.0;
  double inner = 0.0;
  int sign = -1;
};

Delta2Mu delta_2mu(const lame::SimpleSpectrum& sp, const GapPoints& gp, int panels = 16);
Delta2Mu delta_2mu_asymptotics(double mu);

} // namespace hilltails::discriminant
