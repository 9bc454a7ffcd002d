#pragma once

#include <cstddef>
#include <vector>

#include "hilltails/discriminant.hpp"
#include "hilltails/grid.hpp"
#include "hilltails/lame.hpp"

namespace hilltails::asymptotics {

// logs of A_+ = int e^{2 P}, A_- = int e^{-2 P}, P the periodic antiderivative of p
struct AFactors {
  double log_plus = 0.0;
  double log_minus = 0.0;
};

// cumulative trapezoid antiderivative on the grid
AFactors A_functional(const GridPath& p);
// extremal path with its closed-form antiderivative
AFactors A_extremal(const elliptic::EllipticContext& ctx, std::size_t n = 0);

struct RResult {
  double R = 0.0;
  std::vector<double> zeros;
  std::vector<double> slopes; // derivative of the convolution at each zero
};

// (sum over zeros z of |c'(z)|^{-1})^{-1}, c(x) = int phi_1(x + x') p(x') dx'
RResult R_functional(const GridPath& p, const lame::SimpleSpectrum& sp);

// I_mu(p) = 1/2 int (mu - p^2)^2 + 1/2 int p'^2, fourth-order stencil
double rate_Imu(const GridPath& p, double mu);
// same at the extremal path, with exact derivatives
double rate_at_extremal(const elliptic::EllipticContext& ctx, double mu, std::size_t n = 0);

struct ZParts {
  double log_b1 = 0.0;      // log |(1-2mu/lam0)(1-2mu/lam1)(1-2mu/lam4)|
  int negative_factors = 0; // how many of those three are negative
  bool odd_negative = false;
  double log_b2 = 0.0;      // log of the c0/c4 ratio bracket
  double log_hessian_ratio = 0.0;  // log [2pi/lam1 (c0^2/lam0 + c4^2/lam4)]^{-1/2}
  double log_d0 = 0.0;      // log(Delta^2(0) - 4), cancels
  double log_d2mu = 0.0;    // log(Delta^2(2mu) - 4)
  double log_Z = 0.0;
  double log_nodisc_product() const { return 0.5 * (log_b1 + log_b2); }
};

ZParts gaussian_correction(const lame::SimpleSpectrum& sp, double log_delta0_sq_m4, double log_delta2mu_sq_m4);

struct TailReport {
  double mu = 0.0;
  double eps = 0.0;
  double log_A_plus = 0.0, log_A_minus = 0.0;
  double log_R = 0.0;
  double I_val = 0.0;
  ZParts Z;
  double log_f_assembled = 0.0;
  double log_f_closed = 0.0;
  double log_ratio = 0.0;
  double ratio = 0.0; // may be inf when log_ratio is large
  double d2mu_normalized_log = 0.0;
  bool odd_negative = false;
};

TailReport assemble_tail(double mu);

// right tail for mu > 0, left tail for mu < 0 (log density)
double closed_form_tails(double mu);

struct SechConstants {
  double sech4 = 0.0;       // int_R sech^4
  double sech5_tanh2 = 0.0; // int_R sech^5 tanh^2
  double sech8 = 0.0;
  double sech2_tanh2 = 0.0;
};

SechConstants sech_constants();

} // namespace hilltails::asymptotics
