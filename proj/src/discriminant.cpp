#include "hilltails/discriminant.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "hilltails/error.hpp"
#include "hilltails/quad.hpp"

namespace hilltails::discriminant {

namespace odeint = boost::numeric::odeint;

Monodromy monodromy_delta(const std::function<double(double)>& q, double period, double lambda, double tol) {
  if (!std::isfinite(lambda)) throw DomainError("monodromy_delta: non-finite lambda");
  using state = std::array<double, 4>;
  auto rhs = [&](const state& y, state& dy, double x) {
    double w = q(x) - lambda;
    dy[0] = y[1];
    dy[1] = w * y[0];
    dy[2] = y[3];
    dy[3] = w * y[2];
  };
  state y{1.0, 0.0, 0.0, 1.0};
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<state>());
  try {
    odeint::integrate_adaptive(stepper, rhs, y, 0.0, period, period * 1e-3);
  } catch (const std::exception& ex) {
    throw ConvergenceError(std::string("monodromy_delta: integrator failed: ") + ex.what());
  }
  for (double v : y)
    if (!std::isfinite(v)) throw ConvergenceError("monodromy_delta: solution overflow (stiff regime)");
  Monodromy m;
  m.lambda = lambda;
  m.y1 = y[0];
  m.y1p = y[1];
  m.y2 = y[2];
  m.y2p = y[3];
  m.delta = m.y1 + m.y2p;
  return m;
}

Monodromy monodromy_delta(const lame::SimpleSpectrum& sp, double lambda, double tol) {
  return monodromy_delta([&](double x) { return lame::potential(sp, x); }, 0.5, lambda, tol);
}

Monodromy monodromy_delta(double mu, double lambda, double tol) {
  auto sp = lame::explicit_spectrum(elliptic::modulus_for_mu(mu), mu);
  return monodromy_delta(sp, lambda, tol);
}

namespace {

// int_0^L num(t) / sqrt|P(lam_r + dir t)| dt. Roots on the far side of the
// anchor are "outside"; the nearest one is absorbed by t = g sinh^2 v,
// otherwise t = u^2 takes out the anchor singularity.
template <class Num>
double edge_integral(const lame::SimpleSpectrum& sp, int r, int dir, double L, Num&& num, int panels) {
  if (L <= 0.0) return 0.0;
  std::array<double, 5> D{};
  int o = -1;
  double g = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 5; ++j) {
    D[static_cast<std::size_t>(j)] = sp.diff(j, r); // lam_r - lam_j
    if (j == r) continue;
    double dj = D[static_cast<std::size_t>(j)];
    if (dj * dir > 0.0 && std::fabs(dj) < g) {
      g = std::fabs(dj);
      o = j;
    }
  }
  auto others = [&](double t) {
    double prod = 1.0;
    for (int j = 0; j < 5; ++j) {
      if (j == r || j == o) continue;
      double dj = D[static_cast<std::size_t>(j)];
      prod *= (dj * dir > 0.0) ? std::fabs(dj) + t : std::fabs(dj) - t;
    }
    return prod;
  };
  if (o >= 0) {
    double vmax = std::asinh(std::sqrt(L / g));
    auto f = [&](double v) {
      double sh = std::sinh(v);
      double t = g * sh * sh;
      return 2.0 * num(t) / std::sqrt(others(t));
    };
    return quad::gauss_panels(f, 0.0, vmax, panels);
  }
  double umax = std::sqrt(L);
  auto f = [&](double u) {
    double t = u * u;
    return 2.0 * num(t) / std::sqrt(others(t));
  };
  return quad::gauss_panels(f, 0.0, umax, panels);
}

// numerator callables are built per anchor; this adapter supplies (r, dir)
template <class Make>
double full_interval(const lame::SimpleSpectrum& sp, int a, int b, Make&& make, int panels) {
  double w = sp.diff(a, b);
  return edge_integral(sp, a, +1, 0.5 * w, make(a, +1), panels) +
         edge_integral(sp, b, -1, 0.5 * w, make(b, -1), panels);
}

// from lam_a (left edge) to the interior point with offsets tA = s - lam_a, tB = lam_b - s
template <class Make>
double partial_from_left(const lame::SimpleSpectrum& sp, int a, int b, double tA, double tB, Make&& make,
                         int panels) {
  double w = sp.diff(a, b);
  if (tA <= 0.5 * w) return edge_integral(sp, a, +1, tA, make(a, +1), panels);
  return full_interval(sp, a, b, make, panels) - edge_integral(sp, b, -1, tB, make(b, -1), panels);
}

auto hochstadt_numerator(const lame::SimpleSpectrum& sp, const GapPoints& gp) {
  return [&sp, &gp](int r, int dir) {
    double o1 = sp.diff(1, r) - gp.delta1; // lam_r - lam'_1
    double o2 = sp.diff(3, r) - gp.delta2; // lam_r - lam'_2
    return [o1, o2, dir](double t) { return (o1 + dir * t) * (o2 + dir * t); };
  };
}

auto power_numerator(const lame::SimpleSpectrum& sp, int k) {
  return [&sp, k](int r, int dir) {
    double o = sp.diff(1, r); // lam_r - lam_1
    return [o, dir, k](double t) {
      double A = o + dir * t;
      return k == 0 ? 1.0 : (k == 1 ? A : A * A);
    };
  };
}

double log_2cosh(double y) { return std::log(2.0) + y + std::log1p(std::exp(-2.0 * y)); }
double log_sq_minus_4(double y) { return 2.0 * y + 2.0 * std::log1p(-std::exp(-2.0 * y)); }

} // namespace

GapPoints solve_gap_points(const lame::SimpleSpectrum& sp, int panels) {
  if (sp.gap[1] < 1e-12 || sp.gap[3] < 1e-12) throw SpectralOrderingError("solve_gap_points: nearly closed gap");
  std::array<double, 3> g1{}, g2{};
  for (int k = 0; k < 3; ++k) {
    g1[static_cast<std::size_t>(k)] = full_interval(sp, 1, 2, power_numerator(sp, k), panels);
    g2[static_cast<std::size_t>(k)] = full_interval(sp, 3, 4, power_numerator(sp, k), panels);
  }
  // N = A^2 + beta A + gamma, A = s - lam_1, must integrate to zero over both gaps
  double det = g1[1] * g2[0] - g1[0] * g2[1];
  if (!(std::fabs(det) > 1e-300)) throw SpectralOrderingError("solve_gap_points: singular gap system");
  double beta = (-g1[2] * g2[0] + g1[0] * g2[2]) / det;
  double gamma = (-g1[1] * g2[2] + g1[2] * g2[1]) / det;
  double disc = beta * beta - 4.0 * gamma;
  if (disc < 0.0) throw SpectralOrderingError("solve_gap_points: complex auxiliary points");
  double r2 = 0.5 * (-beta + std::sqrt(disc));
  GapPoints gp;
  gp.delta1 = gamma / r2;
  gp.delta2 = r2 - sp.diff(1, 3);
  gp.lp1 = sp.lam[1] + gp.delta1;
  gp.lp2 = sp.lam[3] + gp.delta2;
  if (!(gp.delta1 > 0.0 && gp.delta1 < sp.gap[1] && gp.delta2 > 0.0 && gp.delta2 < sp.gap[3]))
    throw SpectralOrderingError("solve_gap_points: auxiliary point outside its gap");
  double sc1 = std::fabs(g1[2]) + std::fabs(beta * g1[1]) + std::fabs(gamma * g1[0]);
  double sc2 = std::fabs(g2[2]) + std::fabs(beta * g2[1]) + std::fabs(gamma * g2[0]);
  auto num = hochstadt_numerator(sp, gp);
  gp.residual1 = std::fabs(full_interval(sp, 1, 2, num, panels)) / sc1;
  gp.residual2 = std::fabs(full_interval(sp, 3, 4, num, panels)) / sc2;
  return gp;
}

double psi_lambda1(const lame::SimpleSpectrum& sp, const GapPoints& gp, int panels) {
  return 0.25 * std::sqrt(sp.mu) * full_interval(sp, 0, 1, hochstadt_numerator(sp, gp), panels);
}

double inner_integral_2(const lame::SimpleSpectrum& sp, const GapPoints& gp, int panels) {
  // 2 - lam_1 = eps exactly
  return edge_integral(sp, 1, +1, sp.eps, hochstadt_numerator(sp, gp)(1, +1), panels);
}

DeltaValue hochstadt_delta(const lame::SimpleSpectrum& sp, const GapPoints& gp, double lambda_scaled, int panels) {
  if (!std::isfinite(lambda_scaled)) throw DomainError("hochstadt_delta: non-finite lambda");
  const double mu = sp.mu;
  const double c = 0.25 * std::sqrt(mu);
  const double s = lambda_scaled / mu;
  auto num = hochstadt_numerator(sp, gp);
  const auto& L = sp.lam;
  DeltaValue out;
  auto cosh_regime = [&](double y, int sign, Regime reg) {
    y = std::fabs(y);
    out.regime = reg;
    out.y = y;
    out.sign = sign;
    out.log_abs = log_2cosh(y);
    out.value = sign * 2.0 * std::cosh(y);
    out.log_d2m4 = y > 0.0 ? log_sq_minus_4(y) : -std::numeric_limits<double>::infinity();
  };
  auto band_regime = [&](double phase, Regime reg) {
    out.regime = reg;
    out.phase = phase;
    out.value = 2.0 * std::cos(phase);
    out.sign = out.value < 0.0 ? -1 : 1;
    out.log_abs = std::log(std::fabs(out.value));
    out.log_d2m4 = std::numeric_limits<double>::quiet_NaN();
  };
  // band-edge limit values
  const double edge_tol = 1e-12;
  const int edge_sign[5] = {+1, -1, -1, +1, +1};
  for (int j = 0; j < 5; ++j) {
    if (std::fabs(s - L[static_cast<std::size_t>(j)]) <= edge_tol * std::max(1.0, std::fabs(L[static_cast<std::size_t>(j)]))) {
      out.value = 2.0 * edge_sign[j];
      out.sign = edge_sign[j];
      out.log_abs = std::log(2.0);
      out.log_d2m4 = -std::numeric_limits<double>::infinity();
      out.regime = (j == 0) ? Regime::band0 : (j == 1 ? Regime::band0 : (j == 2 ? Regime::band1 : (j == 3 ? Regime::band1 : Regime::above)));
      out.phase = (j == 0) ? 0.0 : (j <= 2 ? std::numbers::pi : 2.0 * std::numbers::pi);
      return out;
    }
  }
  if (s < L[0]) {
    cosh_regime(c * edge_integral(sp, 0, -1, L[0] - s, num(0, -1), panels), +1, Regime::below);
  } else if (s < L[1]) {
    band_regime(c * partial_from_left(sp, 0, 1, s - L[0], L[1] - s, num, panels), Regime::band0);
  } else if (s < L[2]) {
    cosh_regime(c * partial_from_left(sp, 1, 2, s - L[1], L[2] - s, num, panels), -1, Regime::gap1);
  } else if (s < L[3]) {
    band_regime(std::numbers::pi - c * partial_from_left(sp, 2, 3, s - L[2], L[3] - s, num, panels), Regime::band1);
  } else if (s < L[4]) {
    cosh_regime(c * partial_from_left(sp, 3, 4, s - L[3], L[4] - s, num, panels), +1, Regime::gap2);
  } else {
    band_regime(2.0 * std::numbers::pi + c * edge_integral(sp, 4, +1, s - L[4], num(4, +1), panels), Regime::above);
  }
  return out;
}

Delta2Mu delta_2mu(const lame::SimpleSpectrum& sp, const GapPoints& gp, int panels) {
  Delta2Mu d;
  d.inner = inner_integral_2(sp, gp, panels);
  d.cosh_arg = 0.25 * std::sqrt(sp.mu) * d.inner;
  d.sign = -1;
  d.log_d2m4 = log_sq_minus_4(std::fabs(d.cosh_arg));
  d.inv_root = std::exp(-0.5 * d.log_d2m4);
  d.normalized_log = 0.5 * d.log_d2m4 / std::sqrt(sp.mu);
  return d;
}

Delta2Mu delta_2mu_asymptotics(double mu) {
  if (mu < 100.0) throw PreconditionError("delta_2mu_asymptotics: mu >= 100 required");
  auto sp = lame::explicit_spectrum(elliptic::modulus_for_mu(mu), mu);
  auto gp = solve_gap_points(sp);
  return delta_2mu(sp, gp);
}

} // namespace hilltails::discriminant
