#include "hilltails/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "hilltails/error.hpp"
#include "hilltails/ratefn.hpp"

namespace hilltails::asymptotics {

namespace {

constexpr double pi = std::numbers::pi;

double log_sum_exp(const std::vector<double>& v) {
  double m = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

std::size_t fine_grid(double mu, std::size_t n) {
  if (n) return n;
  return std::max<std::size_t>(8192, static_cast<std::size_t>(std::ceil(400.0 * std::sqrt(mu))));
}

} // namespace

AFactors A_functional(const GridPath& p) {
  const std::size_t n = p.size();
  const double h = p.h();
  std::vector<double> P(n), Q(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    P[i] = 2.0 * acc;
    Q[i] = -2.0 * acc;
    acc += 0.5 * h * (p[i] + p[(i + 1) % n]);
  }
  AFactors a;
  a.log_plus = std::log(h) + log_sum_exp(P);
  a.log_minus = std::log(h) + log_sum_exp(Q);
  return a;
}

AFactors A_extremal(const elliptic::EllipticContext& ctx, std::size_t n) {
  if (!ctx.mu) throw PreconditionError("A_extremal: context not built from mu");
  const double mu = *ctx.mu;
  n = fine_grid(mu, n);
  const double r = std::sqrt(mu);
  const double one_minus_k = ctx.kc2 / (1.0 + ctx.k);
  std::vector<double> E(n), F(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto f = elliptic::sn_cn_dn(r * static_cast<double>(i) / static_cast<double>(n), ctx);
    // d/du log(dn - k cn) = k sn; dn - k cn written without cancellation
    double w = f.cn > 0.0 ? ctx.kc2 * f.sn * f.sn / (f.dn + f.cn) + one_minus_k * f.cn : f.dn - ctx.k * f.cn;
    double e = 2.0 * std::log(w / one_minus_k);
    E[i] = e;
    F[i] = -e;
  }
  const double lh = -std::log(static_cast<double>(n));
  return {lh + log_sum_exp(E), lh + log_sum_exp(F)};
}

RResult R_functional(const GridPath& p, const lame::SimpleSpectrum& sp) {
  const std::size_t n = p.size();
  const double h = p.h();
  if (std::fabs(p.length - 1.0) > 1e-12) throw DomainError("R_functional: path must live on [0,1)");
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = lame::phi1_scaled(sp, p.x(i)).first;
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += phi[(i + j) % n] * p[j];
    c[i] = h * s;
  }
  auto conv = [&](double x) {
    double v = 0.0, d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      auto [f, fp] = lame::phi1_scaled(sp, x + p.x(j));
      v += f * p[j];
      d += fp * p[j];
    }
    return std::pair<double, double>{h * v, h * d};
  };
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::fabs(v));
  if (cmax == 0.0) throw DomainError("R_functional: convolution vanishes identically (degenerate path)");
  RResult out;
  for (std::size_t i = 0; i < n; ++i) {
    double y0 = c[i], y1 = c[(i + 1) % n];
    double lo = p.x(i), hi = lo + h;
    if (y0 == 0.0) {
      out.zeros.push_back(lo);
      continue;
    }
    if (y0 * y1 > 0.0) continue;
    bool neg_lo = y0 < 0.0;
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((conv(mid).first < 0.0) == neg_lo)
        lo = mid;
      else
        hi = mid;
    }
    double z = 0.5 * (lo + hi);
    out.zeros.push_back(z >= 1.0 - 1e-12 ? z - 1.0 : z);
  }
  std::sort(out.zeros.begin(), out.zeros.end());
  if (out.zeros.empty()) throw DomainError("R_functional: convolution has no sign change (degenerate path)");
  double inv = 0.0;
  for (double z : out.zeros) {
    double d = conv(z).second;
    if (d == 0.0) throw DomainError("R_functional: tangential zero of the convolution");
    out.slopes.push_back(d);
    inv += 1.0 / std::fabs(d);
  }
  out.R = 1.0 / inv;
  return out;
}

double rate_Imu(const GridPath& p, double mu) {
  auto d2 = ratefn::d2_fourth(p);
  double pot = 0.0, kin = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double u = mu - p[i] * p[i];
    pot += u * u;
    kin -= p[i] * d2[i];
  }
  return 0.5 * p.h() * (pot + kin);
}

double rate_at_extremal(const elliptic::EllipticContext& ctx, double mu, std::size_t n) {
  n = fine_grid(mu, n);
  const double r = std::sqrt(mu);
  double a = 0.0, b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto f = elliptic::sn_cn_dn(r * static_cast<double>(i) / static_cast<double>(n), ctx);
    double d2 = f.dn * f.dn; // mu - p^2 = mu dn^2
    a += d2 * d2;
    b += f.cn * f.cn * d2;
  }
  a /= static_cast<double>(n);
  b /= static_cast<double>(n);
  return 0.5 * mu * mu * (a + ctx.k2 * b);
}

ZParts gaussian_correction(const lame::SimpleSpectrum& sp, double log_d0, double log_d2mu) {
  if (!std::isfinite(log_d0) || !std::isfinite(log_d2mu))
    throw SpectralOrderingError("gaussian_correction: Delta^2 - 4 must be positive at 0 and 2mu");
  const auto& L = sp.lam;
  // 1 - 2mu/lam^mu = (lam - 2)/lam, numerators from the gap table
  const double n0 = -(sp.gap[0] + sp.eps);
  const double n1 = -sp.eps;
  const double n4 = sp.diff(1, 4) - sp.eps;
  ZParts z;
  z.negative_factors = (n0 < 0) + (n1 < 0) + (n4 < 0);
  z.odd_negative = z.negative_factors % 2 == 1;
  if (n0 == 0.0 || n1 == 0.0 || n4 == 0.0) throw SpectralOrderingError("gaussian_correction: zero factor in product");
  z.log_b1 = std::log(std::fabs(n0)) + std::log(std::fabs(n1)) + std::log(std::fabs(n4)) - std::log(L[0]) -
             std::log(L[1]) - std::log(L[4]);
  const double c02 = sp.c0 * sp.c0, c42 = sp.c4 * sp.c4;
  const double num = L[4] * c02 + L[0] * c42;
  const double den = (L[4] - 2.0) * c02 + n0 * c42;
  if (!(num > 0.0) || !(den > 0.0)) throw SpectralOrderingError("gaussian_correction: c0/c4 bracket radicand not positive");
  z.log_b2 = std::log(num) - std::log(den);
  // [2pi/(mu lam1) (c0^2/(mu lam0) + c4^2/(mu lam4))]^{-1/2}
  const double inner = c02 / L[0] + c42 / L[4];
  z.log_hessian_ratio = -0.5 * (std::log(2.0 * pi) - 2.0 * std::log(sp.mu) - std::log(L[1]) + std::log(inner));
  z.log_d0 = log_d0;
  z.log_d2mu = log_d2mu;
  z.log_Z = 0.5 * (z.log_b1 + z.log_b2) + 0.5 * (log_d0 - log_d2mu) + z.log_hessian_ratio - 0.5 * log_d0;
  return z;
}

TailReport assemble_tail(double mu) {
  auto ctx = elliptic::modulus_for_mu(mu);
  auto sp = lame::explicit_spectrum(ctx, mu);
  auto gp = discriminant::solve_gap_points(sp);
  auto d0 = discriminant::hochstadt_delta(sp, gp, 0.0);
  auto d2 = discriminant::delta_2mu(sp, gp);
  TailReport t;
  t.mu = mu;
  t.eps = sp.eps;
  auto A = A_extremal(ctx);
  t.log_A_plus = A.log_plus;
  t.log_A_minus = A.log_minus;
  const std::size_t nR = std::max<std::size_t>(2048, static_cast<std::size_t>(std::ceil(64.0 * std::sqrt(mu))));
  t.log_R = std::log(R_functional(elliptic::extremal_path(ctx, nR), sp).R);
  t.I_val = rate_at_extremal(ctx, mu);
  t.Z = gaussian_correction(sp, d0.log_d2m4, d2.log_d2m4);
  t.odd_negative = t.Z.odd_negative;
  t.d2mu_normalized_log = d2.normalized_log;
  // exp[-I], not exp[+I]: the leading order must be e^{-8/3 mu^{3/2}}
  t.log_f_assembled = 0.5 * std::log(2.0 / pi) + t.log_A_plus + t.log_A_minus + t.log_R + t.Z.log_Z - t.I_val;
  t.log_f_closed = closed_form_tails(mu);
  t.log_ratio = t.log_f_assembled - t.log_f_closed;
  t.ratio = std::exp(t.log_ratio);
  return t;
}

double closed_form_tails(double mu) {
  if (mu == 0.0 || !std::isfinite(mu)) throw DomainError("closed_form_tails: mu = 0 is in neither asymptotic regime");
  if (mu > 0.0) return std::log(4.0 / (3.0 * pi) * mu) - 8.0 / 3.0 * std::pow(mu, 1.5) - 0.5 * std::sqrt(mu);
  const double m = -mu;
  return 0.5 * std::log(m / pi) - 0.5 * mu * mu - std::sqrt(m) / std::sqrt(2.0);
}

SechConstants sech_constants() {
  boost::math::quadrature::exp_sinh<double> q;
  auto sech = [](double x) {
    double e = std::exp(-x);
    return 2.0 * e / (1.0 + e * e);
  };
  auto tanh2 = [](double x) {
    double t = std::tanh(x);
    return t * t;
  };
  auto integ = [&](auto f) { return 2.0 * q.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-15); };
  SechConstants c;
  c.sech4 = integ([&](double x) { return std::pow(sech(x), 4); });
  c.sech5_tanh2 = integ([&](double x) { return std::pow(sech(x), 5) * tanh2(x); });
  c.sech8 = integ([&](double x) { return std::pow(sech(x), 8); });
  c.sech2_tanh2 = integ([&](double x) { return std::pow(sech(x), 2) * tanh2(x); });
  return c;
}

} // namespace hilltails::asymptotics
