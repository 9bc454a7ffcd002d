#include "hilltails/elliptic.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "hilltails/error.hpp"

namespace hilltails::elliptic {

namespace {

constexpr double pi = std::numbers::pi;

// A&S 16.4 descending AGM; valid for m1 > 0 and moderate |u| (we only call it on [0, K/2])
SnCnDn agm_sncndn(long double u, long double k, long double kc) {
  constexpr int max_levels = 40;
  long double a[max_levels + 1], c[max_levels + 1];
  a[0] = 1.0L;
  long double b = kc;
  c[0] = k;
  int n = 0;
  while (std::fabs(c[n]) > 1e-19L * a[n] && n < max_levels) {
    long double an = a[n];
    a[n + 1] = 0.5L * (an + b);
    c[n + 1] = 0.5L * (an - b);
    b = std::sqrt(an * b);
    ++n;
  }
  long double phi = std::ldexp(a[n] * u, n);
  long double phi_prev = phi;
  for (int i = n; i > 0; --i) {
    phi_prev = phi;
    phi = 0.5L * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  // phi is phi_0, phi_prev is phi_1
  long double s = std::sin(phi), cc = std::cos(phi);
  long double d = (n > 0) ? cc / std::cos(phi_prev - phi) : 1.0L;
  return {static_cast<double>(s), static_cast<double>(cc), static_cast<double>(d)};
}

} // namespace

double complete_K_m1(double m1) {
  if (!(m1 > 0.0) || m1 > 1.0) throw DomainError("complete_K: complementary parameter outside (0,1]");
  long double a = 1.0L, b = std::sqrt(static_cast<long double>(m1));
  for (int i = 0; i < 64 && std::fabs(a - b) > 1e-19L * a; ++i) {
    long double an = 0.5L * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return static_cast<double>(pi / (2.0L * a));
}

double complete_K(double k) {
  if (!std::isfinite(k) || k < 0.0 || k > 1.0) throw DomainError("complete_K: modulus outside [0,1)");
  if (k == 1.0) throw DomainError("complete_K: diverges at k = 1");
  // (1-k)(1+k) keeps the complement accurate for k near 1
  return complete_K_m1((1.0 - k) * (1.0 + k));
}

EllipticContext context_from_kc2(double kc2) {
  if (!(kc2 >= 0.0 && kc2 <= 1.0)) throw DomainError("elliptic context: 1-k^2 outside [0,1]");
  EllipticContext c;
  c.kc2 = kc2;
  c.kc = std::sqrt(kc2);
  c.k2 = 1.0 - kc2;
  c.k = std::sqrt(c.k2);
  c.K = kc2 > 0.0 ? complete_K_m1(kc2) : std::numeric_limits<double>::infinity();
  return c;
}

EllipticContext context_from_k(double k) {
  if (!std::isfinite(k) || k < 0.0 || k > 1.0) throw DomainError("elliptic context: modulus outside [0,1]");
  auto c = context_from_kc2((1.0 - k) * (1.0 + k));
  c.k = k;
  c.k2 = k * k;
  return c;
}

SnCnDn sn_cn_dn(double x, const EllipticContext& ctx) {
  if (!std::isfinite(x)) throw DomainError("sn_cn_dn: non-finite argument");
  if (ctx.k2 == 0.0) return {std::sin(x), std::cos(x), 1.0};
  if (ctx.kc2 == 0.0) {
    double s = 1.0 / std::cosh(x);
    return {std::tanh(x), s, s};
  }
  const double K = ctx.K;
  double r = std::fmod(x, 4.0 * K);
  if (r < 0.0) r += 4.0 * K;
  double ssn = 1.0, scn = 1.0;
  if (r >= 2.0 * K) {
    r -= 2.0 * K;
    ssn = -1.0;
    scn = -1.0;
  }
  if (r > K) {
    r = 2.0 * K - r;
    scn = -scn;
  }
  SnCnDn out;
  if (r > 0.5 * K) {
    // quarter-period shift keeps relative accuracy of cn near K
    auto t = agm_sncndn(K - r, ctx.k, ctx.kc);
    out.sn = t.cn / t.dn;
    out.cn = ctx.kc * t.sn / t.dn;
    out.dn = ctx.kc / t.dn;
  } else {
    out = agm_sncndn(r, ctx.k, ctx.kc);
  }
  out.sn *= ssn;
  out.cn *= scn;
  return out;
}

EllipticContext modulus_for_mu(double mu) {
  if (!std::isfinite(mu)) throw DomainError("modulus_for_mu: non-finite mu");
  const double target = std::sqrt(mu);
  if (target < 2.0 * pi * (1.0 - 1e-15)) throw PreconditionError("modulus_for_mu: no periodic solution for mu < 4 pi^2");
  if (target <= 2.0 * pi * (1.0 + 1e-15)) {
    auto c = context_from_kc2(1.0);
    c.mu = mu;
    return c;
  }
  // 4K is decreasing in log(1 - k^2)
  auto g = [&](double lm1) { return 4.0 * complete_K_m1(std::exp(lm1)) - target; };
  double lo = -745.0, hi = 0.0;
  if (g(lo) < 0.0) throw DomainError("modulus_for_mu: mu too large for double precision");
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::fabs(a - b) <= 1e-15 * std::max(1.0, std::fabs(a)); };
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, g(lo), g(hi), tol, iters);
  double lm1 = 0.5 * (a + b);
  auto c = context_from_kc2(std::exp(lm1));
  c.mu = mu;
  return c;
}

GridPath extremal_path(const EllipticContext& ctx, std::size_t n) {
  if (!ctx.mu) throw PreconditionError("extremal_path: context not built from mu");
  if (n < 16) throw PreconditionError("extremal_path: n must be >= 16");
  const double r = std::sqrt(*ctx.mu);
  GridPath p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = ctx.k * r * sn_cn_dn(r * p.x(i), ctx).sn;
  return p;
}

} // namespace hilltails::elliptic
