#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "hilltails/elliptic.hpp"
#include "hilltails/error.hpp"

using namespace hilltails;
using namespace hilltails::elliptic;

namespace {

double K_quadrature(double k) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate([k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0,
                      M_PI / 2);
}

// K for m1 = 1 - k^2 close to 0, written to avoid forming k^2
double K_quadrature_m1(double m1) {
  boost::math::quadrature::tanh_sinh<double> ts;
  return ts.integrate(
      [m1](double t) {
        double c = std::cos(t);
        return 1.0 / std::sqrt(c * c + m1 * std::sin(t) * std::sin(t));
      },
      0.0, M_PI / 2);
}

} // namespace

TEST_CASE("complete K") {
  CHECK(complete_K(0.0) == doctest::Approx(M_PI / 2).epsilon(1e-15));
  CHECK(complete_K(0.5) == doctest::Approx(K_quadrature(0.5)).epsilon(1e-13));
  CHECK(complete_K(0.5) == doctest::Approx(boost::math::ellint_1(0.5)).epsilon(1e-13));
  const double m1 = 1e-6;
  double K = complete_K_m1(m1);
  CHECK(K >= std::log(4.0 / std::sqrt(m1)) - 1.0);
  CHECK(K == doctest::Approx(K_quadrature_m1(m1)).epsilon(1e-11));
  // monotone divergence
  double prev = 0.0;
  for (double e : {1e-2, 1e-4, 1e-8, 1e-12, 1e-16, 1e-30}) {
    double v = complete_K_m1(e);
    CHECK(v > prev);
    prev = v;
  }
  CHECK_THROWS_AS(complete_K(1.0), DomainError);
  CHECK_THROWS_AS(complete_K_m1(0.0), DomainError);
}

TEST_CASE("sn cn dn special values") {
  for (double k : {0.0, 0.3, 0.9, 1.0}) {
    auto ctx = k < 1.0 ? context_from_k(k) : context_from_kc2(0.0);
    auto s = sn_cn_dn(0.0, ctx);
    CHECK(s.sn == 0.0);
    CHECK(s.cn == 1.0);
    CHECK(s.dn == 1.0);
  }
  auto c0 = context_from_k(0.0);
  auto c1 = context_from_kc2(0.0);
  for (double x : {-3.0, -0.7, 0.2, 1.9, 7.5}) {
    auto a = sn_cn_dn(x, c0);
    CHECK(a.sn == doctest::Approx(std::sin(x)).epsilon(1e-14));
    CHECK(a.cn == doctest::Approx(std::cos(x)).epsilon(1e-14));
    CHECK(a.dn == 1.0);
    auto b = sn_cn_dn(x, c1);
    CHECK(b.sn == doctest::Approx(std::tanh(x)).epsilon(1e-14));
    CHECK(b.cn == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-14));
    CHECK(b.dn == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-14));
  }
}

TEST_CASE("sn cn dn against boost") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> uk(0.01, 0.99), ux(-30.0, 30.0);
  for (int i = 0; i < 500; ++i) {
    double k = uk(gen), x = ux(gen);
    auto s = sn_cn_dn(x, context_from_k(k));
    double cn, dn;
    double sn = boost::math::jacobi_elliptic(k, x, &cn, &dn);
    CHECK(std::fabs(s.sn - sn) < 1e-11);
    CHECK(std::fabs(s.cn - cn) < 1e-11);
    CHECK(std::fabs(s.dn - dn) < 1e-11);
  }
}

TEST_CASE("identities near k = 1") {
  std::mt19937_64 gen(5);
  for (double kc2 : {1e-3, 1e-8, 1e-14, 1e-20}) {
    auto ctx = context_from_kc2(kc2);
    std::uniform_real_distribution<double> ux(-4 * ctx.K, 4 * ctx.K);
    for (int i = 0; i < 200; ++i) {
      double x = ux(gen);
      auto s = sn_cn_dn(x, ctx);
      CHECK(std::fabs(s.sn * s.sn + s.cn * s.cn - 1.0) < 1e-12);
      CHECK(std::fabs(s.dn * s.dn + ctx.k2 * s.sn * s.sn - 1.0) < 1e-12);
      auto p = sn_cn_dn(x + 4.0 * ctx.K, ctx);
      CHECK(std::fabs(p.sn - s.sn) < 1e-9);
    }
    // dn at K is the complementary modulus, which k2 alone cannot resolve
    CHECK(sn_cn_dn(ctx.K, ctx).dn == doctest::Approx(ctx.kc).epsilon(1e-9));
  }
}

TEST_CASE("modulus for mu") {
  CHECK(modulus_for_mu(4 * M_PI * M_PI).k == 0.0);
  auto c100 = modulus_for_mu(100.0);
  CHECK(std::fabs(4.0 * complete_K(c100.k) - 10.0) < 1e-12);
  CHECK(std::fabs(4.0 * c100.K - 10.0) < 1e-12);
  auto c400 = modulus_for_mu(400.0);
  double target = 16.0 * std::exp(-10.0);
  CHECK(std::fabs(c400.kc2 / target - 1.0) < 0.25);
  // sharper: the nome expansion gives 16 q (1 - 8 q) with q = exp(-pi K/K')
  auto c2500 = modulus_for_mu(2500.0);
  CHECK(c2500.kc2 == doctest::Approx(16.0 * std::exp(-25.0)).epsilon(1e-6));
  CHECK(4.0 * complete_K_m1(c2500.kc2) == doctest::Approx(50.0).epsilon(1e-13));
  CHECK_THROWS_AS(modulus_for_mu(30.0), PreconditionError);
}

TEST_CASE("extremal path") {
  const double mu = 100.0;
  auto ctx = modulus_for_mu(mu);
  auto p = extremal_path(ctx, 1024);
  CHECK(p[0] == 0.0);
  CHECK(std::fabs(p[512]) < 1e-12);
  CHECK(p[256] == doctest::Approx(ctx.k * 10.0).epsilon(1e-13));
  double mx = 0.0;
  for (double v : p.v) mx = std::max(mx, std::fabs(v));
  CHECK(mx == doctest::Approx(ctx.k * 10.0).epsilon(1e-13));
  // odd about 1/2: the grid mean vanishes
  CHECK(std::fabs(p.mean()) < 1e-12);
  CHECK(std::fabs(extremal_path(ctx, 1000).mean()) < 1e-10);
  CHECK_THROWS_AS(extremal_path(ctx, 8), PreconditionError);
}
