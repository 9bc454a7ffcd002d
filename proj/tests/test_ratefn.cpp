#include <doctest.h>

#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hilltails/error.hpp"
#include "hilltails/ratefn.hpp"

using namespace hilltails;
using namespace hilltails::ratefn;

namespace {

constexpr double eight_thirds = 8.0 / 3.0;

// f_a and its derivative, continuous version for quadrature
double fa(double x, double a, double* d) {
  double t;
  if (x < -0.5 * a) {
    t = std::tanh(x + a);
    *d = -(1 - t * t);
    return -t;
  }
  if (x < 0.5 * a) {
    t = std::tanh(x);
    *d = 1 - t * t;
    return t;
  }
  t = std::tanh(x - a);
  *d = -(1 - t * t);
  return -t;
}

double I_quadrature(double a) {
  auto integrand = [a](double x) {
    double d;
    double f = fa(x, a, &d);
    return 0.5 * (1 - f * f) * (1 - f * f) + 0.5 * d * d;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double s = 0.0;
  for (auto [lo, hi] : {std::pair{-a, -0.5 * a}, std::pair{-0.5 * a, 0.5 * a}, std::pair{0.5 * a, a}})
    s += GK::integrate(integrand, lo, hi, 10, 1e-14);
  return s;
}

MinimizerResult run(double a, std::size_t n = 1024, const GridPath* seed = nullptr) {
  return minimize(RateProblem{a, n}, seed);
}

} // namespace

TEST_CASE("rate value on simple paths") {
  GridPath zero(256, -5.0, 10.0);
  CHECK(rate_value(zero, 5.0) == doctest::Approx(5.0).epsilon(1e-15));
  auto f10 = test_function(10.0, 4096);
  double I10 = rate_value(f10, 10.0);
  CHECK(I10 <= eight_thirds);
  CHECK(I10 >= eight_thirds - 0.01);
  double I12 = rate_value(test_function(12.0, 4096), 12.0);
  CHECK(I12 < eight_thirds);
  CHECK(I12 > eight_thirds - 0.01);
  // the glued profile has O(e^{-a}) derivative jumps; a fine grid resolves them
  CHECK(rate_value(test_function(3.0, 1 << 16), 3.0) == doctest::Approx(I_quadrature(3.0)).epsilon(1e-6));
  CHECK_THROWS_AS(rate_value(zero, 4.0), DomainError);
}

TEST_CASE("test function") {
  auto f = test_function(10.0, 1000);
  CHECK(std::fabs(f[500]) < 1e-15); // x = 0
  double d;
  double left = fa(5.0 - 1e-12, 10.0, &d), right = fa(5.0 + 1e-12, 10.0, &d);
  CHECK(std::fabs(left - right) < 1e-10);
  double dl, dr;
  fa(5.0 - 1e-12, 10.0, &dl);
  fa(5.0 + 1e-12, 10.0, &dr);
  CHECK(std::fabs(dl - dr) <= 2.0 * 4.0 * std::exp(-5.0) + 1e-9);
  CHECK_THROWS_AS(test_function(0.5, 64), PreconditionError);
}

TEST_CASE("minimizers") {
  auto r5 = run(5.0), r10 = run(10.0), r20 = run(20.0);
  for (auto* r : {&r5, &r10, &r20}) {
    CHECK(r->converged);
    CHECK(r->grad_sup <= 1e-8);
    CHECK(r->I_star <= eight_thirds + 1e-6);
    CHECK(r->el_residual <= 1e-4);
    CHECK(std::fabs(r->f_star.mean()) < 1e-12);
  }
  CHECK(r10.I_star >= 2.55);
  CHECK(std::fabs(r20.I_star - eight_thirds) < std::fabs(r10.I_star - eight_thirds) + 1e-6);
  CHECK(std::fabs(r20.I_star - eight_thirds) < std::fabs(r5.I_star - eight_thirds));
  CHECK(std::fabs(r10.beta - 1.0) <= eight_thirds / 10.0 + 0.05);
  // the minimizers are odd about their zeros, so alpha vanishes to rounding at both a
  CHECK(std::fabs(r10.alpha) < 1e-10);
  CHECK(std::fabs(r20.alpha) < 1e-10);
  // pinned: f*(0) = 0 up to one grid cell
  const auto& f = r10.f_star;
  CHECK(std::fabs(f[f.size() / 2]) <= 1.5 * f.h());
}

TEST_CASE("sign symmetry") {
  auto f = test_function(10.0, 1024);
  for (auto& v : f.v) v = -v;
  auto r = run(10.0, 1024, &f);
  CHECK(r.I_star == doctest::Approx(run(10.0).I_star).epsilon(1e-8));
}

TEST_CASE("first-integral residual of tanh") {
  auto f = test_function(15.0, 4096);
  CHECK(el_residual(f, 0.0, 1.0) < 1e-3);
  // interior identity 1/2 sech^4 = 1/2 tanh^4 - tanh^2 + 1/2 away from the glue points
  auto d1 = d1_sixth(f);
  for (std::size_t i = 1500; i < 2600; ++i) {
    double x = f[i];
    CHECK(std::fabs(0.5 * d1[i] * d1[i] - (0.5 * x * x * x * x - x * x + 0.5)) < 1e-9);
  }
}

TEST_CASE("stencils") {
  GridPath f(256, 0.0, 2.0 * M_PI);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(3.0 * f.x(i));
  auto d1 = d1_sixth(f);
  auto d2 = d2_fourth(f);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(d1[i] == doctest::Approx(3.0 * std::cos(3.0 * f.x(i))).epsilon(1e-7).scale(1.0));
    CHECK(d2[i] == doctest::Approx(-9.0 * f[i]).epsilon(1e-5).scale(1.0));
  }
  auto z = zeros(f);
  CHECK(z.size() == 6);
  for (double x : z) CHECK(std::fabs(std::sin(3.0 * x)) < 1e-6);
}
