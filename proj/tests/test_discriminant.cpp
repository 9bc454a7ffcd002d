#include <doctest.h>

#include <cmath>

#include "hilltails/discriminant.hpp"
#include "hilltails/elliptic.hpp"
#include "hilltails/error.hpp"

using namespace hilltails;
using namespace hilltails::discriminant;

namespace {

lame::SimpleSpectrum at(double mu) { return lame::explicit_spectrum(elliptic::modulus_for_mu(mu), mu); }

} // namespace

TEST_CASE("free Hill equation") {
  auto zero = [](double) { return 0.0; };
  for (double lam : {0.5, 10.0, 100.0, 400.0}) {
    auto m = monodromy_delta(zero, 0.5, lam);
    CHECK(m.delta == doctest::Approx(2.0 * std::cos(0.5 * std::sqrt(lam))).epsilon(1e-10).scale(1.0));
    CHECK(m.wronskian() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("band edges from the ODE") {
  auto s = at(100.0);
  CHECK(monodromy_delta(s, s.scaled(0)).delta == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(monodromy_delta(s, s.scaled(1)).delta == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(monodromy_delta(s, s.scaled(2)).delta == doctest::Approx(-2.0).epsilon(1e-5));
  CHECK(monodromy_delta(s, s.scaled(3)).delta == doctest::Approx(2.0).epsilon(1e-5));
  CHECK(monodromy_delta(s, s.scaled(4)).delta == doctest::Approx(2.0).epsilon(1e-5));
  double d0 = monodromy_delta(s, 0.0).delta;
  CHECK(d0 * d0 - 4.0 > 0.0);
}

TEST_CASE("auxiliary gap points") {
  auto s = at(100.0);
  auto gp = solve_gap_points(s);
  CHECK(gp.lp1 > s.lam[1]);
  CHECK(gp.lp1 < s.lam[2]);
  CHECK(gp.lp2 > s.lam[3]);
  CHECK(gp.lp2 < s.lam[4]);
  CHECK(gp.residual1 < 1e-8);
  CHECK(gp.residual2 < 1e-8);
  // offsets as magnitudes: 4/log(1/eps) and 2/log(1/eps)
  auto e = lame::spectrum_from_eps(1e-4);
  auto ge = solve_gap_points(e);
  double L = std::log(1e4);
  CHECK(std::fabs(ge.delta1 / (4.0 / L) - 1.0) < 0.30);
  CHECK(std::fabs(ge.delta2 / (2.0 / L) - 1.0) < 0.30);
  // the approach is slow but monotone
  auto g8 = solve_gap_points(lame::spectrum_from_eps(1e-12));
  CHECK(std::fabs(g8.delta1 / (4.0 / std::log(1e12)) - 1.0) < std::fabs(ge.delta1 / (4.0 / L) - 1.0));
}

TEST_CASE("Hochstadt formula against the monodromy") {
  auto s = at(100.0);
  auto gp = solve_gap_points(s);
  CHECK(hochstadt_delta(s, gp, s.scaled(0)).value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(psi_lambda1(s, gp) == doctest::Approx(M_PI).epsilon(1e-10));
  int tested = 0;
  for (int i = 0; i < 20; ++i) {
    double lam = 800.0 * (i + 0.5) / 20.0;
    bool near_edge = false;
    for (int l = 0; l < 5; ++l) near_edge = near_edge || std::fabs(lam - s.scaled(l)) < 1.0;
    if (near_edge) continue;
    double ode = monodromy_delta(s, lam).delta;
    double hoch = hochstadt_delta(s, gp, lam).value;
    CHECK(std::fabs(ode - hoch) <= 1e-3 * std::max(1.0, std::fabs(ode)));
    ++tested;
  }
  CHECK(tested >= 18);
}

TEST_CASE("Delta(2 mu)") {
  for (double mu : {100.0, 400.0}) {
    auto s = at(mu);
    auto gp = solve_gap_points(s);
    auto d = delta_2mu(s, gp);
    auto m = monodromy_delta(s, 2.0 * mu);
    CHECK(m.delta < -2.0);
    CHECK(d.sign == -1);
    CHECK(d.cosh_arg == doctest::Approx(std::acosh(-m.delta / 2.0)).epsilon(1e-6));
    CHECK(d.cosh_arg == doctest::Approx(0.25 * std::sqrt(mu) * d.inner).epsilon(1e-12));
  }
  // the inner integral tends to 2
  double prev = 1.0;
  for (double mu : {100.0, 400.0, 2500.0}) {
    auto s = at(mu);
    double J = inner_integral_2(s, solve_gap_points(s));
    CHECK(std::fabs(J - 2.0) < prev);
    prev = std::fabs(J - 2.0);
  }
  CHECK(prev < 0.1);
  CHECK_THROWS_AS(delta_2mu_asymptotics(50.0), PreconditionError);
  CHECK(delta_2mu_asymptotics(400.0).normalized_log == doctest::Approx(delta_2mu(at(400.0), solve_gap_points(at(400.0))).normalized_log).epsilon(1e-12));
}
