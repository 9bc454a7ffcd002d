// Acceptance checks, one line per criterion:
//   acceptance             run all
//   acceptance --criterion 3
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hilltails/asymptotics.hpp"
#include "hilltails/discriminant.hpp"
#include "hilltails/elliptic.hpp"
#include "hilltails/lame.hpp"
#include "hilltails/ratefn.hpp"
#include "hilltails/rice.hpp"
#include "hilltails/sampling.hpp"

using namespace hilltails;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

lame::SimpleSpectrum at(double mu) { return lame::explicit_spectrum(elliptic::modulus_for_mu(mu), mu); }

constexpr double eight_thirds = 8.0 / 3.0;

Outcome elliptic_identities() {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ux(-10.0, 10.0), uk(0.0, 1.0);
  double worst_id = 0.0, worst_per = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // half the moduli pushed toward 1, where the tail regime lives
    double kc2 = i % 2 ? uk(gen) : std::pow(10.0, -12.0 * uk(gen));
    auto ctx = elliptic::context_from_kc2(std::max(kc2, 1e-14));
    double x = ux(gen);
    auto s = elliptic::sn_cn_dn(x, ctx);
    worst_id = std::max({worst_id, std::fabs(s.sn * s.sn + s.cn * s.cn - 1.0),
                         std::fabs(s.dn * s.dn + ctx.k2 * s.sn * s.sn - 1.0)});
    auto p = elliptic::sn_cn_dn(x + 4.0 * ctx.K, ctx);
    worst_per = std::max({worst_per, std::fabs(p.sn - s.sn), std::fabs(p.cn - s.cn), std::fabs(p.dn - s.dn)});
    const double h = 1e-5;
    auto a = elliptic::sn_cn_dn(x + h, ctx), b = elliptic::sn_cn_dn(x - h, ctx);
    worst_fd = std::max({worst_fd, std::fabs((a.sn - b.sn) / (2 * h) - s.cn * s.dn),
                         std::fabs((a.cn - b.cn) / (2 * h) + s.sn * s.dn),
                         std::fabs((a.dn - b.dn) / (2 * h) + ctx.k2 * s.sn * s.cn)});
  }
  bool ok = worst_id <= 1e-10 && worst_per <= 1e-10 && worst_fd <= 1e-6;
  return {ok, fmt("identities %.1e, 4K-periodicity %.1e, derivatives %.1e", worst_id, worst_per, worst_fd)};
}

Outcome rate_function() {
  bool ok = true;
  std::string d;
  double gap5 = 0.0, gap20 = 0.0;
  for (double a : {5.0, 10.0, 20.0}) {
    auto r = ratefn::minimize(ratefn::RateProblem{a, 2048});
    auto [alpha, beta] = ratefn::multiplier_diagnostics(r, a);
    bool here = r.I_star <= eight_thirds + 1e-6 && r.el_residual <= 1e-4 &&
                std::fabs(beta - 1.0) <= eight_thirds / a + 0.05;
    ok = ok && here;
    if (a == 5.0) gap5 = std::fabs(r.I_star - eight_thirds);
    if (a == 20.0) gap20 = std::fabs(r.I_star - eight_thirds);
    d += fmt("a=%g I*=%.9f EL=%.1e alpha=%.1e beta=%.4f; ", a, r.I_star, r.el_residual, alpha, beta);
  }
  ok = ok && gap20 < gap5;
  return {ok, d + fmt("|I*(20)-8/3|=%.1e < |I*(5)-8/3|=%.1e", gap20, gap5)};
}

Outcome lame_spectrum() {
  bool ok = true;
  std::string d;
  for (double mu : {100.0, 400.0}) {
    auto s = at(mu);
    auto ev = lame::numerical_periodic_spectrum(mu, 8192, 7);
    double worst = 0.0;
    for (int l = 0; l < 5; ++l) worst = std::max(worst, std::fabs(ev[static_cast<std::size_t>(l)] / s.scaled(l) - 1.0));
    double dbl = std::fabs(ev[6] / ev[5] - 1.0);
    ok = ok && worst <= 1e-4 && dbl <= 1e-6;
    d += fmt("mu=%g rel %.1e, pair(5,6) %.1e; ", mu, worst, dbl);
  }
  return {ok, d};
}

Outcome discriminant_cross() {
  auto s = at(100.0);
  auto gp = discriminant::solve_gap_points(s);
  double worst = 0.0;
  int used = 0;
  for (int i = 0; i < 40 && used < 20; ++i) {
    double lam = 800.0 * (i + 0.5) / 40.0;
    bool edge = false;
    for (int l = 0; l < 5; ++l) edge = edge || std::fabs(lam - s.scaled(l)) < 1.0;
    if (edge) continue;
    double ode = discriminant::monodromy_delta(s, lam).delta;
    double hoch = discriminant::hochstadt_delta(s, gp, lam).value;
    worst = std::max(worst, std::fabs(ode - hoch) / std::max(1.0, std::fabs(ode)));
    ++used;
  }
  double psi = discriminant::psi_lambda1(s, gp);
  double d0 = discriminant::monodromy_delta(s, s.scaled(0)).delta;
  double d1 = discriminant::monodromy_delta(s, s.scaled(1)).delta;
  bool ok = used == 20 && worst <= 1e-3 && std::fabs(psi - M_PI) <= 1e-6 && std::fabs(d0 - 2.0) <= 1e-5 &&
            std::fabs(d1 + 2.0) <= 1e-5;
  return {ok, fmt("%d points rel %.1e; psi(lam1)-pi %.1e; Delta(lam0)-2 %.1e; Delta(lam1)+2 %.1e", used, worst,
                  psi - M_PI, d0 - 2.0, d1 + 2.0)};
}

Outcome discriminant_growth() {
  double g[2], alt[2];
  const double mus[2] = {400.0, 2500.0};
  for (int i = 0; i < 2; ++i) {
    auto s = at(mus[i]);
    auto gp = discriminant::solve_gap_points(s);
    auto d = discriminant::delta_2mu(s, gp);
    g[i] = d.normalized_log;
    // same diagnostic for the full-period trace D1 = Delta^2 - 2: D1^2 - 4 = Delta^2 (Delta^2 - 4)
    double log_abs = d.cosh_arg + std::log1p(std::exp(-2.0 * d.cosh_arg));
    alt[i] = 0.5 * (2.0 * log_abs + d.log_d2m4) / std::sqrt(mus[i]);
  }
  bool ok = g[0] >= 0.85 && g[0] <= 1.15 && std::fabs(g[1] - 1.0) < std::fabs(g[0] - 1.0);
  return {ok, fmt("mu=400: %.4f, mu=2500: %.4f (info: full-period trace gives %.4f, %.4f)", g[0], g[1], alt[0], alt[1])};
}

Outcome assembly_consistency() {
  auto r400 = asymptotics::assemble_tail(400.0);
  auto r2500 = asymptotics::assemble_tail(2500.0);
  double d400 = std::fabs(r400.ratio - 1.0), d2500 = std::fabs(r2500.ratio - 1.0);
  bool ok = r400.ratio >= 0.8 && r400.ratio <= 1.25 && d2500 < d400;
  return {ok, fmt("ratio mu=400: %.4g (log %.3f), mu=2500: %.4g (log %.3f)", r400.ratio, r400.log_ratio, r2500.ratio,
                  r2500.log_ratio)};
}

Outcome cross_oracle() {
  const std::vector<double> mus{-1.0, 0.0, 1.0, 2.0};
  auto pe = sampling::path_integral_density_multi(mus, 100000, 1024, 101);
  sampling::EnsembleConfig cfg;
  cfg.n = 1024;
  cfg.count = 100000;
  cfg.seed = 102;
  auto ens = sampling::ground_state_ensemble(cfg);
  std::vector<double> x;
  for (const auto& s : ens) x.push_back(s.minus_lambda0);
  bool ok = true;
  std::string d;
  for (std::size_t i = 0; i < mus.size(); ++i) {
    auto p = sampling::point_density(x, nullptr, mus[i], 0.1);
    double z = (p.estimate - pe[i].estimate) / std::hypot(p.stderr_, pe[i].stderr_);
    ok = ok && std::fabs(z) <= 3.0;
    d += fmt("mu=%g direct %.4f path %.4f z=%.2f; ", mus[i], p.estimate, pe[i].estimate, z);
  }
  return {ok, d};
}

Outcome left_tail() {
  sampling::EnsembleConfig cfg;
  cfg.n = 1024;
  cfg.count = 1000000;
  cfg.seed = 103;
  // exponential tilts of B(1); the weights keep the estimator unbiased
  cfg.tilts = {4.0, 5.0, 6.0, 7.0, 8.0};
  auto ens = sampling::ground_state_ensemble(cfg);
  std::vector<double> x, w;
  for (const auto& s : ens) {
    x.push_back(s.minus_lambda0);
    w.push_back(s.weight);
  }
  std::vector<double> X, Y;
  for (int i = 0; i <= 8; ++i) {
    double mu = -8.0 + 0.5 * i;
    auto p = sampling::point_density(x, &w, mu, 0.1);
    if (p.estimate <= 0.0) continue;
    X.push_back(-0.5 * mu * mu);
    Y.push_back(std::log(p.estimate));
  }
  if (X.size() < 3) return {false, fmt("only %zu usable points", X.size())};
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    mx += X[i];
    my += Y[i];
  }
  mx /= X.size();
  my /= X.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    sxy += (X[i] - mx) * (Y[i] - my);
    sxx += (X[i] - mx) * (X[i] - mx);
  }
  double slope = sxy / sxx;
  return {std::fabs(slope - 1.0) <= 0.15, fmt("slope %.4f over %zu points", slope, X.size())};
}

Outcome appendix_identities() {
  bool ok = true;
  std::string d;
  double worst = 0.0;
  for (const auto& p : rice::standard_lattice_processes()) {
    auto [l, r] = rice::check_discrete_rice(p, rice::standard_lattice_functional);
    worst = std::max(worst, static_cast<double>(std::fabs(l - r)));
  }
  ok = worst <= 1e-14;
  d += fmt("discrete %.1e; ", worst);
  const std::pair<const char*, rice::ContinuousF> fs[] = {{"max", rice::ContinuousF::max},
                                                          {"zeros", rice::ContinuousF::zeros},
                                                          {"weight", rice::ContinuousF::density_weight}};
  std::uint64_t seed = 104;
  for (const auto& [name, F] : fs) {
    auto m = rice::check_rice_continuous(0.5, F, 100000, seed++);
    ok = ok && std::fabs(m.z()) <= 3.0;
    d += fmt("rice %s z=%.2f; ", name, m.z());
  }
  const std::size_t n = 256;
  GridPath cond(n), shift(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = cond.x(i);
    cond[i] = std::sin(2.0 * M_PI * x);
    shift[i] = 0.15 * std::cos(2.0 * M_PI * x) + 0.05 * std::sin(6.0 * M_PI * x);
  }
  auto F = [](const GridPath& p) { return std::exp(-dot(p, p)); };
  auto cm = rice::check_cameron_martin(shift, cond, F, 100000, seed);
  ok = ok && std::fabs(cm.z()) <= 3.0;
  d += fmt("cameron-martin z=%.2f", cm.z());
  return {ok, d};
}

Outcome variance_decay() {
  double v100 = 10.0 * sampling::pstar_mean_square(sampling::make_pstar_sampler(100.0));
  double v400 = 20.0 * sampling::pstar_mean_square(sampling::make_pstar_sampler(400.0));
  bool ok = v400 <= 1.5 * v100 && v400 >= v100 / 1.5;
  return {ok, fmt("sqrt(mu) E[int p^2]: mu=100 %.4f, mu=400 %.4f", v100, v400)};
}

Outcome sech_constants() {
  auto c = asymptotics::sech_constants();
  double e1 = std::fabs(c.sech4 - 4.0 / 3.0);
  double e2 = std::max({std::fabs(c.sech5_tanh2 - M_PI / 16.0), std::fabs(c.sech8 - 32.0 / 35.0),
                        std::fabs(c.sech2_tanh2 - 2.0 / 3.0)});
  double lhs = 12.0 * c.sech5_tanh2 * c.sech5_tanh2, rhs = c.sech2_tanh2 * c.sech8;
  bool ok = e1 <= 1e-10 && e2 <= 1e-10 && lhs < rhs;
  return {ok, fmt("sech^4 err %.1e, constants err %.1e, %.6f < %.6f", e1, e2, lhs, rhs)};
}

struct Criterion {
  const char* name;
  double budget_s; // 0: no runtime bound
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> c{
      {"elliptic identities", 1.0, elliptic_identities},
      {"rate function minimizers", 30.0, rate_function},
      {"Lame spectrum", 60.0, lame_spectrum},
      {"discriminant cross-validation", 60.0, discriminant_cross},
      {"discriminant growth at 2 mu", 0.0, discriminant_growth},
      {"assembled vs closed-form tail", 0.0, assembly_consistency},
      {"cross-oracle density", 600.0, cross_oracle},
      {"left tail slope", 1200.0, left_tail},
      {"Rice and Cameron-Martin identities", 0.0, appendix_identities},
      {"conditioned variance decay", 0.0, variance_decay},
      {"sech constants", 0.0, sech_constants},
  };
  return c;
}

} // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
      only = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  const auto& cs = criteria();
  if (only < 0 || only > static_cast<int>(cs.size())) {
    std::fprintf(stderr, "criterion must be in 1..%zu\n", cs.size());
    return 2;
  }
  int failed = 0;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cs[i].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = cs[i].budget_s == 0.0 || dt <= cs[i].budget_s;
    bool pass = o.pass && in_time;
    std::printf("criterion %2zu %s  %s | %s | %.1fs%s\n", i + 1, pass ? "PASS" : "FAIL", cs[i].name, o.detail.c_str(),
                dt, in_time ? "" : " (over budget)");
    std::fflush(stdout);
    failed += !pass;
  }
  return failed ? 1 : 0;
}
