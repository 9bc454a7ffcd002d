#include "hilltails/lame.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "hilltails/error.hpp"
#include "hilltails/tridiag.hpp"

namespace hilltails::lame {

double SimpleSpectrum::diff(int i, int j) const {
  if (i == j) return 0.0;
  if (i > j) return -diff(j, i);
  double s = 0.0;
  for (int t = i; t < j; ++t) s += gap[static_cast<std::size_t>(t)];
  return s;
}

namespace {

SimpleSpectrum fill(const elliptic::EllipticContext& ctx, double mu) {
  SimpleSpectrum sp;
  sp.mu = mu;
  sp.ctx = ctx;
  const double e = ctx.kc2;
  sp.eps = e;
  const double s = std::sqrt(1.0 - e + e * e);
  sp.s = s;
  sp.gap[0] = 3.0 * e * e / (2.0 * s + 2.0 - e);
  sp.gap[1] = 3.0 - 3.0 * e;
  sp.gap[2] = 3.0 * e;
  sp.gap[3] = 3.0 * (1.0 - e) * (1.0 - e) / (2.0 * s + 1.0 + e);
  sp.lam[1] = 2.0 - e;
  sp.lam[0] = sp.lam[1] - sp.gap[0];
  sp.lam[2] = 5.0 - 4.0 * e;
  sp.lam[3] = 5.0 - e;
  sp.lam[4] = sp.lam[3] + sp.gap[3];
  sp.a_plus = 2.0 - e + s;
  sp.a_minus = 0.5 * sp.lam[0];
  sp.one_minus_aminus = 0.5 * (sp.gap[0] + e);
  return sp;
}

void fill_norms(SimpleSpectrum& sp, std::size_t n) {
  const double r = std::sqrt(sp.mu);
  if (n == 0) n = std::max<std::size_t>(8192, static_cast<std::size_t>(std::ceil(256.0 * r)));
  std::array<double, 5> acc{};
  for (std::size_t i = 0; i < n; ++i) {
    double x = static_cast<double>(i) / static_cast<double>(n);
    for (int l = 0; l < 5; ++l) {
      double v = phi_tilde(sp, l, r * x);
      acc[static_cast<std::size_t>(l)] += v * v;
    }
  }
  for (int l = 0; l < 5; ++l) sp.norm[static_cast<std::size_t>(l)] = std::sqrt(acc[static_cast<std::size_t>(l)] / static_cast<double>(n));
  const double two_s = 2.0 * sp.s; // a_+ - a_-
  sp.c0 = sp.a_plus / two_s * sp.norm[0];
  sp.c4 = sp.a_minus / two_s * sp.norm[4];
}

tridiag::Cyclic fd_matrix(const SimpleSpectrum& sp, std::size_t n, double length, bool anti) {
  tridiag::Cyclic a;
  const double h = length / static_cast<double>(n);
  a.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) a.d[i] = 2.0 + h * h * potential(sp, h * static_cast<double>(i));
  a.e = -1.0;
  a.corner = anti ? 1.0 : -1.0;
  return a;
}

void check_grid(double mu, std::size_t n, int m) {
  if (static_cast<double>(n) < 16.0 * std::sqrt(mu)) throw ResolutionError("lame: grid n < 16 sqrt(mu)");
  if (m < 1 || static_cast<std::size_t>(m) > n / 4) throw PreconditionError("lame: need 1 <= m <= n/4");
}

} // namespace

SimpleSpectrum explicit_spectrum(const elliptic::EllipticContext& ctx, double mu, std::size_t norm_grid) {
  if (!(mu > 0.0)) throw DomainError("explicit_spectrum: mu must be positive");
  auto sp = fill(ctx, mu);
  fill_norms(sp, norm_grid);
  return sp;
}

SimpleSpectrum spectrum_from_eps(double eps, double mu) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw DomainError("spectrum_from_eps: eps outside [0,1]");
  auto ctx = elliptic::context_from_kc2(eps);
  auto sp = fill(ctx, mu);
  if (eps > 0.0 && ctx.K < 1e6) fill_norms(sp, 0);
  return sp;
}

double phi_tilde(const SimpleSpectrum& sp, int index, double u) {
  auto f = elliptic::sn_cn_dn(u, sp.ctx);
  switch (index) {
  case 0:
    return f.cn * f.cn + sp.one_minus_aminus * f.sn * f.sn;
  case 1:
    return f.cn * f.dn;
  case 2:
    return f.sn * f.dn;
  case 3:
    return f.sn * f.cn;
  case 4:
    return 1.0 - sp.a_plus * f.sn * f.sn;
  default:
    throw DomainError("phi_tilde: index outside 0..4");
  }
}

std::pair<double, double> phi1_scaled(const SimpleSpectrum& sp, double x) {
  const double r = std::sqrt(sp.mu);
  auto f = elliptic::sn_cn_dn(r * x, sp.ctx);
  double v = f.cn * f.dn / sp.norm[1];
  double d = -r * f.sn * (f.dn * f.dn + sp.ctx.k2 * f.cn * f.cn) / sp.norm[1];
  return {v, d};
}

double potential(const SimpleSpectrum& sp, double x) {
  double s = elliptic::sn_cn_dn(std::sqrt(sp.mu) * x, sp.ctx).sn;
  return 6.0 * sp.mu * sp.ctx.k2 * s * s;
}

EigenPair explicit_eigenfunction(const SimpleSpectrum& sp, int index, std::size_t n) {
  if (index < 0 || index > 4) throw DomainError("explicit_eigenfunction: index outside 0..4");
  EigenPair e;
  e.index = index;
  e.value = sp.scaled(index);
  e.function = GridPath(n);
  const double r = std::sqrt(sp.mu);
  const double nrm = sp.norm[static_cast<std::size_t>(index)];
  for (std::size_t i = 0; i < n; ++i) e.function[i] = phi_tilde(sp, index, r * e.function.x(i)) / nrm;
  return e;
}

std::vector<double> numerical_periodic_spectrum(double mu, std::size_t n, int m) {
  check_grid(mu, n, m);
  auto sp = fill(elliptic::modulus_for_mu(mu), mu);
  auto a = fd_matrix(sp, n, 1.0, false);
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> out;
  for (int k = 0; k < m; ++k) out.push_back(tridiag::kth_eigenvalue(a, k, 1e-18) / (h * h));
  return out;
}

std::vector<TaggedEigenvalue> tagged_periodic_spectrum(double mu, std::size_t n, int m) {
  check_grid(mu, n, m);
  if (n % 2) throw PreconditionError("tagged_periodic_spectrum: n must be even");
  auto sp = fill(elliptic::modulus_for_mu(mu), mu);
  const std::size_t half = n / 2;
  const double h = 1.0 / static_cast<double>(n);
  auto per = fd_matrix(sp, half, 0.5, false);
  auto anti = fd_matrix(sp, half, 0.5, true);
  std::vector<TaggedEigenvalue> out;
  for (int k = 0; k < m; ++k) {
    out.push_back({tridiag::kth_eigenvalue(per, k, 1e-18) / (h * h), Series::principal});
    out.push_back({tridiag::kth_eigenvalue(anti, k, 1e-18) / (h * h), Series::complementary});
  }
  std::stable_sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.value < y.value; });
  out.resize(static_cast<std::size_t>(m));
  return out;
}

std::vector<EigenPair> numerical_eigenpairs(double mu, std::size_t n, int m) {
  check_grid(mu, n, m);
  if (n > 4096) throw PreconditionError("numerical_eigenpairs: dense solve limited to n <= 4096");
  auto sp = fill(elliptic::modulus_for_mu(mu), mu);
  auto a = fd_matrix(sp, n, 1.0, false);
  const double h = 1.0 / static_cast<double>(n);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    auto ii = static_cast<Eigen::Index>(i);
    A(ii, ii) = a.d[i];
    A(ii, static_cast<Eigen::Index>((i + 1) % n)) = -1.0;
    A(static_cast<Eigen::Index>((i + 1) % n), ii) = -1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw ConvergenceError("numerical_eigenpairs: dense eigensolver failed");
  std::vector<EigenPair> out;
  const double scale = 1.0 / std::sqrt(h);
  for (int k = 0; k < m; ++k) {
    EigenPair e;
    e.index = k;
    e.value = es.eigenvalues()[k] / (h * h);
    e.function = GridPath(n);
    for (std::size_t i = 0; i < n; ++i) e.function[i] = scale * es.eigenvectors()(static_cast<Eigen::Index>(i), k);
    out.push_back(std::move(e));
  }
  return out;
}

} // namespace hilltails::lame
