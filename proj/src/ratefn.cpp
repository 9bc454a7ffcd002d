#include "hilltails/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "hilltails/error.hpp"

namespace hilltails::ratefn {

namespace {

inline std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  auto m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((i % m) + m) % m);
}

void check_finite(const GridPath& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) throw DomainError("ratefn: non-finite sample");
}

void project_mean_zero(std::vector<double>& g) {
  double m = 0.0;
  for (double x : g) m += x;
  m /= static_cast<double>(g.size());
  for (double& x : g) x -= m;
}

double sup(const std::vector<double>& g) {
  double s = 0.0;
  for (double x : g) s = std::max(s, std::fabs(x));
  return s;
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Newton step on the KKT system [H 1 f'; 1^T 0 0; f'^T 0 0], H = -L4 + 6 f^2 - 2.
// The f' row removes the translation null direction.
bool newton_step(const GridPath& f, const std::vector<double>& g, std::vector<double>& step) {
  const std::size_t n = f.size();
  const double h = f.h();
  const double c = 1.0 / (12.0 * h * h);
  auto fp = d1_sixth(f);
  double fpn = std::sqrt(dotv(fp, fp));
  if (!(fpn > 0.0)) return false;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * n + 2);
  for (std::size_t i = 0; i < n; ++i) {
    auto ii = static_cast<std::ptrdiff_t>(i);
    trip.emplace_back(i, i, 30.0 * c + 6.0 * f[i] * f[i] - 2.0);
    trip.emplace_back(i, wrap(ii - 1, n), -16.0 * c);
    trip.emplace_back(i, wrap(ii + 1, n), -16.0 * c);
    trip.emplace_back(i, wrap(ii - 2, n), c);
    trip.emplace_back(i, wrap(ii + 2, n), c);
    trip.emplace_back(i, n, 1.0);
    trip.emplace_back(n, i, 1.0);
    trip.emplace_back(i, n + 1, fp[i] / fpn);
    trip.emplace_back(n + 1, i, fp[i] / fpn);
  }
  Eigen::SparseMatrix<double> H(n + 2, n + 2);
  H.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(H);
  if (lu.info() != Eigen::Success) return false;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n + 2));
  for (std::size_t i = 0; i < n; ++i) rhs[static_cast<Eigen::Index>(i)] = -g[i];
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) return false;
  step.assign(x.data(), x.data() + n);
  return true;
}

} // namespace

std::vector<double> d2_fourth(const GridPath& f) {
  const std::size_t n = f.size();
  const double c = 1.0 / (12.0 * f.h() * f.h());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ii = static_cast<std::ptrdiff_t>(i);
    out[i] = c * (-f[wrap(ii - 2, n)] + 16.0 * f[wrap(ii - 1, n)] - 30.0 * f[i] + 16.0 * f[wrap(ii + 1, n)] -
                  f[wrap(ii + 2, n)]);
  }
  return out;
}

std::vector<double> d1_sixth(const GridPath& f) {
  const std::size_t n = f.size();
  const double c = 1.0 / (60.0 * f.h());
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto ii = static_cast<std::ptrdiff_t>(i);
    out[i] = c * (-f[wrap(ii - 3, n)] + 9.0 * f[wrap(ii - 2, n)] - 45.0 * f[wrap(ii - 1, n)] +
                  45.0 * f[wrap(ii + 1, n)] - 9.0 * f[wrap(ii + 2, n)] + f[wrap(ii + 3, n)]);
  }
  return out;
}

double rate_value(const GridPath& f, double a) {
  check_finite(f);
  if (std::fabs(f.length - 2.0 * a) > 1e-12 * a) throw DomainError("rate_value: grid length differs from 2a");
  auto d2 = d2_fourth(f);
  double pot = 0.0, kin = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double u = 1.0 - f[i] * f[i];
    pot += u * u;
    kin -= f[i] * d2[i];
  }
  return 0.5 * f.h() * (pot + kin);
}

GridPath first_variation(const GridPath& f) {
  auto d2 = d2_fourth(f);
  GridPath g(f.size(), f.origin, f.length);
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = -d2[i] + 2.0 * f[i] * f[i] * f[i] - 2.0 * f[i];
  project_mean_zero(g.v);
  return g;
}

GridPath test_function(double a, std::size_t n) {
  if (a < 1.0) throw PreconditionError("test_function: a >= 1 required");
  GridPath f(n, -a, 2.0 * a);
  for (std::size_t i = 0; i < n; ++i) {
    double x = f.x(i);
    if (x < -0.5 * a)
      f[i] = -std::tanh(x + a);
    else if (x < 0.5 * a)
      f[i] = std::tanh(x);
    else
      f[i] = -std::tanh(x - a);
  }
  return f;
}

double el_residual(const GridPath& f, double alpha, double beta) {
  auto d1 = d1_sixth(f);
  double r = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double x = f[i];
    double lhs = 0.5 * d1[i] * d1[i];
    double rhs = 0.5 * x * x * x * x - x * x - alpha * x + 0.5 * beta;
    r = std::max(r, std::fabs(lhs - rhs));
  }
  return r;
}

std::pair<double, double> multiplier_diagnostics(const MinimizerResult& r, double a) {
  const GridPath& f = r.f_star;
  if (std::fabs(f.length - 2.0 * a) > 1e-12 * a) throw DomainError("multiplier_diagnostics: grid length differs from 2a");
  const double n = static_cast<double>(f.size());
  // constant regression of f'' - 2f^3 + 2f = -alpha; the f'' and f terms average out
  double m3 = 0.0;
  for (double x : f.v) m3 += x * x * x;
  double alpha = 2.0 * m3 / n;
  auto d1 = d1_sixth(f);
  double beta = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    double x = f[i];
    beta += d1[i] * d1[i] - x * x * x * x + 2.0 * x * x + 2.0 * alpha * x;
  }
  beta /= n;
  return {alpha, beta};
}

std::vector<double> zeros(const GridPath& f) {
  std::vector<double> z;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    double y0 = f[i], y1 = f[(i + 1) % n];
    if (y0 == 0.0) {
      z.push_back(f.x(i));
      continue;
    }
    if (y0 * y1 >= 0.0) continue;
    // cubic through four neighbours, refined by bisection on the local parameter
    double ym = f[wrap(static_cast<std::ptrdiff_t>(i) - 1, n)], y2 = f[(i + 2) % n];
    auto cubic = [&](double t) {
      return -ym * t * (t - 1) * (t - 2) / 6.0 + y0 * (t + 1) * (t - 1) * (t - 2) / 2.0 -
             y1 * (t + 1) * t * (t - 2) / 2.0 + y2 * (t + 1) * t * (t - 1) / 6.0;
    };
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((cubic(mid) < 0.0) == (y0 < 0.0))
        lo = mid;
      else
        hi = mid;
    }
    z.push_back(f.x(i) + 0.5 * (lo + hi) * f.h());
  }
  return z;
}

MinimizerResult minimize(const RateProblem& problem, const GridPath* seed, const MinimizeOptions& opt) {
  if (!(problem.a > 0.0)) throw DomainError("minimize: a must be positive");
  if (problem.n < 64) throw PreconditionError("minimize: n >= 64 required");
  const double a = problem.a;
  const std::size_t n = problem.n;

  GridPath f = seed ? *seed : test_function(std::max(a, 1.0), n);
  if (f.size() != n) throw PreconditionError("minimize: seed size differs from n");
  f.origin = -a;
  f.length = 2.0 * a;
  {
    double m = f.mean();
    for (double& x : f.v) x -= m;
  }
  const double h = f.h();

  auto energy = [&](const GridPath& p) { return rate_value(p, a); };
  auto grad = [&](const GridPath& p) {
    auto g = first_variation(p).v;
    return g;
  };

  MinimizerResult res;
  double E = energy(f);
  std::vector<double> g = grad(f);
  std::deque<std::vector<double>> S, Y;
  std::deque<double> rho;
  int it = 0;
  int stall = 0;

  // L-BFGS to a moderate tolerance, then Newton on the KKT system
  const double switch_tol = std::max(opt.grad_tol, 1e-3);
  for (; it < opt.max_iter && sup(g) > switch_tol; ++it) {
    std::vector<double> q = g;
    std::vector<double> al(S.size());
    for (std::size_t j = S.size(); j-- > 0;) {
      al[j] = rho[j] * dotv(S[j], q);
      for (std::size_t i = 0; i < n; ++i) q[i] -= al[j] * Y[j][i];
    }
    double gamma = S.empty() ? 0.1 * h * h : dotv(S.back(), Y.back()) / dotv(Y.back(), Y.back());
    for (double& x : q) x *= gamma;
    for (std::size_t j = 0; j < S.size(); ++j) {
      double b = rho[j] * dotv(Y[j], q);
      for (std::size_t i = 0; i < n; ++i) q[i] += S[j][i] * (al[j] - b);
    }
    project_mean_zero(q);
    double slope = -h * dotv(g, q);
    if (!(slope < 0.0)) {
      S.clear();
      Y.clear();
      rho.clear();
      q = g;
      for (double& x : q) x *= 0.1 * h * h;
      slope = -h * dotv(g, q);
    }
    double t = 1.0;
    GridPath fn = f;
    double En = E;
    bool ok = false;
    for (int ls = 0; ls < 40; ++ls) {
      for (std::size_t i = 0; i < n; ++i) fn[i] = f[i] - t * q[i];
      En = energy(fn);
      if (En <= E + 1e-4 * t * slope) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) {
      if (++stall > 3) break;
      S.clear();
      Y.clear();
      rho.clear();
      continue;
    }
    stall = 0;
    std::vector<double> gn = grad(fn);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = fn[i] - f[i];
      y[i] = h * (gn[i] - g[i]);
    }
    double sy = dotv(s, y);
    if (sy > 0.0) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      rho.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opt.memory) {
        S.pop_front();
        Y.pop_front();
        rho.pop_front();
      }
    }
    f = std::move(fn);
    E = En;
    g = std::move(gn);
  }

  for (int k = 0; k < 30 && sup(g) > 0.01 * opt.grad_tol && it < opt.max_iter; ++k, ++it) {
    std::vector<double> step;
    if (!newton_step(f, g, step)) break;
    double before = sup(g);
    double t = 1.0;
    bool ok = false;
    GridPath fn = f;
    std::vector<double> gn;
    for (int ls = 0; ls < 20; ++ls) {
      for (std::size_t i = 0; i < n; ++i) fn[i] = f[i] + t * step[i];
      gn = grad(fn);
      if (sup(gn) < before) {
        ok = true;
        break;
      }
      t *= 0.5;
    }
    if (!ok) break;
    f = std::move(fn);
    g = std::move(gn);
  }

  // pin f(0) = 0 by an integer rotation onto the nearest up-crossing
  {
    auto zs = zeros(f);
    double best = 1e300;
    std::ptrdiff_t shift = 0;
    for (double z : zs) {
      auto idx = static_cast<std::ptrdiff_t>(std::llround((z - f.origin) / h));
      std::size_t i0 = wrap(idx - 1, n), i1 = wrap(idx + 1, n);
      if (f[i1] < f[i0]) continue;
      if (std::fabs(z) < best) {
        best = std::fabs(z);
        shift = idx - static_cast<std::ptrdiff_t>(n / 2);
      }
    }
    if (shift != 0) {
      GridPath r = f;
      for (std::size_t i = 0; i < n; ++i) r[i] = f[wrap(static_cast<std::ptrdiff_t>(i) + shift, n)];
      f = std::move(r);
    }
  }

  res.f_star = f;
  res.I_star = energy(f);
  res.grad_sup = sup(grad(f));
  res.iterations = it;
  res.converged = res.grad_sup <= opt.grad_tol;
  auto [al, be] = multiplier_diagnostics(res, a);
  res.alpha = al;
  res.beta = be;
  res.el_residual = el_residual(f, al, be);
  return res;
}

} // namespace hilltails::ratefn
