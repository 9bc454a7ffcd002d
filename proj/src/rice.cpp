#include "hilltails/rice.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hilltails/error.hpp"
#include "hilltails/parallel.hpp"
#include "hilltails/sampling.hpp"

namespace hilltails::rice {

double MCPair::z() const {
  double s = std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);
  return s > 0.0 ? (lhs - rhs) / s : (lhs == rhs ? 0.0 : INFINITY);
}

LatticeProcess rotation_orbit_process(const std::vector<std::vector<int>>& patterns,
                                      const std::vector<long double>& weights, std::string name) {
  if (patterns.size() != weights.size() || patterns.empty()) throw DomainError("rotation_orbit_process: size mismatch");
  LatticeProcess p;
  p.name = std::move(name);
  long double tw = 0.0L;
  for (auto w : weights) tw += w;
  for (std::size_t k = 0; k < patterns.size(); ++k) {
    const auto& pat = patterns[k];
    const std::size_t L = pat.size();
    for (std::size_t r = 0; r < L; ++r) {
      std::vector<int> x(L);
      for (std::size_t i = 0; i < L; ++i) x[i] = pat[(i + r) % L];
      p.paths.push_back(std::move(x));
      p.probs.push_back(weights[k] / tw / static_cast<long double>(L));
    }
  }
  return p;
}

LatticeProcess iid_conditioned_process(std::size_t length, const std::vector<int>& values,
                                       const std::vector<long double>& probs, std::string name) {
  if (values.size() != probs.size() || values.size() > 5) throw DomainError("iid_conditioned_process: at most 5 symbols");
  if (length > 16) throw DomainError("iid_conditioned_process: lattice too large to enumerate");
  LatticeProcess p;
  p.name = std::move(name);
  const std::size_t V = values.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < length; ++i) total *= V;
  long double mass = 0.0L;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<int> x(length);
    long double pr = 1.0L;
    std::size_t c = code;
    bool zero = false;
    for (std::size_t i = 0; i < length; ++i) {
      x[i] = values[c % V];
      pr *= probs[c % V];
      zero = zero || x[i] == 0;
      c /= V;
    }
    if (!zero) continue;
    p.paths.push_back(std::move(x));
    p.probs.push_back(pr);
    mass += pr;
  }
  for (auto& q : p.probs) q /= mass;
  return p;
}

std::vector<LatticeProcess> standard_lattice_processes() {
  return {
      rotation_orbit_process({{0, 1, 2, 1, 1, -1, -2, -1}}, {1.0L}, "single-orbit"),
      rotation_orbit_process({{0, 1, 0, -1, 2, -2, 1, -1}, {0, 0, 1, -1, 2, 1, -1, 1}}, {0.3L, 0.7L}, "two-orbit"),
      iid_conditioned_process(8, {-1, 0, 1}, {0.3L, 0.4L, 0.3L}, "iid-conditioned"),
  };
}

long double standard_lattice_functional(const std::vector<int>& x) {
  long double s = 0.0L;
  int mx = x.empty() ? 0 : x[0], z = 0;
  for (int v : x) {
    s += static_cast<long double>(v) * v;
    mx = std::max(mx, v);
    z += v == 0;
  }
  return s + mx + 0.5L * z;
}

std::pair<long double, long double> check_discrete_rice(const LatticeProcess& proc, const LatticeFunctional& F) {
  long double lhs = 0.0L, rhs = 0.0L;
  std::size_t L = 0;
  for (std::size_t k = 0; k < proc.paths.size(); ++k) {
    const auto& x = proc.paths[k];
    L = x.size();
    long double f = F(x);
    lhs += proc.probs[k] * f;
    int zeros = static_cast<int>(std::count(x.begin(), x.end(), 0));
    if (zeros == 0) {
      std::ostringstream os;
      os << "check_discrete_rice: path without a zero in process '" << proc.name << "':";
      for (int v : x) os << ' ' << v;
      throw PreconditionError(os.str());
    }
    if (x[0] == 0) rhs += proc.probs[k] * f / static_cast<long double>(zeros);
  }
  return {lhs, static_cast<long double>(L) * rhs};
}

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double sig[3] = {1.0, 0.7, 0.5};

struct Trig {
  double a[3], b[3];
  double value(double x) const {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) v += sig[j] * (a[j] * std::cos(two_pi * (j + 1) * x) + b[j] * std::sin(two_pi * (j + 1) * x));
    return v;
  }
  double deriv(double x) const {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) {
      double w = two_pi * (j + 1);
      v += sig[j] * w * (-a[j] * std::sin(w * x) + b[j] * std::cos(w * x));
    }
    return v;
  }
  double deriv2(double x) const {
    double v = 0.0;
    for (int j = 0; j < 3; ++j) {
      double w = two_pi * (j + 1);
      v -= sig[j] * w * w * (a[j] * std::cos(w * x) + b[j] * std::sin(w * x));
    }
    return v;
  }
};

Trig draw(std::mt19937_64& gen, bool condition_zero) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Trig t;
  for (int j = 0; j < 3; ++j) {
    t.a[j] = nd(gen);
    t.b[j] = nd(gen);
  }
  if (condition_zero) {
    double s2 = 0.0, sa = 0.0;
    for (int j = 0; j < 3; ++j) {
      s2 += sig[j] * sig[j];
      sa += sig[j] * t.a[j];
    }
    for (int j = 0; j < 3; ++j) t.a[j] -= sig[j] * sa / s2;
  }
  return t;
}

// extra breakpoints; the critical points already split [0,1) into monotone pieces
constexpr int grid_pts = 16;
// the integrand of the density weight has trigonometric degree 12, so 32 nodes are exact
constexpr int quad_pts = 32;

// critical points of X in [0,1): roots on |z| = 1 of z^3 X'(z), z = e^{2 pi i x}
std::vector<double> trig_critical(const Trig& t) {
  using C = std::complex<double>;
  std::array<C, 7> c{};
  for (int j = 0; j < 3; ++j) {
    double w = two_pi * (j + 1);
    // X' = sum A cos + B sin, A = s w b, B = -s w a
    C cj = 0.5 * C(sig[j] * w * t.b[j], sig[j] * w * t.a[j]);
    c[3 + j + 1] = cj;
    c[3 - j - 1] = std::conj(cj);
  }
  Eigen::Matrix<C, 6, 6> comp = Eigen::Matrix<C, 6, 6>::Zero();
  for (int i = 1; i < 6; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < 6; ++i) comp(i, 5) = -c[static_cast<std::size_t>(i)] / c[6];
  Eigen::ComplexEigenSolver<Eigen::Matrix<C, 6, 6>> es(comp, false);
  std::vector<double> out;
  for (int i = 0; i < 6; ++i) {
    C z = es.eigenvalues()[i];
    if (std::fabs(std::abs(z) - 1.0) > 1e-3) continue;
    double x = std::arg(z) / two_pi;
    if (x < 0.0) x += 1.0;
    for (int it = 0; it < 4; ++it) {
      double d2 = t.deriv2(x);
      if (d2 == 0.0) break;
      double step = t.deriv(x) / d2;
      if (std::fabs(step) > 1e-3) break;
      x -= step;
    }
    x -= std::floor(x);
    out.push_back(x);
  }
  return out;
}

// zeros in [0,1): X is monotone between consecutive critical points
std::vector<double> trig_zeros(const Trig& t, const std::vector<double>& crit) {
  std::vector<double> pts = crit;
  for (int i = 0; i < grid_pts; ++i) pts.push_back((i + 0.5) / grid_pts);
  std::sort(pts.begin(), pts.end());
  std::vector<double> z;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i) {
    double lo = pts[i], hi = pts[(i + 1) % m];
    if (i + 1 == m) hi += 1.0;
    double vl = t.value(lo), vh = t.value(hi);
    if (vl == 0.0) {
      z.push_back(lo);
      continue;
    }
    if (vl * vh > 0.0 || vh == 0.0) continue;
    bool neg = vl < 0.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((t.value(mid) < 0.0) == neg)
        lo = mid;
      else
        hi = mid;
    }
    double r = 0.5 * (lo + hi);
    z.push_back(r - std::floor(r));
  }
  return z;
}

double trig_max(const Trig& t, const std::vector<double>& crit) {
  double best = t.value(0.0);
  for (double x : crit) best = std::max(best, t.value(x));
  return best;
}

double trig_functional(const Trig& t, ContinuousF F, double mu, const std::vector<double>& crit, std::size_t nzeros) {
  switch (F) {
  case ContinuousF::one:
    return 1.0;
  case ContinuousF::max:
    return trig_max(t, crit);
  case ContinuousF::zeros:
    return static_cast<double>(nzeros);
  case ContinuousF::density_weight: {
    double e = 0.0;
    for (int i = 0; i < quad_pts; ++i) {
      double u = mu - std::pow(t.value(static_cast<double>(i) / quad_pts), 2);
      e += u * u;
    }
    return std::exp(-0.5 * e / quad_pts);
  }
  }
  return 0.0;
}

void mean_se(const std::vector<double>& v, double& m, double& se) {
  double s = 0.0, ss = 0.0;
  for (double x : v) {
    s += x;
    ss += x * x;
  }
  const double N = static_cast<double>(v.size());
  m = s / N;
  se = std::sqrt(std::max(0.0, ss / N - m * m) / N);
}

} // namespace

MCPair check_rice_continuous(double mu, ContinuousF F, std::size_t count, std::uint64_t seed) {
  MCPair out;
  out.count = count;
  std::vector<double> L(count), R(count);
  std::vector<char> bad(count, 0);
  const auto c = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::int64_t i = 0; i < c; ++i) {
    auto gl = stream(seed, 2 * static_cast<std::uint64_t>(i));
    Trig tl = draw(gl, false);
    auto cl = trig_critical(tl);
    L[static_cast<std::size_t>(i)] = trig_functional(tl, F, mu, cl, trig_zeros(tl, cl).size());
    auto gr = stream(seed, 2 * static_cast<std::uint64_t>(i) + 1);
    Trig tr = draw(gr, true);
    auto cr = trig_critical(tr);
    auto z = trig_zeros(tr, cr);
    double inv = 0.0;
    for (double x : z) inv += 1.0 / std::fabs(tr.deriv(x));
    if (z.empty() || !(inv > 0.0) || !std::isfinite(inv)) {
      bad[static_cast<std::size_t>(i)] = 1;
      R[static_cast<std::size_t>(i)] = 0.0;
      continue;
    }
    R[static_cast<std::size_t>(i)] = trig_functional(tr, F, mu, cr, z.size()) / inv;
  }
  for (char b : bad) out.excluded += b;
  double s2 = sig[0] * sig[0] + sig[1] * sig[1] + sig[2] * sig[2];
  double p0 = 1.0 / std::sqrt(2.0 * std::numbers::pi * s2);
  mean_se(L, out.lhs, out.lhs_se);
  mean_se(R, out.rhs, out.rhs_se);
  out.rhs *= p0;
  out.rhs_se *= p0;
  return out;
}

GridPath conditioned_direction(const GridPath& cond) {
  // u with -D_h u = cond - mean(cond), mean(u) = 0 (covariance of the mean-zero bridge applied to cond)
  const std::size_t n = cond.size();
  const double h = cond.h();
  const double m = cond.mean();
  std::vector<double> w(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) w[i] = w[i - 1] - h * (cond[i] - m);
  double wm = 0.0;
  for (double x : w) wm += x;
  wm /= static_cast<double>(n);
  GridPath u(n, cond.origin, cond.length);
  for (std::size_t i = 0; i + 1 < n; ++i) u[i + 1] = u[i] + h * (w[i] - wm);
  double um = u.mean();
  for (auto& x : u.v) x -= um;
  double denom = dot(cond, u);
  if (!(std::fabs(denom) > 1e-14)) throw DomainError("cameron_martin: conditioning projection rank-deficient");
  return u;
}

GridPath sample_doubly_conditioned(std::uint64_t seed, std::uint64_t index, const GridPath& cond,
                                   const GridPath& dir) {
  auto gen = stream(seed, index);
  auto p = sampling::sample_cbm_meanzero(gen, cond.size());
  double c = dot(cond, p) / dot(cond, dir);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] -= c * dir[i];
  return p;
}

double cameron_martin_weight(const GridPath& p, const GridPath& shift) {
  const std::size_t n = p.size();
  const double h = p.h();
  double lin = 0.0, quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d2 = (shift[(i + 1) % n] - 2.0 * shift[i] + shift[(i + n - 1) % n]) / (h * h);
    double d1 = (shift[(i + 1) % n] - shift[i]) / h;
    lin += d2 * p[i];
    quad += d1 * d1;
  }
  return std::exp(h * lin - 0.5 * h * quad);
}

double cameron_martin_second_moment(const GridPath& shift) {
  const std::size_t n = shift.size();
  const double h = shift.h();
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d1 = (shift[(i + 1) % n] - shift[i]) / h;
    quad += d1 * d1;
  }
  return std::exp(h * quad);
}

MCPair check_cameron_martin(const GridPath& shift, const GridPath& cond, const PathFunctional& F, std::size_t count,
                            std::uint64_t seed) {
  if (shift.size() != cond.size()) throw DomainError("cameron_martin: grid mismatch");
  double scale = std::sqrt(dot(shift, shift)) * std::sqrt(dot(cond, cond)) + 1.0;
  if (std::fabs(shift.mean()) > 1e-10 * scale || std::fabs(dot(shift, cond)) > 1e-10 * scale)
    throw PreconditionError("cameron_martin: shift must have mean zero and be orthogonal to the conditioning function");
  auto dir = conditioned_direction(cond);
  MCPair out;
  out.count = count;
  std::vector<double> L(count), R(count);
  const auto c = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::int64_t i = 0; i < c; ++i) {
    auto p = sample_doubly_conditioned(seed, 2 * static_cast<std::uint64_t>(i), cond, dir);
    L[static_cast<std::size_t>(i)] = F(p);
    auto q = sample_doubly_conditioned(seed, 2 * static_cast<std::uint64_t>(i) + 1, cond, dir);
    double w = cameron_martin_weight(q, shift);
    for (std::size_t k = 0; k < q.size(); ++k) q[k] += shift[k];
    R[static_cast<std::size_t>(i)] = F(q) * w;
  }
  mean_se(L, out.lhs, out.lhs_se);
  mean_se(R, out.rhs, out.rhs_se);
  return out;
}

} // namespace hilltails::rice
