#include "hilltails/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hilltails/asymptotics.hpp"
#include "hilltails/error.hpp"
#include "hilltails/parallel.hpp"
#include "hilltails/tridiag.hpp"

namespace hilltails::sampling {

double NoiseRealization::sum() const {
  double s = 0.0;
  for (double x : increments) s += x;
  return s;
}

NoiseRealization make_noise(std::uint64_t seed, std::uint64_t index, std::size_t n, double tilt) {
  auto gen = stream(seed, index);
  std::normal_distribution<double> nd(0.0, 1.0);
  const double h = 1.0 / static_cast<double>(n);
  const double sd = std::sqrt(h);
  NoiseRealization r;
  r.n = n;
  r.increments.resize(n);
  for (auto& x : r.increments) x = tilt * h + sd * nd(gen);
  return r;
}

double simulate_ground_state(const NoiseRealization& noise) {
  const std::size_t n = noise.n;
  if (n < 3) throw PreconditionError("simulate_ground_state: n too small");
  const double h = 1.0 / static_cast<double>(n);
  tridiag::Cyclic a;
  a.d.resize(n);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    a.d[i] = 2.0 + h * noise.increments[i];
    s += noise.increments[i];
  }
  a.e = -1.0;
  a.corner = -1.0;
  // the constant vector gives lambda_0 <= B(1); scaled by h^2 here
  const double h2 = h * h;
  double lm = tridiag::lowest_eigenvalue(a, h2 * s, 1e-9 * h2, 0.25 * h2);
  return lm / h2;
}

GroundStateSample ground_state_sample(const EnsembleConfig& cfg, std::uint64_t index) {
  GroundStateSample g;
  double tilt = cfg.tilts.empty() ? 0.0 : cfg.tilts[index % cfg.tilts.size()];
  auto noise = make_noise(cfg.seed, index, cfg.n, tilt);
  g.minus_lambda0 = -simulate_ground_state(noise);
  if (!cfg.tilts.empty()) {
    // phi(S) / mean_j phi(S - theta_j)
    const double S = noise.sum();
    double m = 0.0;
    for (double th : cfg.tilts) m += std::exp(th * S - 0.5 * th * th);
    g.weight = static_cast<double>(cfg.tilts.size()) / m;
  }
  return g;
}

std::vector<GroundStateSample> ground_state_ensemble_serial(const EnsembleConfig& cfg) {
  std::vector<GroundStateSample> out(cfg.count);
  for (std::size_t i = 0; i < cfg.count; ++i) out[i] = ground_state_sample(cfg, i);
  return out;
}

std::vector<GroundStateSample> ground_state_ensemble(const EnsembleConfig& cfg, int threads) {
  if (threads <= 0) threads = worker_count();
  std::vector<GroundStateSample> out(cfg.count);
  const auto count = static_cast<std::int64_t>(cfg.count);
#pragma omp parallel for schedule(dynamic, 256) num_threads(threads)
  for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = ground_state_sample(cfg, static_cast<std::uint64_t>(i));
  return out;
}

DensityEstimate estimate_density(const std::vector<double>& samples, double lo, double hi, int bins,
                                 const std::vector<double>* weights) {
  if (samples.empty()) throw InsufficientDataError("estimate_density: no samples");
  if (!(hi > lo) || bins < 1) throw DomainError("estimate_density: bad window");
  if (weights && weights->size() != samples.size()) throw DomainError("estimate_density: weight size mismatch");
  DensityEstimate d;
  const double N = static_cast<double>(samples.size());
  const double w = (hi - lo) / bins;
  d.count = samples.size();
  d.edges.resize(static_cast<std::size_t>(bins) + 1);
  for (int b = 0; b <= bins; ++b) d.edges[static_cast<std::size_t>(b)] = lo + w * b;
  std::vector<double> s1(static_cast<std::size_t>(bins), 0.0), s2(static_cast<std::size_t>(bins), 0.0);
  double wsum = 0.0, wx = 0.0, wxx = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double x = samples[i];
    double wi = weights ? (*weights)[i] : 1.0;
    wsum += wi;
    wx += wi * x;
    wxx += wi * x * x;
    if (x < lo || x >= hi) continue;
    auto b = static_cast<std::size_t>(std::min<double>(bins - 1, std::floor((x - lo) / w)));
    s1[b] += wi;
    s2[b] += wi * wi;
  }
  bool any = false;
  d.mass.resize(s1.size());
  d.density.resize(s1.size());
  d.stderr_.resize(s1.size());
  for (std::size_t b = 0; b < s1.size(); ++b) {
    double p = s1[b] / N;
    d.mass[b] = p;
    d.in_window += p;
    d.density[b] = p / w;
    double var = std::max(0.0, s2[b] / N - p * p);
    d.stderr_[b] = std::sqrt(var / N) / w;
    any = any || s1[b] > 0.0;
  }
  if (!any) throw InsufficientDataError("estimate_density: window contains no samples");
  // Silverman bandwidth from the (weighted) sample spread
  double mean = wx / wsum;
  double sd = std::sqrt(std::max(0.0, wxx / wsum - mean * mean));
  d.bandwidth = 1.06 * sd * std::pow(N, -0.2);
  d.smoothed.assign(s1.size(), 0.0);
  if (d.bandwidth > 0.0) {
    const double norm = 1.0 / (N * d.bandwidth * std::sqrt(2.0 * std::numbers::pi));
    for (std::size_t b = 0; b < s1.size(); ++b) {
      double c = lo + w * (static_cast<double>(b) + 0.5);
      double acc = 0.0;
      for (std::size_t i = 0; i < samples.size(); ++i) {
        double z = (samples[i] - c) / d.bandwidth;
        if (std::fabs(z) > 8.0) continue;
        acc += (weights ? (*weights)[i] : 1.0) * std::exp(-0.5 * z * z);
      }
      d.smoothed[b] = acc * norm;
    }
  } else {
    d.smoothed = d.density;
  }
  return d;
}

PointEstimate point_density(const std::vector<double>& samples, const std::vector<double>* weights, double x,
                            double width) {
  if (samples.empty()) throw InsufficientDataError("point_density: no samples");
  const double N = static_cast<double>(samples.size());
  double s = 0.0, ss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double u = (samples[i] - x) / width + 1.5;
    if (u < 0.0 || u >= 3.0) continue;
    int b = static_cast<int>(u); // 0: left, 1: centre, 2: right
    // b0 - (b_- - 2 b0 + b_+)/24
    double k = (b == 1 ? 1.0 + 2.0 / 24.0 : -1.0 / 24.0) / width;
    double wi = weights ? (*weights)[i] : 1.0;
    s += wi * k;
    ss += wi * wi * k * k;
  }
  PointEstimate p;
  p.count = samples.size();
  p.estimate = s / N;
  p.stderr_ = std::sqrt(std::max(0.0, ss / N - p.estimate * p.estimate) / N);
  p.flagged = !(p.estimate > 0.0) || p.stderr_ > 0.5 * std::fabs(p.estimate);
  return p;
}

GridPath sample_cbm_meanzero(std::mt19937_64& gen, std::size_t n) {
  std::normal_distribution<double> nd(0.0, 1.0);
  const double h = 1.0 / static_cast<double>(n);
  const double sd = std::sqrt(h);
  GridPath p(n);
  double b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = b;
    b += sd * nd(gen);
  }
  // b is now B(1): pin the endpoint, then remove the mean
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] -= p.x(i) * b;
    m += p[i];
  }
  m /= static_cast<double>(n);
  for (auto& x : p.v) x -= m;
  return p;
}

double path_weight(const GridPath& p, double mu) {
  double e = 0.0;
  for (double x : p.v) {
    double u = mu - x * x;
    e += u * u;
  }
  e *= 0.5 * p.h();
  auto A = asymptotics::A_functional(p);
  return std::exp(A.log_plus + A.log_minus - e) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

std::vector<double> path_weights_for(const std::vector<double>& mus, std::size_t n, std::uint64_t seed,
                                     std::uint64_t index) {
  auto gen = stream(seed, index);
  auto p = sample_cbm_meanzero(gen, n);
  std::vector<double> w(mus.size());
  for (std::size_t j = 0; j < mus.size(); ++j) w[j] = path_weight(p, mus[j]);
  return w;
}

std::vector<PointEstimate> reduce_weights(const std::vector<std::vector<double>>& all, std::size_t m) {
  std::vector<PointEstimate> out(m);
  const double N = static_cast<double>(all.size());
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0, ss = 0.0;
    for (const auto& w : all) {
      s += w[j];
      ss += w[j] * w[j];
    }
    auto& e = out[j];
    e.count = all.size();
    e.estimate = s / N;
    e.stderr_ = std::sqrt(std::max(0.0, ss / N - e.estimate * e.estimate) / N);
    e.flagged = e.stderr_ > 0.5 * e.estimate;
  }
  return out;
}

} // namespace

std::vector<PointEstimate> path_integral_density_serial(const std::vector<double>& mus, std::size_t count,
                                                        std::size_t n, std::uint64_t seed) {
  std::vector<std::vector<double>> all(count);
  for (std::size_t i = 0; i < count; ++i) all[i] = path_weights_for(mus, n, seed, i);
  return reduce_weights(all, mus.size());
}

std::vector<PointEstimate> path_integral_density_multi(const std::vector<double>& mus, std::size_t count,
                                                       std::size_t n, std::uint64_t seed, int threads) {
  if (threads <= 0) threads = worker_count();
  std::vector<std::vector<double>> all(count);
  const auto c = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(threads)
  for (std::int64_t i = 0; i < c; ++i)
    all[static_cast<std::size_t>(i)] = path_weights_for(mus, n, seed, static_cast<std::uint64_t>(i));
  return reduce_weights(all, mus.size());
}

PointEstimate path_integral_density(double mu, std::size_t count, std::size_t n, std::uint64_t seed) {
  if (mu < -2.0 || mu > 2.5) throw PreconditionError("path_integral_density: naive sampling limited to mu in [-2, 2.5]");
  return path_integral_density_multi({mu}, count, n, seed).front();
}

ConditionedGaussianSampler make_pstar_sampler(double mu, std::size_t n, int truncation) {
  ConditionedGaussianSampler s;
  s.mu = mu;
  if (n == 0) {
    n = 512;
    while (static_cast<double>(n) < 16.0 * std::sqrt(mu)) n *= 2;
  }
  s.n = n;
  if (truncation == 0) truncation = static_cast<int>(std::max(64.0, std::ceil(4.0 * std::sqrt(mu))));
  s.truncation = truncation;
  s.spectrum = lame::explicit_spectrum(elliptic::modulus_for_mu(mu), mu);
  const auto& sp = s.spectrum;
  std::array<GridPath, 5> phi;
  for (int l = 0; l < 5; ++l) phi[static_cast<std::size_t>(l)] = lame::explicit_eigenfunction(sp, l, n).function;
  s.phi1 = phi[1];

  auto push = [&](GridPath f, double radicand, const char* what) {
    if (!(radicand > 0.0)) throw SpectralOrderingError(std::string("pstar sampler: non-positive normalizer radicand for ") + what);
    double nr = std::sqrt(radicand);
    double nn = dot(f, f);
    for (auto& x : f.v) x /= nr;
    s.modes.push_back(std::move(f));
    s.variances.push_back(nn / radicand);
  };
  {
    const double c0 = sp.c0, c4 = sp.c4;
    // c4^2 (lam0^mu - 2mu) + c0^2 (lam4^mu - 2mu), gaps keep it accurate
    double rad = mu * (c4 * c4 * (-(sp.gap[0] + sp.eps)) + c0 * c0 * (sp.diff(1, 4) - sp.eps));
    GridPath f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = c4 * phi[0][i] + c0 * phi[4][i];
    push(std::move(f), rad, "the mixed lowest mode");
  }
  push(phi[2], mu * (sp.lam[2] - 2.0), "mode 2");
  push(phi[3], mu * (sp.lam[3] - 2.0), "mode 3");
  if (truncation >= 5) {
    auto pairs = lame::numerical_eigenpairs(mu, n, truncation + 1);
    for (int l = 5; l <= truncation; ++l) {
      GridPath f = pairs[static_cast<std::size_t>(l)].function;
      for (int j = 0; j < 5; ++j) {
        double c = dot(f, phi[static_cast<std::size_t>(j)]);
        for (std::size_t i = 0; i < n; ++i) f[i] -= c * phi[static_cast<std::size_t>(j)][i];
      }
      double nn = std::sqrt(dot(f, f));
      for (auto& x : f.v) x /= nn;
      push(std::move(f), pairs[static_cast<std::size_t>(l)].value - 2.0 * mu, "a high mode");
    }
  }
  return s;
}

GridPath sample_pstar(const ConditionedGaussianSampler& s, std::mt19937_64& gen) {
  std::normal_distribution<double> nd(0.0, 1.0);
  GridPath p(s.n);
  for (const auto& m : s.modes) {
    double g = nd(gen);
    for (std::size_t i = 0; i < s.n; ++i) p[i] += g * m[i];
  }
  return p;
}

std::vector<GridPath> sample_pstar(const ConditionedGaussianSampler& s, std::size_t count, std::uint64_t seed) {
  std::vector<GridPath> out(count);
  const auto c = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static) num_threads(worker_count())
  for (std::int64_t i = 0; i < c; ++i) {
    auto gen = stream(seed, static_cast<std::uint64_t>(i));
    out[static_cast<std::size_t>(i)] = sample_pstar(s, gen);
  }
  return out;
}

double pstar_mean_square(const ConditionedGaussianSampler& s) {
  double t = 0.0;
  for (double v : s.variances) t += v;
  return t;
}

double pstar_sup_high_variance(const ConditionedGaussianSampler& s) {
  double best = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    double v = 0.0;
    for (std::size_t m = 3; m < s.modes.size(); ++m) v += s.modes[m][i] * s.modes[m][i];
    best = std::max(best, v);
  }
  return best;
}

} // namespace hilltails::sampling
