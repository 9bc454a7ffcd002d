#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hilltails/grid.hpp"
#include "hilltails/lame.hpp"

namespace hilltails::sampling {

// Brownian increments over n cells of [0,1)
struct NoiseRealization {
  std::size_t n = 0;
  std::vector<double> increments;
  double sum() const;
};

// N(tilt*h, h) increments; tilt = 0 is the white-noise law itself
NoiseRealization make_noise(std::uint64_t seed, std::uint64_t index, std::size_t n, double tilt = 0.0);

// lambda_0 of -Laplacian_h + diag(dB_i / h) with periodic wraparound
double simulate_ground_state(const NoiseRealization& noise);

struct GroundStateSample {
  double minus_lambda0 = 0.0;
  double weight = 1.0;
};

struct EnsembleConfig {
  std::size_t n = 1024;
  std::size_t count = 0;
  std::uint64_t seed = 0;
  // mean shifts of B(1) used round-robin; the balance-heuristic weight makes
  // the weighted sample unbiased for the untilted law. Empty: plain sampling.
  std::vector<double> tilts;
};

GroundStateSample ground_state_sample(const EnsembleConfig& cfg, std::uint64_t index);
std::vector<GroundStateSample> ground_state_ensemble_serial(const EnsembleConfig& cfg);
std::vector<GroundStateSample> ground_state_ensemble(const EnsembleConfig& cfg, int threads = 0);

struct DensityEstimate {
  std::vector<double> edges;
  std::vector<double> mass;    // fraction of (weighted) samples per bin
  std::vector<double> density; // mass / width
  std::vector<double> stderr_;
  std::vector<double> smoothed; // Gaussian kernel estimate at bin centres
  std::size_t count = 0;
  double in_window = 0.0;
  double bandwidth = 0.0;
};

DensityEstimate estimate_density(const std::vector<double>& samples, double lo, double hi, int bins,
                                 const std::vector<double>* weights = nullptr);

struct PointEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::size_t count = 0;
  bool flagged = false;
};

// density at x from three adjacent bins of the given width, with the
// curvature term removed; stderr from the per-sample contributions
PointEstimate point_density(const std::vector<double>& samples, const std::vector<double>* weights, double x,
                            double width);

// Brownian bridge on n points with its grid mean removed
GridPath sample_cbm_meanzero(std::mt19937_64& gen, std::size_t n);

// exp{-1/2 int (mu - p^2)^2} A(p) / sqrt(2 pi)
double path_weight(const GridPath& p, double mu);

std::vector<PointEstimate> path_integral_density_serial(const std::vector<double>& mus, std::size_t count,
                                                        std::size_t n, std::uint64_t seed);
std::vector<PointEstimate> path_integral_density_multi(const std::vector<double>& mus, std::size_t count,
                                                       std::size_t n, std::uint64_t seed, int threads = 0);
PointEstimate path_integral_density(double mu, std::size_t count, std::size_t n, std::uint64_t seed);

struct ConditionedGaussianSampler {
  double mu = 0.0;
  std::size_t n = 0;
  lame::SimpleSpectrum spectrum;
  std::vector<GridPath> modes; // already divided by their normalizers
  std::vector<double> variances; // variance of each mode's coefficient times ||mode||^2
  GridPath phi1;
  int truncation = 0;
};

ConditionedGaussianSampler make_pstar_sampler(double mu, std::size_t n = 0, int truncation = 0);
GridPath sample_pstar(const ConditionedGaussianSampler& s, std::mt19937_64& gen);
std::vector<GridPath> sample_pstar(const ConditionedGaussianSampler& s, std::size_t count, std::uint64_t seed);
// E*[int p^2] from the expansion (sum of mode variances)
double pstar_mean_square(const ConditionedGaussianSampler& s);
// sup_x E*[p_h(x)^2], high modes only
double pstar_sup_high_variance(const ConditionedGaussianSampler& s);

} // namespace hilltails::sampling
