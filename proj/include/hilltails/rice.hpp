#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hilltails/grid.hpp"

namespace hilltails::rice {

// Finite stationary process on Z/L: explicit list of paths and probabilities.
struct LatticeProcess {
  std::string name;
  std::vector<std::vector<int>> paths;
  std::vector<long double> probs;
};

using LatticeFunctional = std::function<long double(const std::vector<int>&)>;

// uniform over all rotations of each pattern, patterns mixed with the given weights
LatticeProcess rotation_orbit_process(const std::vector<std::vector<int>>& patterns,
                                      const std::vector<long double>& weights, std::string name = "orbits");
// i.i.d. symbols conditioned on having at least one zero
LatticeProcess iid_conditioned_process(std::size_t length, const std::vector<int>& values,
                                       const std::vector<long double>& probs, std::string name = "iid");

// the three processes used by the report and the tests: one rotation orbit,
// a two-orbit mixture, and conditioned i.i.d. symbols on Z/8
std::vector<LatticeProcess> standard_lattice_processes();
// translation-invariant test functional: sum x^2 + max x + (#zeros)/2
long double standard_lattice_functional(const std::vector<int>& x);

// (E[F], L * E[F / N ; X(0) = 0]) by full enumeration, N = number of zeros
std::pair<long double, long double> check_discrete_rice(const LatticeProcess& proc, const LatticeFunctional& F);

struct MCPair {
  double lhs = 0.0, lhs_se = 0.0;
  double rhs = 0.0, rhs_se = 0.0;
  std::size_t count = 0;
  std::size_t excluded = 0;
  double z() const;
};

enum class ContinuousF { one, max, zeros, density_weight };

// Random trigonometric process sum_j s_j (a_j cos 2 pi j x + b_j sin 2 pi j x),
// s = (1, 0.7, 0.5). rhs conditions on X(0) = 0 exactly (Gaussian conditioning).
MCPair check_rice_continuous(double mu, ContinuousF F, std::size_t count, std::uint64_t seed);

using PathFunctional = std::function<double(const GridPath&)>;

// Mean-zero bridge further conditioned on int phi_c p = 0; compares
// E[F(p)] with E[F(p + shift) w(p)].
MCPair check_cameron_martin(const GridPath& shift, const GridPath& conditioning, const PathFunctional& F,
                            std::size_t count, std::uint64_t seed);

// E[w^2] for the Cameron-Martin weight: exp(int shift'^2) on the grid
double cameron_martin_second_moment(const GridPath& shift);

// sampler pieces, exposed for tests
GridPath conditioned_direction(const GridPath& conditioning);
GridPath sample_doubly_conditioned(std::uint64_t seed, std::uint64_t index, const GridPath& conditioning,
                                   const GridPath& direction);
double cameron_martin_weight(const GridPath& p, const GridPath& shift);

} // namespace hilltails::rice
