#pragma once

#include <optional>

#include "hilltails/grid.hpp"

namespace hilltails::elliptic {

// Modulus data. kc2 = 1 - k^2 is the primary parameter: near k = 1 it carries
// all the information and k2 alone would round it away.
struct EllipticContext {
  double k = 0.0;
  double k2 = 0.0;
  double kc2 = 1.0;
  double kc = 1.0; // sqrt(kc2)
  double K = 0.0;
  std::optional<double> mu;
};

struct SnCnDn {
  double sn, cn, dn;
};

// K from the complementary parameter m1 = 1 - k^2, m1 in (0, 1].
double complete_K_m1(double m1);

// K(k) for 0 <= k < 1.
double complete_K(double k);

EllipticContext context_from_k(double k);
EllipticContext context_from_kc2(double kc2);

SnCnDn sn_cn_dn(double x, const EllipticContext& ctx);

// k such that 4K(k) = sqrt(mu); requires mu >= 4 pi^2.
EllipticContext modulus_for_mu(double mu);

// p(x) = k sqrt(mu) sn(sqrt(mu) x, k) on n points of [0,1)
GridPath extremal_path(const EllipticContext& ctx, std::size_t n);

} // namespace hilltails::elliptic
