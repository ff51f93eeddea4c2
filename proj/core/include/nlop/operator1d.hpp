#pragma once

#include "nlop/kernel.hpp"
#include "nlop/profile.hpp"

namespace nlop {

struct OperatorQuadParams {
  double tol = 1e-9;          // absolute tolerance of the adaptive segments
  double far_cutoff = 1048576.0;  // 2^20: numeric range before the analytic tail
  int sphere_nodes = 4096;    // angular resolution for the direction integral
};

/// Applies the (normalized) operator of the kernel spec to a half-space
/// profile at x, by principal-value quadrature of the integral reduced to one
/// dimension along the profile normal. With t = x.nu + shift:
///   t > 0  ->  ~0 (the profile is a solution on its positivity set),
///   t < 0  ->  amplitude * B(nu) * |t|^{-s}.
/// Sign convention matches the half-space identity: the returned value is
/// positive on the zero set. Throws std::domain_error for t == 0.
double apply_L_to_profile(const KernelSpec& spec, const HalfSpaceProfile& p, Vec2 x,
                          const OperatorQuadParams& params = {});

}  // namespace nlop
