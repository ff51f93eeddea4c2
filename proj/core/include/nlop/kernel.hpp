#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "nlop/geometry.hpp"

namespace nlop {

/// Angular part of a homogeneous symmetric kernel K(h) = a(h/|h|)|h|^{-n-2s}.
/// Evenness a(theta) = a(-theta) is enforced at construction (tabulated
/// densities are symmetrized on load).
class AngularDensity {
 public:
  static AngularDensity isotropic(double value = 1.0);
  /// The constant density that makes K the kernel of the fractional
  /// Laplacian under the convention L u = 2 p.v. int (u(x)-u(y)) K.
  static AngularDensity frac_laplacian(int dim, double s);
  /// a(theta) = 1 + amplitude * (theta . e1)^2
  static AngularDensity cos2(double amplitude);
  /// Piecewise-linear in angle from (angle, value) samples; symmetrized.
  static AngularDensity table(std::vector<std::pair<double, double>> samples);

  /// Evaluate at a unit direction. In 1D the direction is (+-1, 0).
  double operator()(Vec2 theta) const { return fn_(theta); }

  const std::string& description() const { return desc_; }

 private:
  AngularDensity(std::function<double(Vec2)> fn, std::string desc)
      : fn_(std::move(fn)), desc_(std::move(desc)) {}

  std::function<double(Vec2)> fn_;
  std::string desc_;
};

/// Quadrature rule on the unit sphere: full circle (n=2) or the two-point
/// set {-1,+1} (n=1). Weights sum to the sphere measure.
struct SphereQuadrature {
  std::vector<Vec2> nodes;
  std::vector<double> weights;

  static SphereQuadrature make(int dim, int count = 4096);
  double total_weight() const;
};

struct KernelSpec {
  int dim;             // 1 or 2
  double s;            // order parameter, strictly in (0,1)
  AngularDensity density;
  double lambda_bound; // min of sampled density
  double Lambda_bound; // max of sampled density

  /// Validates s in (0,1), positivity and evenness of the density, and
  /// fills the ellipticity bounds by sampling.
  KernelSpec(int dim, double s, AngularDensity density);
};

/// K(h) = a(h/|h|) |h|^{-n-2s}. Throws std::domain_error for h = 0.
double eval_kernel(const KernelSpec& spec, Vec2 h);

/// B(nu) = Z(s) int_{S^{n-1}} a(theta) |theta.nu|^{2s} dtheta, normalized so
/// that the fractional-Laplacian density gives B = 1.
double direction_constant_B(const KernelSpec& spec, Vec2 nu, const SphereQuadrature& quad);

/// A(nu) = Gamma(1+s)^{-1} B(nu)^{-1/2}; the amplitude of the half-space
/// solution with free boundary normal nu.
double free_boundary_constant_A(const KernelSpec& spec, Vec2 nu, const SphereQuadrature& quad);

}  // namespace nlop
