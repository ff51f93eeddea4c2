#include "nlop/operator1d.hpp"

#include <cmath>
#include <stdexcept>

#include "nlop/numerics.hpp"

namespace nlop {

namespace {

// Integral of the unnormalized 1D jump form against the profile slice
//   J(t) = p.v. int_R (phi(t+rho) - phi(t)) |rho|^{-1-2s} drho,
// phi(tau) = amplitude * tau_+^s.
double jump_form_1d(double t, double amplitude, double s, const OperatorQuadParams& params) {
  double tol = params.tol;

  if (t < 0.0) {
    double at = -t;
    // Only rho > |t| contributes; w = rho - |t|.
    auto g = [&](double w) { return std::pow(w, s) * std::pow(w + at, -1.0 - 2.0 * s); };
    double rf = params.far_cutoff * std::max(1.0, at);
    double acc = integrate_adaptive(g, 0.0, at, tol);
    for (double a = at; a < rf; a *= 4.0)
      acc += integrate_adaptive(g, a, std::min(4.0 * a, rf), tol);
    // analytic tail: w^s (w+|t|)^{-1-2s} ~ w^{-1-s} (1 - (1+2s)|t|/w)
    acc += std::pow(rf, -s) / s - (1.0 + 2.0 * s) * at * std::pow(rf, -s - 1.0) / (s + 1.0);
    return amplitude * acc;
  }

  // Positive side. phi is smooth at t; symmetric window plus curvature term.
  double delta = std::min(0.1, 0.5 * t);
  double phi_t = std::pow(t, s);
  double dd_phi = s * (s - 1.0) * std::pow(t, s - 2.0);
  auto even_remainder = [&](double rho) {
    double sym = std::pow(t + rho, s) + std::pow(t - rho, s) - 2.0 * phi_t - dd_phi * rho * rho;
    return sym * std::pow(rho, -1.0 - 2.0 * s);
  };
  double acc = integrate_adaptive(even_remainder, delta * 1e-6, delta, tol);
  acc += dd_phi * std::pow(delta, 2.0 - 2.0 * s) / (2.0 - 2.0 * s);

  // rho in [delta, inf): smooth branch.
  auto pos_branch = [&](double rho) {
    return (std::pow(t + rho, s) - phi_t) * std::pow(rho, -1.0 - 2.0 * s);
  };
  double rf = params.far_cutoff * std::max(1.0, t);
  for (double a = delta; a < rf; a *= 4.0)
    acc += integrate_adaptive(pos_branch, a, std::min(4.0 * a, rf), tol);
  // analytic tail of (t+rho)^s rho^{-1-2s} minus the phi(t) part
  acc += std::pow(rf, -s) / s + s * t * std::pow(rf, -s - 1.0) / (s + 1.0) +
         0.5 * s * (s - 1.0) * t * t * std::pow(rf, -s - 2.0) / (s + 2.0);
  acc -= phi_t * std::pow(rf, -2.0 * s) / (2.0 * s);

  // rho in (-inf, -delta]: sigma = -rho, kink at sigma = t.
  auto neg_branch = [&](double sigma) {
    double v = t - sigma;
    return ((v > 0.0 ? std::pow(v, s) : 0.0) - phi_t) * std::pow(sigma, -1.0 - 2.0 * s);
  };
  if (t > delta) {
    acc += integrate_adaptive(neg_branch, delta, t, tol);
    acc += -phi_t * std::pow(t, -2.0 * s) / (2.0 * s);
  } else {
    acc += -phi_t * std::pow(delta, -2.0 * s) / (2.0 * s);
  }
  return amplitude * acc;
}

}  // namespace

double apply_L_to_profile(const KernelSpec& spec, const HalfSpaceProfile& p, Vec2 x,
                          const OperatorQuadParams& params) {
  double t = p.normal_coord(x);
  if (t == 0.0) throw std::domain_error("apply_L_to_profile: x on the free hyperplane");
  if (std::abs(p.s - spec.s) > 1e-12)
    throw std::invalid_argument("profile order must match the kernel order");

  // Direction integral of the density along the profile normal (unnormalized).
  auto quad = SphereQuadrature::make(spec.dim, spec.dim == 1 ? 2 : params.sphere_nodes);
  KahanSum m;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    if (!(quad.weights[k] > 0.0))
      throw std::invalid_argument("sphere quadrature weights must be positive");
    double c = std::abs(dot(quad.nodes[k], p.nu));
    m.add(quad.weights[k] * spec.density(quad.nodes[k]) * std::pow(c, 2.0 * spec.s));
  }

  double pref = std::tgamma(1.0 - spec.s) / std::tgamma(1.0 + spec.s);
  return pref * m.value() * jump_form_1d(t, p.amplitude, spec.s, params);
}

}  // namespace nlop
