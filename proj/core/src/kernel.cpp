#include "nlop/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlop/numerics.hpp"

namespace nlop {

AngularDensity AngularDensity::isotropic(double value) {
  if (value <= 0.0) throw std::invalid_argument("isotropic density must be positive");
  return AngularDensity([value](Vec2) { return value; }, "isotropic");
}

AngularDensity AngularDensity::frac_laplacian(int dim, double s) {
  // L u = 2 p.v. int (u(x)-u(y)) K  equals (-Delta)^s when a = c(n,s)/2.
  double value = 0.5 * frac_laplacian_constant(dim, s);
  return AngularDensity([value](Vec2) { return value; }, "frac_laplacian");
}

AngularDensity AngularDensity::cos2(double amplitude) {
  if (amplitude <= -1.0) throw std::invalid_argument("cos2 amplitude must exceed -1");
  return AngularDensity(
      [amplitude](Vec2 theta) {
        double c = theta.x;  // theta . e1 on the unit sphere
        return 1.0 + amplitude * c * c;
      },
      "cos2");
}

AngularDensity AngularDensity::table(std::vector<std::pair<double, double>> samples) {
  if (samples.size() < 2) throw std::invalid_argument("angular table needs at least 2 samples");
  std::sort(samples.begin(), samples.end());
  for (auto& [ang, val] : samples) {
    (void)ang;
    if (val <= 0.0) throw std::invalid_argument("angular table values must be positive");
  }
  auto interp = [samples](double phi) {
    double two_pi = 2.0 * M_PI;
    phi = std::fmod(phi, two_pi);
    if (phi < 0) phi += two_pi;
    // wrap-around linear interpolation
    auto it = std::lower_bound(samples.begin(), samples.end(), std::make_pair(phi, -1.0));
    double a0, v0, a1, v1;
    if (it == samples.begin() || it == samples.end()) {
      a0 = samples.back().first;
      v0 = samples.back().second;
      a1 = samples.front().first + two_pi;
      v1 = samples.front().second;
      if (phi < a0) phi += two_pi;
    } else {
      a0 = (it - 1)->first;
      v0 = (it - 1)->second;
      a1 = it->first;
      v1 = it->second;
    }
    double t = (a1 > a0) ? (phi - a0) / (a1 - a0) : 0.0;
    return v0 + t * (v1 - v0);
  };
  // evenness enforced by symmetrization a <- (a(theta)+a(-theta))/2
  return AngularDensity(
      [interp](Vec2 theta) {
        double phi = angle_of(theta);
        return 0.5 * (interp(phi) + interp(phi + M_PI));
      },
      "table");
}

SphereQuadrature SphereQuadrature::make(int dim, int count) {
  SphereQuadrature q;
  if (dim == 1) {
    q.nodes = {{1.0, 0.0}, {-1.0, 0.0}};
    q.weights = {1.0, 1.0};
    return q;
  }
  if (dim != 2) throw std::invalid_argument("sphere quadrature: dim must be 1 or 2");
  if (count < 8) throw std::invalid_argument("sphere quadrature: too few nodes");
  // Composite trapezoid on the circle; periodic, so equal weights.
  double w = 2.0 * M_PI / count;
  q.nodes.reserve(count);
  q.weights.assign(count, w);
  for (int k = 0; k < count; ++k) q.nodes.push_back(unit_from_angle(w * k));
  return q;
}

double SphereQuadrature::total_weight() const {
  KahanSum acc;
  for (double w : weights) acc.add(w);
  return acc.value();
}

KernelSpec::KernelSpec(int dim_, double s_, AngularDensity density_)
    : dim(dim_), s(s_), density(std::move(density_)), lambda_bound(0), Lambda_bound(0) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("kernel dim must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("kernel order s must lie strictly in (0,1)");
  auto quad = SphereQuadrature::make(dim, dim == 1 ? 2 : 1024);
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& theta : quad.nodes) {
    double v = density(theta);
    double v_neg = density(-theta);
    if (!(v > 0.0)) throw std::invalid_argument("angular density must be positive");
    if (std::abs(v - v_neg) > 1e-12 * (std::abs(v) + std::abs(v_neg)))
      throw std::invalid_argument("angular density must be even");
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  lambda_bound = lo;
  Lambda_bound = hi;
}

double eval_kernel(const KernelSpec& spec, Vec2 h) {
  double r = (spec.dim == 1) ? std::abs(h.x) : norm(h);
  if (r <= 0.0) throw std::domain_error("eval_kernel: zero displacement");
  Vec2 theta = (spec.dim == 1) ? Vec2{h.x > 0 ? 1.0 : -1.0, 0.0} : (1.0 / r) * h;
  return spec.density(theta) * std::pow(r, -(spec.dim + 2.0 * spec.s));
}

double direction_constant_B(const KernelSpec& spec, Vec2 nu, const SphereQuadrature& quad) {
  if (std::abs(norm(nu) - 1.0) > 1e-10) throw std::invalid_argument("nu must be a unit vector");
  if (quad.nodes.size() != quad.weights.size() || quad.nodes.empty())
    throw std::invalid_argument("malformed sphere quadrature");
  KahanSum acc;
  for (std::size_t k = 0; k < quad.nodes.size(); ++k) {
    double w = quad.weights[k];
    if (!(w > 0.0)) throw std::invalid_argument("sphere quadrature weights must be positive");
    double c = std::abs(dot(quad.nodes[k], nu));
    acc.add(w * spec.density(quad.nodes[k]) * std::pow(c, 2.0 * spec.s));
  }
  return direction_normalization(spec.s) * acc.value();
}

double free_boundary_constant_A(const KernelSpec& spec, Vec2 nu, const SphereQuadrature& quad) {
  double b = direction_constant_B(spec, nu, quad);
  return 1.0 / (std::tgamma(1.0 + spec.s) * std::sqrt(b));
}

}  // namespace nlop
