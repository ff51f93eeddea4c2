#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "nlop/field.hpp"

namespace nlop {

/// Geometry of the positivity-set boundary of a field.
struct FreeBoundaryGeometry {
  bool empty = true;                  // no sign-changing edge found
  std::vector<Vec2> boundary_points;  // edge crossings of {u > 0}
  std::vector<Vec2> normals;          // unit, oriented into {u > 0}
  std::vector<double> distance;      // per grid node: distance to the boundary point set

  struct GraphFit {
    Vec2 direction{};   // fitted boundary normal
    double offset = 0.0;
    double residual = 0.0;  // rms perpendicular deviation
  };
  std::optional<GraphFit> graph_fit;

  nlohmann::json to_json() const;
};

/// Boundary points from sign changes across grid edges; the crossing
/// location uses u^{1/s}, which is linear in the distance for half-space
/// profiles. Normals from a total-least-squares line fit over the 5 nearest
/// boundary points, oriented toward the positive side.
FreeBoundaryGeometry extract_boundary(const Field& u);

/// Limit estimate of u/d^s at the boundary point of `geo` nearest to x0:
/// samples along the inward normal at t in {2h, 4h, 8h} and extrapolates
/// with the known exponent s. `sample_h` raises the sampling resolution
/// floor above the grid spacing (useful for resampled fields whose true
/// resolution is coarser). Throws std::runtime_error when fewer than 3
/// inward samples are positive.
double trace_u_over_ds(const Field& u, const FreeBoundaryGeometry& geo, Vec2 x0,
                       double sample_h = 0.0);

/// Rescaled field x -> u(x0 + r x)/r^s on the unit box, exterior rescaled
/// consistently. Throws std::domain_error unless x0 lies in the grid box
/// and r > 0.
Field blowup(const Field& u, Vec2 x0, double r);

struct FlatnessMeasure {
  double epsilon = 0.0;  // capped at 1 (not flat)
  double t_eps = 0.0;    // sum of the two one-sided tail deviations at radius 1
};

/// Smallest shift eps such that A(x.nu - eps)_+^s <= u <= A(x.nu + eps)_+^s
/// on B_1, computed in closed form from the node-wise deviations, plus the
/// tail of the one-sided deviations outside B_1.
FlatnessMeasure measure_flatness(const Field& u_r, Vec2 nu, double amplitude);

/// Direction minimizing the flatness eps, golden-section over the angle
/// starting at nu0 (half-width 0.5 rad). In 1D compares the two axis
/// orientations. Falls back to nu0 when no improvement is found.
Vec2 best_direction(const Field& u_r, Vec2 nu0, double amplitude);

/// All roots w in [-1,1] of amplitude*(x.nu)_+^s = u(x - eps*w*nu),
/// sign-scan over 256 subintervals plus bisection. Empty result means the
/// equation has no root at this x (inconsistent with eps-flatness).
std::vector<double> domain_variation(const Field& u, Vec2 nu, double eps, Vec2 x,
                                     double amplitude);

/// |{u > 0} cap B_R(x0)| / |B_R(x0)|, sampled on an h-lattice through eval
/// (works for balls crossing the grid boundary).
double density_ratio(const Field& u, Vec2 x0, double R);

struct GrowthFit {
  double slope = 0.0;
  double residual = 0.0;  // rms of the log-log fit
  bool degenerate = false;  // some ball had sup u = 0
};

/// Least-squares slope of log sup_{B_r(x0)} u against log r.
GrowthFit growth_exponents(const Field& u, Vec2 x0, const std::vector<double>& radii);

struct TranslationMasses {
  double plus_mass = 0.0;
  double minus_mass = 0.0;
};

/// Integrals of (u(x) - u(x + t nu))_{+-} / |t| over the ball.
TranslationMasses translation_monotonicity_product(const Field& u, Vec2 nu, double t,
                                                   Vec2 center, double radius);

struct FlatnessReport {
  std::vector<double> scales;
  std::vector<double> epsilons;
  std::vector<double> tails;
  std::vector<Vec2> nus;
  std::vector<double> trace_values;
  double decay_slope = 0.0;  // log2 of the mean epsilon ratio
  double noise_floor = 0.0;  // h^s of the source grid

  nlohmann::json to_json() const;
};

/// Dyadic blow-up sweep at x0: for each scale, re-optimizes the direction
/// (warm-started from the previous scale) and records flatness and trace.
FlatnessReport flatness_sweep(const Field& u, Vec2 x0, double amplitude, Vec2 nu0,
                              const std::vector<double>& scales);

}  // namespace nlop
