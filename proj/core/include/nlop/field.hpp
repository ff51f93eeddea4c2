#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlop/geometry.hpp"
#include "nlop/profile.hpp"
#include "nlop/tail.hpp"

namespace nlop {

/// Uniform cell-centered lattice over a box. Node (i,j) sits at the center
/// of its cell; the grid box is the union of cells.
struct Grid {
  int dim = 1;
  int nx = 0;
  int ny = 1;
  Vec2 lo{};
  double h = 0.0;

  int count() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  Vec2 node(int i, int j) const {
    return {lo.x + (i + 0.5) * h, dim == 2 ? lo.y + (j + 0.5) * h : 0.0};
  }
  Box box() const {
    return {lo, {lo.x + nx * h, dim == 2 ? lo.y + ny * h : 0.0}};
  }
  double cell_measure() const { return dim == 2 ? h * h : h; }

  static Grid make_1d(double a, double b, int nx);
  static Grid make_2d(Box b, int nx);  // ny chosen from the aspect ratio

  bool operator==(const Grid&) const = default;
};

/// Analytic data outside the grid box.
struct Exterior {
  enum class Kind { Zero, Profile, Custom };
  Kind kind = Kind::Zero;
  HalfSpaceProfile profile{};
  std::function<double(Vec2)> fn;  // Custom only
  FarField custom_far{};

  static Exterior zero() { return {}; }
  static Exterior from_profile(const HalfSpaceProfile& p) {
    Exterior e;
    e.kind = Kind::Profile;
    e.profile = p;
    return e;
  }
  static Exterior custom(std::function<double(Vec2)> f, FarField far) {
    Exterior e;
    e.kind = Kind::Custom;
    e.fn = std::move(f);
    e.custom_far = far;
    return e;
  }

  double operator()(Vec2 p) const;
  FarField far() const;
  nlohmann::json descriptor() const;
  static Exterior from_descriptor(const nlohmann::json& j);
};

/// Grid-sampled nonnegative function with analytic exterior continuation.
/// Nodes outside the inner box `omega` carry prescribed data and are never
/// mutated by the minimizer.
class Field {
 public:
  Grid grid;
  std::vector<double> values;
  Box omega;
  double s = 0.5;
  Exterior exterior;

  Field() = default;
  Field(const Grid& g, const Box& omega_box, double s_order, Exterior ext);

  double& at(int i, int j) { return values[grid.index(i, j)]; }
  double at(int i, int j) const { return values[grid.index(i, j)]; }

  bool free_node(int i, int j) const { return omega.contains(grid.node(i, j), grid.dim); }

  /// Analytic continuation of the exterior data at an arbitrary point.
  double exterior_value(Vec2 p) const { return exterior(p); }

  /// Bilinear interpolation inside the grid box, exterior data outside.
  double eval(Vec2 p) const;

  /// Overwrite every node with fn; negative samples are clamped to zero.
  void sample(const std::function<double(Vec2)>& fn);
  /// Overwrite the nodes outside omega with the exterior continuation.
  void enforce_exterior();

  /// Throws if a value is negative or a fixed node deviates from the
  /// exterior continuation.
  void validate() const;

  /// Binary blob (row-major 64-bit floats) + JSON sidecar.
  void save(const std::string& path_prefix) const;
  static Field load(const std::string& path_prefix);

  void export_csv(const std::string& path) const;
};

/// Field whose every node and exterior follow a half-space profile.
Field profile_field(const Grid& g, const Box& omega_box, const HalfSpaceProfile& p);

}  // namespace nlop
