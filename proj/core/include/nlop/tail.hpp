#pragma once

#include <functional>

#include "nlop/geometry.hpp"
#include "nlop/profile.hpp"

namespace nlop {

/// Closure of the far-field integral beyond the numeric annuli.
struct FarField {
  enum class Kind { Decaying, Constant, Profile };
  Kind kind = Kind::Decaying;
  double constant = 0.0;        // for Kind::Constant
  HalfSpaceProfile profile{};   // for Kind::Profile (leading s-growth)

  static FarField decaying() { return {}; }
  static FarField constant_value(double c) { return {Kind::Constant, c, {}}; }
  static FarField profile_growth(const HalfSpaceProfile& p) { return {Kind::Profile, 0.0, p}; }
};

struct TailParams {
  int annuli_per_decade = 64;
  double decades = 6.0;   // numeric range [R, R*10^decades]
  int angles = 128;       // angular samples in 2D
};

/// tail(u; R, x0) = R^{2s} int_{|y-x0|>R} |u(y)| |y-x0|^{-n-2s} dy.
/// Geometric annuli with exact radial power-law weights and a midpoint
/// sample of |u|; the far field beyond the numeric range is closed with the
/// analytic growth bound of `far`. Throws std::runtime_error if the numeric
/// part fails to converge (u growing too fast).
double tail(const std::function<double(Vec2)>& u, int dim, double s, double R, Vec2 x0,
            const FarField& far = FarField::decaying(), const TailParams& params = {});

}  // namespace nlop
