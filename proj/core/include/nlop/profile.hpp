#pragma once

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "nlop/geometry.hpp"

namespace nlop {

/// One-dimensional half-space solution amplitude * (x.nu + shift)_+^s.
/// Vanishes exactly on {x.nu <= -shift}.
struct HalfSpaceProfile {
  Vec2 nu{1.0, 0.0};
  double shift = 0.0;
  double amplitude = 1.0;
  double s = 0.5;

  /// Signed normal coordinate relative to the free hyperplane.
  double normal_coord(Vec2 x) const { return dot(x, nu) + shift; }

  double operator()(Vec2 x) const {
    double t = normal_coord(x);
    return t > 0.0 ? amplitude * std::pow(t, s) : 0.0;
  }
};

inline void to_json(nlohmann::json& j, const HalfSpaceProfile& p) {
  j = nlohmann::json{{"nu", {p.nu.x, p.nu.y}},
                     {"shift", p.shift},
                     {"amplitude", p.amplitude},
                     {"s", p.s}};
}

inline void from_json(const nlohmann::json& j, HalfSpaceProfile& p) {
  p.nu = {j.at("nu").at(0).get<double>(), j.at("nu").at(1).get<double>()};
  p.shift = j.at("shift").get<double>();
  p.amplitude = j.at("amplitude").get<double>();
  p.s = j.at("s").get<double>();
}

}  // namespace nlop
