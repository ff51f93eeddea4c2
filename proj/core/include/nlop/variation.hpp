#pragma once

#include <functional>

#include "nlop/energy.hpp"
#include "nlop/field.hpp"

namespace nlop {

/// Logarithmic cutoff: 1 on B_sqrt(R), 0 outside B_R, 2(1 - log|x|/log R)
/// in between. Requires R > 1.
double log_cutoff(Vec2 x, double R);

/// Transport map Psi(x) = x + t * log_cutoff(x, R) * nu and its inverse
/// (fixed-point iteration; requires |t| small enough that Psi is injective).
Vec2 transport(Vec2 x, double t, Vec2 nu, double R);
Vec2 transport_inverse(Vec2 x, double t, Vec2 nu, double R);

/// Field x -> source(Psi^{-1}(x)) on the free nodes of the prototype; fixed
/// nodes keep the exterior. B_R must lie inside omega so the transport
/// never touches prescribed data.
Field transported_field(const std::function<double(Vec2)>& source, const Field& prototype,
                        double t, Vec2 nu, double R);

/// Symmetric second difference of the energy under the transport:
///   I(u_{R,t}) + I(u_{R,-t}) - 2 I(u),  u_{R,t} = source o Psi_{R,t}^{-1}.
/// Linear terms cancel, so for smooth energies this scales as t^2. The
/// volume term uses smoothing width delta.
double transport_excess(const EnergyContext& ctx, const std::function<double(Vec2)>& source,
                        const Field& prototype, Vec2 nu, double R, double t, double delta);

/// Central first difference (I(u_{R,t}) - I(u_{R,-t})) / (2t): the discrete
/// domain variation of the energy in direction nu. Vanishes at minimizers.
double transport_first_variation(const EnergyContext& ctx,
                                 const std::function<double(Vec2)>& source,
                                 const Field& prototype, Vec2 nu, double R, double t,
                                 double delta);

}  // namespace nlop
