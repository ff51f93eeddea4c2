#include "nlop/variation.hpp"

#include <cmath>
#include <stdexcept>

namespace nlop {

double log_cutoff(Vec2 x, double R) {
  if (!(R > 1.0)) throw std::invalid_argument("log_cutoff: R must exceed 1");
  double r = norm(x);
  if (r <= std::sqrt(R)) return 1.0;
  if (r >= R) return 0.0;
  return 2.0 * (1.0 - std::log(r) / std::log(R));
}

Vec2 transport(Vec2 x, double t, Vec2 nu, double R) {
  return x + (t * log_cutoff(x, R)) * nu;
}

Vec2 transport_inverse(Vec2 x, double t, Vec2 nu, double R) {
  Vec2 y = x;
  for (int it = 0; it < 64; ++it) {
    Vec2 next = x - (t * log_cutoff(y, R)) * nu;
    if (norm(next - y) < 1e-15) return next;
    y = next;
  }
  return y;
}

Field transported_field(const std::function<double(Vec2)>& source, const Field& prototype,
                        double t, Vec2 nu, double R) {
  const Box& om = prototype.omega;
  if (-R < om.lo.x || R > om.hi.x ||
      (prototype.grid.dim == 2 && (-R < om.lo.y || R > om.hi.y)))
    throw std::invalid_argument("transported_field: B_R must lie inside omega");
  Field v = prototype;
  const Grid& g = v.grid;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!v.free_node(i, j)) continue;
      Vec2 y = transport_inverse(g.node(i, j), t, nu, R);
      v.at(i, j) = std::max(0.0, source(y));
    }
  return v;
}

double transport_excess(const EnergyContext& ctx, const std::function<double(Vec2)>& source,
                        const Field& prototype, Vec2 nu, double R, double t, double delta) {
  Field base = transported_field(source, prototype, 0.0, nu, R);
  Field plus = transported_field(source, prototype, t, nu, R);
  Field minus = transported_field(source, prototype, -t, nu, R);
  double e0 = total_energy(ctx, base, delta).total;
  double ep = total_energy(ctx, plus, delta).total;
  double em = total_energy(ctx, minus, delta).total;
  return ep + em - 2.0 * e0;
}

double transport_first_variation(const EnergyContext& ctx,
                                 const std::function<double(Vec2)>& source,
                                 const Field& prototype, Vec2 nu, double R, double t,
                                 double delta) {
  Field plus = transported_field(source, prototype, t, nu, R);
  Field minus = transported_field(source, prototype, -t, nu, R);
  double ep = total_energy(ctx, plus, delta).total;
  double em = total_energy(ctx, minus, delta).total;
  return (ep - em) / (2.0 * t);
}

}  // namespace nlop
