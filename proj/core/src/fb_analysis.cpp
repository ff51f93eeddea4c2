#include "nlop/fb_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "nlop/tail.hpp"

namespace nlop {

namespace {

// Normal of a total-least-squares line fit: eigenvector of the smaller
// covariance eigenvalue. Returns the rms perpendicular deviation.
Vec2 tls_normal(const std::vector<Vec2>& pts, double* rms = nullptr) {
  Vec2 c{};
  for (Vec2 p : pts) c = c + p;
  c = (1.0 / pts.size()) * c;
  double sxx = 0, sxy = 0, syy = 0;
  for (Vec2 p : pts) {
    Vec2 d = p - c;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  double tr = sxx + syy;
  double disc = std::sqrt((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy);
  double lmin = 0.5 * (tr - disc);
  Vec2 n;
  if (std::abs(sxy) > 1e-300) {
    Vec2 a{sxy, lmin - sxx}, b{lmin - syy, sxy};
    n = norm(a) >= norm(b) ? a : b;
  } else {
    n = sxx <= syy ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};
  }
  n = normalized(n);
  if (rms) *rms = std::sqrt(std::max(0.0, lmin) / pts.size());
  return n;
}

int nearest_boundary_index(const FreeBoundaryGeometry& geo, Vec2 x0) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < geo.boundary_points.size(); ++k) {
    double d = norm(geo.boundary_points[k] - x0);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(k);
    }
  }
  return best;
}

double ball_sup(const Field& u, Vec2 x0, double R) {
  double h = u.grid.h;
  int m = std::max(4, static_cast<int>(std::ceil(2.0 * R / h)));
  double sup = 0.0;
  for (int j = 0; j <= (u.grid.dim == 2 ? m : 0); ++j)
    for (int i = 0; i <= m; ++i) {
      Vec2 p{x0.x - R + 2.0 * R * i / m, u.grid.dim == 2 ? x0.y - R + 2.0 * R * j / m : 0.0};
      if (norm(p - x0) > R) continue;
      sup = std::max(sup, u.eval(p));
    }
  return sup;
}

}  // namespace

nlohmann::json FreeBoundaryGeometry::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (std::size_t k = 0; k < boundary_points.size(); ++k)
    pts.push_back({{"x", boundary_points[k].x},
                   {"y", boundary_points[k].y},
                   {"nx", normals[k].x},
                   {"ny", normals[k].y}});
  nlohmann::json j{{"empty", empty}, {"boundary", pts}};
  if (graph_fit)
    j["graph_fit"] = {{"direction", {graph_fit->direction.x, graph_fit->direction.y}},
                      {"offset", graph_fit->offset},
                      {"residual", graph_fit->residual}};
  return j;
}

FreeBoundaryGeometry extract_boundary(const Field& u) {
  const Grid& g = u.grid;
  FreeBoundaryGeometry geo;
  double inv_s = 1.0 / u.s;

  auto crossing = [&](int pi, int pj, int qi, int qj) {
    // p positive, q zero; extrapolate u^{1/s} from the node beyond p
    double fp = std::pow(u.at(pi, pj), inv_s);
    int ri = 2 * pi - qi, rj = 2 * pj - qj;
    double xi = 1.0;
    if (ri >= 0 && ri < g.nx && rj >= 0 && rj < g.ny && u.at(ri, rj) > 0.0) {
      double fr = std::pow(u.at(ri, rj), inv_s);
      if (fr > fp) xi = fp / (fr - fp);
    }
    xi = std::clamp(xi, 0.0, 1.0);
    Vec2 p = g.node(pi, pj), q = g.node(qi, qj);
    geo.boundary_points.push_back(p + xi * (q - p));
  };

  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      bool pos = u.at(i, j) > 0.0;
      if (i + 1 < g.nx && (u.at(i + 1, j) > 0.0) != pos)
        pos ? crossing(i, j, i + 1, j) : crossing(i + 1, j, i, j);
      if (j + 1 < g.ny && (u.at(i, j + 1) > 0.0) != pos)
        pos ? crossing(i, j, i, j + 1) : crossing(i, j + 1, i, j);
    }

  geo.empty = geo.boundary_points.empty();
  if (geo.empty) return geo;

  double h = g.h;
  geo.normals.resize(geo.boundary_points.size());
  for (std::size_t k = 0; k < geo.boundary_points.size(); ++k) {
    Vec2 b = geo.boundary_points[k];
    Vec2 n;
    if (g.dim == 1) {
      n = {1.0, 0.0};
    } else {
      // 5 nearest boundary points (including this one)
      std::vector<std::pair<double, std::size_t>> near;
      for (std::size_t m = 0; m < geo.boundary_points.size(); ++m)
        near.push_back({norm(geo.boundary_points[m] - b), m});
      std::size_t take = std::min<std::size_t>(5, near.size());
      std::partial_sort(near.begin(), near.begin() + take, near.end());
      std::vector<Vec2> stencil;
      for (std::size_t m = 0; m < take; ++m)
        stencil.push_back(geo.boundary_points[near[m].second]);
      n = stencil.size() >= 2 ? tls_normal(stencil) : Vec2{1.0, 0.0};
    }
    if (u.eval(b + h * n) < u.eval(b - h * n)) n = -n;
    geo.normals[k] = n;
  }

  geo.distance.resize(g.count());
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 p = g.node(i, j);
      double d = std::numeric_limits<double>::infinity();
      for (Vec2 b : geo.boundary_points) d = std::min(d, norm(p - b));
      geo.distance[g.index(i, j)] = d;
    }

  if (g.dim == 2 && geo.boundary_points.size() >= 2) {
    FreeBoundaryGeometry::GraphFit fit;
    fit.direction = tls_normal(geo.boundary_points, &fit.residual);
    Vec2 mean{};
    for (Vec2 n : geo.normals) mean = mean + n;
    if (dot(fit.direction, mean) < 0.0) fit.direction = -fit.direction;
    Vec2 c{};
    for (Vec2 p : geo.boundary_points) c = c + p;
    c = (1.0 / geo.boundary_points.size()) * c;
    fit.offset = dot(c, fit.direction);
    geo.graph_fit = fit;
  }
  return geo;
}

double trace_u_over_ds(const Field& u, const FreeBoundaryGeometry& geo, Vec2 x0,
                       double sample_h) {
  if (geo.empty) throw std::runtime_error("trace: empty boundary geometry");
  int k = nearest_boundary_index(geo, x0);
  Vec2 b = geo.boundary_points[k];
  Vec2 nu = geo.normals[k];
  double h = std::max(u.grid.h, sample_h), s = u.s;
  double t[3] = {2.0 * h, 4.0 * h, 8.0 * h};
  double q[3];
  for (int m = 0; m < 3; ++m) {
    double val = u.eval(b + t[m] * nu);
    if (val <= 0.0)
      throw std::runtime_error("trace: fewer than 3 positive inward samples (resolution)");
    q[m] = val / std::pow(t[m], s);
  }
  // two-level extrapolation of q(t) = A + c t^s
  auto extrap = [s](double ta, double qa, double tb, double qb) {
    double pa = std::pow(ta, s), pb = std::pow(tb, s);
    return (qa * pb - qb * pa) / (pb - pa);
  };
  return 0.5 * (extrap(t[0], q[0], t[1], q[1]) + extrap(t[1], q[1], t[2], q[2]));
}

Field blowup(const Field& u, Vec2 x0, double r) {
  if (!(r > 0.0)) throw std::domain_error("blowup: scale must be positive");
  if (!u.grid.box().contains(x0, u.grid.dim))
    throw std::domain_error("blowup: center outside grid coverage");
  double scale = std::pow(r, -u.s);
  Field src = u;  // owned copy so the returned field is self-contained
  auto fn = [src = std::move(src), x0, r, scale](Vec2 x) {
    return scale * src.eval(x0 + r * x);
  };

  auto rescale_profile = [&](const HalfSpaceProfile& p) {
    return HalfSpaceProfile{p.nu, (dot(x0, p.nu) + p.shift) / r, p.amplitude, p.s};
  };
  FarField far = FarField::decaying();
  switch (u.exterior.kind) {
    case Exterior::Kind::Zero: break;
    case Exterior::Kind::Profile:
      far = FarField::profile_growth(rescale_profile(u.exterior.profile));
      break;
    case Exterior::Kind::Custom:
      switch (u.exterior.custom_far.kind) {
        case FarField::Kind::Decaying: break;
        case FarField::Kind::Constant:
          far = FarField::constant_value(u.exterior.custom_far.constant * scale);
          break;
        case FarField::Kind::Profile:
          far = FarField::profile_growth(rescale_profile(u.exterior.custom_far.profile));
          break;
      }
      break;
  }

  Grid g = u.grid.dim == 1 ? Grid::make_1d(-1.0, 1.0, u.grid.nx)
                           : Grid::make_2d({{-1.0, -1.0}, {1.0, 1.0}}, u.grid.nx);
  Field out(g, g.box(), u.s, Exterior::custom(fn, far));
  out.sample(fn);
  return out;
}

namespace {

double flatness_epsilon(const Field& u_r, Vec2 nu, double amplitude) {
  const Grid& g = u_r.grid;
  double s = u_r.s;
  double e_up = 0.0, e_lo = 0.0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 p = g.node(i, j);
      if (norm(p) > 1.0) continue;
      double t = dot(p, nu);
      double v = u_r.at(i, j);
      double height = v > 0.0 ? std::pow(v / amplitude, 1.0 / s) : 0.0;
      if (v > 0.0) e_up = std::max(e_up, height - t);  // upper profile must reach v
      e_lo = std::max(e_lo, t - height);               // lower profile must stay below v
    }
  return std::min(1.0, std::max(e_up, e_lo));
}

}  // namespace

FlatnessMeasure measure_flatness(const Field& u_r, Vec2 nu, double amplitude) {
  const Grid& g = u_r.grid;
  double s = u_r.s;
  FlatnessMeasure m;
  m.epsilon = flatness_epsilon(u_r, nu, amplitude);

  double eps = m.epsilon;
  auto lower_deficit = [&](Vec2 y) {
    double t = dot(y, nu) - eps;
    double prof = t > 0.0 ? amplitude * std::pow(t, s) : 0.0;
    return std::max(0.0, prof - u_r.eval(y));  // (u - lower)_-
  };
  auto upper_excess = [&](Vec2 y) {
    double t = dot(y, nu) + eps;
    double prof = t > 0.0 ? amplitude * std::pow(t, s) : 0.0;
    return std::max(0.0, u_r.eval(y) - prof);  // (upper - u)_-
  };
  try {
    m.t_eps = tail(lower_deficit, g.dim, s, 1.0, {0.0, 0.0}) +
              tail(upper_excess, g.dim, s, 1.0, {0.0, 0.0});
  } catch (const std::runtime_error&) {
    // deviations from every eps-flat configuration grow too fast to sum:
    // report an infinite tail instead of failing the whole diagnostic
    m.t_eps = std::numeric_limits<double>::infinity();
  }
  return m;
}

Vec2 best_direction(const Field& u_r, Vec2 nu0, double amplitude) {
  if (u_r.grid.dim == 1) {
    Vec2 plus{1.0, 0.0}, minus{-1.0, 0.0};
    double ep = flatness_epsilon(u_r, plus, amplitude);
    double em = flatness_epsilon(u_r, minus, amplitude);
    if (std::min(ep, em) >= flatness_epsilon(u_r, nu0, amplitude)) return nu0;
    return ep <= em ? plus : minus;
  }
  auto eps_at = [&](double phi) {
    return flatness_epsilon(u_r, unit_from_angle(phi), amplitude);
  };
  double phi0 = angle_of(nu0);
  double a = phi0 - 0.5, b = phi0 + 0.5;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double fc = eps_at(c), fd = eps_at(d);
  for (int it = 0; it < 48; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - gr * (b - a);
      fc = eps_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + gr * (b - a);
      fd = eps_at(d);
    }
  }
  double phi = 0.5 * (a + b);
  if (eps_at(phi) >= flatness_epsilon(u_r, nu0, amplitude)) return nu0;
  return unit_from_angle(phi);
}

std::vector<double> domain_variation(const Field& u, Vec2 nu, double eps, Vec2 x,
                                     double amplitude) {
  double t = dot(x, nu);
  double target = t > 0.0 ? amplitude * std::pow(t, u.s) : 0.0;
  auto g = [&](double w) { return u.eval(x - (eps * w) * nu) - target; };
  std::vector<double> roots;
  const int n = 256;
  double prev = g(-1.0);
  for (int k = 1; k <= n; ++k) {
    double w1 = -1.0 + 2.0 * k / n;
    double cur = g(w1);
    if (prev == 0.0) roots.push_back(-1.0 + 2.0 * (k - 1.0) / n);
    if (prev * cur < 0.0) {
      double lo = -1.0 + 2.0 * (k - 1.0) / n, hi = w1;
      double flo = prev;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = g(mid);
        if (flo * fm <= 0.0)
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev = cur;
  }
  if (prev == 0.0) roots.push_back(1.0);
  return roots;
}

double density_ratio(const Field& u, Vec2 x0, double R) {
  double h = u.grid.h;
  int m = std::max(8, static_cast<int>(std::ceil(2.0 * R / h)));
  long total = 0, positive = 0;
  for (int j = 0; j <= (u.grid.dim == 2 ? m : 0); ++j)
    for (int i = 0; i <= m; ++i) {
      Vec2 p{x0.x - R + 2.0 * R * i / m, u.grid.dim == 2 ? x0.y - R + 2.0 * R * j / m : 0.0};
      if (norm(p - x0) > R) continue;
      ++total;
      if (u.eval(p) > 0.0) ++positive;
    }
  return total > 0 ? static_cast<double>(positive) / total : 0.0;
}

GrowthFit growth_exponents(const Field& u, Vec2 x0, const std::vector<double>& radii) {
  if (radii.size() < 2) throw std::invalid_argument("growth_exponents: need >= 2 radii");
  GrowthFit fit;
  std::vector<double> lx, ly;
  for (double r : radii) {
    double sup = ball_sup(u, x0, r);
    if (sup <= 0.0) {
      fit.degenerate = true;
      return fit;
    }
    lx.push_back(std::log(r));
    ly.push_back(std::log(sup));
  }
  double n = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  fit.slope = sxy / sxx;
  double ss = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    double e = ly[k] - my - fit.slope * (lx[k] - mx);
    ss += e * e;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

TranslationMasses translation_monotonicity_product(const Field& u, Vec2 nu, double t,
                                                   Vec2 center, double radius) {
  if (t == 0.0) throw std::invalid_argument("translation masses: t must be nonzero");
  const Grid& g = u.grid;
  double cell = g.cell_measure();
  TranslationMasses m;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 p = g.node(i, j);
      if (norm(p - center) > radius) continue;
      double d = (u.at(i, j) - u.eval(p + t * nu)) / std::abs(t);
      if (d > 0.0)
        m.plus_mass += d * cell;
      else
        m.minus_mass -= d * cell;
    }
  return m;
}

nlohmann::json FlatnessReport::to_json() const {
  nlohmann::json nus_j = nlohmann::json::array();
  for (Vec2 n : nus) nus_j.push_back({n.x, n.y});
  return nlohmann::json{{"scales", scales},
                        {"epsilons", epsilons},
                        {"tails", tails},
                        {"nus", nus_j},
                        {"trace_values", trace_values},
                        {"decay_slope", decay_slope},
                        {"noise_floor", noise_floor}};
}

FlatnessReport flatness_sweep(const Field& u, Vec2 x0, double amplitude, Vec2 nu0,
                              const std::vector<double>& scales) {
  FlatnessReport rep;
  rep.noise_floor = std::pow(u.grid.h, u.s);
  Vec2 nu = nu0;
  for (double r : scales) {
    Field ur = blowup(u, x0, r);
    nu = best_direction(ur, nu, amplitude);
    FlatnessMeasure fm = measure_flatness(ur, nu, amplitude);
    rep.scales.push_back(r);
    rep.epsilons.push_back(fm.epsilon);
    rep.tails.push_back(fm.t_eps);
    rep.nus.push_back(nu);
    FreeBoundaryGeometry geo = extract_boundary(ur);
    double trace = 0.0;
    if (!geo.empty) {
      try {
        // sample no finer than a few source cells mapped into blow-up
        // coordinates: below that the bilinear cusp smear dominates
        trace = trace_u_over_ds(ur, geo, {0.0, 0.0}, 4.0 * u.grid.h / r);
      } catch (const std::runtime_error&) {
        trace = 0.0;
      }
    }
    rep.trace_values.push_back(trace);
  }
  double acc = 0.0;
  int cnt = 0;
  for (std::size_t k = 1; k < rep.epsilons.size(); ++k)
    if (rep.epsilons[k - 1] > 0.0 && rep.epsilons[k] > 0.0) {
      acc += std::log2(rep.epsilons[k] / rep.epsilons[k - 1]);
      ++cnt;
    }
  rep.decay_slope = cnt > 0 ? acc / cnt : 0.0;
  return rep;
}

}  // namespace nlop
