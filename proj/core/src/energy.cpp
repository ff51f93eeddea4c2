#include "nlop/energy.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "nlop/numerics.hpp"

namespace nlop {

namespace {

// ---------------------------------------------------------------------------
// Near-diagonal cell-pair integrals.
//
// For lattice displacements within two cells the point evaluation of the
// kernel is replaced by the unit-cell pair integral
//   I(d) = int w(z) ((z.e_d)/|d|)^2 |z|^{-n-2s} dz,   w(z) = prod tri(z_k-d_k),
// i.e. the pair integral of the homogeneous kernel against a linear
// difference model. (The piecewise-constant pair integral diverges for
// touching cells when s >= 1/2; the linear model is finite for all s and
// matches the point value as |d| grows.)
// ---------------------------------------------------------------------------

double tri(double t) { return std::max(0.0, 1.0 - std::abs(t)); }

double near_integral_1d(int d, double s) {
  double dd = std::abs(d);
  auto f = [dd, s](double z) {
    double w = tri(z - dd);
    double ratio = z / dd;
    return w * ratio * ratio * std::pow(std::abs(z), -1.0 - 2.0 * s);
  };
  return integrate_adaptive(f, dd - 1.0, dd + 1.0, 1e-13, 30);
}

double gauss2d_panel(const std::function<double(double, double)>& f, double x0, double x1,
                     double y0, double y1) {
  return gauss15([&](double y) { return gauss15([&](double x) { return f(x, y); }, x0, x1); },
                 y0, y1);
}

double adapt2d(const std::function<double(double, double)>& f, double x0, double x1, double y0,
               double y1, double whole, double tol, int depth) {
  double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  double q[4] = {gauss2d_panel(f, x0, xm, y0, ym), gauss2d_panel(f, xm, x1, y0, ym),
                 gauss2d_panel(f, x0, xm, ym, y1), gauss2d_panel(f, xm, x1, ym, y1)};
  double refined = q[0] + q[1] + q[2] + q[3];
  if (depth <= 0 || std::abs(refined - whole) <= tol) return refined;
  return adapt2d(f, x0, xm, y0, ym, q[0], 0.25 * tol, depth - 1) +
         adapt2d(f, xm, x1, y0, ym, q[1], 0.25 * tol, depth - 1) +
         adapt2d(f, x0, xm, ym, y1, q[2], 0.25 * tol, depth - 1) +
         adapt2d(f, xm, x1, ym, y1, q[3], 0.25 * tol, depth - 1);
}

double near_integral_2d(int di, int dj, double s) {
  double ax = std::abs(di), ay = std::abs(dj);
  double dn = std::hypot(ax, ay);
  double ex = ax / dn, ey = ay / dn;
  auto f = [=](double zx, double zy) {
    double r2 = zx * zx + zy * zy;
    if (r2 <= 0.0) return 0.0;
    double proj = (zx * ex + zy * ey) / dn;  // (z . e_d) / |d|
    return tri(zx - ax) * tri(zy - ay) * proj * proj * std::pow(r2, -0.5 * (2.0 + 2.0 * s));
  };
  double x0 = ax - 1.0, x1 = ax + 1.0, y0 = ay - 1.0, y1 = ay + 1.0;
  return adapt2d(f, x0, x1, y0, y1, gauss2d_panel(f, x0, x1, y0, y1), 1e-11, 14);
}

// ---------------------------------------------------------------------------
// 7-point Gauss-Legendre for smooth radial segments.
// ---------------------------------------------------------------------------
constexpr double kX7[7] = {-0.949107912342759, -0.741531185599394, -0.405845151377397, 0.0,
                           0.405845151377397, 0.741531185599394, 0.949107912342759};
constexpr double kW7[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469, 0.381830050505119, 0.279705391489277,
                           0.129484966168870};

// int_{r0}^{inf} g(x + r dir) r^{-1-2s} dr for the exterior data g, closed
// beyond the numeric range with the analytic growth of `far`.
double radial_exterior_integral(const Exterior& ext, Vec2 x, Vec2 dir, double r0, double s) {
  double rf = 1048576.0 * std::max(1.0, r0);  // 2^20
  double acc = 0.0;
  double a = r0;
  while (a < rf) {
    double b = std::min(8.0 * a, rf);
    double c = 0.5 * (a + b), hl = 0.5 * (b - a);
    for (int k = 0; k < 7; ++k) {
      double r = c + hl * kX7[k];
      acc += kW7[k] * hl * ext(x + r * dir) * std::pow(r, -1.0 - 2.0 * s);
    }
    a = b;
  }
  FarField far = ext.far();
  switch (far.kind) {
    case FarField::Kind::Decaying:
      break;
    case FarField::Kind::Constant:
      acc += far.constant * std::pow(rf, -2.0 * s) / (2.0 * s);
      break;
    case FarField::Kind::Profile: {
      const auto& p = far.profile;
      double beta = dot(dir, p.nu);
      double c0 = dot(x, p.nu) + p.shift;
      if (beta > 1e-12) {
        acc += p.amplitude * std::pow(beta, s) *
               (std::pow(rf, -s) / s + s * (c0 / beta) * std::pow(rf, -s - 1.0) / (s + 1.0));
      } else if (beta > -1e-12 && c0 > 0.0) {
        acc += p.amplitude * std::pow(c0, s) * std::pow(rf, -2.0 * s) / (2.0 * s);
      }
      break;
    }
  }
  return acc;
}

double ray_box_exit(const Box& b, Vec2 x, Vec2 dir, int dim) {
  double t = INFINITY;
  if (dir.x > 0)
    t = std::min(t, (b.hi.x - x.x) / dir.x);
  else if (dir.x < 0)
    t = std::min(t, (b.lo.x - x.x) / dir.x);
  if (dim == 2) {
    if (dir.y > 0)
      t = std::min(t, (b.hi.y - x.y) / dir.y);
    else if (dir.y < 0)
      t = std::min(t, (b.lo.y - x.y) / dir.y);
  }
  return t;
}

std::vector<std::uint8_t> membership(const Field& u, const PairSet& sel) {
  const Grid& g = u.grid;
  std::vector<std::uint8_t> m(g.count(), 0);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      Vec2 p = g.node(i, j);
      bool in = false;
      switch (sel.kind) {
        case PairSet::Kind::OmegaComplement: in = u.omega.contains(p, g.dim); break;
        case PairSet::Kind::Ball: in = norm(p - sel.center) <= sel.radius; break;
        case PairSet::Kind::BoxSet: in = sel.box.contains(p, g.dim); break;
      }
      m[g.index(i, j)] = in ? 1 : 0;
    }
  return m;
}

// Grid x grid part of the bilinear form. `any_end` selects "at least one
// node in the set" (the (Omega^c x Omega^c)^c rule); otherwise both must be
// inside. Deterministic summation order, compensated accumulation.
double pair_sum_bilinear(const EnergyModel& model, const std::vector<double>& u,
                         const std::vector<double>& v, const std::vector<std::uint8_t>& memb,
                         bool any_end) {
  const Grid& g = model.grid();
  int nx = g.nx, ny = g.ny;
  double cell2 = g.cell_measure() * g.cell_measure();
  const std::vector<double>& table = model.table();
  int tnx = 2 * nx - 1;
  KahanSum acc;
  for (int ay = 0; ay < ny; ++ay) {
    for (int by = ay; by < ny; ++by) {
      const double* wrow = table.data() + (by - ay + ny - 1) * tnx + (nx - 1);
      int arow = ay * nx, brow = by * nx;
      for (int ax = 0; ax < nx; ++ax) {
        int a = arow + ax;
        double ua = u[a], va = v[a];
        bool ma = memb[a] != 0;
        int bx0 = (by == ay) ? ax + 1 : 0;
        for (int bx = bx0; bx < nx; ++bx) {
          int b = brow + bx;
          bool inc = any_end ? (ma || memb[b]) : (ma && memb[b]);
          if (!inc) continue;
          double w = wrow[bx - ax];
          acc.add(2.0 * (ua - u[b]) * (va - v[b]) * w * cell2);
        }
      }
    }
  }
  return acc.value();
}

// -E(p, m) for nonnegative p, m with disjoint supports: since p*m = 0
// pointwise, the bilinear form reduces to the pure cross products, counted
// here with the same ordered-pair convention as pair_sum_bilinear.
double pair_sum_cross(const EnergyModel& model, const std::vector<double>& pos,
                      const std::vector<double>& neg, const std::vector<std::uint8_t>& memb) {
  const Grid& g = model.grid();
  int nx = g.nx, ny = g.ny;
  double cell2 = g.cell_measure() * g.cell_measure();
  const std::vector<double>& table = model.table();
  int tnx = 2 * nx - 1;
  KahanSum acc;
  for (int ay = 0; ay < ny; ++ay) {
    for (int by = ay; by < ny; ++by) {
      const double* wrow = table.data() + (by - ay + ny - 1) * tnx + (nx - 1);
      int arow = ay * nx, brow = by * nx;
      for (int ax = 0; ax < nx; ++ax) {
        int a = arow + ax;
        bool ma = memb[a] != 0;
        int bx0 = (by == ay) ? ax + 1 : 0;
        for (int bx = bx0; bx < nx; ++bx) {
          int b = brow + bx;
          if (!(ma || memb[b])) continue;
          double w = wrow[bx - ax];
          acc.add(4.0 * (pos[a] * neg[b] + pos[b] * neg[a]) * w * cell2);
        }
      }
    }
  }
  return acc.value();
}

double exterior_part(const EnergyContext& ctx, const std::vector<double>& u,
                     const std::vector<double>& v) {
  const auto& cpl = ctx.coupling();
  const Grid& g = ctx.grid();
  double cell = g.cell_measure();
  KahanSum acc;
  for (int idx = 0; idx < g.count(); ++idx) {
    double p = cpl.P()[idx];
    if (p == 0.0 && cpl.Q()[idx] == 0.0) continue;
    double r = cpl.ref()[idx];
    acc.add(2.0 * cell *
            ((u[idx] * v[idx] - r * r) * p - (u[idx] + v[idx] - 2.0 * r) * cpl.Q()[idx]));
  }
  return acc.value();
}

}  // namespace

// ---------------------------------------------------------------------------
// EnergyModel
// ---------------------------------------------------------------------------

EnergyModel::EnergyModel(const KernelSpec& spec, const Grid& grid)
    : grid_(grid), s_(spec.s), tnx_(2 * grid.nx - 1) {
  if (spec.dim != grid.dim) throw std::invalid_argument("kernel/grid dimension mismatch");
  int nx = grid.nx, ny = grid.ny;
  double scale = std::pow(grid.h, -(grid.dim + 2.0 * s_));

  // cached across models: the integrals depend only on (dim, s, displacement)
  static std::map<std::tuple<int, double, int, int>, double> cache;
  std::map<std::pair<int, int>, double> near;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= (grid.dim == 2 ? 2 : 0); ++b) {
      if (a == 0 && b == 0) continue;
      if (grid.dim == 2 && b > a) continue;
      auto key = std::make_tuple(grid.dim, s_, a, b);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, grid.dim == 1 ? near_integral_1d(a, s_)
                                              : near_integral_2d(a, b, s_))
                 .first;
      near[{a, b}] = it->second;
    }

  table_.assign(static_cast<std::size_t>(tnx_) * (2 * ny - 1), 0.0);
  for (int dj = -(ny - 1); dj <= ny - 1; ++dj) {
    for (int di = -(nx - 1); di <= nx - 1; ++di) {
      if (di == 0 && dj == 0) continue;
      double rho;
      int ai = std::abs(di), aj = std::abs(dj);
      if (ai <= 2 && aj <= 2) {
        auto key = (grid.dim == 2 && aj > ai) ? std::make_pair(aj, ai) : std::make_pair(ai, aj);
        rho = near.at(key);
      } else {
        rho = std::pow(std::hypot(double(di), double(dj)),
                       -(grid.dim + 2.0 * s_));
      }
      Vec2 theta = (grid.dim == 1) ? Vec2{di > 0 ? 1.0 : -1.0, 0.0}
                                   : normalized({double(di), double(dj)});
      table_[(dj + ny - 1) * tnx_ + (di + nx - 1)] = spec.density(theta) * scale * rho;
    }
  }
}

// ---------------------------------------------------------------------------
// ExteriorCoupling
// ---------------------------------------------------------------------------

ExteriorCoupling::ExteriorCoupling(const KernelSpec& spec, const Field& u) {
  const Grid& g = u.grid;
  double s = spec.s;
  p_.assign(g.count(), 0.0);
  q_.assign(g.count(), 0.0);
  ref_.assign(g.count(), 0.0);
  Box box = g.box();
  bool zero_ext = (u.exterior.kind == Exterior::Kind::Zero);

  if (g.dim == 1) {
    double a_right = spec.density({1.0, 0.0});
    double a_left = spec.density({-1.0, 0.0});
    for (int i = 0; i < g.nx; ++i) {
      if (!u.free_node(i, 0)) continue;
      Vec2 x = g.node(i, 0);
      int idx = g.index(i, 0);
      double r_right = box.hi.x - x.x;
      double r_left = x.x - box.lo.x;
      p_[idx] = a_right * std::pow(r_right, -2.0 * s) / (2.0 * s) +
                a_left * std::pow(r_left, -2.0 * s) / (2.0 * s);
      if (!zero_ext) {
        q_[idx] = a_right * radial_exterior_integral(u.exterior, x, {1.0, 0.0}, r_right, s) +
                  a_left * radial_exterior_integral(u.exterior, x, {-1.0, 0.0}, r_left, s);
        ref_[idx] = std::max(0.0, u.exterior(x));
      }
    }
    return;
  }

  const int n_ang = 128;
  double dphi = 2.0 * M_PI / n_ang;
  std::vector<Vec2> dirs(n_ang);
  std::vector<double> dens(n_ang);
  for (int k = 0; k < n_ang; ++k) {
    dirs[k] = unit_from_angle(dphi * (k + 0.5));
    dens[k] = spec.density(dirs[k]);
  }
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!u.free_node(i, j)) continue;
      Vec2 x = g.node(i, j);
      int idx = g.index(i, j);
      double psum = 0.0, qsum = 0.0;
      for (int k = 0; k < n_ang; ++k) {
        double r0 = ray_box_exit(box, x, dirs[k], 2);
        psum += dens[k] * dphi * std::pow(r0, -2.0 * s) / (2.0 * s);
        if (!zero_ext)
          qsum += dens[k] * dphi * radial_exterior_integral(u.exterior, x, dirs[k], r0, s);
      }
      p_[idx] = psum;
      q_[idx] = qsum;
      if (!zero_ext) ref_[idx] = std::max(0.0, u.exterior(x));
    }
}

// ---------------------------------------------------------------------------
// EnergyContext + energies
// ---------------------------------------------------------------------------

EnergyContext::EnergyContext(const KernelSpec& spec, const Field& u)
    : spec_(spec), grid_(u.grid), omega_(u.omega), model_(spec, u.grid), coupling_(spec, u) {
  if (std::abs(spec.s - u.s) > 1e-12)
    throw std::invalid_argument("kernel order does not match the field order");
}

void EnergyContext::require_compatible(const Field& u) const {
  if (!(u.grid == grid_)) throw std::invalid_argument("field grid mismatch");
}

double interaction_energy(const EnergyContext& ctx, const Field& u, const Field& v,
                          const PairSet& sel) {
  ctx.require_compatible(u);
  ctx.require_compatible(v);
  auto memb = membership(u, sel);
  bool any_end = sel.kind == PairSet::Kind::OmegaComplement;
  double e = pair_sum_bilinear(ctx.model(), u.values, v.values, memb, any_end);
  if (any_end) e += exterior_part(ctx, u.values, v.values);
  return e;
}

double interaction_energy(const KernelSpec& spec, const Field& u, const Field& v,
                          const PairSet& sel) {
  EnergyContext ctx(spec, u);
  return interaction_energy(ctx, u, v, sel);
}

double volume_term(const Field& u, double delta) {
  if (delta < 0.0) throw std::invalid_argument("volume_term: delta must be >= 0");
  const Grid& g = u.grid;
  double cell = g.cell_measure();
  KahanSum acc;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      if (!u.free_node(i, j)) continue;
      double t = u.at(i, j);
      if (t <= 0.0) continue;
      acc.add(cell * (delta == 0.0 ? 1.0 : std::min(1.0, t / delta)));
    }
  return acc.value();
}

EnergyBreakdown total_energy(const EnergyContext& ctx, const Field& u, double delta) {
  ctx.require_compatible(u);
  EnergyBreakdown b;
  auto memb = membership(u, PairSet::omega_complement());
  b.interaction = pair_sum_bilinear(ctx.model(), u.values, u.values, memb, true);
  b.far_field = exterior_part(ctx, u.values, u.values);
  b.volume = volume_term(u, delta);
  b.total = b.interaction + b.far_field + b.volume;
  return b;
}

EnergyBreakdown total_energy(const KernelSpec& spec, const Field& u, double delta) {
  EnergyContext ctx(spec, u);
  return total_energy(ctx, u, delta);
}

double minmax_identity_check(const KernelSpec& spec, const Field& u, const Field& v) {
  if (!(u.grid == v.grid)) throw std::invalid_argument("minmax: field grid mismatch");
  EnergyContext ctx(spec, u);
  Field lo = u, hi = u;
  std::vector<double> pos(u.values.size()), neg(u.values.size());
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    lo.values[k] = std::min(u.values[k], v.values[k]);
    hi.values[k] = std::max(u.values[k], v.values[k]);
    double d = u.values[k] - v.values[k];
    pos[k] = std::max(d, 0.0);
    neg[k] = std::max(-d, 0.0);
  }
  double iu = total_energy(ctx, u).total;
  double iv = total_energy(ctx, v).total;
  double ilo = total_energy(ctx, lo).total;
  double ihi = total_energy(ctx, hi).total;
  auto memb = membership(u, PairSet::omega_complement());
  double cross = pair_sum_cross(ctx.model(), pos, neg, memb);
  double resid = std::abs(ilo + ihi + cross - iu - iv);
  double scale = std::abs(iu) + std::abs(iv) + std::abs(cross);
  return scale > 0.0 ? resid / scale : resid;
}

double hs_seminorm(const Field& u, Vec2 center, double radius) {
  const Grid& g = u.grid;
  Box b = g.box();
  if (center.x - radius < b.lo.x || center.x + radius > b.hi.x ||
      (g.dim == 2 && (center.y - radius < b.lo.y || center.y + radius > b.hi.y)))
    throw std::domain_error("hs_seminorm: ball exceeds grid coverage");
  KernelSpec unit(g.dim, u.s, AngularDensity::isotropic(1.0));
  EnergyModel model(unit, g);
  PairSet sel = PairSet::ball(center, radius);
  auto memb = membership(u, sel);
  return pair_sum_bilinear(model, u.values, u.values, memb, false);
}

// ---------------------------------------------------------------------------
// GridConvolver
// ---------------------------------------------------------------------------

namespace {
int next_fast_size(int n) {
  auto smooth = [](int m) {
    for (int p : {2, 3, 5, 7})
      while (m % p == 0) m /= p;
    return m == 1;
  };
  while (!smooth(n)) ++n;
  return n;
}
}  // namespace

struct GridConvolver::Impl {
  int nx, ny, px, py, pcx;
  double* buf = nullptr;
  fftw_complex* spec = nullptr;
  fftw_complex* khat = nullptr;
  fftw_plan fwd = nullptr, inv = nullptr;

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    if (buf) fftw_free(buf);
    if (spec) fftw_free(spec);
    if (khat) fftw_free(khat);
  }
};

GridConvolver::GridConvolver(const EnergyModel& model) : impl_(new Impl) {
  const Grid& g = model.grid();
  Impl& im = *impl_;
  im.nx = g.nx;
  im.ny = g.ny;
  im.px = next_fast_size(2 * g.nx - 1);
  im.py = (g.ny > 1) ? next_fast_size(2 * g.ny - 1) : 1;
  im.pcx = im.px / 2 + 1;
  std::size_t real_n = static_cast<std::size_t>(im.py) * im.px;
  std::size_t cplx_n = static_cast<std::size_t>(im.py) * im.pcx;
  im.buf = fftw_alloc_real(real_n);
  im.spec = fftw_alloc_complex(cplx_n);
  im.khat = fftw_alloc_complex(cplx_n);
  im.fwd = fftw_plan_dft_r2c_2d(im.py, im.px, im.buf, im.spec, FFTW_ESTIMATE);
  im.inv = fftw_plan_dft_c2r_2d(im.py, im.px, im.spec, im.buf, FFTW_ESTIMATE);

  // wrap the displacement table into circular-convolution layout
  std::fill(im.buf, im.buf + real_n, 0.0);
  int tnx = 2 * g.nx - 1;
  for (int dj = -(g.ny - 1); dj <= g.ny - 1; ++dj)
    for (int di = -(g.nx - 1); di <= g.nx - 1; ++di) {
      double w = model.table()[(dj + g.ny - 1) * tnx + (di + g.nx - 1)];
      int wi = (di % im.px + im.px) % im.px;
      int wj = (im.py == 1) ? 0 : (dj % im.py + im.py) % im.py;
      im.buf[static_cast<std::size_t>(wj) * im.px + wi] = w;
    }
  fftw_execute(im.fwd);
  std::copy(&im.spec[0][0], &im.spec[0][0] + 2 * cplx_n, &im.khat[0][0]);
}

GridConvolver::~GridConvolver() = default;

void GridConvolver::apply(const std::vector<double>& in, std::vector<double>& out) {
  Impl& im = *impl_;
  std::size_t real_n = static_cast<std::size_t>(im.py) * im.px;
  std::fill(im.buf, im.buf + real_n, 0.0);
  for (int j = 0; j < im.ny; ++j)
    for (int i = 0; i < im.nx; ++i)
      im.buf[static_cast<std::size_t>(j) * im.px + i] = in[static_cast<std::size_t>(j) * im.nx + i];
  fftw_execute(im.fwd);
  std::size_t cplx_n = static_cast<std::size_t>(im.py) * im.pcx;
  double norm = 1.0 / (static_cast<double>(im.px) * im.py);
  for (std::size_t k = 0; k < cplx_n; ++k) {
    double re = im.spec[k][0] * im.khat[k][0] - im.spec[k][1] * im.khat[k][1];
    double iim = im.spec[k][0] * im.khat[k][1] + im.spec[k][1] * im.khat[k][0];
    im.spec[k][0] = re * norm;
    im.spec[k][1] = iim * norm;
  }
  fftw_execute(im.inv);
  out.resize(static_cast<std::size_t>(im.nx) * im.ny);
  for (int j = 0; j < im.ny; ++j)
    for (int i = 0; i < im.nx; ++i)
      out[static_cast<std::size_t>(j) * im.nx + i] = im.buf[static_cast<std::size_t>(j) * im.px + i];
}

}  // namespace nlop
