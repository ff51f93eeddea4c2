#include "nlop/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nlop/numerics.hpp"

namespace nlop {

namespace {

// Smoothed objective evaluated through the lattice convolution. The pair
// sum runs over *all* grid pairs; relative to the (Omega^c x Omega^c)^c
// selector this adds a constant (both nodes fixed), so gradients and energy
// differences between admissible fields are unaffected.
struct FftObjective {
  const EnergyContext& ctx;
  GridConvolver conv;
  std::vector<double> S;          // row sums of the kernel table
  std::vector<std::uint8_t> free_mask;
  std::vector<double> wu;         // workspace
  double cell, cell2;
  double max_S = 0.0, max_P = 0.0;

  explicit FftObjective(const EnergyContext& c, const Field& prototype)
      : ctx(c), conv(c.model()) {
    const Grid& g = ctx.grid();
    cell = g.cell_measure();
    cell2 = cell * cell;
    std::vector<double> ones(g.count(), 1.0);
    conv.apply(ones, S);
    free_mask.assign(g.count(), 0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        free_mask[g.index(i, j)] = prototype.free_node(i, j) ? 1 : 0;
    for (int k = 0; k < g.count(); ++k) {
      max_S = std::max(max_S, S[k]);
      max_P = std::max(max_P, ctx.coupling().P()[k]);
    }
  }

  double volume(const std::vector<double>& u, double delta) const {
    KahanSum acc;
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!free_mask[k] || u[k] <= 0.0) continue;
      acc.add(cell * (delta == 0.0 ? 1.0 : std::min(1.0, u[k] / delta)));
    }
    return acc.value();
  }

  double eval(const std::vector<double>& u, double delta) {
    conv.apply(u, wu);
    const auto& cpl = ctx.coupling();
    KahanSum pair_acc, far_acc;
    for (std::size_t k = 0; k < u.size(); ++k) {
      pair_acc.add(u[k] * (u[k] * S[k] - wu[k]));
      double p = cpl.P()[k];
      if (p != 0.0 || cpl.Q()[k] != 0.0) {
        double r = cpl.ref()[k];
        far_acc.add((u[k] * u[k] - r * r) * p - 2.0 * (u[k] - r) * cpl.Q()[k]);
      }
    }
    return 2.0 * cell2 * pair_acc.value() + 2.0 * cell * far_acc.value() + volume(u, delta);
  }

  // Gradient with respect to the free nodes; zero on fixed nodes.
  void grad(const std::vector<double>& u, double delta, std::vector<double>& g) {
    conv.apply(u, wu);
    const auto& cpl = ctx.coupling();
    g.resize(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (!free_mask[k]) {
        g[k] = 0.0;
        continue;
      }
      double v = 4.0 * cell2 * (u[k] * S[k] - wu[k]) +
                 4.0 * cell * (u[k] * cpl.P()[k] - cpl.Q()[k]);
      if (u[k] <= 0.0) {
        // one-sided derivative at the constraint: leaving zero pays the
        // volume slope, so a zero node rises only when that is still a
        // descent direction (never for the sharp delta = 0 count)
        double up = delta > 0.0 ? v + cell / delta : INFINITY;
        v = up < 0.0 ? up : std::max(v, 0.0);
      } else if (delta > 0.0 && u[k] < delta) {
        v += cell / delta;
      }
      g[k] = v;
    }
  }

  double lipschitz_bound(double delta) const {
    double lip = 8.0 * cell2 * max_S + 4.0 * cell * max_P;
    if (delta > 0.0) lip += cell / delta;
    return lip;
  }
};

struct StageResult {
  int iterations = 0;
  double objective = 0.0;
  double step = 0.0;
  bool converged = false;
};

StageResult run_stage(FftObjective& obj, std::vector<double>& u, double delta,
                      const SolveConfig& cfg) {
  StageResult res;
  double f = obj.eval(u, delta);
  double step = 1.0 / obj.lipschitz_bound(delta);
  std::vector<double> g, trial(u.size());
  int calm = 0;
  for (int it = 0; it < cfg.max_iters; ++it) {
    obj.grad(u, delta, g);
    bool accepted = false;
    double f_new = f;
    for (int back = 0; back < 60; ++back) {
      double pred = 0.0;
      for (std::size_t k = 0; k < u.size(); ++k) {
        double v = obj.free_mask[k] ? std::max(0.0, u[k] - step * g[k]) : u[k];
        trial[k] = v;
        pred += g[k] * (u[k] - v);
      }
      if (pred <= 0.0) {  // projected gradient vanished: stationary
        res.objective = f;
        res.step = step;
        res.iterations = it;
        res.converged = true;
        return res;
      }
      f_new = obj.eval(trial, delta);
      if (f_new <= f - cfg.armijo_c1 * pred) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {  // no descent at machine-scale steps
      res.objective = f;
      res.step = step;
      res.iterations = it;
      res.converged = true;
      return res;
    }
    u.swap(trial);
    double rel = (f - f_new) / std::max(std::abs(f_new), 1e-12);
    f = f_new;
    calm = (rel < cfg.tol) ? calm + 1 : 0;
    step *= 2.0;
    res.iterations = it + 1;
    if (calm >= cfg.stagnation_window) {
      res.converged = true;
      break;
    }
  }
  res.objective = f;
  res.step = step;
  return res;
}

// Coordinate polish of the boundary layer with the sharp (delta = 0)
// volume count. The pointwise subgradient cannot weigh "cell on vs. cell
// off" once a node sits above delta; here each boundary-layer node is
// tested exactly against 0 and against its one-node smooth optimum, with
// closed-form single-coordinate energy differences.
int boundary_polish(FftObjective& obj, std::vector<double>& u) {
  const Grid& g = obj.ctx.grid();
  const auto& cpl = obj.ctx.coupling();
  const EnergyModel& model = obj.ctx.model();
  double cell = obj.cell, cell2 = obj.cell2;
  std::vector<double> wu;
  obj.conv.apply(u, wu);
  int total = 0;
  for (int pass = 0; pass < 64; ++pass) {
    int changes = 0;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        int k = g.index(i, j);
        if (!obj.free_mask[k]) continue;
        bool pos = u[k] > 0.0;
        bool edge = false;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int n = 0; n < (g.dim == 2 ? 4 : 2); ++n) {
          int ii = i + di[n], jj = j + dj[n];
          if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) continue;
          if ((u[g.index(ii, jj)] > 0.0) != pos) edge = true;
        }
        if (!edge) continue;
        double grad_smooth = 4.0 * cell2 * (u[k] * obj.S[k] - wu[k]) +
                             4.0 * cell * (u[k] * cpl.P()[k] - cpl.Q()[k]);
        double curv = 2.0 * cell2 * obj.S[k] + 2.0 * cell * cpl.P()[k];
        double ustar =
            std::max(0.0, (cell * wu[k] + cpl.Q()[k]) / (cell * obj.S[k] + cpl.P()[k]));
        double best_d = u[k], best_de = 0.0;
        for (double cand : {0.0, ustar}) {
          double d = cand - u[k];
          if (d == 0.0) continue;
          double de = d * grad_smooth + d * d * curv +
                      cell * ((cand > 0.0 ? 1.0 : 0.0) - (pos ? 1.0 : 0.0));
          if (de < best_de - 1e-15) {
            best_de = de;
            best_d = cand;
          }
        }
        if (best_de < 0.0) {
          double d = best_d - u[k];
          u[k] = best_d;
          for (int jj = 0; jj < g.ny; ++jj)
            for (int ii = 0; ii < g.nx; ++ii)
              wu[g.index(ii, jj)] += d * model.pair_weight(ii - i, jj - j);
          ++changes;
        }
      }
    total += changes;
    if (changes == 0) break;
  }
  return total;
}

// Structured competitor moves a pointwise gradient cannot make: whole-field
// lattice shifts, dilations, and envelopes against the exterior profile.
// These escape boundary-shifted local valleys of the discrete objective.
std::vector<std::vector<double>> structured_moves(const Field& w,
                                                  const std::vector<std::uint8_t>& mask) {
  const Grid& g = w.grid;
  std::vector<std::function<double(Vec2, double)>> maps;
  std::vector<Vec2> shifts = {{g.h, 0.0}, {-g.h, 0.0}};
  if (g.dim == 2) {
    shifts.push_back({0.0, g.h});
    shifts.push_back({0.0, -g.h});
  }
  for (Vec2 t : shifts)
    maps.push_back([&w, t](Vec2 x, double) { return w.eval({x.x - t.x, x.y - t.y}); });
  for (double lam : {0.95, 1.05}) {
    double amp = std::pow(lam, w.s);
    maps.push_back(
        [&w, lam, amp](Vec2 x, double) { return amp * w.eval({x.x / lam, x.y / lam}); });
  }
  if (w.exterior.kind == Exterior::Kind::Profile) {
    HalfSpaceProfile p = w.exterior.profile;
    maps.push_back([p](Vec2 x, double v) { return std::min(v, p(x)); });
    maps.push_back([p](Vec2 x, double v) { return std::max(v, p(x)); });
  }
  std::vector<std::vector<double>> out;
  for (const auto& map : maps) {
    std::vector<double> vals = w.values;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        int k = g.index(i, j);
        if (mask[k]) vals[k] = std::max(0.0, map(g.node(i, j), w.values[k]));
      }
    out.push_back(std::move(vals));
  }
  return out;
}

}  // namespace

SolveReport minimize(const EnergyContext& ctx, Field& u, const SolveConfig& cfg) {
  ctx.require_compatible(u);
  u.validate();
  FftObjective obj(ctx, u);
  const Grid& g = ctx.grid();
  double delta0 = cfg.delta0_cells * std::pow(g.h, ctx.spec().s);

  std::vector<double> initial = u.values;
  CounterRng rng(cfg.seed, 0x736f6c76);

  SolveReport best;
  bool have_best = false;
  double delta_final = delta0 * std::pow(0.5, std::max(0, cfg.continuation_stages - 1));

  for (int run = 0; run <= cfg.restarts; ++run) {
    std::vector<double> x = initial;
    if (run > 0)
      for (std::size_t k = 0; k < x.size(); ++k)
        if (obj.free_mask[k])
          x[k] = std::max(0.0, x[k] * (1.0 + cfg.perturbation * (2.0 * rng.uniform() - 1.0)));

    SolveReport rep;
    rep.restarts_used = run;
    rep.winning_run = run;
    double delta = delta0;
    bool all_ok = true;
    for (int stage = 0; stage < cfg.continuation_stages; ++stage) {
      StageResult sr = run_stage(obj, x, delta, cfg);
      rep.iterations += sr.iterations;
      rep.objective = sr.objective;
      rep.step_size = sr.step;
      rep.trace.push_back({"continuation", delta, sr.iterations, sr.objective});
      all_ok = all_ok && sr.converged;
      if (stage + 1 < cfg.continuation_stages) delta *= 0.5;
    }
    rep.final_delta = delta;
    rep.converged = all_ok;
    boundary_polish(obj, x);
    Field work = u;
    for (int round = 0; round < 8; ++round) {
      work.values = x;
      double fx = obj.eval(x, 0.0);
      double best_f = fx;
      std::vector<double> best_x;
      for (auto& cand : structured_moves(work, obj.free_mask)) {
        double fc = obj.eval(cand, 0.0);
        if (fc < best_f - 1e-12 * (1.0 + std::abs(fx))) {
          best_f = fc;
          best_x = std::move(cand);
        }
      }
      if (best_x.empty()) break;
      x = std::move(best_x);
      StageResult sr = run_stage(obj, x, delta_final, cfg);
      rep.iterations += sr.iterations;
      boundary_polish(obj, x);
      rep.trace.push_back({"polish", delta_final, sr.iterations, obj.eval(x, delta_final)});
    }
    for (std::size_t k = 0; k < x.size(); ++k)
      if (obj.free_mask[k] && x[k] < cfg.snap_threshold) x[k] = 0.0;
    rep.objective = obj.eval(x, delta_final);

    if (!have_best || rep.objective < best.objective) {
      best = rep;
      u.values = x;
      have_best = true;
    }
  }

  best.energy = total_energy(ctx, u, 0.0);
  u.validate();
  return best;
}

SolveReport minimize(const KernelSpec& spec, Field& u, const SolveConfig& cfg) {
  EnergyContext ctx(spec, u);
  return minimize(ctx, u, cfg);
}

CertificationReport certify_minimality(const EnergyContext& ctx, const Field& u,
                                       double relative_tolerance) {
  ctx.require_compatible(u);
  FftObjective obj(ctx, u);
  const Grid& g = ctx.grid();

  CertificationReport rep;
  rep.candidate_energy = total_energy(ctx, u, 0.0).total;
  rep.tolerance = relative_tolerance * std::abs(rep.candidate_energy);
  double f_u = obj.eval(u.values, 0.0);

  double umax = 0.0;
  for (int k = 0; k < g.count(); ++k)
    if (obj.free_mask[k]) umax = std::max(umax, u.values[k]);

  // each entry rewrites the free nodes of a copy of u
  struct Variant {
    std::string name;
    std::function<double(Vec2, double)> map;  // (node position, current value)
  };
  std::vector<Variant> variants;
  variants.push_back({"scale_up_2pct", [](Vec2, double v) { return 1.02 * v; }});
  variants.push_back({"scale_down_2pct", [](Vec2, double v) { return 0.98 * v; }});
  if (umax > 0.0) {
    double c = 0.05 * umax;
    variants.push_back({"lower_truncation", [c](Vec2, double v) { return std::max(v - c, 0.0); }});
    double cap = 0.95 * umax;
    variants.push_back({"upper_truncation", [cap](Vec2, double v) { return std::min(v, cap); }});
  }
  std::vector<Vec2> shifts = {{g.h, 0.0}, {-g.h, 0.0}};
  if (g.dim == 2) {
    shifts.push_back({0.0, g.h});
    shifts.push_back({0.0, -g.h});
  }
  const char* shift_names[4] = {"shift_+x", "shift_-x", "shift_+y", "shift_-y"};
  for (std::size_t k = 0; k < shifts.size(); ++k) {
    Vec2 t = shifts[k];
    variants.push_back({shift_names[k], [&u, t](Vec2 x, double) { return u.eval(x - t); }});
  }
  for (double lam : {0.95, 1.05}) {
    std::string name = lam < 1.0 ? "dilate_0.95" : "dilate_1.05";
    double amp = std::pow(lam, u.s);
    variants.push_back({name, [&u, lam, amp](Vec2 x, double) {
                          return amp * u.eval({x.x / lam, x.y / lam});
                        }});
  }
  if (u.exterior.kind == Exterior::Kind::Profile) {
    HalfSpaceProfile p = u.exterior.profile;
    variants.push_back({"profile_min", [p](Vec2 x, double v) { return std::min(v, p(x)); }});
    variants.push_back({"profile_max", [p](Vec2 x, double v) { return std::max(v, p(x)); }});
  }

  rep.passed = true;
  std::vector<double> w(u.values.size());
  for (const auto& var : variants) {
    w = u.values;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        int idx = g.index(i, j);
        if (obj.free_mask[idx])
          w[idx] = std::max(0.0, var.map(g.node(i, j), u.values[idx]));
      }
    double gap = obj.eval(w, 0.0) - f_u;
    rep.competitors.push_back({var.name, rep.candidate_energy + gap, gap});
    if (rep.competitors.size() == 1 || gap < rep.worst_gap) {
      rep.worst_gap = gap;
      rep.worst_name = var.name;
    }
    if (gap < -rep.tolerance) rep.passed = false;
  }
  return rep;
}

}  // namespace nlop
