#pragma once

#include <memory>
#include <vector>

#include "nlop/field.hpp"
#include "nlop/kernel.hpp"

namespace nlop {

/// Pair-set selector of the double integral.
struct PairSet {
  enum class Kind {
    OmegaComplement,  // (Omega^c x Omega^c)^c : at least one point in omega
    Ball,             // D x D with D a ball
    BoxSet            // D x D with D a box
  };
  Kind kind = Kind::OmegaComplement;
  Vec2 center{};
  double radius = 0.0;
  Box box{};

  static PairSet omega_complement() { return {}; }
  static PairSet ball(Vec2 c, double r) { return {Kind::Ball, c, r, {}}; }
  static PairSet box_set(Box b) { return {Kind::BoxSet, {}, 0.0, b}; }
};

struct EnergyBreakdown {
  double interaction = 0.0;  // grid x grid double-integral part
  double far_field = 0.0;    // grid x exterior part, relative to the exterior baseline
  double volume = 0.0;       // |{u>0} n Omega| or its smoothed surrogate
  double total = 0.0;
};

/// Tabulated effective kernel on lattice displacements. Near-diagonal
/// entries (within 2 cells) are cell-pair integrals of the homogeneous
/// kernel against a linear difference model, scaled by the angular density
/// at the pair direction; beyond that, point evaluation.
class EnergyModel {
 public:
  EnergyModel(const KernelSpec& spec, const Grid& grid);

  /// Effective kernel value at displacement (di, dj) cells; 0 at the origin.
  double pair_weight(int di, int dj) const {
    return table_[(dj + grid_.ny - 1) * tnx_ + (di + grid_.nx - 1)];
  }
  const std::vector<double>& table() const { return table_; }
  const Grid& grid() const { return grid_; }
  double order() const { return s_; }

 private:
  Grid grid_;
  double s_;
  int tnx_;
  std::vector<double> table_;
};

/// Precomputed coupling of every free node against the analytic exterior:
///   P_i = int_ext K(x_i - y) dy,  Q_i = int_ext g(y) K(x_i - y) dy,
/// plus the baseline ref_i = g extended to x_i. The exterior part of the
/// energy is measured relative to the baseline so that it stays finite for
/// data with s-growth at infinity.
class ExteriorCoupling {
 public:
  ExteriorCoupling(const KernelSpec& spec, const Field& prototype);

  const std::vector<double>& P() const { return p_; }
  const std::vector<double>& Q() const { return q_; }
  const std::vector<double>& ref() const { return ref_; }

 private:
  std::vector<double> p_, q_, ref_;
};

/// Caches the kernel table and exterior coupling for one (spec, grid,
/// omega, exterior) combination.
class EnergyContext {
 public:
  EnergyContext(const KernelSpec& spec, const Field& prototype);

  const KernelSpec& spec() const { return spec_; }
  const EnergyModel& model() const { return model_; }
  const ExteriorCoupling& coupling() const { return coupling_; }
  const Grid& grid() const { return grid_; }
  const Box& omega() const { return omega_; }

  void require_compatible(const Field& u) const;

 private:
  KernelSpec spec_;
  Grid grid_;
  Box omega_;
  EnergyModel model_;
  ExteriorCoupling coupling_;
};

/// Bilinear interaction form E_D(u,v); for the OmegaComplement selector the
/// grid x exterior coupling is included (u and v must share the exterior).
double interaction_energy(const EnergyContext& ctx, const Field& u, const Field& v,
                          const PairSet& sel);
double interaction_energy(const KernelSpec& spec, const Field& u, const Field& v,
                          const PairSet& sel);

/// delta = 0: cell-counting measure of {u>0} n omega; delta > 0: smoothed
/// indicator min(1, t/delta).
double volume_term(const Field& u, double delta);

EnergyBreakdown total_energy(const EnergyContext& ctx, const Field& u, double delta = 0.0);
EnergyBreakdown total_energy(const KernelSpec& spec, const Field& u, double delta = 0.0);

/// Residual of the min/max competitor identity, relative to the magnitude
/// of the participating terms. All five terms use identical quadrature.
double minmax_identity_check(const KernelSpec& spec, const Field& u, const Field& v);

/// Gagliardo seminorm squared on a ball, pure |x-y|^{-n-2s} weight.
double hs_seminorm(const Field& u, Vec2 center, double radius);

/// Fast application of the tabulated kernel as a lattice convolution
/// (FFT-based); used by the minimizer for gradients and energies.
class GridConvolver {
 public:
  explicit GridConvolver(const EnergyModel& model);
  ~GridConvolver();
  GridConvolver(const GridConvolver&) = delete;
  GridConvolver& operator=(const GridConvolver&) = delete;

  /// out_i = sum_j table(i-j) in_j over the grid.
  void apply(const std::vector<double>& in, std::vector<double>& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace nlop
