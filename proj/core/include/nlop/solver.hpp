#pragma once

#include <string>
#include <vector>

#include "nlop/energy.hpp"
#include "nlop/field.hpp"
#include "nlop/kernel.hpp"

namespace nlop {

struct SolveConfig {
  int max_iters = 4000;          // per continuation stage
  double tol = 1e-9;             // relative energy stagnation threshold
  int stagnation_window = 25;    // iterations the threshold must hold
  double delta0_cells = 2.0;     // initial smoothing: delta0 = delta0_cells * h^s
  int continuation_stages = 5;   // delta is halved between stages
  int restarts = 0;              // perturbed restarts beyond the seeded run
  double perturbation = 0.05;    // relative amplitude of restart perturbations
  std::uint64_t seed = 1;
  double armijo_c1 = 1e-4;
  double snap_threshold = 1e-14; // values below are snapped to exact zero
};

struct StageTrace {
  std::string phase;     // "continuation" or "polish"
  double delta = 0.0;    // smoothing width of the stage
  int iterations = 0;
  double objective = 0.0;  // smoothed objective at the end of the stage
};

struct SolveReport {
  int iterations = 0;            // total over all stages of the winning run
  std::vector<StageTrace> trace; // per-stage energies of the winning run
  int restarts_used = 0;
  int winning_run = 0;
  double final_delta = 0.0;
  double objective = 0.0;        // smoothed objective of the winning run
  EnergyBreakdown energy;        // sharp (delta = 0) energy of the result
  double step_size = 0.0;        // last accepted step
  bool converged = false;
};

/// Projected gradient descent with Armijo backtracking on the discrete
/// functional, with continuation in the smoothed volume term. Mutates the
/// free nodes of `u`. `converged` is false if some stage exhausted its
/// iteration budget before stagnating.
SolveReport minimize(const EnergyContext& ctx, Field& u, const SolveConfig& cfg = {});
SolveReport minimize(const KernelSpec& spec, Field& u, const SolveConfig& cfg = {});

struct CompetitorResult {
  std::string name;
  double energy;
  double gap;  // energy(competitor) - energy(candidate)
};

struct CertificationReport {
  double candidate_energy = 0.0;
  double tolerance = 0.0;   // gaps below -tolerance fail
  double worst_gap = 0.0;
  std::string worst_name;
  bool passed = false;
  std::vector<CompetitorResult> competitors;
};

/// Compares the candidate against a standard family of admissible
/// competitors (profile envelopes, translations, dilations, scalings,
/// truncations). All competitors keep the fixed exterior nodes, so energy
/// differences are exact despite the far-field renormalization.
CertificationReport certify_minimality(const EnergyContext& ctx, const Field& u,
                                       double relative_tolerance = 1e-3);

}  // namespace nlop
