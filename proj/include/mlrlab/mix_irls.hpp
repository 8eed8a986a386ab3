#pragma once

#include <cstdint>
#include <vector>

#include "mlrlab/types.hpp"

namespace mlrlab {

/// State of one phase-I round after its IRLS iterations, kept for
/// diagnostics. `residuals`, `weights` and `active` are aligned; `weights`
/// were computed from `residuals` and `median_residual`.
struct PhaseIRound {
  int round = 0;  // 1-based
  std::vector<Index> active;
  Vector residuals;
  Vector weights;
  double median_residual = 0.0;
  std::vector<Index> good_fit;
  std::vector<Index> next_active;
  int iterations = 0;
};

struct PhaseIResult {
  MLRModel model;
  std::vector<std::vector<Index>> good_fit_sets;
  double final_w_th = 0.0;
  int restarts = 0;
  int iterations = 0;
  /// Rounds of the last (successful) pass only.
  std::vector<PhaseIRound> rounds;
};

struct PhaseIIResult {
  MLRModel model;
  int iterations = 0;
};

/// Binarized phase-II weights for an n x K matrix of squared residuals:
/// inverse-residual soft weights, samples with a weight >= 2/3 snapped to
/// their top component (lowest index on ties), the rest pruned below 1/K and
/// renormalized. Every row of the result sums to 1.
Matrix phase2_weights(const Matrix& squared_residuals);

/// Sequential robust recovery. Round k starts from init.betas[k-1], runs up to
/// cfg.T1 IRLS iterations on the active set, splits off the poor-fit samples
/// as the next active set and refits beta_k by OLS on the ceil(rho d) best-fit
/// samples. Restarts with w_th + 0.1 whenever a round with k < K leaves fewer
/// than ceil(rho d) samples for the next one.
PhaseIResult phase1(const Dataset& data, const SolverConfig& cfg, const MLRModel& init);
PhaseIResult phase1(const Dataset& data, const SolverConfig& cfg, std::uint64_t seed);

/// Unknown-K variant of phase1: no restarts; rounds continue up to cfg.K
/// (= K_max) while at least ceil(rho d) samples remain. The result's model
/// holds only the components found.
PhaseIResult phase1_unknown_k(const Dataset& data, const SolverConfig& cfg, const MLRModel& init);

/// Simultaneous refinement from `init`, up to cfg.T2 iterations. With
/// cfg.trim_fraction = f > 0, each solve only sees the ceil((1-f) n) samples
/// with the smallest residual under the current model.
PhaseIIResult phase2(const Dataset& data, const MLRModel& init, const SolverConfig& cfg);

/// One phase-II iteration without trimming or stopping logic.
MLRModel phase2_step(const Dataset& data, const MLRModel& model, const SolverConfig& cfg);

/// Full Mix-IRLS: phase I, phase II seeded from it, hard labels by smallest
/// residual. Dispatches to the unknown-K variant when cfg.unknown_K is set.
FitReport fit(const Dataset& data, const SolverConfig& cfg, std::uint64_t seed);
FitReport fit(const Dataset& data, const SolverConfig& cfg, const MLRModel& init);

FitReport fit_unknown_K(const Dataset& data, const SolverConfig& cfg, std::uint64_t seed);
FitReport fit_unknown_K(const Dataset& data, const SolverConfig& cfg, const MLRModel& init);

/// Two-component analysis variant with norm bound R: a single IRLS pass with
/// weights 1/(1 + eta r^2 / R), then OLS on the bounded-norm poor-fit samples
/// for beta_2 and on the bounded-norm samples poorly fit by beta_2 for beta_1.
/// No top-ceil(rho d) truncation and no automatic restarts.
MLRModel phase1_modified(const Dataset& data, const SolverConfig& cfg, double R,
                         std::uint64_t seed);
MLRModel phase1_modified(const Dataset& data, const SolverConfig& cfg, double R,
                         const Vector& init);

/// Hard assignment: argmin_k |x_i^T beta_k - y_i|, lowest index on ties.
Labels assign_labels(const Dataset& data, const MLRModel& model);

}  // namespace mlrlab
