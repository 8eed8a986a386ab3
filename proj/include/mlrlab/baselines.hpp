#pragma once

#include <cstdint>
#include <vector>

#include "mlrlab/types.hpp"

namespace mlrlab {

struct BaselineConfig {
  int K = 1;
  int max_iters = 1000;
  /// Stopping tolerance delta; GD stops at 0.01 * tol_delta.
  double tol_delta = 2.0 * kMachineEpsilon;
  /// Fixed GD step size.
  double step_size = 0.1;
  double trim_fraction = 0.0;
  std::uint64_t seed = 0;
  bool ridge = false;

  void validate() const;
};

/// GD step sizes available to tuning.
const std::vector<double>& gd_step_grid();

/// One alternating-minimization iteration: assign every sample to its
/// smallest-residual component (lowest index on ties) and refit each
/// component by OLS on its samples. With trim_fraction f > 0 only the
/// ceil((1-f) n) samples with the smallest residual take part.
MLRModel altmin_step(const Dataset& data, const MLRModel& model, double trim_fraction = 0.0,
                     bool ridge = false);

/// Alternating minimization from `init` until the relative-change rule or
/// max_iters.
FitReport altmin(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init);

struct EmTrace {
  /// Observed-data log-likelihood evaluated at the start of every iteration.
  std::vector<double> log_likelihood;
  /// Largest |sum_k r_ik - 1| seen over all iterations.
  double max_responsibility_defect = 0.0;
};

/// Gaussian-mixture-of-regressions EM from `init` with sigma_k = 1 and
/// uniform weights, followed by one AltMin step.
FitReport em(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init,
             EmTrace* trace = nullptr);

/// Mean over samples of min_k (x_i^T beta_k - y_i)^2.
double min_residual_loss(const Dataset& data, const MLRModel& model);

/// Subgradient descent with a fixed step on min_residual_loss, followed by one
/// AltMin step. Throws Diverged when the loss exceeds 1e6 times its initial
/// value.
FitReport gd(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init);

/// One GD update with the current assignments held fixed.
MLRModel gd_step(const Dataset& data, const MLRModel& model, double step_size);

/// Per-true-component OLS given the true labels.
MLRModel oracle(const Dataset& data);

/// OLS of y on X over all samples.
Vector single_ols(const Dataset& data);

}  // namespace mlrlab
