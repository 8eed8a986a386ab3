#pragma once

#include <vector>

#include "mlrlab/types.hpp"

namespace mlrlab {

struct LatentError {
  double value = 0.0;
  /// permutation[k] is the (0-based) index of the estimated component matched
  /// to true component k.
  std::vector<int> permutation;
};

/// F_latent = min over permutations s of (1/K) sum_k ||beta_{s(k)} - beta*_k||.
/// Exhaustive over all K! permutations for K <= 8, Hungarian assignment
/// otherwise (both give the exact optimum).
LatentError f_latent(const MLRModel& est, const MLRModel& truth);

/// Same optimum, always through the assignment solver.
LatentError f_latent_assignment(const MLRModel& est, const MLRModel& truth);

/// Error of the best K* estimated vectors when est has K >= K* components:
/// min over injective maps [K*] -> [K].
double f_latent_overparam(const MLRModel& est, const MLRModel& truth);

/// Observed-data error: mean over samples of the smallest squared residual,
/// divided by the population variance of y.
double f_real(const MLRModel& model, const Dataset& data);

/// 2 sigma, or 1e-6 in the noiseless case.
double failure_threshold(double sigma);

/// Relative-change stopping rule:
/// sum_k ||curr_k - prev_k||^2 / sum_k ||curr_k||^2 < delta^2.
/// Throws Indeterminate when curr is identically zero.
bool converged(const MLRModel& prev, const MLRModel& curr, double delta);
bool converged(const Vector& prev, const Vector& curr, double delta);

/// min(1, max(0.01 sigma, 2 eps)): tolerance for Mix-IRLS, AltMin and EM.
double stopping_tolerance(double sigma);
/// One hundredth of stopping_tolerance, used by GD.
double gd_stopping_tolerance(double sigma);

struct MetricReport {
  double f_latent = 0.0;
  std::vector<int> best_permutation;
  double f_real = 0.0;
  bool failed = false;
  double threshold = 0.0;
};

/// Scores an estimate against a synthetic dataset's ground truth. When the
/// estimate has more components than the truth, f_latent is the
/// over-parameterized error and best_permutation is left empty.
MetricReport evaluate(const MLRModel& est, const Dataset& data, double sigma);

/// Minimum-cost assignment of rows to distinct columns (rows <= cols).
/// Returns the column chosen for each row.
std::vector<int> solve_assignment(const Matrix& cost);

}  // namespace mlrlab
