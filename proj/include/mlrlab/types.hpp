#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace mlrlab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Component labels are 1-based: a label lies in [1, K].
using Labels = std::vector<int>;

inline constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();

/// K regression vectors sharing one dimension d.
struct MLRModel {
  std::vector<Vector> betas;

  MLRModel() = default;
  explicit MLRModel(std::vector<Vector> b) : betas(std::move(b)) {}

  int K() const { return static_cast<int>(betas.size()); }
  Index dim() const { return betas.empty() ? 0 : betas.front().size(); }

  /// d x K matrix whose k-th column is beta_k.
  Matrix as_matrix() const;
  static MLRModel from_matrix(const Matrix& columns);

  /// Throws InvalidArgument unless K >= 1 and all vectors share one dimension.
  void validate() const;
};

/// Responses y_i = x_i^T beta*_{c_i} + eps_i, with optional ground truth when
/// the data is synthetic.
struct Dataset {
  Matrix X;
  Vector y;
  std::optional<Labels> true_labels;
  std::optional<MLRModel> truth;
  std::optional<double> noise_sigma;
  /// Row indices whose responses were replaced by inject_outliers (sorted).
  std::vector<Index> corrupted;

  Index n() const { return X.rows(); }
  Index d() const { return X.cols(); }

  void validate() const;
};

struct MixtureSpec {
  int K = 1;
  std::vector<double> proportions{1.0};
  int d = 1;
  double sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  /// n_inf = d / min(p): the smallest sample size at which every component
  /// is identifiable without noise.
  double information_limit() const;
};

/// Tunables shared by the Mix-IRLS phases. `K` is K_max when unknown_K is on.
struct SolverConfig {
  int K = 1;
  double nu = 0.5;
  double w_th = 0.01;
  double rho = 1.0;
  int T1 = 1000;
  int T2 = 1000;
  int max_iters = 1000;
  double trim_fraction = 0.0;
  bool unknown_K = false;
  double tol_delta = 2.0 * kMachineEpsilon;
  int max_restarts = 9;
  /// Adds a ridge of 1e3 * eps * trace(Gram) / d to every least-squares solve.
  bool ridge = false;

  /// eta = sqrt(0.6745 / nu); 0.6745 is the 0.75-quantile of N(0, 1).
  double eta() const;
  void validate() const;

  /// Defaults for synthetic experiments: nu = 0.5, w_th = 0.01, rho = 1.
  static SolverConfig synthetic_defaults(int K, double sigma);
  /// Defaults for real data: nu = 1, w_th = 0.01, rho = 2.
  static SolverConfig real_data_defaults(int K);
};

struct FitReport {
  MLRModel model;
  Labels labels;
  int K_found = 0;
  int restarts = 0;
  double final_w_th = 0.0;
  int iterations = 0;
  double elapsed_seconds = 0.0;
};

}  // namespace mlrlab
