#include "mlrlab/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mlrlab/errors.hpp"
#include "mlrlab/metrics.hpp"

namespace mlrlab {

Matrix MLRModel::as_matrix() const {
  Matrix out(dim(), K());
  for (int k = 0; k < K(); ++k) out.col(k) = betas[k];
  return out;
}

MLRModel MLRModel::from_matrix(const Matrix& columns) {
  MLRModel m;
  m.betas.reserve(columns.cols());
  for (Index k = 0; k < columns.cols(); ++k) m.betas.emplace_back(columns.col(k));
  return m;
}

void MLRModel::validate() const {
  if (betas.empty()) throw InvalidArgument("MLRModel needs at least one component");
  const Index d = betas.front().size();
  if (d == 0) throw InvalidArgument("MLRModel components must have dimension >= 1");
  for (const auto& b : betas) {
    if (b.size() != d) throw InvalidArgument("MLRModel components differ in dimension");
  }
}

void Dataset::validate() const {
  if (X.rows() != y.size()) {
    throw InvalidArgument("Dataset: X has " + std::to_string(X.rows()) + " rows but y has " +
                          std::to_string(y.size()) + " entries");
  }
  if (true_labels) {
    if (static_cast<Index>(true_labels->size()) != n()) {
      throw InvalidArgument("Dataset: label vector length differs from n");
    }
    const int K = truth ? truth->K() : *std::max_element(true_labels->begin(), true_labels->end());
    for (int c : *true_labels) {
      if (c < 1 || c > K) throw InvalidArgument("Dataset: label out of range [1, K]");
    }
  }
  if (truth) {
    truth->validate();
    if (truth->dim() != d()) throw InvalidArgument("Dataset: truth dimension differs from d");
  }
  if (noise_sigma && *noise_sigma < 0.0) throw InvalidArgument("Dataset: negative noise sigma");
}

void MixtureSpec::validate() const {
  if (K < 1) throw InvalidArgument("MixtureSpec: K must be >= 1");
  if (d < 1) throw InvalidArgument("MixtureSpec: d must be >= 1");
  if (static_cast<int>(proportions.size()) != K) {
    throw InvalidArgument("MixtureSpec: expected " + std::to_string(K) + " proportions");
  }
  for (double p : proportions) {
    if (!(p > 0.0)) throw InvalidArgument("MixtureSpec: proportions must be positive");
  }
  const double total = std::accumulate(proportions.begin(), proportions.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("MixtureSpec: proportions sum to " + std::to_string(total) + ", not 1");
  }
  if (!(sigma >= 0.0)) throw InvalidArgument("MixtureSpec: sigma must be nonnegative");
}

double MixtureSpec::information_limit() const {
  validate();
  return d / *std::min_element(proportions.begin(), proportions.end());
}

double SolverConfig::eta() const { return std::sqrt(0.6745 / nu); }

void SolverConfig::validate() const {
  if (K < 1) throw InvalidArgument("SolverConfig: K must be >= 1");
  if (!(nu > 0.0)) throw InvalidArgument("SolverConfig: nu must be positive");
  if (!(w_th >= 0.0 && w_th < 1.0)) throw InvalidArgument("SolverConfig: w_th must lie in [0, 1)");
  if (!(rho >= 1.0)) throw InvalidArgument("SolverConfig: rho must be >= 1");
  if (T1 < 1 || T2 < 1 || max_iters < 1) {
    throw InvalidArgument("SolverConfig: iteration counts must be positive");
  }
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
    throw InvalidArgument("SolverConfig: trim fraction must lie in [0, 1)");
  }
  if (!(tol_delta > 0.0)) throw InvalidArgument("SolverConfig: tol_delta must be positive");
  if (max_restarts < 1) throw InvalidArgument("SolverConfig: max_restarts must be positive");
}

SolverConfig SolverConfig::synthetic_defaults(int K, double sigma) {
  SolverConfig cfg;
  cfg.K = K;
  cfg.nu = 0.5;
  cfg.w_th = 0.01;
  cfg.rho = 1.0;
  cfg.tol_delta = stopping_tolerance(sigma);
  return cfg;
}

SolverConfig SolverConfig::real_data_defaults(int K) {
  SolverConfig cfg;
  cfg.K = K;
  cfg.nu = 1.0;
  cfg.w_th = 0.01;
  cfg.rho = 2.0;
  cfg.tol_delta = stopping_tolerance(0.0);
  return cfg;
}

}  // namespace mlrlab
