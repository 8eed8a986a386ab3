#include "mlrlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mlrlab/errors.hpp"

namespace mlrlab {

namespace {

constexpr int kBruteForceLimit = 8;

// cost(k, j) = ||truth_k - est_j||.
Matrix distance_matrix(const MLRModel& est, const MLRModel& truth) {
  Matrix cost(truth.K(), est.K());
  for (int k = 0; k < truth.K(); ++k) {
    for (int j = 0; j < est.K(); ++j) cost(k, j) = (est.betas[j] - truth.betas[k]).norm();
  }
  return cost;
}

double matched_mean(const Matrix& cost, const std::vector<int>& match) {
  double total = 0.0;
  for (std::size_t k = 0; k < match.size(); ++k) total += cost(static_cast<Index>(k), match[k]);
  return total / static_cast<double>(match.size());
}

void check_shapes(const MLRModel& est, const MLRModel& truth) {
  est.validate();
  truth.validate();
  if (est.dim() != truth.dim()) throw InvalidArgument("metric: model dimensions differ");
}

// Enumerates injective maps [rows] -> [cols] as prefixes of permutations of
// [cols], keeping the cheapest. Lexicographic order makes ties resolve to the
// first (identity-like) map.
std::vector<int> brute_force_assignment(const Matrix& cost) {
  const auto rows = static_cast<std::size_t>(cost.rows());
  std::vector<int> perm(static_cast<std::size_t>(cost.cols()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(rows));
  double best_value = std::numeric_limits<double>::infinity();
  do {
    std::vector<int> head(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(rows));
    const double v = matched_mean(cost, head);
    if (v < best_value) {
      best_value = v;
      best = std::move(head);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<int> solve_assignment(const Matrix& cost) {
  // Shortest augmenting path Hungarian method with potentials, O(n^2 m).
  const Index n = cost.rows();
  const Index m = cost.cols();
  if (n > m) throw InvalidArgument("solve_assignment: more rows than columns");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<Index> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (Index i = 1; i <= n; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> match(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= m; ++j) {
    if (p[j] != 0) match[static_cast<std::size_t>(p[j] - 1)] = static_cast<int>(j - 1);
  }
  return match;
}

LatentError f_latent(const MLRModel& est, const MLRModel& truth) {
  check_shapes(est, truth);
  if (est.K() != truth.K()) throw InvalidArgument("f_latent: models differ in K");
  if (est.K() > kBruteForceLimit) return f_latent_assignment(est, truth);
  const Matrix cost = distance_matrix(est, truth);
  LatentError out;
  out.permutation = brute_force_assignment(cost);
  out.value = matched_mean(cost, out.permutation);
  return out;
}

LatentError f_latent_assignment(const MLRModel& est, const MLRModel& truth) {
  check_shapes(est, truth);
  if (est.K() != truth.K()) throw InvalidArgument("f_latent: models differ in K");
  const Matrix cost = distance_matrix(est, truth);
  LatentError out;
  out.permutation = solve_assignment(cost);
  out.value = matched_mean(cost, out.permutation);
  return out;
}

double f_latent_overparam(const MLRModel& est, const MLRModel& truth) {
  check_shapes(est, truth);
  if (est.K() < truth.K()) {
    throw InvalidArgument("f_latent_overparam: estimate has fewer components than truth");
  }
  const Matrix cost = distance_matrix(est, truth);
  const auto match =
      est.K() <= kBruteForceLimit ? brute_force_assignment(cost) : solve_assignment(cost);
  return matched_mean(cost, match);
}

double f_real(const MLRModel& model, const Dataset& data) {
  model.validate();
  if (model.dim() != data.d()) throw InvalidArgument("f_real: model dimension differs from data");
  const Index n = data.n();
  if (n == 0) throw InvalidArgument("f_real: empty dataset");
  const double mean = data.y.mean();
  const double var = (data.y.array() - mean).square().sum() / static_cast<double>(n);
  if (!(var > 0.0)) throw ZeroVariance("f_real: response has zero variance");

  const Matrix residuals = (data.X * model.as_matrix()).colwise() - data.y;
  const double total = residuals.array().square().rowwise().minCoeff().sum();
  return total / static_cast<double>(n) / var;
}

double failure_threshold(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidArgument("failure_threshold: sigma must be nonnegative");
  return sigma > 0.0 ? 2.0 * sigma : 1e-6;
}

bool converged(const Vector& prev, const Vector& curr, double delta) {
  if (prev.size() != curr.size()) throw InvalidArgument("converged: shape mismatch");
  const double denom = curr.squaredNorm();
  if (!(denom > 0.0)) throw Indeterminate("converged: current estimate is identically zero");
  return (curr - prev).squaredNorm() / denom < delta * delta;
}

bool converged(const MLRModel& prev, const MLRModel& curr, double delta) {
  if (prev.K() != curr.K()) throw InvalidArgument("converged: shape mismatch");
  double num = 0.0;
  double denom = 0.0;
  for (int k = 0; k < curr.K(); ++k) {
    if (prev.betas[k].size() != curr.betas[k].size()) {
      throw InvalidArgument("converged: shape mismatch");
    }
    num += (curr.betas[k] - prev.betas[k]).squaredNorm();
    denom += curr.betas[k].squaredNorm();
  }
  if (!(denom > 0.0)) throw Indeterminate("converged: current estimate is identically zero");
  return num / denom < delta * delta;
}

double stopping_tolerance(double sigma) {
  return std::min(1.0, std::max(0.01 * sigma, 2.0 * kMachineEpsilon));
}

double gd_stopping_tolerance(double sigma) { return 0.01 * stopping_tolerance(sigma); }

MetricReport evaluate(const MLRModel& est, const Dataset& data, double sigma) {
  if (!data.truth) throw InvalidArgument("evaluate: dataset carries no ground truth");
  MetricReport report;
  if (est.K() == data.truth->K()) {
    auto latent = f_latent(est, *data.truth);
    report.f_latent = latent.value;
    report.best_permutation = std::move(latent.permutation);
  } else {
    report.f_latent = f_latent_overparam(est, *data.truth);
  }
  const double mean = data.y.mean();
  if ((data.y.array() - mean).square().sum() > 0.0) report.f_real = f_real(est, data);
  report.threshold = failure_threshold(sigma);
  report.failed = report.f_latent > report.threshold;
  return report;
}

}  // namespace mlrlab
