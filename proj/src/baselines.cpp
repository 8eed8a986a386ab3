#include "mlrlab/baselines.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "internal.hpp"
#include "mlrlab/errors.hpp"
#include "mlrlab/least_squares.hpp"
#include "mlrlab/metrics.hpp"

namespace mlrlab {

namespace {

constexpr double kDivergenceFactor = 1e6;
constexpr double kVarianceFloor = 1e6 * kMachineEpsilon;

void check_inputs(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init) {
  cfg.validate();
  data.validate();
  init.validate();
  if (init.dim() != data.d()) throw InvalidArgument("initialization dimension differs from data");
  if (init.K() != cfg.K) throw InvalidArgument("initialization has the wrong number of components");
}

// Index of the smallest entry in each row, first one on ties.
std::vector<int> row_argmin(const Matrix& values) {
  std::vector<int> out(static_cast<std::size_t>(values.rows()));
  for (Index i = 0; i < values.rows(); ++i) {
    Index best = 0;
    values.row(i).minCoeff(&best);
    out[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return out;
}

FitReport finish(const Dataset& data, MLRModel model, int iterations,
                 detail::Clock::time_point start) {
  FitReport report;
  report.labels.resize(static_cast<std::size_t>(data.n()));
  const auto best = row_argmin(detail::squared_residuals(data.X, data.y, model));
  for (std::size_t i = 0; i < best.size(); ++i) report.labels[i] = best[i] + 1;
  report.K_found = model.K();
  report.model = std::move(model);
  report.iterations = iterations;
  report.elapsed_seconds = detail::seconds_since(start);
  return report;
}

}  // namespace

void BaselineConfig::validate() const {
  if (K < 1) throw InvalidArgument("BaselineConfig: K must be >= 1");
  if (max_iters < 1) throw InvalidArgument("BaselineConfig: max_iters must be >= 1");
  if (!(tol_delta > 0.0)) throw InvalidArgument("BaselineConfig: tol_delta must be positive");
  if (!(step_size > 0.0)) throw InvalidArgument("BaselineConfig: step size must be positive");
  if (!(trim_fraction >= 0.0 && trim_fraction < 1.0)) {
    throw InvalidArgument("BaselineConfig: trim fraction must lie in [0, 1)");
  }
}

const std::vector<double>& gd_step_grid() {
  static const std::vector<double> grid{1e-5, 5e-5, 1e-4, 5e-4, 1e-3,
                                        5e-3, 1e-2, 5e-2, 1e-1, 5e-1};
  return grid;
}

MLRModel altmin_step(const Dataset& data, const MLRModel& model, double trim_fraction,
                     bool ridge) {
  const Matrix r2 = detail::squared_residuals(data.X, data.y, model);
  const auto assignment = row_argmin(r2);
  const Vector mask = detail::trim_mask(r2.rowwise().minCoeff(), trim_fraction);

  std::vector<std::vector<Index>> members(static_cast<std::size_t>(model.K()));
  for (Index i = 0; i < data.n(); ++i) {
    if (mask(i) > 0.0) members[static_cast<std::size_t>(assignment[static_cast<std::size_t>(i)])].push_back(i);
  }
  MLRModel next;
  for (int k = 0; k < model.K(); ++k) {
    const std::string context = "altmin component " + std::to_string(k + 1);
    if (members[static_cast<std::size_t>(k)].empty()) {
      throw DegenerateSystem("no samples assigned", context);
    }
    next.betas.push_back(
        ols_rows(data.X, data.y, members[static_cast<std::size_t>(k)], LsqOptions{ridge, context}));
  }
  return next;
}

FitReport altmin(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init) {
  check_inputs(data, cfg, init);
  const auto start = detail::Clock::now();
  MLRModel model = init;
  int iterations = 0;
  while (iterations < cfg.max_iters) {
    MLRModel next = altmin_step(data, model, cfg.trim_fraction, cfg.ridge);
    ++iterations;
    const bool done = converged(model, next, cfg.tol_delta);
    model = std::move(next);
    if (done) break;
  }
  return finish(data, std::move(model), iterations, start);
}

FitReport em(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init,
             EmTrace* trace) {
  check_inputs(data, cfg, init);
  const auto start = detail::Clock::now();
  const Index n = data.n();
  const int K = cfg.K;
  const double log_two_pi = std::log(2.0 * std::numbers::pi);

  MLRModel model = init;
  Vector variance = Vector::Ones(K);
  Vector mix = Vector::Constant(K, 1.0 / K);
  int iterations = 0;
  while (iterations < cfg.max_iters) {
    const Matrix residual = (data.X * model.as_matrix()).colwise() - data.y;

    // E-step in log space.
    Matrix log_resp(n, K);
    for (int k = 0; k < K; ++k) {
      const double offset = std::log(mix(k)) - 0.5 * (log_two_pi + std::log(variance(k)));
      log_resp.col(k) = offset - residual.col(k).array().square() / (2.0 * variance(k));
    }
    const Vector row_max = log_resp.rowwise().maxCoeff();
    const Vector log_norm =
        row_max.array() + (log_resp.colwise() - row_max).array().exp().rowwise().sum().log();
    Matrix resp = (log_resp.colwise() - log_norm).array().exp().matrix();
    if (trace) {
      trace->log_likelihood.push_back(log_norm.sum());
      const double defect = (resp.rowwise().sum().array() - 1.0).abs().maxCoeff();
      trace->max_responsibility_defect = std::max(trace->max_responsibility_defect, defect);
    }

    const Vector mask =
        detail::trim_mask(residual.array().square().rowwise().minCoeff(), cfg.trim_fraction);
    resp = resp.array().colwise() * mask.array();
    const double kept = mask.sum();

    // M-step.
    MLRModel next;
    for (int k = 0; k < K; ++k) {
      const double mass = resp.col(k).sum();
      mix(k) = mass / kept;
      if (mix(k) < 1.0 / static_cast<double>(n)) {
        throw DegenerateComponent("em: component " + std::to_string(k + 1) +
                                      " collapsed (weight " + std::to_string(mix(k)) + ")",
                                  k + 1);
      }
      const std::string context = "em component " + std::to_string(k + 1);
      Vector beta = wls(data.X, resp.col(k), data.y, LsqOptions{cfg.ridge, context});
      const Vector e = data.X * beta - data.y;
      variance(k) = std::max(resp.col(k).dot(e.cwiseAbs2()) / mass, kVarianceFloor);
      next.betas.push_back(std::move(beta));
    }
    ++iterations;
    const bool done = converged(model, next, cfg.tol_delta);
    model = std::move(next);
    if (done) break;
  }
  model = altmin_step(data, model, cfg.trim_fraction, cfg.ridge);
  return finish(data, std::move(model), iterations + 1, start);
}

double min_residual_loss(const Dataset& data, const MLRModel& model) {
  return detail::squared_residuals(data.X, data.y, model).rowwise().minCoeff().mean();
}

namespace {

// Gradient of the trimmed min-residual loss with assignments frozen at B.
Matrix gd_gradient(const Dataset& data, const Matrix& residual, const Vector& mask) {
  const Index n = residual.rows();
  const auto assignment = row_argmin(residual.cwiseAbs2());
  Matrix E = Matrix::Zero(n, residual.cols());
  for (Index i = 0; i < n; ++i) {
    const int k = assignment[static_cast<std::size_t>(i)];
    E(i, k) = mask(i) * residual(i, k);
  }
  return (2.0 / mask.sum()) * (data.X.transpose() * E);
}

}  // namespace

MLRModel gd_step(const Dataset& data, const MLRModel& model, double step_size) {
  const Matrix B = model.as_matrix();
  const Matrix residual = (data.X * B).colwise() - data.y;
  return MLRModel::from_matrix(B - step_size * gd_gradient(data, residual, Vector::Ones(data.n())));
}

FitReport gd(const Dataset& data, const BaselineConfig& cfg, const MLRModel& init) {
  check_inputs(data, cfg, init);
  const auto start = detail::Clock::now();
  const double tol = 0.01 * cfg.tol_delta;
  const double tol2 = tol * tol;

  Matrix B = init.as_matrix();
  double initial_loss = -1.0;
  int iterations = 0;
  while (iterations < cfg.max_iters) {
    const Matrix residual = (data.X * B).colwise() - data.y;
    const Vector best = residual.cwiseAbs2().rowwise().minCoeff();
    const double loss = best.mean();
    if (initial_loss < 0.0) initial_loss = loss;
    if (!std::isfinite(loss) || loss > kDivergenceFactor * initial_loss) {
      throw Diverged("gd: loss grew from " + std::to_string(initial_loss) + " to " +
                     std::to_string(loss) + "; use a smaller step size");
    }
    const Vector mask = detail::trim_mask(best, cfg.trim_fraction);
    const Matrix next = B - cfg.step_size * gd_gradient(data, residual, mask);
    ++iterations;
    const double denom = next.squaredNorm();
    if (!(denom > 0.0)) throw Indeterminate("gd: estimate collapsed to zero");
    const bool done = (next - B).squaredNorm() / denom < tol2;
    B = next;
    if (done) break;
  }
  MLRModel model = altmin_step(data, MLRModel::from_matrix(B), cfg.trim_fraction, cfg.ridge);
  return finish(data, std::move(model), iterations + 1, start);
}

MLRModel oracle(const Dataset& data) {
  data.validate();
  if (!data.true_labels) throw InvalidArgument("oracle: dataset has no true labels");
  const auto& labels = *data.true_labels;
  const int K = data.truth ? data.truth->K() : *std::max_element(labels.begin(), labels.end());
  std::vector<std::vector<Index>> members(static_cast<std::size_t>(K));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    members[static_cast<std::size_t>(labels[i] - 1)].push_back(static_cast<Index>(i));
  }
  MLRModel model;
  for (int k = 0; k < K; ++k) {
    const auto& rows = members[static_cast<std::size_t>(k)];
    if (static_cast<Index>(rows.size()) < data.d()) {
      throw InsufficientData("oracle: component " + std::to_string(k + 1) + " has " +
                             std::to_string(rows.size()) + " samples, need at least d = " +
                             std::to_string(data.d()));
    }
    model.betas.push_back(
        ols_rows(data.X, data.y, rows, LsqOptions{false, "oracle component " + std::to_string(k + 1)}));
  }
  return model;
}

Vector single_ols(const Dataset& data) {
  data.validate();
  return ols(data.X, data.y, LsqOptions{false, "single-component OLS"});
}

}  // namespace mlrlab
