#include "mlrlab/mix_irls.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

#include "mlrlab/errors.hpp"
#include "mlrlab/least_squares.hpp"
#include "mlrlab/metrics.hpp"
#include "mlrlab/synthetic.hpp"
#include "internal.hpp"

namespace mlrlab {

using detail::ceil_count;
using detail::Clock;
using detail::seconds_since;

namespace {

constexpr double kWthStep = 0.1;
constexpr double kWthCap = 0.95;
constexpr double kDominantWeight = 2.0 / 3.0;

double median(Vector v) {
  const auto n = v.size();
  auto* data = v.data();
  std::nth_element(data, data + n / 2, data + n);
  const double upper = data[n / 2];
  if (n % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(data, data + n / 2));
}

Matrix gather_rows(const Matrix& X, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), X.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = X.row(rows[r]);
  return out;
}

Vector gather(const Vector& y, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r)) = y(rows[r]);
  return out;
}

// Indices of the `count` largest entries of `values` (ties: lower position
// first), returned as positions in ascending order.
std::vector<Index> top_positions(const Vector& values, Index count) {
  std::vector<Index> order(static_cast<std::size_t>(values.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  order.resize(static_cast<std::size_t>(count));
  std::sort(order.begin(), order.end());
  return order;
}

LsqOptions lsq_options(const SolverConfig& cfg, std::string context) {
  return LsqOptions{cfg.ridge, std::move(context)};
}

void check_init(const Dataset& data, const MLRModel& init, int K) {
  init.validate();
  if (init.dim() != data.d()) throw InvalidArgument("initialization dimension differs from data");
  if (init.K() < K) throw InvalidArgument("initialization has fewer than K components");
}

// Runs the IRLS iterations of one phase-I round over `active` and fills in
// residuals, weights and the median of the last iteration.
PhaseIRound irls_round(const Dataset& data, const SolverConfig& cfg, const Vector& start,
                       std::vector<Index> active, int round, double median_floor,
                       Vector& beta) {
  PhaseIRound state;
  state.round = round;
  const Matrix Xs = gather_rows(data.X, active);
  const Vector ys = gather(data.y, active);
  state.active = std::move(active);

  const double eta = cfg.eta();
  const auto opts = lsq_options(cfg, "phase1 round " + std::to_string(round));
  beta = start;
  for (int t = 0; t < cfg.T1; ++t) {
    state.residuals = (Xs * beta - ys).cwiseAbs();
    state.median_residual = std::max(median(state.residuals), median_floor);
    const double scale = eta / (state.median_residual * state.median_residual);
    state.weights = (1.0 + scale * state.residuals.array().square()).inverse().matrix();
    Vector next;
    try {
      next = wls(Xs, state.weights, ys, opts);
    } catch (const DegenerateSystem&) {
      // The weights collapsed onto fewer than d samples; keep the last
      // well-posed iterate, whose residuals and weights are already in state.
      if (t == 0) throw;
      break;
    }
    ++state.iterations;
    const bool done = converged(beta, next, cfg.tol_delta);
    beta = std::move(next);
    if (done) break;
  }
  return state;
}

double median_floor_for(const Dataset& data) {
  return std::max(1e3 * kMachineEpsilon * rms(data.y), std::numeric_limits<double>::min());
}

// Poor-fit samples (weight <= w_th) and the ceil(rho d) best-fit samples of
// a finished round, as dataset row indices.
void partition_round(PhaseIRound& state, double w_th, Index good_count) {
  state.next_active.clear();
  for (std::size_t i = 0; i < state.active.size(); ++i) {
    if (state.weights(static_cast<Index>(i)) <= w_th) state.next_active.push_back(state.active[i]);
  }
  state.good_fit.clear();
  for (Index pos : top_positions(state.weights, good_count)) {
    state.good_fit.push_back(state.active[static_cast<std::size_t>(pos)]);
  }
}

}  // namespace

Labels assign_labels(const Dataset& data, const MLRModel& model) {
  const Matrix residuals = ((data.X * model.as_matrix()).colwise() - data.y).cwiseAbs();
  Labels labels(static_cast<std::size_t>(data.n()));
  for (Index i = 0; i < data.n(); ++i) {
    Index best = 0;
    residuals.row(i).minCoeff(&best);  // first minimum on ties
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
  }
  return labels;
}

PhaseIResult phase1(const Dataset& data, const SolverConfig& cfg, std::uint64_t seed) {
  return phase1(data, cfg, random_initialization(cfg.K, data.d(), seed));
}

PhaseIResult phase1(const Dataset& data, const SolverConfig& cfg, const MLRModel& init) {
  cfg.validate();
  data.validate();
  check_init(data, init, cfg.K);
  const Index d = data.d();
  const Index good_count = ceil_count(cfg.rho * static_cast<double>(d));
  const double floor = median_floor_for(data);

  std::vector<Index> all(static_cast<std::size_t>(data.n()));
  std::iota(all.begin(), all.end(), Index{0});

  int total_iterations = 0;
  for (int restarts = 0;; ++restarts) {
    const double w_th = cfg.w_th + kWthStep * restarts;
    PhaseIResult result;
    result.restarts = restarts;
    result.final_w_th = w_th;
    std::vector<Index> active = all;
    bool starved = false;

    for (int k = 1; k <= cfg.K; ++k) {
      if (static_cast<Index>(active.size()) < good_count) {
        throw InsufficientData("phase1 round " + std::to_string(k) + ": " +
                               std::to_string(active.size()) + " active samples, need " +
                               std::to_string(good_count));
      }
      Vector beta;
      auto state = irls_round(data, cfg, init.betas[k - 1], std::move(active), k, floor, beta);
      total_iterations += state.iterations;
      partition_round(state, w_th, good_count);

      if (k < cfg.K && static_cast<Index>(state.next_active.size()) < good_count) {
        starved = true;
        break;
      }
      const auto opts = lsq_options(cfg, "phase1 round " + std::to_string(k) + " refit");
      result.model.betas.push_back(ols_rows(data.X, data.y, state.good_fit, opts));
      result.good_fit_sets.push_back(state.good_fit);
      active = state.next_active;
      result.rounds.push_back(std::move(state));
    }

    if (!starved) {
      result.iterations = total_iterations;
      return result;
    }
    const double next_w_th = cfg.w_th + kWthStep * (restarts + 1);
    if (restarts + 1 > cfg.max_restarts || next_w_th > kWthCap) {
      throw ThresholdExhausted("phase1: threshold adaptation exhausted after " +
                                   std::to_string(restarts) + " restarts (w_th = " +
                                   std::to_string(w_th) + ")",
                               w_th, restarts);
    }
  }
}

PhaseIResult phase1_unknown_k(const Dataset& data, const SolverConfig& cfg,
                              const MLRModel& init) {
  cfg.validate();
  data.validate();
  check_init(data, init, cfg.K);
  const Index good_count = ceil_count(cfg.rho * static_cast<double>(data.d()));
  const double floor = median_floor_for(data);

  PhaseIResult result;
  result.final_w_th = cfg.w_th;
  std::vector<Index> active(static_cast<std::size_t>(data.n()));
  std::iota(active.begin(), active.end(), Index{0});
  if (static_cast<Index>(active.size()) < good_count) {
    throw InsufficientData("phase1: " + std::to_string(active.size()) +
                           " samples cannot support a first component (need " +
                           std::to_string(good_count) + ")");
  }

  for (int k = 1; k <= cfg.K; ++k) {
    Vector beta;
    auto state = irls_round(data, cfg, init.betas[k - 1], std::move(active), k, floor, beta);
    result.iterations += state.iterations;
    partition_round(state, cfg.w_th, good_count);
    const auto opts = lsq_options(cfg, "phase1 round " + std::to_string(k) + " refit");
    result.model.betas.push_back(ols_rows(data.X, data.y, state.good_fit, opts));
    result.good_fit_sets.push_back(state.good_fit);
    active = state.next_active;
    const bool exhausted = static_cast<Index>(active.size()) < good_count;
    result.rounds.push_back(std::move(state));
    if (exhausted) break;
  }
  return result;
}

Matrix phase2_weights(const Matrix& squared_residuals) {
  const Index n = squared_residuals.rows();
  const Index K = squared_residuals.cols();
  const double prune_below = 1.0 / static_cast<double>(K);
  Matrix w(n, K);
  for (Index i = 0; i < n; ++i) {
    Eigen::RowVectorXd row = (squared_residuals.row(i).array() + kMachineEpsilon).inverse();
    row /= row.sum();
    Index top = 0;
    const double top_weight = row.maxCoeff(&top);
    if (top_weight >= kDominantWeight) {
      row.setZero();
      row(top) = 1.0;
    } else {
      for (Index k = 0; k < K; ++k) {
        if (row(k) < prune_below) row(k) = 0.0;
      }
      row /= row.sum();
    }
    w.row(i) = row;
  }
  return w;
}

namespace {

Matrix squared_residuals(const Dataset& data, const MLRModel& model) {
  return detail::squared_residuals(data.X, data.y, model);
}

MLRModel weighted_refit(const Dataset& data, const Matrix& weights, const SolverConfig& cfg) {
  MLRModel next;
  for (Index k = 0; k < weights.cols(); ++k) {
    const std::string context = "phase2 component " + std::to_string(k + 1);
    if (!(weights.col(k).sum() > 0.0)) {
      throw DegenerateSystem("no samples carry weight for this component", context);
    }
    next.betas.push_back(wls(data.X, weights.col(k), data.y, lsq_options(cfg, context)));
  }
  return next;
}

}  // namespace

MLRModel phase2_step(const Dataset& data, const MLRModel& model, const SolverConfig& cfg) {
  return weighted_refit(data, phase2_weights(squared_residuals(data, model)), cfg);
}

PhaseIIResult phase2(const Dataset& data, const MLRModel& init, const SolverConfig& cfg) {
  init.validate();
  if (init.dim() != data.d()) throw InvalidArgument("phase2: initialization dimension mismatch");
  PhaseIIResult result{init, 0};
  for (int t = 0; t < cfg.T2; ++t) {
    const Matrix r2 = squared_residuals(data, result.model);
    Matrix weights = phase2_weights(r2);
    if (cfg.trim_fraction > 0.0) {
      const Vector mask = detail::trim_mask(r2.rowwise().minCoeff(), cfg.trim_fraction);
      weights = weights.array().colwise() * mask.array();
    }
    MLRModel next = weighted_refit(data, weights, cfg);
    ++result.iterations;
    const bool done = converged(result.model, next, cfg.tol_delta);
    result.model = std::move(next);
    if (done) break;
  }
  return result;
}

FitReport fit(const Dataset& data, const SolverConfig& cfg, std::uint64_t seed) {
  return fit(data, cfg, random_initialization(cfg.K, data.d(), seed));
}

FitReport fit(const Dataset& data, const SolverConfig& cfg, const MLRModel& init) {
  if (cfg.unknown_K) return fit_unknown_K(data, cfg, init);
  const auto start = Clock::now();
  const auto first = phase1(data, cfg, init);
  const auto second = phase2(data, first.model, cfg);

  FitReport report;
  report.model = second.model;
  report.labels = assign_labels(data, report.model);
  report.K_found = report.model.K();
  report.restarts = first.restarts;
  report.final_w_th = first.final_w_th;
  report.iterations = first.iterations + second.iterations;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

FitReport fit_unknown_K(const Dataset& data, const SolverConfig& cfg, std::uint64_t seed) {
  return fit_unknown_K(data, cfg, random_initialization(cfg.K, data.d(), seed));
}

FitReport fit_unknown_K(const Dataset& data, const SolverConfig& cfg, const MLRModel& init) {
  const auto start = Clock::now();
  const auto first = phase1_unknown_k(data, cfg, init);
  SolverConfig refine = cfg;
  refine.K = first.model.K();
  const auto second = phase2(data, first.model, refine);

  FitReport report;
  report.model = second.model;
  report.labels = assign_labels(data, report.model);
  report.K_found = report.model.K();
  report.restarts = 0;
  report.final_w_th = first.final_w_th;
  report.iterations = first.iterations + second.iterations;
  report.elapsed_seconds = seconds_since(start);
  return report;
}

MLRModel phase1_modified(const Dataset& data, const SolverConfig& cfg, double R,
                         std::uint64_t seed) {
  return phase1_modified(data, cfg, R, random_initialization(2, data.d(), seed).betas[0]);
}

MLRModel phase1_modified(const Dataset& data, const SolverConfig& cfg, double R,
                         const Vector& init) {
  data.validate();
  if (cfg.K != 2) throw InvalidArgument("phase1_modified is defined for K = 2 only");
  if (!(R > 0.0)) throw InvalidArgument("phase1_modified: R must be positive");
  if (init.size() != data.d()) throw InvalidArgument("phase1_modified: init dimension mismatch");

  const double eta = cfg.eta();
  const auto weights_for = [&](const Vector& beta) -> Vector {
    const Vector r = data.X * beta - data.y;
    return (1.0 + (eta / R) * r.array().square()).inverse().matrix();
  };
  const Vector norms = data.X.rowwise().squaredNorm();
  const auto bounded_poor_fit = [&](const Vector& w) {
    std::vector<Index> rows;
    for (Index i = 0; i < data.n(); ++i) {
      if (norms(i) <= R && w(i) <= cfg.w_th) rows.push_back(i);
    }
    return rows;
  };

  Vector beta1 = wls(data.X, weights_for(init), data.y, lsq_options(cfg, "modified round 1"));

  const auto s2 = bounded_poor_fit(weights_for(beta1));
  if (s2.empty()) {
    throw InsufficientData("phase1_modified: S_2 is empty; w_th must be raised");
  }
  Vector beta2 = ols_rows(data.X, data.y, s2, lsq_options(cfg, "modified round 2"));

  const auto s1 = bounded_poor_fit(weights_for(beta2));
  if (s1.empty()) {
    throw InsufficientData("phase1_modified: S'_1 is empty; w_th must be raised");
  }
  beta1 = ols_rows(data.X, data.y, s1, lsq_options(cfg, "modified refit 1"));
  return MLRModel({std::move(beta1), std::move(beta2)});
}

}  // namespace mlrlab
