#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mlrlab/types.hpp"

namespace mlrlab {

enum class SweepVariable { SampleSize, Sigma, OutlierFraction, KOver, DimensionBySize };

std::string_view to_string(SweepVariable v);
SweepVariable sweep_variable_from_string(std::string_view s);

enum class SolverKind { MixIrls, AltMin, Em, Gd, Oracle };

std::string_view to_string(SolverKind k);
SolverKind solver_kind_from_string(std::string_view s);

/// One solver column of an experiment. Unset overrides fall back to the
/// synthetic-data defaults.
struct SolverSpec {
  std::string name;
  SolverKind kind = SolverKind::MixIrls;
  std::optional<double> nu;
  std::optional<double> w_th;
  std::optional<double> rho;
  std::optional<double> step_size;
  std::optional<int> max_iters;
  /// Trim the corruption fraction f of worst-fit samples (when f > 0).
  bool trim = false;
  /// Pick nu/w_th (Mix-IRLS) or the step size (GD) from the tuning grids.
  bool tuned = false;
  /// Mix-IRLS only; unset means "on whenever the input K exceeds the true K".
  std::optional<bool> unknown_k;
};

struct TuningGrids {
  std::vector<double> nu{0.1, 0.5, 1.0, 2.0};
  std::vector<double> w_th{0.01, 0.1, 0.5, 0.75};
  std::vector<double> step_size;  // defaults to gd_step_grid()
  int repetitions = 10;
};

/// Declarative sweep: for every sweep value and trial, fresh data is drawn
/// and every solver is run from one shared random initialization.
struct ExperimentSpec {
  std::string name = "experiment";
  SweepVariable sweep_variable = SweepVariable::SampleSize;
  /// Values of the swept quantity. For SampleSize they are sample counts, or
  /// multiples of n_inf when n_relative is set.
  std::vector<double> sweep_values;
  /// DimensionBySize grid axes.
  std::vector<int> grid_d;
  std::vector<double> grid_n;
  bool n_relative = false;

  /// K, proportions, d and sigma of the data; mixture.seed is unused.
  MixtureSpec mixture;
  /// Sample size when n is not swept (absolute, or relative to n_inf).
  double n = 0.0;
  double outlier_fraction = 0.0;
  /// Number of components handed to the solvers; defaults to mixture.K.
  std::optional<int> k_input;

  std::vector<SolverSpec> solvers;
  int trials = 50;
  std::uint64_t base_seed = 0;
  TuningGrids tuning;

  void validate() const;
};

/// Concrete settings of one sweep point.
struct SweepPoint {
  std::string label;  // printed in the sweep_value column
  int d = 1;
  Index n = 1;
  double sigma = 0.0;
  double outlier_fraction = 0.0;
  int k_input = 1;
};

std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec);

struct ResultRow {
  std::string sweep_value;
  std::string solver;
  int trial = 0;
  std::uint64_t seed = 0;
  double f_latent = 0.0;
  bool failed = false;
  double elapsed_seconds = 0.0;
  int iterations = 0;
  int k_found = 0;
  /// Solver error message; empty on success.
  std::string error;
};

struct TunedChoice {
  std::string sweep_value;
  std::string solver;
  double nu = 0.0;
  double w_th = 0.0;
  double step_size = 0.0;
  double median_f_latent = 0.0;
};

struct ExperimentResult {
  /// Canonical order: sweep point, then solver name, then trial.
  std::vector<ResultRow> rows;
  std::vector<TunedChoice> tuned;
};

struct RunOptions {
  int threads = 1;
  /// Record wall-clock fit times. Off by default so that repeated runs
  /// produce byte-identical output.
  bool record_timing = false;
};

/// Seed of one trial: derived from (base_seed, sweep label, trial) only.
std::uint64_t trial_seed(std::uint64_t base_seed, std::string_view sweep_label, int trial);

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {});

struct SummaryRow {
  std::string sweep_value;
  std::string solver;
  int trials = 0;
  double median_f_latent = 0.0;
  double mad_f_latent = 0.0;
  double failure_percent = 0.0;
  double median_elapsed_seconds = 0.0;
  int errors = 0;
};

/// Median, median absolute deviation and failure percentage per
/// (sweep value, solver), in first-appearance order.
std::vector<SummaryRow> aggregate(const ExperimentResult& result);

double median_of(std::vector<double> values);
double median_absolute_deviation(const std::vector<double>& values);

inline constexpr std::string_view kResultsCsvHeader =
    "sweep_value,solver,trial,seed,f_latent,failed,elapsed_seconds,iterations,k_found";

void write_results_csv(std::ostream& out, const ExperimentResult& result);
nlohmann::json summary_json(const ExperimentSpec& spec, const ExperimentResult& result);

ExperimentSpec parse_experiment(std::string_view toml_text);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// MLRLAB_THREADS, or 1 when unset or invalid.
int threads_from_env();

}  // namespace mlrlab
