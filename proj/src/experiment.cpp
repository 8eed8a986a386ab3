#include "mlrlab/experiment.hpp"

#include <toml.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "internal.hpp"
#include "mlrlab/baselines.hpp"
#include "mlrlab/errors.hpp"
#include "mlrlab/metrics.hpp"
#include "mlrlab/mix_irls.hpp"
#include "mlrlab/random.hpp"
#include "mlrlab/synthetic.hpp"

namespace mlrlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum SeedTag : std::uint64_t {
  kDataSeed = 1,
  kOutlierSeed = 2,
  kInitSeed = 3,
  kTuningSeed = 0x74756e65,  // "tune"
};

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Runs body(i) for i in [0, count) on up to `threads` workers.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Params {
  double nu = 0.5;
  double w_th = 0.01;
  double step_size = 0.1;
};

Params default_params(const SolverSpec& s) {
  Params p;
  if (s.nu) p.nu = *s.nu;
  if (s.w_th) p.w_th = *s.w_th;
  if (s.step_size) p.step_size = *s.step_size;
  return p;
}

struct Trial {
  Dataset data;
  MLRModel init;
};

Trial make_trial(const ExperimentSpec& spec, const SweepPoint& point, std::uint64_t seed) {
  MixtureSpec mixture = spec.mixture;
  mixture.d = point.d;
  mixture.sigma = point.sigma;
  mixture.seed = derive_seed(seed, kDataSeed);
  Trial trial;
  trial.data = generate_synthetic(mixture, point.n);
  if (point.outlier_fraction > 0.0) {
    trial.data = inject_outliers(trial.data, point.outlier_fraction, derive_seed(seed, kOutlierSeed));
  }
  trial.init = random_initialization(point.k_input, point.d, derive_seed(seed, kInitSeed));
  return trial;
}

struct Outcome {
  double f_latent = kInf;
  bool failed = true;
  double elapsed = 0.0;
  int iterations = 0;
  int k_found = 0;
  std::string error;
};

Outcome run_solver(const ExperimentSpec& spec, const SolverSpec& solver, const Params& params,
                   const SweepPoint& point, const Trial& trial) {
  const auto start = detail::Clock::now();
  const double trim = solver.trim ? point.outlier_fraction : 0.0;
  const int k_true = spec.mixture.K;
  Outcome out;
  try {
    MLRModel model;
    switch (solver.kind) {
      case SolverKind::MixIrls: {
        SolverConfig cfg = SolverConfig::synthetic_defaults(point.k_input, point.sigma);
        cfg.nu = params.nu;
        cfg.w_th = params.w_th;
        if (solver.rho) cfg.rho = *solver.rho;
        if (solver.max_iters) cfg.T1 = cfg.T2 = cfg.max_iters = *solver.max_iters;
        cfg.trim_fraction = trim;
        cfg.unknown_K = solver.unknown_k.value_or(point.k_input != k_true);
        auto report = fit(trial.data, cfg, trial.init);
        out.iterations = report.iterations;
        model = std::move(report.model);
        break;
      }
      case SolverKind::AltMin:
      case SolverKind::Em:
      case SolverKind::Gd: {
        BaselineConfig cfg;
        cfg.K = point.k_input;
        cfg.tol_delta = stopping_tolerance(point.sigma);
        cfg.trim_fraction = trim;
        cfg.step_size = params.step_size;
        cfg.max_iters = solver.max_iters.value_or(solver.kind == SolverKind::Gd ? 100000 : 1000);
        FitReport report = solver.kind == SolverKind::AltMin ? altmin(trial.data, cfg, trial.init)
                           : solver.kind == SolverKind::Em   ? em(trial.data, cfg, trial.init)
                                                             : gd(trial.data, cfg, trial.init);
        out.iterations = report.iterations;
        model = std::move(report.model);
        break;
      }
      case SolverKind::Oracle:
        model = oracle(trial.data);
        break;
    }
    out.k_found = model.K();
    if (model.K() < k_true) {
      out.error = "found " + std::to_string(model.K()) + " of " + std::to_string(k_true) +
                  " components";
    } else if (model.K() == k_true) {
      out.f_latent = f_latent(model, *trial.data.truth).value;
    } else {
      out.f_latent = f_latent_overparam(model, *trial.data.truth);
    }
  } catch (const Error& e) {
    out.error = e.what();
  }
  out.failed = !(out.f_latent <= failure_threshold(point.sigma));
  out.elapsed = detail::seconds_since(start);
  return out;
}

std::vector<Params> candidates(const ExperimentSpec& spec, const SolverSpec& solver) {
  std::vector<Params> out;
  const Params base = default_params(solver);
  if (solver.kind == SolverKind::MixIrls) {
    for (double nu : spec.tuning.nu) {
      for (double w : spec.tuning.w_th) {
        Params p = base;
        p.nu = nu;
        p.w_th = w;
        out.push_back(p);
      }
    }
  } else {
    const auto& grid = spec.tuning.step_size.empty() ? gd_step_grid() : spec.tuning.step_size;
    for (double step : grid) {
      Params p = base;
      p.step_size = step;
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace

std::string_view to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::SampleSize: return "n";
    case SweepVariable::Sigma: return "sigma";
    case SweepVariable::OutlierFraction: return "f";
    case SweepVariable::KOver: return "k_over";
    case SweepVariable::DimensionBySize: return "dn";
  }
  return "?";
}

SweepVariable sweep_variable_from_string(std::string_view s) {
  if (s == "n") return SweepVariable::SampleSize;
  if (s == "sigma") return SweepVariable::Sigma;
  if (s == "f") return SweepVariable::OutlierFraction;
  if (s == "k_over") return SweepVariable::KOver;
  if (s == "dn") return SweepVariable::DimensionBySize;
  throw ParseError("unknown sweep variable '" + std::string(s) + "'");
}

std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::MixIrls: return "mix-irls";
    case SolverKind::AltMin: return "altmin";
    case SolverKind::Em: return "em";
    case SolverKind::Gd: return "gd";
    case SolverKind::Oracle: return "oracle";
  }
  return "?";
}

SolverKind solver_kind_from_string(std::string_view s) {
  if (s == "mix-irls") return SolverKind::MixIrls;
  if (s == "altmin") return SolverKind::AltMin;
  if (s == "em") return SolverKind::Em;
  if (s == "gd") return SolverKind::Gd;
  if (s == "oracle") return SolverKind::Oracle;
  throw ParseError("unknown solver kind '" + std::string(s) + "'");
}

void ExperimentSpec::validate() const {
  if (sweep_variable == SweepVariable::DimensionBySize) {
    // d comes from the grid.
    MixtureSpec m = mixture;
    m.d = grid_d.empty() ? 1 : *std::min_element(grid_d.begin(), grid_d.end());
    m.validate();
  } else {
    mixture.validate();
  }
  if (trials < 1) throw InvalidArgument("experiment: trials must be >= 1");
  if (solvers.empty()) throw InvalidArgument("experiment: no solvers");
  std::vector<std::string> names;
  for (const auto& s : solvers) {
    if (s.name.empty()) throw InvalidArgument("experiment: solver without a name");
    names.push_back(s.name);
    if (s.tuned && s.kind != SolverKind::MixIrls && s.kind != SolverKind::Gd) {
      throw InvalidArgument("experiment: only mix-irls and gd solvers can be tuned");
    }
  }
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw InvalidArgument("experiment: solver names must be unique");
  }
  if (sweep_variable == SweepVariable::DimensionBySize) {
    if (grid_d.empty() || grid_n.empty()) throw InvalidArgument("experiment: dn sweep needs d and n axes");
  } else {
    if (sweep_values.empty()) throw InvalidArgument("experiment: no sweep values");
    for (std::size_t i = 1; i < sweep_values.size(); ++i) {
      if (!(sweep_values[i] > sweep_values[i - 1])) {
        throw InvalidArgument("experiment: sweep values must be strictly increasing");
      }
    }
  }
  if (sweep_variable != SweepVariable::SampleSize &&
      sweep_variable != SweepVariable::DimensionBySize && !(n > 0.0)) {
    throw InvalidArgument("experiment: a fixed sample size n is required");
  }
  if (tuning.repetitions < 1) throw InvalidArgument("experiment: tuning repetitions must be >= 1");
}

std::vector<SweepPoint> expand_sweep(const ExperimentSpec& spec) {
  spec.validate();
  const auto sample_size = [&](double value, int d) -> Index {
    if (!spec.n_relative) return static_cast<Index>(std::llround(value));
    MixtureSpec m = spec.mixture;
    m.d = d;
    return static_cast<Index>(std::llround(value * m.information_limit()));
  };
  SweepPoint base;
  base.d = spec.mixture.d;
  base.sigma = spec.mixture.sigma;
  base.outlier_fraction = spec.outlier_fraction;
  base.k_input = spec.k_input.value_or(spec.mixture.K);
  if (spec.n > 0.0) base.n = sample_size(spec.n, base.d);

  std::vector<SweepPoint> points;
  if (spec.sweep_variable == SweepVariable::DimensionBySize) {
    for (int d : spec.grid_d) {
      for (double nv : spec.grid_n) {
        SweepPoint p = base;
        p.d = d;
        p.n = sample_size(nv, d);
        p.label = std::to_string(d) + "x" + std::to_string(p.n);
        points.push_back(p);
      }
    }
    return points;
  }
  for (double v : spec.sweep_values) {
    SweepPoint p = base;
    switch (spec.sweep_variable) {
      case SweepVariable::SampleSize:
        p.n = sample_size(v, p.d);
        p.label = std::to_string(p.n);
        break;
      case SweepVariable::Sigma:
        p.sigma = v;
        p.label = format_number(v);
        break;
      case SweepVariable::OutlierFraction:
        p.outlier_fraction = v;
        p.label = format_number(v);
        break;
      case SweepVariable::KOver:
        p.k_input = spec.mixture.K + static_cast<int>(std::llround(v));
        p.label = format_number(v);
        break;
      case SweepVariable::DimensionBySize:
        break;
    }
    if (p.n < 1) throw InvalidArgument("experiment: sweep point " + p.label + " has n < 1");
    points.push_back(p);
  }
  return points;
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::string_view sweep_label, int trial) {
  return derive_seed(derive_seed(base_seed, fnv1a(sweep_label)), static_cast<std::uint64_t>(trial));
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts) {
  const auto points = expand_sweep(spec);
  const auto& solvers = spec.solvers;

  // Canonical solver order for the output.
  std::vector<std::size_t> solver_order(solvers.size());
  std::iota(solver_order.begin(), solver_order.end(), std::size_t{0});
  std::sort(solver_order.begin(), solver_order.end(),
            [&](std::size_t a, std::size_t b) { return solvers[a].name < solvers[b].name; });

  // Tuning: every (point, tuned solver, candidate) scored by the median error
  // over `repetitions` dedicated trials.
  std::vector<std::vector<Params>> chosen(points.size());
  for (auto& row : chosen) {
    for (const auto& s : solvers) row.push_back(default_params(s));
  }
  struct TuneJob {
    std::size_t point;
    std::size_t solver;
    std::vector<Params> grid;
    std::vector<double> scores;
  };
  std::vector<TuneJob> tune_jobs;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < solvers.size(); ++s) {
      if (!solvers[s].tuned) continue;
      auto grid = candidates(spec, solvers[s]);
      tune_jobs.push_back({p, s, grid, std::vector<double>(grid.size())});
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> tune_tasks;
  for (std::size_t j = 0; j < tune_jobs.size(); ++j) {
    for (std::size_t c = 0; c < tune_jobs[j].grid.size(); ++c) tune_tasks.emplace_back(j, c);
  }
  parallel_for(tune_tasks.size(), opts.threads, [&](std::size_t t) {
    auto& job = tune_jobs[tune_tasks[t].first];
    const std::size_t c = tune_tasks[t].second;
    const auto& point = points[job.point];
    std::vector<double> errors;
    for (int rep = 0; rep < spec.tuning.repetitions; ++rep) {
      const auto seed =
          derive_seed(trial_seed(spec.base_seed, point.label, rep), kTuningSeed);
      const auto trial = make_trial(spec, point, seed);
      errors.push_back(run_solver(spec, solvers[job.solver], job.grid[c], point, trial).f_latent);
    }
    job.scores[c] = median_of(std::move(errors));
  });

  ExperimentResult result;
  for (const auto& job : tune_jobs) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < job.scores.size(); ++c) {
      if (job.scores[c] < job.scores[best]) best = c;
    }
    chosen[job.point][job.solver] = job.grid[best];
    const auto& pr = job.grid[best];
    result.tuned.push_back({points[job.point].label, solvers[job.solver].name, pr.nu, pr.w_th,
                            pr.step_size, job.scores[best]});
  }

  // Trials: one job per (point, trial); all solvers share its data and init.
  const auto trials = static_cast<std::size_t>(spec.trials);
  std::vector<std::vector<ResultRow>> slots(points.size() * trials);
  parallel_for(slots.size(), opts.threads, [&](std::size_t job) {
    const std::size_t p = job / trials;
    const int t = static_cast<int>(job % trials);
    const auto& point = points[p];
    const auto seed = trial_seed(spec.base_seed, point.label, t);
    const auto trial = make_trial(spec, point, seed);
    auto& rows = slots[job];
    for (std::size_t s : solver_order) {
      const auto outcome = run_solver(spec, solvers[s], chosen[p][s], point, trial);
      ResultRow row;
      row.sweep_value = point.label;
      row.solver = solvers[s].name;
      row.trial = t;
      row.seed = seed;
      row.f_latent = outcome.f_latent;
      row.failed = outcome.failed;
      row.elapsed_seconds = opts.record_timing ? outcome.elapsed : 0.0;
      row.iterations = outcome.iterations;
      row.k_found = outcome.k_found;
      row.error = outcome.error;
      rows.push_back(std::move(row));
    }
  });

  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < solver_order.size(); ++s) {
      for (std::size_t t = 0; t < trials; ++t) {
        result.rows.push_back(slots[p * trials + t][s]);
      }
    }
  }
  return result;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  const double lo = values[mid - 1];
  const double hi = values[mid];
  return lo == hi ? lo : 0.5 * (lo + hi);
}

double median_absolute_deviation(const std::vector<double>& values) {
  const double m = median_of(values);
  std::vector<double> dev;
  dev.reserve(values.size());
  for (double v : values) dev.push_back(v == m ? 0.0 : std::abs(v - m));
  return median_of(std::move(dev));
}

std::vector<SummaryRow> aggregate(const ExperimentResult& result) {
  if (result.rows.empty()) throw InvalidArgument("aggregate: no result rows");
  std::vector<std::pair<std::string, std::string>> keys;
  std::map<std::pair<std::string, std::string>, std::vector<const ResultRow*>> groups;
  for (const auto& row : result.rows) {
    auto key = std::make_pair(row.sweep_value, row.solver);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) keys.push_back(key);
    it->second.push_back(&row);
  }
  std::vector<SummaryRow> out;
  for (const auto& key : keys) {
    const auto& rows = groups[key];
    std::vector<double> errors;
    std::vector<double> times;
    SummaryRow s;
    s.sweep_value = key.first;
    s.solver = key.second;
    s.trials = static_cast<int>(rows.size());
    int failures = 0;
    for (const auto* r : rows) {
      errors.push_back(r->f_latent);
      times.push_back(r->elapsed_seconds);
      if (r->failed) ++failures;
      if (!r->error.empty()) ++s.errors;
    }
    s.median_f_latent = median_of(errors);
    s.mad_f_latent = median_absolute_deviation(errors);
    s.failure_percent = 100.0 * failures / static_cast<double>(rows.size());
    s.median_elapsed_seconds = median_of(times);
    out.push_back(std::move(s));
  }
  return out;
}

void write_results_csv(std::ostream& out, const ExperimentResult& result) {
  out << kResultsCsvHeader << '\n';
  for (const auto& r : result.rows) {
    out << r.sweep_value << ',' << r.solver << ',' << r.trial << ',' << r.seed << ','
        << format_number(r.f_latent) << ',' << (r.failed ? 1 : 0) << ','
        << format_number(r.elapsed_seconds) << ',' << r.iterations << ',' << r.k_found << '\n';
  }
}

nlohmann::json summary_json(const ExperimentSpec& spec, const ExperimentResult& result) {
  const auto finite_or_null = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::json doc;
  doc["name"] = spec.name;
  doc["sweep_variable"] = std::string(to_string(spec.sweep_variable));
  doc["trials"] = spec.trials;
  doc["base_seed"] = spec.base_seed;
  doc["summary"] = nlohmann::json::array();
  for (const auto& s : aggregate(result)) {
    doc["summary"].push_back({
        {"sweep_value", s.sweep_value},
        {"solver", s.solver},
        {"trials", s.trials},
        {"median_f_latent", finite_or_null(s.median_f_latent)},
        {"mad_f_latent", finite_or_null(s.mad_f_latent)},
        {"failure_percent", s.failure_percent},
        {"median_elapsed_seconds", s.median_elapsed_seconds},
        {"errors", s.errors},
    });
  }
  doc["tuned"] = nlohmann::json::array();
  for (const auto& t : result.tuned) {
    doc["tuned"].push_back({{"sweep_value", t.sweep_value},
                            {"solver", t.solver},
                            {"nu", t.nu},
                            {"w_th", t.w_th},
                            {"step_size", t.step_size},
                            {"median_f_latent", finite_or_null(t.median_f_latent)}});
  }
  return doc;
}

namespace {

std::vector<double> number_array(const toml::node_view<const toml::node>& node,
                                 const std::string& key) {
  std::vector<double> out;
  if (!node) return out;
  const auto* arr = node.as_array();
  if (!arr) throw ParseError("config: '" + key + "' must be an array");
  for (const auto& v : *arr) {
    const auto x = v.value<double>();
    if (!x) throw ParseError("config: '" + key + "' must contain numbers");
    out.push_back(*x);
  }
  return out;
}

template <typename T>
std::optional<T> optional_value(const toml::node_view<const toml::node>& node,
                                const std::string& key) {
  if (!node) return std::nullopt;
  const auto v = node.value<T>();
  if (!v) throw ParseError("config: '" + key + "' has the wrong type");
  return v;
}

}  // namespace

ExperimentSpec parse_experiment(std::string_view toml_text) {
  toml::table doc;
  try {
    doc = toml::parse(toml_text);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "config: " << e.description() << " at line " << e.source().begin.line;
    throw ParseError(msg.str());
  }
  const toml::table& root = doc;

  ExperimentSpec spec;
  spec.name = root["name"].value_or(std::string("experiment"));
  spec.trials = static_cast<int>(root["trials"].value_or<std::int64_t>(50));
  spec.base_seed = static_cast<std::uint64_t>(root["base_seed"].value_or<std::int64_t>(0));

  const auto sweep = root["sweep"];
  if (!sweep.as_table()) throw ParseError("config: missing [sweep] table");
  const auto variable = sweep["variable"].value<std::string>();
  if (!variable) throw ParseError("config: sweep.variable is required");
  spec.sweep_variable = sweep_variable_from_string(*variable);
  spec.sweep_values = number_array(sweep["values"], "sweep.values");
  for (double d : number_array(sweep["d"], "sweep.d")) spec.grid_d.push_back(static_cast<int>(d));
  spec.grid_n = number_array(sweep["n"], "sweep.n");
  spec.n_relative = sweep["n_relative"].value_or(false);

  const auto mixture = root["mixture"];
  if (!mixture.as_table()) throw ParseError("config: missing [mixture] table");
  spec.mixture.K = static_cast<int>(mixture["K"].value_or<std::int64_t>(0));
  spec.mixture.proportions = number_array(mixture["proportions"], "mixture.proportions");
  if (spec.mixture.proportions.empty() && spec.mixture.K > 0) {
    spec.mixture.proportions.assign(static_cast<std::size_t>(spec.mixture.K), 1.0 / spec.mixture.K);
  }
  spec.mixture.d = static_cast<int>(mixture["d"].value_or<std::int64_t>(0));
  spec.mixture.sigma = mixture["sigma"].value_or(0.0);
  spec.n = mixture["n"].value_or(0.0);
  spec.outlier_fraction = mixture["outlier_fraction"].value_or(0.0);
  if (auto k = optional_value<std::int64_t>(mixture["K_input"], "mixture.K_input")) {
    spec.k_input = static_cast<int>(*k);
  }

  const auto* solvers = root["solver"].as_array();
  if (!solvers) throw ParseError("config: at least one [[solver]] table is required");
  for (const auto& node : *solvers) {
    const auto* t = node.as_table();
    if (!t) throw ParseError("config: [[solver]] entries must be tables");
    const toml::node_view<const toml::node> s{t};
    SolverSpec solver;
    const auto kind = s["kind"].value<std::string>();
    if (!kind) throw ParseError("config: every solver needs a kind");
    solver.kind = solver_kind_from_string(*kind);
    solver.name = s["name"].value_or(*kind);
    solver.nu = optional_value<double>(s["nu"], "solver.nu");
    solver.w_th = optional_value<double>(s["w_th"], "solver.w_th");
    solver.rho = optional_value<double>(s["rho"], "solver.rho");
    solver.step_size = optional_value<double>(s["step_size"], "solver.step_size");
    if (auto it = optional_value<std::int64_t>(s["max_iters"], "solver.max_iters")) {
      solver.max_iters = static_cast<int>(*it);
    }
    solver.trim = s["trim"].value_or(false);
    solver.tuned = s["tuned"].value_or(false);
    solver.unknown_k = optional_value<bool>(s["unknown_k"], "solver.unknown_k");
    spec.solvers.push_back(std::move(solver));
  }

  if (const auto tuning = root["tuning"]; tuning.as_table()) {
    if (tuning["nu"]) spec.tuning.nu = number_array(tuning["nu"], "tuning.nu");
    if (tuning["w_th"]) spec.tuning.w_th = number_array(tuning["w_th"], "tuning.w_th");
    spec.tuning.step_size = number_array(tuning["step_size"], "tuning.step_size");
    spec.tuning.repetitions = static_cast<int>(tuning["repetitions"].value_or<std::int64_t>(10));
  }

  spec.validate();
  return spec;
}

ExperimentSpec load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment(buffer.str());
}

int threads_from_env() {
  if (const char* env = std::getenv("MLRLAB_THREADS")) {
    int value = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec == std::errc{} && ptr == s.data() + s.size() && value > 0) return value;
  }
  return 1;
}

}  // namespace mlrlab
