#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mlrlab/baselines.hpp"
#include "mlrlab/data_io.hpp"
#include "mlrlab/errors.hpp"
#include "mlrlab/experiment.hpp"
#include "mlrlab/metrics.hpp"
#include "mlrlab/mix_irls.hpp"
#include "mlrlab/random.hpp"
#include "mlrlab/report.hpp"
#include "mlrlab/synthetic.hpp"
#include "mlrlab/theory.hpp"

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string out;
  int threads = 0;
};

// Writes to --out when given, stdout otherwise.
template <typename Fn>
void emit(const std::string& path, Fn&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream file(path);
  if (!file) throw mlrlab::Error("cannot write " + path);
  write(file);
}

struct SimulateArgs {
  int K = 3;
  int d = 20;
  long long n = 1000;
  double sigma = 0.0;
  std::vector<double> proportions;
  double outliers = 0.0;
};

void run_simulate(const SimulateArgs& a, const Globals& g) {
  mlrlab::MixtureSpec spec;
  spec.K = a.K;
  spec.d = a.d;
  spec.sigma = a.sigma;
  spec.seed = g.seed;
  spec.proportions = a.proportions;
  if (spec.proportions.empty()) spec.proportions.assign(static_cast<std::size_t>(a.K), 1.0 / a.K);
  auto data = mlrlab::generate_synthetic(spec, a.n);
  if (a.outliers > 0.0) data = mlrlab::inject_outliers(data, a.outliers, mlrlab::derive_seed(g.seed, 2));
  emit(g.out, [&](std::ostream& os) { mlrlab::write_dataset_csv(os, data); });
  std::cerr << "n_inf = " << spec.information_limit() << ", truth:\n"
            << mlrlab::to_json(*data.truth).dump() << '\n';
}

struct FitArgs {
  std::string data;
  std::string solver = "mix-irls";
  int K = 0;
  std::optional<double> nu;
  std::optional<double> w_th;
  std::optional<double> rho;
  std::optional<double> step_size;
  std::optional<int> max_iters;
  double sigma = 0.0;
  double trim = 0.0;
  bool unknown_k = false;
  bool real = false;
};

void run_fit(const FitArgs& a, const Globals& g) {
  const auto data = mlrlab::read_dataset_csv(a.data);
  const auto kind = mlrlab::solver_kind_from_string(a.solver);
  mlrlab::FitReport report;
  const auto init = mlrlab::random_initialization(a.K, data.d(), g.seed);
  switch (kind) {
    case mlrlab::SolverKind::MixIrls: {
      auto cfg = a.real ? mlrlab::SolverConfig::real_data_defaults(a.K)
                        : mlrlab::SolverConfig::synthetic_defaults(a.K, a.sigma);
      if (a.nu) cfg.nu = *a.nu;
      if (a.w_th) cfg.w_th = *a.w_th;
      if (a.rho) cfg.rho = *a.rho;
      if (a.max_iters) cfg.T1 = cfg.T2 = cfg.max_iters = *a.max_iters;
      cfg.trim_fraction = a.trim;
      cfg.unknown_K = a.unknown_k;
      report = mlrlab::fit(data, cfg, init);
      break;
    }
    case mlrlab::SolverKind::AltMin:
    case mlrlab::SolverKind::Em:
    case mlrlab::SolverKind::Gd: {
      mlrlab::BaselineConfig cfg;
      cfg.K = a.K;
      cfg.tol_delta = mlrlab::stopping_tolerance(a.sigma);
      cfg.trim_fraction = a.trim;
      if (a.step_size) cfg.step_size = *a.step_size;
      cfg.max_iters = a.max_iters.value_or(kind == mlrlab::SolverKind::Gd ? 100000 : 1000);
      report = kind == mlrlab::SolverKind::AltMin ? mlrlab::altmin(data, cfg, init)
               : kind == mlrlab::SolverKind::Em   ? mlrlab::em(data, cfg, init)
                                                  : mlrlab::gd(data, cfg, init);
      break;
    }
    case mlrlab::SolverKind::Oracle:
      if (!data.true_labels) throw mlrlab::InvalidArgument("oracle needs a label column");
      report.model = mlrlab::oracle(data);
      report.K_found = report.model.K();
      report.labels = mlrlab::assign_labels(data, report.model);
      break;
  }
  auto doc = mlrlab::to_json(report);
  doc["f_real"] = mlrlab::f_real(report.model, data);
  emit(g.out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

struct BenchArgs {
  std::string config;
  std::string summary;
  bool timing = false;
};

void run_bench(const BenchArgs& a, const Globals& g) {
  const auto spec = mlrlab::load_experiment(a.config);
  mlrlab::RunOptions opts;
  opts.threads = g.threads > 0 ? g.threads : mlrlab::threads_from_env();
  opts.record_timing = a.timing;
  const auto result = mlrlab::run_experiment(spec, opts);
  emit(g.out, [&](std::ostream& os) { mlrlab::write_results_csv(os, result); });
  const auto summary = mlrlab::summary_json(spec, result);
  if (!a.summary.empty()) {
    emit(a.summary, [&](std::ostream& os) { os << summary.dump(2) << '\n'; });
  } else {
    for (const auto& s : mlrlab::aggregate(result)) {
      std::cerr << s.sweep_value << '\t' << s.solver << "\tmedian=" << s.median_f_latent
                << "\tmad=" << s.mad_f_latent << "\tfail%=" << s.failure_percent << '\n';
    }
  }
}

void run_theory(const mlrlab::theory::TheoryInputs& in, const Globals& g) {
  namespace th = mlrlab::theory;
  nlohmann::json doc;
  const auto q = th::q_value(in);
  doc["gamma"] = th::gamma(in.p1, in.p2);
  doc["q"] = q.q;
  doc["applicable"] = q.applicable;
  doc["xi"] = in.xi();
  try {
    const auto range = th::wth_range(in);
    doc["wth_range"] = {range.lo, range.hi};
  } catch (const mlrlab::EmptyRange&) {
    doc["wth_range"] = nullptr;
  }
  try {
    doc["r_lower_bound"] = th::r_lower_bound(in);
  } catch (const mlrlab::Inapplicable&) {
    doc["r_lower_bound"] = nullptr;
  }
  try {
    doc["recovery_bound"] = th::recovery_bound(in);
  } catch (const mlrlab::Inapplicable&) {
    doc["recovery_bound"] = nullptr;
  }
  emit(g.out, [&](std::ostream& os) { os << doc.dump(2) << '\n'; });
}

struct IngestArgs {
  std::string input;
  std::string response = "0";
  std::vector<std::string> drop;
  bool no_bias = false;
  std::string dataset;
  std::string registry;
  char delimiter = ',';
};

void run_ingest(const IngestArgs& a, const Globals& g) {
  mlrlab::IngestConfig cfg;
  if (!a.response.empty() && a.response.find_first_not_of("0123456789") == std::string::npos) {
    cfg.response_column = static_cast<std::size_t>(std::stoull(a.response));
  } else {
    cfg.response_column = a.response;
  }
  cfg.drop_columns = a.drop;
  cfg.add_bias = !a.no_bias;
  cfg.delimiter = a.delimiter;

  std::optional<mlrlab::DatasetRegistryEntry> entry;
  if (!a.dataset.empty()) {
    const auto registry = a.registry.empty() ? mlrlab::builtin_registry() : mlrlab::load_registry(a.registry);
    entry = mlrlab::find_dataset(registry, a.dataset);
    cfg.add_bias = entry->add_bias;
  }
  const auto result = mlrlab::ingest_csv(std::filesystem::path(a.input), cfg);
  emit(g.out, [&](std::ostream& os) { mlrlab::write_dataset_csv(os, result.data); });
  std::cerr << "n = " << result.data.n() << ", d = " << result.data.d()
            << ", dropped rows = " << result.dropped_rows << '\n';
  for (const auto& name : result.dropped_nominal) std::cerr << "dropped nominal column " << name << '\n';
  if (entry) {
    const auto check = mlrlab::validate_against_registry(result.data, *entry);
    for (const auto& msg : check.discrepancies) std::cerr << "registry mismatch: " << msg << '\n';
    if (!check.ok) throw mlrlab::Error("dataset does not match registry entry " + entry->name);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed linear regression toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output file (default: stdout)");
  app.add_option("--threads", g.threads, "Worker threads (default: MLRLAB_THREADS or 1)")
      ->check(CLI::PositiveNumber);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset as CSV");
  simulate->fallthrough();
  simulate->add_option("--k", sim.K, "Number of components")->capture_default_str();
  simulate->add_option("--d", sim.d, "Dimension")->capture_default_str();
  simulate->add_option("--n", sim.n, "Sample size")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Noise standard deviation")->capture_default_str();
  simulate->add_option("--proportions", sim.proportions, "Mixture proportions (default: uniform)");
  simulate->add_option("--outliers", sim.outliers, "Fraction of corrupted responses");

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit one solver to a dataset CSV and emit a JSON report");
  fit->fallthrough();
  fit->add_option("--data", fa.data, "Dataset CSV")->required();
  fit->add_option("--solver", fa.solver, "mix-irls, altmin, em, gd or oracle")
      ->check(CLI::IsMember({"mix-irls", "altmin", "em", "gd", "oracle"}))
      ->capture_default_str();
  fit->add_option("--k", fa.K, "Number of components (K_max with --unknown-k)")->required();
  fit->add_option("--nu", fa.nu, "Mix-IRLS nu");
  fit->add_option("--wth", fa.w_th, "Mix-IRLS weight threshold");
  fit->add_option("--rho", fa.rho, "Mix-IRLS oversampling ratio");
  fit->add_option("--step", fa.step_size, "GD step size");
  fit->add_option("--max-iters", fa.max_iters, "Iteration cap");
  fit->add_option("--sigma", fa.sigma, "Noise level used for the stopping tolerance");
  fit->add_option("--trim", fa.trim, "Trimmed fraction of worst-fit samples");
  fit->add_flag("--unknown-k", fa.unknown_k, "Mix-IRLS unknown-K mode");
  fit->add_flag("--real", fa.real, "Real-data defaults (nu = 1, rho = 2)");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Run an experiment config; CSV rows to --out");
  bench->fallthrough();
  bench->add_option("--config", ba.config, "Experiment TOML file")->required()->check(CLI::ExistingFile);
  bench->add_option("--summary", ba.summary, "Write the JSON summary to this file");
  bench->add_flag("--timing", ba.timing, "Record wall-clock times (output no longer reproducible)");

  mlrlab::theory::TheoryInputs ti;
  auto* theory = app.add_subcommand("theory", "Evaluate the two-component recovery quantities");
  theory->fallthrough();
  theory->add_option("--p1", ti.p1)->capture_default_str();
  theory->add_option("--p2", ti.p2)->capture_default_str();
  theory->add_option("--sigma-eps", ti.sigma_eps, "Noise bound")->capture_default_str();
  theory->add_option("--delta", ti.delta_norm, "Separation norm")->capture_default_str();
  theory->add_option("--eta", ti.eta)->capture_default_str();
  theory->add_option("--R", ti.R, "Squared-norm bound")->capture_default_str();
  theory->add_option("--D", ti.D, "Relative initialization error")->capture_default_str();

  IngestArgs ia;
  auto* ingest = app.add_subcommand("ingest", "Normalize a raw CSV into a dataset CSV");
  ingest->fallthrough();
  ingest->add_option("--input", ia.input, "Raw CSV file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--response", ia.response, "Response column name or 0-based index")
      ->capture_default_str();
  ingest->add_option("--drop", ia.drop, "Columns to drop");
  ingest->add_flag("--no-bias", ia.no_bias, "Do not append a bias column");
  ingest->add_option("--dataset", ia.dataset, "Registry name to validate (n, d) against");
  ingest->add_option("--registry", ia.registry, "Registry TOML (default: built-in)");
  ingest->add_option("--delimiter", ia.delimiter, "Field delimiter");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  try {
    if (*simulate) run_simulate(sim, g);
    if (*fit) run_fit(fa, g);
    if (*bench) run_bench(ba, g);
    if (*theory) run_theory(ti, g);
    if (*ingest) run_ingest(ia, g);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
