#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "mlrlab/errors.hpp"
#include "mlrlab/experiment.hpp"
#include "mlrlab/metrics.hpp"
#include "mlrlab/report.hpp"
#include "mlrlab/synthetic.hpp"

using namespace mlrlab;

namespace {

constexpr const char* kSmallConfig = R"(
name = "small"
trials = 4
base_seed = 17

[sweep]
variable = "n"
n_relative = true
values = [3.0, 6.0]

[mixture]
K = 2
proportions = [0.7, 0.3]
d = 4
sigma = 0.01

[[solver]]
kind = "mix-irls"

[[solver]]
kind = "em"

[[solver]]
kind = "altmin"
name = "alt"
)";

std::string csv_of(const ExperimentResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

}  // namespace

TEST_CASE("config parsing") {
  const auto spec = parse_experiment(kSmallConfig);
  CHECK(spec.name == "small");
  CHECK(spec.trials == 4);
  CHECK(spec.base_seed == 17);
  CHECK(spec.sweep_variable == SweepVariable::SampleSize);
  CHECK(spec.n_relative);
  REQUIRE(spec.solvers.size() == 3);
  CHECK(spec.solvers[0].name == "mix-irls");
  CHECK(spec.solvers[2].name == "alt");
  CHECK(spec.solvers[2].kind == SolverKind::AltMin);

  const auto points = expand_sweep(spec);
  REQUIRE(points.size() == 2);
  // n_inf = 4 / 0.3
  CHECK(points[0].n == std::llround(3.0 * 4 / 0.3));
  CHECK(points[0].label == std::to_string(points[0].n));

  CHECK_THROWS_AS(parse_experiment("name = 3 = 4"), ParseError);
  CHECK_THROWS_AS(parse_experiment("[sweep]\nvariable = \"n\"\nvalues = [1]\n"), ParseError);
  std::string unordered = kSmallConfig;
  unordered.replace(unordered.find("[3.0, 6.0]"), 10, "[6.0, 3.0]");
  CHECK_THROWS_AS(parse_experiment(unordered), InvalidArgument);
  std::string no_trials = kSmallConfig;
  no_trials.replace(no_trials.find("trials = 4"), 10, "trials = 0");
  CHECK_THROWS_AS(parse_experiment(no_trials), InvalidArgument);
  std::string bad_kind = kSmallConfig;
  bad_kind.replace(bad_kind.find("\"em\""), 4, "\"svm\"");
  CHECK_THROWS_AS(parse_experiment(bad_kind), ParseError);
}

TEST_CASE("other sweep variables") {
  auto spec = parse_experiment(kSmallConfig);
  spec.sweep_variable = SweepVariable::KOver;
  spec.sweep_values = {0, 2};
  spec.n = 5.0;
  auto points = expand_sweep(spec);
  CHECK(points[1].k_input == 4);
  CHECK(points[1].label == "2");

  spec.sweep_variable = SweepVariable::DimensionBySize;
  spec.grid_d = {3, 5};
  spec.grid_n = {100, 200};
  spec.n_relative = false;
  points = expand_sweep(spec);
  REQUIRE(points.size() == 4);
  CHECK(points[3].d == 5);
  CHECK(points[3].n == 200);
  CHECK(points[3].label == "5x200");
}

TEST_CASE("one trial, one value, one solver gives one row") {
  auto spec = parse_experiment(kSmallConfig);
  spec.trials = 1;
  spec.sweep_values = {3.0};
  spec.solvers.resize(1);
  const auto r = run_experiment(spec);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].solver == "mix-irls");
  CHECK(r.rows[0].seed == trial_seed(17, r.rows[0].sweep_value, 0));
}

TEST_CASE("runs are deterministic, ordered and thread independent") {
  const auto spec = parse_experiment(kSmallConfig);
  const auto a = run_experiment(spec);
  const auto b = run_experiment(spec);
  CHECK(csv_of(a) == csv_of(b));
  RunOptions threaded;
  threaded.threads = 3;
  CHECK(csv_of(run_experiment(spec, threaded)) == csv_of(a));

  REQUIRE(a.rows.size() == 2 * 3 * 4);
  CHECK(csv_of(a).rfind(std::string(kResultsCsvHeader) + "\n", 0) == 0);
  // Sweep point, then solver name, then trial.
  CHECK(a.rows[0].solver == "alt");
  CHECK(a.rows[4].solver == "em");
  CHECK(a.rows[8].solver == "mix-irls");
  CHECK(a.rows[3].trial == 3);
  for (const auto& row : a.rows) CHECK(row.elapsed_seconds == 0.0);
}

TEST_CASE("adding a solver leaves existing rows untouched") {
  auto spec = parse_experiment(kSmallConfig);
  auto fewer = spec;
  fewer.solvers.pop_back();
  const auto all = run_experiment(spec);
  const auto some = run_experiment(fewer);
  std::map<std::tuple<std::string, std::string, int>, double> index;
  for (const auto& r : all.rows) index[{r.sweep_value, r.solver, r.trial}] = r.f_latent;
  for (const auto& r : some.rows) CHECK(index.at({r.sweep_value, r.solver, r.trial}) == r.f_latent);
}

TEST_CASE("failure flags recomputed from rows") {
  const auto spec = parse_experiment(kSmallConfig);
  const auto r = run_experiment(spec);
  const double threshold = failure_threshold(0.01);
  std::map<std::pair<std::string, std::string>, int> failures;
  for (const auto& row : r.rows) {
    const bool failed = !(row.f_latent <= threshold);
    CHECK(row.failed == failed);
    failures[{row.sweep_value, row.solver}] += failed ? 1 : 0;
  }
  for (const auto& s : aggregate(r)) {
    CHECK(s.failure_percent == doctest::Approx(100.0 * failures[{s.sweep_value, s.solver}] / s.trials));
  }
}

TEST_CASE("aggregate statistics") {
  ExperimentResult single;
  single.rows.push_back({"10", "x", 0, 1, 0.3, false, 0.0, 1, 1, ""});
  auto s = aggregate(single);
  REQUIRE(s.size() == 1);
  CHECK(s[0].median_f_latent == 0.3);
  CHECK(s[0].mad_f_latent == 0.0);

  ExperimentResult three;
  for (double v : {0.1, 0.2, 0.9}) three.rows.push_back({"10", "x", 0, 1, v, v > 0.5, 0.0, 1, 1, ""});
  s = aggregate(three);
  CHECK(s[0].median_f_latent == 0.2);
  CHECK(s[0].mad_f_latent == doctest::Approx(0.1));
  CHECK(s[0].failure_percent == doctest::Approx(100.0 / 3.0));

  const double inf = std::numeric_limits<double>::infinity();
  CHECK(median_of({1.0, inf, inf}) == inf);
  CHECK(median_absolute_deviation({1.0, 2.0, inf}) == 1.0);
  CHECK_THROWS_AS(aggregate(ExperimentResult{}), InvalidArgument);
}

TEST_CASE("summary document") {
  const auto spec = parse_experiment(kSmallConfig);
  const auto r = run_experiment(spec);
  const auto doc = summary_json(spec, r);
  CHECK(doc["name"] == "small");
  CHECK(doc["summary"].size() == 6);
  CHECK(doc["summary"][0].contains("median_f_latent"));
}

TEST_CASE("tuning picks from the grid") {
  auto spec = parse_experiment(kSmallConfig);
  spec.trials = 2;
  spec.sweep_values = {6.0};
  spec.solvers.resize(1);
  spec.solvers[0].tuned = true;
  spec.tuning.nu = {0.5, 1.0};
  spec.tuning.w_th = {0.01, 0.1};
  spec.tuning.repetitions = 2;
  const auto r = run_experiment(spec);
  REQUIRE(r.tuned.size() == 1);
  CHECK((r.tuned[0].nu == 0.5 || r.tuned[0].nu == 1.0));
  CHECK((r.tuned[0].w_th == 0.01 || r.tuned[0].w_th == 0.1));
  CHECK(csv_of(r) == csv_of(run_experiment(spec)));

  spec.solvers[0].kind = SolverKind::Em;
  CHECK_THROWS_AS(spec.validate(), InvalidArgument);
}

TEST_CASE("fit report json round trip") {
  FitReport rep;
  rep.model = random_initialization(2, 3, 1);
  rep.labels = {1, 2, 2, 1};
  rep.K_found = 2;
  rep.restarts = 1;
  rep.final_w_th = 0.11;
  rep.iterations = 42;
  rep.elapsed_seconds = 0.5;
  const auto doc = to_json(rep);
  CHECK(doc["model"].size() == 2);
  const auto back = fit_report_from_json(nlohmann::json::parse(doc.dump()));
  CHECK(back.labels == rep.labels);
  CHECK(back.final_w_th == rep.final_w_th);
  for (int k = 0; k < 2; ++k) CHECK(back.model.betas[k] == rep.model.betas[k]);
  CHECK_THROWS_AS(fit_report_from_json(nlohmann::json::parse("{\"model\": 3}")), ParseError);
}

TEST_CASE("thread count from the environment") {
  setenv("MLRLAB_THREADS", "3", 1);
  CHECK(threads_from_env() == 3);
  setenv("MLRLAB_THREADS", "zero", 1);
  CHECK(threads_from_env() == 1);
  unsetenv("MLRLAB_THREADS");
  CHECK(threads_from_env() == 1);
}

TEST_CASE("shipped configs load") {
  int count = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(MLRLAB_CONFIG_DIR)) {
    if (entry.path().extension() != ".toml") continue;
    CAPTURE(entry.path().string());
    const auto spec = load_experiment(entry.path());
    CHECK_FALSE(expand_sweep(spec).empty());
    CHECK_FALSE(spec.solvers.empty());
    ++count;
  }
  CHECK(count >= 10);
}
