#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mlrlab/data_io.hpp"
#include "mlrlab/errors.hpp"
#include "mlrlab/synthetic.hpp"

using namespace mlrlab;

namespace {

const std::filesystem::path kFixtures = MLRLAB_FIXTURE_DIR;

CsvTable table_from(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace

TEST_CASE("csv quoting") {
  const auto t = table_from("a,\"b, c\",d\n1,\"say \"\"hi\"\"\",\"two\nlines\"\n");
  REQUIRE(t.header.size() == 3);
  CHECK(t.header[1] == "b, c");
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0][1] == "say \"hi\"");
  CHECK(t.rows[0][2] == "two\nlines");
  CHECK_THROWS_AS(table_from("a,b\n1,2,3\n"), ParseError);
  CHECK_THROWS_AS(table_from("a,b\n\"1,2\n"), ParseError);
}

TEST_CASE("single column is centered and scaled") {
  IngestConfig cfg;
  cfg.response_column = std::string("y");
  cfg.add_bias = false;
  const auto r = ingest_csv(table_from("x,y\n1,5\n2,7\n3,6\n"), cfg);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(r.data.X(0, 0) == doctest::Approx(-s).epsilon(1e-15));
  CHECK(std::abs(r.data.X(1, 0)) <= 1e-16);
  CHECK(r.data.X(2, 0) == doctest::Approx(s).epsilon(1e-15));
}

TEST_CASE("one incomplete row of ten is dropped") {
  std::string text = "x,y\n";
  for (int i = 0; i < 10; ++i) text += (i == 4 ? std::string("NaN") : std::to_string(i)) + "," + std::to_string(i * i) + "\n";
  IngestConfig cfg;
  cfg.response_column = std::size_t{1};
  const auto r = ingest_csv(table_from(text), cfg);
  CHECK(r.data.n() == 9);
  CHECK(r.dropped_rows == 1);
}

TEST_CASE("mixed-type fixture") {
  IngestConfig cfg;
  cfg.response_column = std::string("charges");
  const auto r = ingest_csv(kFixtures / "mixed_columns.csv", cfg);
  CHECK(r.data.n() == 9);
  CHECK(r.data.d() == 5);
  CHECK(r.dropped_nominal == std::vector<std::string>{"region"});
  CHECK(r.feature_names == std::vector<std::string>{"age", "sex", "bmi, kg/m2", "smoker", "bias"});
  for (Index c = 0; c < 4; ++c) {
    CHECK(std::abs(r.data.X.col(c).mean()) <= 1e-10);
    CHECK(std::abs(r.data.X.col(c).norm() - 1.0) <= 1e-10);
  }
  CHECK(r.data.X.col(4) == Vector::Ones(9));
  CHECK(std::abs(r.data.y.mean()) <= 1e-10);
  CHECK(std::abs(r.data.y.norm() - 1.0) <= 1e-10);

  // Two-category text: first appearance maps to 0 before centering.
  const double sex_first = r.data.X(0, 1);
  CHECK(r.data.X(1, 1) > sex_first);

  const auto again = ingest_csv(kFixtures / "mixed_columns.csv", cfg);
  CHECK(again.data.X == r.data.X);
  CHECK(again.data.y == r.data.y);

  IngestConfig drop = cfg;
  drop.drop_columns = {"age"};
  CHECK(ingest_csv(kFixtures / "mixed_columns.csv", drop).data.d() == 4);
}

TEST_CASE("ingest errors") {
  IngestConfig cfg;
  cfg.response_column = std::string("nope");
  CHECK_THROWS_AS(ingest_csv(table_from("x,y\n1,2\n2,3\n"), cfg), InvalidArgument);
  cfg.response_column = std::size_t{1};
  CHECK_THROWS_AS(ingest_csv(table_from("x,y\n1,2\n1,3\n"), cfg), ConstantColumn);
  CHECK_THROWS_AS(ingest_csv(table_from("x,y\n1,a\n2,b\n"), cfg), ParseError);
}

TEST_CASE("dataset csv round trip") {
  MixtureSpec m;
  m.K = 3;
  m.proportions = {0.5, 0.3, 0.2};
  m.d = 4;
  m.sigma = 0.1;
  m.seed = 5;
  const auto data = generate_synthetic(m, 50);
  std::stringstream buf;
  write_dataset_csv(buf, data);
  const auto back = read_dataset_csv(buf);
  CHECK(back.X == data.X);
  CHECK(back.y == data.y);
  REQUIRE(back.true_labels);
  CHECK(*back.true_labels == *data.true_labels);

  Dataset unlabeled = data;
  unlabeled.true_labels.reset();
  std::stringstream buf2;
  write_dataset_csv(buf2, unlabeled);
  CHECK_FALSE(read_dataset_csv(buf2).true_labels.has_value());
}

TEST_CASE("registry") {
  CHECK(find_dataset(builtin_registry(), "medical").expected_n == 1338);
  CHECK(find_dataset(builtin_registry(), "fish").add_bias == false);
  CHECK_THROWS_AS(find_dataset(builtin_registry(), "titanic"), UnknownDataset);

  const auto from_file = load_registry(MLRLAB_RESOURCE_DIR "/datasets.toml");
  REQUIRE(from_file.size() == builtin_registry().size());
  for (std::size_t i = 0; i < from_file.size(); ++i) {
    CHECK(from_file[i].name == builtin_registry()[i].name);
    CHECK(from_file[i].expected_n == builtin_registry()[i].expected_n);
    CHECK(from_file[i].expected_d == builtin_registry()[i].expected_d);
    CHECK(from_file[i].add_bias == builtin_registry()[i].add_bias);
  }

  const auto toy = load_registry(kFixtures / "registry.toml");
  IngestConfig cfg;
  cfg.response_column = std::string("charges");
  const auto r = ingest_csv(kFixtures / "mixed_columns.csv", cfg);
  CHECK(validate_against_registry(r.data, find_dataset(toy, "toy")).ok);
  auto off = find_dataset(toy, "toy");
  off.expected_n = 10;
  const auto check = validate_against_registry(r.data, off);
  CHECK_FALSE(check.ok);
  REQUIRE(check.discrepancies.size() == 1);
  CHECK(check.discrepancies[0].find("n = 9") != std::string::npos);
  CHECK_THROWS_AS(validate_against_registry(r.data, std::string("unknown")), UnknownDataset);
}
