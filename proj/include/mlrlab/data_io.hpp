#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mlrlab/types.hpp"

namespace mlrlab {

/// A parsed delimited text table: header plus rows of raw string fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC-4180-style reader: quoted fields may contain delimiters, doubled
/// quotes and line breaks. Throws ParseError on ragged rows or an
/// unterminated quote.
CsvTable parse_csv(std::istream& in, char delimiter = ',');
CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');

/// Dataset CSV: header `x1,...,xd,y[,label]`, '.' decimal point, one sample
/// per line. Labels are 1-based. Values are written with round-trip
/// precision.
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv(const std::filesystem::path& path, const Dataset& data);
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv(const std::filesystem::path& path);

struct IngestConfig {
  /// Column name, or zero-based column index.
  std::variant<std::string, std::size_t> response_column = std::size_t{0};
  std::vector<std::string> drop_columns;
  bool add_bias = true;
  char delimiter = ',';
};

struct IngestResult {
  Dataset data;
  /// Names of the columns of data.X, in order ("bias" last when added).
  std::vector<std::string> feature_names;
  /// Multi-category text columns that were dropped.
  std::vector<std::string> dropped_nominal;
  Index dropped_rows = 0;
};

/// Real-data preprocessing: drop configured columns and multi-category text
/// columns, drop rows with missing values, map two-category text columns to
/// {0, 1} by order of first appearance, center every column and scale it to
/// unit Euclidean norm (response included), then append an all-ones bias
/// column if requested.
IngestResult ingest_csv(const CsvTable& table, const IngestConfig& cfg);
IngestResult ingest_csv(const std::filesystem::path& path, const IngestConfig& cfg);

struct DatasetRegistryEntry {
  std::string name;
  Index expected_n = 0;
  /// Number of columns of X after preprocessing, bias included.
  Index expected_d = 0;
  bool add_bias = true;
};

/// Benchmark datasets bundled with the project (n, d after preprocessing).
const std::vector<DatasetRegistryEntry>& builtin_registry();

/// Reads a registry resource file (TOML array of [[dataset]] tables).
std::vector<DatasetRegistryEntry> load_registry(const std::filesystem::path& path);

/// Looks up `name`; throws UnknownDataset.
const DatasetRegistryEntry& find_dataset(const std::vector<DatasetRegistryEntry>& registry,
                                         const std::string& name);

struct RegistryCheck {
  bool ok = false;
  std::vector<std::string> discrepancies;
};

RegistryCheck validate_against_registry(const Dataset& data, const DatasetRegistryEntry& entry);
/// Same, looking `name` up in the built-in registry.
RegistryCheck validate_against_registry(const Dataset& data, const std::string& name);

}  // namespace mlrlab
