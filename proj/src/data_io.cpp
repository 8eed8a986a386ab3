#include "mlrlab/data_io.hpp"

#include <toml.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "mlrlab/errors.hpp"

namespace mlrlab {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool is_missing(std::string_view raw) {
  static constexpr std::array<std::string_view, 7> kMissing{"", "NA", "N/A", "NaN", "nan",
                                                            "null", "NULL"};
  const auto s = trim(raw);
  return std::find(kMissing.begin(), kMissing.end(), s) != kMissing.end();
}

std::optional<double> parse_number(std::string_view raw) {
  auto s = trim(raw);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::string format_number(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

}  // namespace

CsvTable parse_csv(std::istream& in, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool any_content = false;
  char c = 0;

  const auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  const auto end_record = [&] {
    end_field();
    // Skip blank lines.
    if (!(record.size() == 1 && trim(record.front()).empty())) records.push_back(std::move(record));
    record.clear();
    any_content = false;
  };

  while (in.get(c)) {
    any_content = true;
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
    } else if (c == '\n') {
      end_record();
    } else if (c == '\r') {
      if (in.peek() == '\n') continue;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError("csv: unterminated quoted field");
  if (any_content) end_record();

  if (records.empty()) throw ParseError("csv: missing header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (auto& h : table.header) h = std::string(trim(h));
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw ParseError("csv: row " + std::to_string(r) + " has " +
                       std::to_string(records[r].size()) + " fields, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, char delimiter) {
  auto in = open_input(path);
  return parse_csv(in, delimiter);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  data.validate();
  const bool labelled = data.true_labels.has_value();
  for (Index j = 0; j < data.d(); ++j) out << 'x' << (j + 1) << ',';
  out << 'y' << (labelled ? ",label" : "") << '\n';
  for (Index i = 0; i < data.n(); ++i) {
    for (Index j = 0; j < data.d(); ++j) out << format_number(data.X(i, j)) << ',';
    out << format_number(data.y(i));
    if (labelled) out << ',' << (*data.true_labels)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

void write_dataset_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_dataset_csv(out, data);
}

Dataset read_dataset_csv(std::istream& in) {
  const auto table = parse_csv(in);
  const auto& h = table.header;
  const auto y_col = std::find(h.begin(), h.end(), "y");
  if (y_col == h.end()) throw ParseError("dataset csv: no 'y' column");
  const auto d = static_cast<Index>(y_col - h.begin());
  for (Index j = 0; j < d; ++j) {
    if (h[static_cast<std::size_t>(j)] != "x" + std::to_string(j + 1)) {
      throw ParseError("dataset csv: expected column x" + std::to_string(j + 1));
    }
  }
  const bool labelled = h.size() == static_cast<std::size_t>(d) + 2;
  if (labelled && h.back() != "label") throw ParseError("dataset csv: trailing column must be 'label'");
  if (!labelled && h.size() != static_cast<std::size_t>(d) + 1) {
    throw ParseError("dataset csv: unexpected columns after 'y'");
  }

  Dataset data;
  const auto n = static_cast<Index>(table.rows.size());
  data.X.resize(n, d);
  data.y.resize(n);
  if (labelled) data.true_labels.emplace(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    for (Index j = 0; j <= d; ++j) {
      const auto v = parse_number(row[static_cast<std::size_t>(j)]);
      if (!v) {
        throw ParseError("dataset csv: row " + std::to_string(i + 1) + " column " +
                         std::to_string(j + 1) + " is not a number");
      }
      if (j < d) {
        data.X(i, j) = *v;
      } else {
        data.y(i) = *v;
      }
    }
    if (labelled) {
      const auto v = parse_number(row.back());
      if (!v || *v < 1 || *v != std::floor(*v)) {
        throw ParseError("dataset csv: row " + std::to_string(i + 1) + " has an invalid label");
      }
      (*data.true_labels)[static_cast<std::size_t>(i)] = static_cast<int>(*v);
    }
  }
  data.validate();
  return data;
}

Dataset read_dataset_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_dataset_csv(in);
}

IngestResult ingest_csv(const CsvTable& table, const IngestConfig& cfg) {
  const auto& header = table.header;
  const std::size_t cols = header.size();

  std::size_t response = 0;
  if (const auto* name = std::get_if<std::string>(&cfg.response_column)) {
    const auto it = std::find(header.begin(), header.end(), *name);
    if (it == header.end()) throw InvalidArgument("ingest: no response column '" + *name + "'");
    response = static_cast<std::size_t>(it - header.begin());
  } else {
    response = std::get<std::size_t>(cfg.response_column);
    if (response >= cols) throw InvalidArgument("ingest: response column index out of range");
  }

  std::vector<bool> keep(cols, true);
  for (const auto& name : cfg.drop_columns) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw InvalidArgument("ingest: cannot drop unknown column '" + name + "'");
    const auto j = static_cast<std::size_t>(it - header.begin());
    if (j == response) throw InvalidArgument("ingest: cannot drop the response column");
    keep[j] = false;
  }

  IngestResult result;

  // Classify columns from their non-missing values.
  std::vector<bool> binary(cols, false);
  for (std::size_t j = 0; j < cols; ++j) {
    if (!keep[j]) continue;
    bool numeric = true;
    std::set<std::string> categories;
    for (const auto& row : table.rows) {
      if (is_missing(row[j])) continue;
      if (numeric && !parse_number(row[j])) numeric = false;
      categories.emplace(trim(row[j]));
    }
    if (numeric) continue;
    if (j == response) {
      throw ParseError("ingest: response column '" + header[j] + "' is not numeric");
    }
    if (categories.size() <= 2) {
      binary[j] = true;
    } else {
      keep[j] = false;
      result.dropped_nominal.push_back(header[j]);
    }
  }

  std::vector<std::size_t> features;
  for (std::size_t j = 0; j < cols; ++j) {
    if (keep[j] && j != response) features.push_back(j);
  }

  std::vector<const std::vector<std::string>*> rows;
  for (const auto& row : table.rows) {
    const bool complete = !is_missing(row[response]) &&
                          std::none_of(features.begin(), features.end(),
                                       [&](std::size_t j) { return is_missing(row[j]); });
    if (complete) rows.push_back(&row);
  }
  result.dropped_rows = static_cast<Index>(table.rows.size() - rows.size());

  const auto n = static_cast<Index>(rows.size());
  const auto d = static_cast<Index>(features.size());
  if (n == 0) throw InsufficientData("ingest: no complete rows");
  Matrix X(n, d);
  Vector y(n);
  for (Index c = 0; c < d; ++c) {
    const std::size_t j = features[static_cast<std::size_t>(c)];
    std::map<std::string, double> codes;
    for (Index i = 0; i < n; ++i) {
      const std::string& raw = (*rows[static_cast<std::size_t>(i)])[j];
      if (binary[j]) {
        const auto [it, inserted] =
            codes.emplace(std::string(trim(raw)), static_cast<double>(codes.size()));
        X(i, c) = it->second;
      } else {
        X(i, c) = *parse_number(raw);
      }
    }
  }
  for (Index i = 0; i < n; ++i) y(i) = *parse_number((*rows[static_cast<std::size_t>(i)])[response]);

  const auto normalize = [](auto&& column, const std::string& name) {
    column.array() -= column.mean();
    const double norm = column.norm();
    if (!(norm > 0.0)) {
      throw ConstantColumn("ingest: column '" + name + "' is constant", name);
    }
    column /= norm;
  };
  for (Index c = 0; c < d; ++c) {
    normalize(X.col(c), header[features[static_cast<std::size_t>(c)]]);
    result.feature_names.push_back(header[features[static_cast<std::size_t>(c)]]);
  }
  normalize(y, header[response]);

  if (cfg.add_bias) {
    X.conservativeResize(Eigen::NoChange, d + 1);
    X.col(d).setOnes();
    result.feature_names.emplace_back("bias");
  }
  result.data.X = std::move(X);
  result.data.y = std::move(y);
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path, const IngestConfig& cfg) {
  return ingest_csv(read_csv(path, cfg.delimiter), cfg);
}

const std::vector<DatasetRegistryEntry>& builtin_registry() {
  static const std::vector<DatasetRegistryEntry> registry{
      {"medical", 1338, 7, true},
      {"wine", 1599, 12, true},
      {"who", 1649, 21, true},
      {"fish", 159, 5, false},
  };
  return registry;
}

std::vector<DatasetRegistryEntry> load_registry(const std::filesystem::path& path) {
  toml::table doc;
  try {
    doc = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw ParseError("registry " + path.string() + ": " + std::string(e.description()));
  }
  const auto* entries = doc["dataset"].as_array();
  if (!entries) throw ParseError("registry " + path.string() + ": no [[dataset]] entries");
  std::vector<DatasetRegistryEntry> out;
  for (const auto& node : *entries) {
    const auto* t = node.as_table();
    if (!t) throw ParseError("registry: [[dataset]] entries must be tables");
    const auto name = (*t)["name"].value<std::string>();
    const auto n = (*t)["n"].value<std::int64_t>();
    const auto d = (*t)["d"].value<std::int64_t>();
    if (!name || !n || !d) throw ParseError("registry: each dataset needs name, n and d");
    out.push_back({*name, static_cast<Index>(*n), static_cast<Index>(*d),
                   (*t)["add_bias"].value_or(true)});
  }
  return out;
}

const DatasetRegistryEntry& find_dataset(const std::vector<DatasetRegistryEntry>& registry,
                                         const std::string& name) {
  const auto it = std::find_if(registry.begin(), registry.end(),
                               [&](const auto& e) { return e.name == name; });
  if (it == registry.end()) throw UnknownDataset("unknown dataset '" + name + "'");
  return *it;
}

RegistryCheck validate_against_registry(const Dataset& data, const DatasetRegistryEntry& entry) {
  RegistryCheck check;
  if (data.n() != entry.expected_n) {
    check.discrepancies.push_back(entry.name + ": n = " + std::to_string(data.n()) +
                                  ", expected " + std::to_string(entry.expected_n));
  }
  if (data.d() != entry.expected_d) {
    check.discrepancies.push_back(entry.name + ": d = " + std::to_string(data.d()) +
                                  ", expected " + std::to_string(entry.expected_d));
  }
  check.ok = check.discrepancies.empty();
  return check;
}

RegistryCheck validate_against_registry(const Dataset& data, const std::string& name) {
  return validate_against_registry(data, find_dataset(builtin_registry(), name));
}

}  // namespace mlrlab
