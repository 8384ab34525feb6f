#include "budgetdag/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace budgetdag {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    std::string cell = line.substr(start, comma == std::string::npos ? comma : comma - start);
    // Trim surrounding whitespace and a trailing CR from DOS line endings.
    while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
      cell.pop_back();
    std::size_t lead = 0;
    while (lead < cell.size() && (cell[lead] == ' ' || cell[lead] == '\t')) ++lead;
    cells.push_back(cell.substr(lead));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || !std::isfinite(v))
    throw DataError("csv: non-numeric cell '" + cell + "' at row " + std::to_string(row) +
                    ", column " + std::to_string(col));
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

CsvTable load_csv(const std::filesystem::path& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("csv: cannot open " + path.string());

  CsvTable table;
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  std::size_t lineno = 0;
  bool header_pending = has_header;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_line(line);
    if (header_pending) {
      table.header = cells;
      header_pending = false;
      continue;
    }
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw DataError("csv: row " + std::to_string(lineno) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(width));
    }
    std::vector<double> row(width);
    for (std::size_t c = 0; c < width; ++c) row[c] = parse_cell(cells[c], lineno, c + 1);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("csv: no data rows in " + path.string());

  table.values = MatrixD(rows.size(), width);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) table.values.at(i, j) = rows[i][j];
  return table;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw DataError("csv: cannot write " + path.string());
  if (!table.header.empty()) {
    for (std::size_t j = 0; j < table.header.size(); ++j)
      out << (j ? "," : "") << table.header[j];
    out << "\n";
  }
  for (std::size_t i = 0; i < table.values.rows; ++i) {
    for (std::size_t j = 0; j < table.values.cols; ++j)
      out << (j ? "," : "") << format_double(table.values.at(i, j));
    out << "\n";
  }
}

Dataset table_to_dataset(const CsvTable& table, int label_column) {
  const std::size_t cols = table.values.cols;
  if (cols < 2) throw DataError("dataset: need at least one feature and a label column");
  const std::size_t label_col =
      label_column < 0 ? cols - 1 : static_cast<std::size_t>(label_column);
  if (label_col >= cols)
    throw DataError("dataset: label column " + std::to_string(label_column) +
                    " outside table of width " + std::to_string(cols));

  Dataset data;
  data.features = MatrixD(table.values.rows, cols - 1);
  data.labels.resize(table.values.rows);
  int max_label = 0;
  for (std::size_t i = 0; i < table.values.rows; ++i) {
    std::size_t fj = 0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (j == label_col) continue;
      data.features.at(i, fj++) = table.values.at(i, j);
    }
    const double raw = table.values.at(i, label_col);
    const int label = static_cast<int>(raw);
    if (static_cast<double>(label) != raw || label < 1)
      throw DataError("dataset: label " + format_double(raw) + " at row " +
                      std::to_string(i + 1) + " is not a positive integer");
    data.labels[i] = label;
    max_label = std::max(max_label, label);
  }
  data.num_classes = max_label;
  return data;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  // Explicit Fisher-Yates with rejection sampling: identical output on any
  // standard library.
  for (std::size_t i = n; i > 1; --i) {
    const std::uint64_t bound = i;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(idx[i - 1], idx[r % bound]);
  }
  return idx;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& all, double train_fraction,
                                          std::uint64_t seed) {
  if (train_fraction <= 0.0 || train_fraction >= 1.0)
    throw ConfigError("split: train fraction must lie in (0,1)");
  const std::size_t n = all.size();
  const std::size_t n_train = static_cast<std::size_t>(train_fraction * static_cast<double>(n));
  if (n_train == 0 || n_train == n) throw DataError("split: a side would be empty");

  const std::vector<std::size_t> idx = shuffled_indices(n, seed);
  auto take = [&](std::size_t lo, std::size_t hi) {
    Dataset d;
    d.features = MatrixD(hi - lo, all.features.cols);
    d.labels.resize(hi - lo);
    d.num_classes = all.num_classes;
    for (std::size_t i = lo; i < hi; ++i) {
      const std::size_t src = idx[i];
      for (std::size_t j = 0; j < all.features.cols; ++j)
        d.features.at(i - lo, j) = all.features.at(src, j);
      d.labels[i - lo] = all.labels[src];
    }
    return d;
  };
  return {take(0, n_train), take(n_train, n)};
}

}  // namespace budgetdag
