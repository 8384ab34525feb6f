#ifndef BUDGETDAG_CSV_HPP
#define BUDGETDAG_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "budgetdag/types.hpp"

namespace budgetdag {

// Raw numeric table, one row per example. Parse failures report row and
// column (1-based) in the DataError message.
struct CsvTable {
  std::vector<std::string> header;  // empty when has_header is false
  MatrixD values;
};

CsvTable load_csv(const std::filesystem::path& path, bool has_header);

// Shortest round-trip formatting per cell, comma separated.
void write_csv(const std::filesystem::path& path, const CsvTable& table);

std::string format_double(double v);

// Splits a numeric table into features and a 1-based integer label column.
// label_column < 0 selects the last column. Throws DataError for
// non-integral or out-of-range labels.
Dataset table_to_dataset(const CsvTable& table, int label_column);

// Portable Fisher-Yates shuffle (independent of standard library details, so
// seeded runs are reproducible across toolchains).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

// Seeded train/test split by shuffled row index.
std::pair<Dataset, Dataset> split_dataset(const Dataset& all, double train_fraction,
                                          std::uint64_t seed);

}  // namespace budgetdag

#endif
