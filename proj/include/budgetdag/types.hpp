#ifndef BUDGETDAG_TYPES_HPP
#define BUDGETDAG_TYPES_HPP

#include <bit>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace budgetdag {

// Errors are mapped to CLI exit codes: config 2, data 3, training 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : ConfigError {
  using ConfigError::ConfigError;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TrainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Mask = std::uint32_t;

// A named group of raw feature columns acquired atomically at cost `cost`.
struct SensorSpec {
  int id = 0;
  std::string name;
  std::vector<int> columns;
  double cost = 1.0;
};

// Fixed-width bitmask over sensor (or super-sensor) ids.
class SensorSubset {
 public:
  SensorSubset() = default;
  SensorSubset(Mask bits, int width) : bits_(bits), width_(width) {
    if (width < 0 || width > 30) throw ConfigError("SensorSubset width out of range");
    if (width < 30 && (bits >> width) != 0)
      throw ConfigError("SensorSubset bits exceed width");
  }
  static SensorSubset empty_set(int width) { return SensorSubset(0, width); }
  static SensorSubset full_set(int width) {
    return SensorSubset(width == 0 ? 0 : ((Mask{1} << width) - 1), width);
  }

  Mask bits() const { return bits_; }
  int width() const { return width_; }
  int count() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }
  bool has(int m) const { return (bits_ >> m) & 1u; }
  bool contains(const SensorSubset& other) const {
    return (other.bits_ & ~bits_) == 0;
  }
  SensorSubset with(int m) const { return SensorSubset(bits_ | (Mask{1} << m), width_); }
  SensorSubset set_union(const SensorSubset& o) const {
    return SensorSubset(bits_ | o.bits_, width_);
  }
  SensorSubset set_minus(const SensorSubset& o) const {
    return SensorSubset(bits_ & ~o.bits_, width_);
  }

  // Member ids in ascending order.
  std::vector<int> members() const {
    std::vector<int> out;
    for (int m = 0; m < width_; ++m)
      if (has(m)) out.push_back(m);
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (int m : members()) {
      if (!first) s += ",";
      s += std::to_string(m);
      first = false;
    }
    return s + "}";
  }

  bool operator==(const SensorSubset& o) const = default;

 private:
  Mask bits_ = 0;
  int width_ = 0;
};

struct LabeledExample {
  std::vector<double> features;
  int label = 0;  // 1..L
};

// Dense row-major matrix of doubles.
struct MatrixD {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  MatrixD() = default;
  MatrixD(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }
  std::span<const double> row_span(std::size_t i) const { return {row(i), cols}; }
  std::span<double> row_span(std::size_t i) { return {row(i), cols}; }
  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Feature matrix plus 1-based integer labels.
struct Dataset {
  MatrixD features;
  std::vector<int> labels;
  int num_classes = 0;

  std::size_t size() const { return labels.size(); }
  std::span<const double> x(std::size_t i) const { return features.row_span(i); }
  int y(std::size_t i) const { return labels[i]; }
};

}  // namespace budgetdag

#endif
