#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace arm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Malformed input file. Carries the 1-based line number where parsing failed
/// (0 when the problem is not tied to a line, e.g. an empty file).
class FormatError : public std::runtime_error {
public:
  FormatError(const std::string& what, std::size_t line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Non-finite values, failed factorizations and similar numerical breakdowns.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Assignment of n samples to k groups; ids are contiguous in [0, k).
struct ClusterLabels {
  std::vector<int> ids;
  int k = 0;

  std::size_t size() const noexcept { return ids.size(); }

  /// Re-indexes arbitrary integer ids onto [0, k) in increasing order of the
  /// raw value. The partition is unchanged.
  static ClusterLabels from_raw(const std::vector<long long>& raw);

  /// Re-indexes by order of first appearance, so that equal partitions map to
  /// equal id sequences.
  ClusterLabels canonical() const;
};

enum class ErrorModel { Frobenius, L1, L21 };

ErrorModel parse_error_model(const std::string& name);
std::string to_string(ErrorModel model);

bool all_finite(const Matrix& m);

}  // namespace arm
