#pragma once

#include <filesystem>
#include <string>

#include "arm/types.hpp"

namespace arm {

// Columns are samples throughout: a CSV file with m lines of n values holds
// an m x n data matrix X with n samples.

enum class MatrixFormat {
  Csv,           // comma separated, one matrix row per line, no header
  MatrixMarket,  // "%%MatrixMarket matrix array real general", column-major body
};

MatrixFormat parse_matrix_format(const std::string& name);

/// Guesses the format from the extension: ".mtx" / ".mm" are MatrixMarket,
/// anything else CSV.
MatrixFormat format_from_path(const std::filesystem::path& path);

/// Throws FormatError (with line number) on parse failures, ragged rows,
/// non-finite entries and empty files; std::runtime_error if the file cannot
/// be opened.
Matrix load_matrix(const std::filesystem::path& path, MatrixFormat format);
Matrix load_matrix(const std::filesystem::path& path);

/// Writes 17 significant digits so that load_matrix reproduces every entry.
void save_matrix(const Matrix& m, const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const Matrix& m, const std::filesystem::path& path);

/// One base-10 integer per line; blank lines are ignored. Ids are re-indexed
/// onto [0, k).
ClusterLabels load_labels(const std::filesystem::path& path);
void save_labels(const ClusterLabels& labels, const std::filesystem::path& path);

// String-level variants used by the file functions.
Matrix parse_csv(const std::string& text);
Matrix parse_matrix_market(const std::string& text);
ClusterLabels parse_labels(const std::string& text);

}  // namespace arm
