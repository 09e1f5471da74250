#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "arm/types.hpp"

namespace arm {

enum class SubspaceMode {
  Independent,  // mutually orthogonal bases; requires sum of dims <= ambient_dim
  Random,       // each basis drawn separately; subspaces may be dependent
};

struct SubspaceSpec {
  int ambient_dim = 0;
  std::vector<int> dims;
  std::vector<int> points;
  std::uint64_t seed = 0;
  SubspaceMode mode = SubspaceMode::Independent;

  /// k subspaces of dimension d with n points each.
  static SubspaceSpec uniform(int ambient_dim, int k, int d, int n, std::uint64_t seed,
                              SubspaceMode mode = SubspaceMode::Independent);
  void validate() const;
};

struct SyntheticData {
  Matrix x;                   // ambient_dim x total points, unit-norm columns
  ClusterLabels labels;       // subspace index of every column
  std::vector<Matrix> bases;  // orthonormal basis of each subspace
};

/// Points are basis * (unit-norm Gaussian coefficients); columns are shuffled.
/// Deterministic per seed.
SyntheticData generate_subspaces(const SubspaceSpec& spec);

enum class CorruptionModel { None, Gaussian, Sparse, SampleSpecific };

CorruptionModel parse_corruption_model(const std::string& name);
std::string to_string(CorruptionModel model);

struct CorruptionSpec {
  CorruptionModel model = CorruptionModel::None;
  // Gaussian: noise std-dev. Sparse: fraction of entries. SampleSpecific:
  // fraction of columns.
  double level = 0.0;
  // Sparse: replaced entries are uniform in [-magnitude, magnitude].
  // SampleSpecific: norm of the replacement columns.
  double magnitude = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct CorruptedData {
  Matrix x;
  Matrix e_true;  // exactly x - clean
  std::vector<Index> touched;  // linear entry indices (sparse) or column indices (sample-specific)
};

CorruptedData corrupt(const Matrix& x, const CorruptionSpec& spec);

/// Misclassification rate under the best bijection between predicted and
/// true groups (Hungarian assignment on the contingency table).
double clustering_error(const ClusterLabels& pred, const ClusterLabels& truth);

/// Minimum-cost perfect assignment on a square cost matrix; returns the
/// column assigned to each row.
std::vector<int> hungarian_assignment(const Matrix& cost);

/// Share of the off-diagonal affinity mass that lies within true clusters.
/// Returns 1 when W has no off-diagonal mass.
double block_diag_mass(const Matrix& w, const ClusterLabels& truth);

struct RankProfileRow {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  int rank = 0;
  double arctan = 0.0;   // (2/pi) sum arctan(sigma_i)
  double nuclear = 0.0;  // sum sigma_i
};

/// Grid over (sigma1, sigma2) in [0, sigma_max]^2 with `steps` points per axis.
std::vector<RankProfileRow> rank_approx_profile(double sigma_max, int steps);

/// CSV with header "sigma1,sigma2,rank,arctan,nuclear".
void write_rank_profile_csv(const std::vector<RankProfileRow>& rows, std::ostream& out);

}  // namespace arm
