#include "arm/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

namespace arm {
namespace {

Matrix gaussian_matrix(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

Matrix orthonormal_columns(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  return qr.householderQ() * Matrix::Identity(a.rows(), a.cols());
}

}  // namespace

SubspaceSpec SubspaceSpec::uniform(int ambient_dim, int k, int d, int n, std::uint64_t seed, SubspaceMode mode) {
  return {ambient_dim, std::vector<int>(k, d), std::vector<int>(k, n), seed, mode};
}

void SubspaceSpec::validate() const {
  if (ambient_dim < 1) throw std::invalid_argument("ambient dimension must be positive");
  if (dims.empty()) throw std::invalid_argument("need at least one subspace");
  if (dims.size() != points.size()) throw std::invalid_argument("dims and points must have the same length");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (dims[i] < 1 || dims[i] > ambient_dim)
      throw std::invalid_argument("subspace dimension must lie in [1, ambient dimension]");
    if (points[i] < 1) throw std::invalid_argument("every subspace needs at least one point");
  }
  const int total = std::accumulate(dims.begin(), dims.end(), 0);
  if (mode == SubspaceMode::Independent && total > ambient_dim)
    throw std::invalid_argument("independent subspaces need sum of dimensions (" + std::to_string(total) +
                                ") <= ambient dimension (" + std::to_string(ambient_dim) + ")");
}

SyntheticData generate_subspaces(const SubspaceSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  const Index m = spec.ambient_dim;
  const std::size_t k = spec.dims.size();

  SyntheticData out;
  if (spec.mode == SubspaceMode::Independent) {
    const int total = std::accumulate(spec.dims.begin(), spec.dims.end(), 0);
    const Matrix q = orthonormal_columns(gaussian_matrix(m, total, rng));
    Index offset = 0;
    for (int d : spec.dims) {
      out.bases.push_back(q.middleCols(offset, d));
      offset += d;
    }
  } else {
    for (int d : spec.dims) out.bases.push_back(orthonormal_columns(gaussian_matrix(m, d, rng)));
  }

  const Index n = std::accumulate(spec.points.begin(), spec.points.end(), Index{0});
  Matrix ordered(m, n);
  std::vector<int> ordered_labels;
  ordered_labels.reserve(n);
  Index col = 0;
  for (std::size_t s = 0; s < k; ++s) {
    Matrix coeff = gaussian_matrix(spec.dims[s], spec.points[s], rng);
    for (Index j = 0; j < coeff.cols(); ++j) {
      double norm = coeff.col(j).norm();
      while (norm == 0.0) {
        coeff.col(j) = gaussian_matrix(spec.dims[s], 1, rng);
        norm = coeff.col(j).norm();
      }
      coeff.col(j) /= norm;
    }
    ordered.middleCols(col, coeff.cols()) = out.bases[s] * coeff;
    for (Index j = 0; j < coeff.cols(); ++j) ordered_labels.push_back(static_cast<int>(s));
    col += coeff.cols();
  }

  std::vector<Index> perm(n);
  std::iota(perm.begin(), perm.end(), Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  out.x.resize(m, n);
  out.labels.ids.resize(n);
  out.labels.k = static_cast<int>(k);
  for (Index j = 0; j < n; ++j) {
    out.x.col(j) = ordered.col(perm[j]);
    out.labels.ids[j] = ordered_labels[perm[j]];
  }
  return out;
}

CorruptionModel parse_corruption_model(const std::string& name) {
  if (name == "none") return CorruptionModel::None;
  if (name == "gaussian") return CorruptionModel::Gaussian;
  if (name == "sparse") return CorruptionModel::Sparse;
  if (name == "sample" || name == "sample_specific" || name == "sample-specific") return CorruptionModel::SampleSpecific;
  throw std::invalid_argument("unknown corruption model '" + name + "' (expected none, gaussian, sparse or sample)");
}

std::string to_string(CorruptionModel model) {
  switch (model) {
    case CorruptionModel::None: return "none";
    case CorruptionModel::Gaussian: return "gaussian";
    case CorruptionModel::Sparse: return "sparse";
    case CorruptionModel::SampleSpecific: return "sample";
  }
  return "?";
}

void CorruptionSpec::validate() const {
  if (!(level >= 0.0) || !std::isfinite(level)) throw std::invalid_argument("corruption level must be non-negative");
  if ((model == CorruptionModel::Sparse || model == CorruptionModel::SampleSpecific) && level > 1.0)
    throw std::invalid_argument("corruption fraction must lie in [0, 1]");
  if (!std::isfinite(magnitude) || magnitude < 0.0) throw std::invalid_argument("magnitude must be non-negative");
}

CorruptedData corrupt(const Matrix& x, const CorruptionSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  CorruptedData out;
  out.x = x;

  switch (spec.model) {
    case CorruptionModel::None: break;
    case CorruptionModel::Gaussian:
      if (spec.level > 0.0) out.x += spec.level * gaussian_matrix(x.rows(), x.cols(), rng);
      break;
    case CorruptionModel::Sparse: {
      const auto total = static_cast<std::size_t>(x.size());
      const auto count = static_cast<std::size_t>(std::floor(spec.level * static_cast<double>(total)));
      std::vector<Index> idx(total);
      std::iota(idx.begin(), idx.end(), Index{0});
      std::shuffle(idx.begin(), idx.end(), rng);
      idx.resize(count);
      std::sort(idx.begin(), idx.end());
      std::uniform_real_distribution<double> value(-spec.magnitude, spec.magnitude);
      for (Index i : idx) out.x(i % x.rows(), i / x.rows()) = value(rng);
      out.touched = std::move(idx);
      break;
    }
    case CorruptionModel::SampleSpecific: {
      const auto n = static_cast<std::size_t>(x.cols());
      const auto count = static_cast<std::size_t>(std::floor(spec.level * static_cast<double>(n)));
      std::vector<Index> cols(n);
      std::iota(cols.begin(), cols.end(), Index{0});
      std::shuffle(cols.begin(), cols.end(), rng);
      cols.resize(count);
      std::sort(cols.begin(), cols.end());
      for (Index c : cols) {
        Vector v = gaussian_matrix(x.rows(), 1, rng);
        const double norm = v.norm();
        out.x.col(c) = norm > 0.0 ? Vector(spec.magnitude / norm * v) : Vector::Zero(x.rows());
      }
      out.touched = std::move(cols);
      break;
    }
  }
  out.e_true = out.x - x;
  return out;
}

std::vector<int> hungarian_assignment(const Matrix& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("assignment cost matrix must be square");
  // Shortest augmenting path with potentials, 1-based arrays.
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

double clustering_error(const ClusterLabels& pred, const ClusterLabels& truth) {
  if (pred.size() != truth.size())
    throw std::invalid_argument("label vectors differ in length (" + std::to_string(pred.size()) + " vs " +
                                std::to_string(truth.size()) + ")");
  if (pred.size() == 0) throw std::invalid_argument("label vectors are empty");

  const auto span = [](const ClusterLabels& l) {
    int hi = l.k;
    for (int id : l.ids) {
      if (id < 0) throw std::invalid_argument("label ids must be non-negative");
      hi = std::max(hi, id + 1);
    }
    return hi;
  };
  const int size = std::max(span(pred), span(truth));

  Matrix counts = Matrix::Zero(size, size);
  for (std::size_t i = 0; i < pred.size(); ++i) counts(pred.ids[i], truth.ids[i]) += 1.0;

  const auto assign = hungarian_assignment(counts.maxCoeff() - counts.array());
  double matched = 0.0;
  for (int r = 0; r < size; ++r) matched += counts(r, assign[r]);
  return 1.0 - matched / static_cast<double>(pred.size());
}

double block_diag_mass(const Matrix& w, const ClusterLabels& truth) {
  if (w.rows() != w.cols() || static_cast<std::size_t>(w.rows()) != truth.size())
    throw std::invalid_argument("affinity matrix and labels disagree in size");
  double within = 0.0, total = 0.0;
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < w.rows(); ++i) {
      if (i == j) continue;
      total += w(i, j);
      if (truth.ids[i] == truth.ids[j]) within += w(i, j);
    }
  }
  return total == 0.0 ? 1.0 : within / total;
}

std::vector<RankProfileRow> rank_approx_profile(double sigma_max, int steps) {
  if (steps < 2) throw std::invalid_argument("rank profile needs at least 2 steps");
  if (!(sigma_max > 0.0) || !std::isfinite(sigma_max)) throw std::invalid_argument("sigma_max must be positive");
  std::vector<RankProfileRow> rows;
  rows.reserve(static_cast<std::size_t>(steps) * steps);
  const double h = sigma_max / (steps - 1);
  for (int a = 0; a < steps; ++a) {
    for (int b = 0; b < steps; ++b) {
      RankProfileRow r;
      r.sigma1 = a == steps - 1 ? sigma_max : a * h;
      r.sigma2 = b == steps - 1 ? sigma_max : b * h;
      r.rank = (r.sigma1 > 0.0) + (r.sigma2 > 0.0);
      r.arctan = 2.0 / std::numbers::pi * (std::atan(r.sigma1) + std::atan(r.sigma2));
      r.nuclear = r.sigma1 + r.sigma2;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_rank_profile_csv(const std::vector<RankProfileRow>& rows, std::ostream& out) {
  out << "sigma1,sigma2,rank,arctan,nuclear\n" << std::setprecision(17);
  for (const auto& r : rows)
    out << r.sigma1 << ',' << r.sigma2 << ',' << r.rank << ',' << r.arctan << ',' << r.nuclear << '\n';
}

}  // namespace arm
