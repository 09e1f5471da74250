#include "arm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>

namespace arm {
namespace {

std::mt19937_64 restart_engine(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

Index count_distinct_rows(const Matrix& points) {
  std::set<std::vector<double>> seen;
  for (Index i = 0; i < points.rows(); ++i) {
    std::vector<double> row(points.cols());
    for (Index j = 0; j < points.cols(); ++j) row[j] = points(i, j);
    seen.insert(std::move(row));
  }
  return static_cast<Index>(seen.size());
}

Matrix seed_plus_plus(const Matrix& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  Matrix centers(k, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));

  Vector d2(n);
  for (Index i = 0; i < n; ++i) d2[i] = (points.row(i) - centers.row(0)).squaredNorm();

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int c = 1; c < k; ++c) {
    const double total = d2.sum();
    Index chosen = 0;
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += d2[i];
        if (acc > target && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = points.row(chosen);
    for (Index i = 0; i < n; ++i) d2[i] = std::min(d2[i], (points.row(i) - centers.row(c)).squaredNorm());
  }
  return centers;
}

struct LloydRun {
  std::vector<int> assign;
  Matrix centers;
  double inertia = 0.0;
  bool empty_cluster = false;
};

LloydRun lloyd(const Matrix& points, Matrix centers, int max_iters) {
  const Index n = points.rows();
  const int k = static_cast<int>(centers.rows());
  LloydRun run;
  run.assign.assign(n, -1);

  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.assign[i] != best) {
        run.assign[i] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;

    Matrix sums = Matrix::Zero(k, points.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(run.assign[i]) += points.row(i);
      ++counts[run.assign[i]];
    }
    for (int c = 0; c < k; ++c)
      if (counts[c] > 0) centers.row(c) = sums.row(c) / static_cast<double>(counts[c]);
  }

  std::vector<Index> counts(k, 0);
  for (Index i = 0; i < n; ++i) {
    run.inertia += (points.row(i) - centers.row(run.assign[i])).squaredNorm();
    ++counts[run.assign[i]];
  }
  run.empty_cluster = std::any_of(counts.begin(), counts.end(), [](Index c) { return c == 0; });
  run.centers = std::move(centers);
  return run;
}

}  // namespace

void SpectralConfig::validate(Index n) const {
  if (k < 1) throw std::invalid_argument("cluster count k must be at least 1");
  if (k > n)
    throw std::invalid_argument("cluster count k = " + std::to_string(k) + " exceeds the number of samples " +
                                std::to_string(n));
  if (restarts < 1) throw std::invalid_argument("restarts must be at least 1");
  if (kmeans_max_iters < 1) throw std::invalid_argument("kmeans_max_iters must be at least 1");
}

SpectralEmbedding spectral_embed(const Matrix& w, int k) {
  if (w.rows() != w.cols()) throw std::invalid_argument("affinity matrix must be square");
  const Index n = w.rows();
  if (k < 1 || k > n)
    throw std::invalid_argument("cluster count k = " + std::to_string(k) + " must lie in [1, " + std::to_string(n) +
                                "]");
  if (!w.allFinite() || (w.array() < 0.0).any())
    throw std::invalid_argument("affinity matrix must be finite and non-negative");

  SpectralEmbedding out;
  const Vector degree = w.rowwise().sum();
  Vector inv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    if (degree[i] > 0.0) {
      inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
    } else {
      inv_sqrt[i] = 0.0;
      out.isolated.push_back(i);
    }
  }

  Matrix lap = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  lap.diagonal().array() += 1.0;
  lap = 0.5 * (lap + lap.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(lap);
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition of the normalized Laplacian failed");

  out.eigenvalues = eig.eigenvalues().head(k);
  out.eigvecs = eig.eigenvectors().leftCols(k);
  out.points = out.eigvecs;
  for (Index i = 0; i < n; ++i) {
    const double norm = out.points.row(i).norm();
    if (norm > 0.0) out.points.row(i) /= norm;
  }
  return out;
}

KMeansResult kmeans(const Matrix& points, const SpectralConfig& cfg) {
  cfg.validate(points.rows());
  if (!points.allFinite()) throw std::invalid_argument("k-means input contains non-finite entries");

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  bool any_empty = false;
  for (int r = 0; r < cfg.restarts; ++r) {
    auto rng = restart_engine(cfg.seed, r);
    LloydRun run = lloyd(points, seed_plus_plus(points, cfg.k, rng), cfg.kmeans_max_iters);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.centers = std::move(run.centers);
      best.labels.ids = std::move(run.assign);
      best.labels.k = cfg.k;
      any_empty = run.empty_cluster;
    }
  }
  best.degenerate = any_empty || count_distinct_rows(points) < cfg.k;
  return best;
}

NcutsResult ncuts(const Matrix& w, const SpectralConfig& cfg) {
  cfg.validate(w.rows());
  SpectralEmbedding emb = spectral_embed(w, cfg.k);
  KMeansResult km = kmeans(emb.points, cfg);
  return {std::move(km.labels), km.degenerate, std::move(emb.isolated)};
}

}  // namespace arm
