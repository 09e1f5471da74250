#pragma once

#include <cstdint>
#include <vector>

#include "arm/types.hpp"

namespace arm {

struct SpectralConfig {
  int k = 2;
  std::uint64_t seed = 0;
  int restarts = 20;
  int kmeans_max_iters = 300;

  void validate(Index n) const;
};

struct SpectralEmbedding {
  Matrix points;       // n x k, rows normalized to unit length (zero rows stay zero)
  Matrix eigvecs;      // n x k, raw eigenvectors of the normalized Laplacian
  Vector eigenvalues;  // k smallest, ascending
  std::vector<Index> isolated;  // zero-degree vertices
};

/// Eigenvectors of L = I - D^{-1/2} W D^{-1/2} for the k smallest eigenvalues.
/// Zero-degree vertices get D^{-1/2} = 0.
SpectralEmbedding spectral_embed(const Matrix& w, int k);

struct KMeansResult {
  ClusterLabels labels;
  Matrix centers;  // k x d
  double inertia = 0.0;
  // Fewer distinct points than clusters, or a cluster ended empty.
  bool degenerate = false;
};

/// Best of cfg.restarts runs of Lloyd's algorithm with k-means++ seeding.
/// Each restart draws from its own generator seeded by (cfg.seed, restart).
/// Rows of `points` are the samples.
KMeansResult kmeans(const Matrix& points, const SpectralConfig& cfg);

struct NcutsResult {
  ClusterLabels labels;
  bool degenerate = false;
  std::vector<Index> isolated;
};

/// Normalized spectral clustering: spectral_embed followed by kmeans.
NcutsResult ncuts(const Matrix& w, const SpectralConfig& cfg);

}  // namespace arm
