#pragma once

#include "arm/affinity.hpp"
#include "arm/solver.hpp"
#include "arm/spectral.hpp"

namespace arm {

struct PipelineConfig {
  SolverConfig solver{};
  SpectralConfig spectral{};
  RankSurrogate surrogate = RankSurrogate::Arctan;
  int alpha = 2;
  double svd_rel_tol = 1e-6;
};

struct ClusteringRun {
  SolveResult solve;
  AffinityGraph graph;
  NcutsResult clusters;
};

/// Subspace clustering of the columns of X: solve for Z, build the angular
/// affinity from its skinny SVD, then normalized spectral clustering.
ClusteringRun cluster_subspaces(const Matrix& x, const PipelineConfig& cfg);

}  // namespace arm
