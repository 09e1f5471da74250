#pragma once

#include <vector>

#include "arm/linalg.hpp"
#include "arm/types.hpp"

namespace arm {

/// SVD truncated to the components with sigma_i > rel_tol * sigma_1.
/// A zero matrix yields empty factors.
Svd skinny_svd(const Matrix& z, double rel_tol = 1e-6);

struct AffinityGraph {
  Matrix w;  // n x n, symmetric, entries in [0, 1]
  int alpha = 2;
  Index rank = 0;                  // rank kept by the skinny SVD
  std::vector<Index> isolated;     // samples whose embedding row is zero
};

/// W_ij = (cos angle(u_i, u_j))^{2 alpha}, where u_i is row i of U Sigma^{1/2}
/// from the skinny SVD of Z. Rows of U Sigma^{1/2} that vanish are isolated
/// vertices: their whole row and column of W is 0, diagonal included.
AffinityGraph build_affinity(const Matrix& z, int alpha = 2, double rel_tol = 1e-6);

}  // namespace arm
