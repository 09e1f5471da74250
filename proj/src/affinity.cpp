#include "arm/affinity.hpp"

#include <algorithm>
#include <cmath>

namespace arm {

Svd skinny_svd(const Matrix& z, double rel_tol) {
  if (!(rel_tol > 0.0)) throw std::invalid_argument("skinny SVD tolerance must be positive");
  Svd full = thin_svd(z);
  Index rank = 0;
  if (full.s.size() > 0 && full.s[0] > 0.0) {
    const double cut = rel_tol * full.s[0];
    while (rank < full.s.size() && full.s[rank] > cut) ++rank;
  }
  return {full.u.leftCols(rank), full.s.head(rank), full.v.leftCols(rank)};
}

AffinityGraph build_affinity(const Matrix& z, int alpha, double rel_tol) {
  if (alpha < 1) throw std::invalid_argument("alpha must be a positive integer");
  if (z.rows() != z.cols()) throw std::invalid_argument("coefficient matrix must be square");

  const Index n = z.rows();
  const Svd svd = skinny_svd(z, rel_tol);
  Matrix embed = svd.u * svd.s.cwiseSqrt().asDiagonal();

  AffinityGraph g;
  g.alpha = alpha;
  g.rank = svd.s.size();
  g.w = Matrix::Zero(n, n);

  Vector norms = embed.rowwise().norm();
  const double floor = (norms.size() ? norms.maxCoeff() : 0.0) * 1e-12;
  for (Index i = 0; i < n; ++i) {
    if (norms[i] > floor && norms[i] > 0.0) {
      embed.row(i) /= norms[i];
    } else {
      embed.row(i).setZero();
      g.isolated.push_back(i);
    }
  }

  const Matrix cosines = embed * embed.transpose();
  const int power = 2 * alpha;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double c = std::clamp(cosines(i, j), -1.0, 1.0);
      const double v = std::pow(c, power);
      g.w(i, j) = v;
      g.w(j, i) = v;
    }
  }
  for (Index i = 0; i < n; ++i) g.w(i, i) = norms[i] > floor && norms[i] > 0.0 ? 1.0 : 0.0;
  return g;
}

}  // namespace arm
