#pragma once

#include "arm/types.hpp"

namespace arm {

/// Thin SVD A = U diag(s) V^T with s non-increasing.
struct Svd {
  Matrix u;
  Vector s;
  Matrix v;

  Matrix reconstruct() const { return u * s.asDiagonal() * v.transpose(); }
  Matrix reconstruct(const Vector& values) const { return u * values.asDiagonal() * v.transpose(); }
};

/// Throws NumericalError on non-finite input or if the decomposition fails.
Svd thin_svd(const Matrix& a);

Vector singular_values(const Matrix& a);

}  // namespace arm
