#pragma once

#include "arm/types.hpp"

namespace arm {

/// Stopping rule for the difference-of-convex iteration that evaluates the
/// arctangent prox on a singular spectrum.
struct DcConfig {
  int max_iters = 50;
  double tol = 1e-8;  // infinity-norm step

  void validate() const;
};

/// Below this penalty the scalar problem arctan(s) + mu/2 (s - a)^2 can be
/// nonconvex on s >= 0; at or above it the problem is strictly convex.
/// Equals max_s 2s / (1 + s^2)^2 = 3 sqrt(3) / 8.
inline constexpr double kArctanConvexityPenalty = 0.649519052838329;

/// Sum of arctan over a (non-negative) singular spectrum.
double arctan_rank(const Vector& sigma);

/// Gradient weights of arctan_rank: 1 / (1 + s^2), which equals 1 at s = 0.
Vector arctan_weights(const Vector& sigma);

/// f(s) + mu/2 ||s - s_a||^2 with f the arctangent rank.
double arctan_prox_objective(const Vector& sigma, const Vector& sigma_a, double mu);

/// Entrywise soft threshold: argmin_E tau ||E||_1 + 1/2 ||E - Q||_F^2.
Matrix shrink_l1(const Matrix& q, double tau);

/// Column shrinkage: argmin_E tau ||E||_{2,1} + 1/2 ||E - Q||_F^2.
Matrix shrink_l21(const Matrix& q, double tau);

struct DcResult {
  Vector sigma;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes arctan_rank(s) + mu/2 ||s - s_a||^2 over s >= 0 by the DC
/// iteration s <- (s_a - w(s) / mu)_+, started at s_a.
///
/// The problem is separable. For mu below kArctanConvexityPenalty a scalar
/// component can have two local minima; the iteration is then also run from
/// s = 0 and each component keeps whichever fixed point has the lower
/// objective. `iterations` is the largest count over the runs performed;
/// `converged` is false if any run hit max_iters.
DcResult prox_arctan_vector(const Vector& sigma_a, double mu, const DcConfig& cfg = {});

struct MatrixProx {
  Matrix value;
  Vector sigma;  // singular values of `value`
  int dc_iterations = 0;
  bool dc_converged = false;
};

/// argmin_Z sum_i arctan(sigma_i(Z)) + mu/2 ||Z - A||_F^2, by applying
/// prox_arctan_vector to the singular values of A and keeping its singular
/// vectors.
MatrixProx prox_arctan_matrix(const Matrix& a, double mu, const DcConfig& cfg = {});

/// Gradient of sum_i arctan(sigma_i(A)): U diag(1 / (1 + sigma^2)) V^T.
/// Only a true gradient when the singular values are distinct and positive.
Matrix spectral_gradient(const Matrix& a);

/// Singular value thresholding, the prox of tau ||.||_*.
Matrix svt_nuclear(const Matrix& a, double tau);

}  // namespace arm
