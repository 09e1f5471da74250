#pragma once

#include <vector>

#include <Eigen/Cholesky>

#include "arm/prox.hpp"
#include "arm/types.hpp"

namespace arm {

/// Rank term used for the J block.
enum class RankSurrogate {
  Arctan,   // sum_i arctan(sigma_i(J))
  Nuclear,  // ||J||_*, the low-rank representation baseline
};

struct SolverConfig {
  double lambda = 2.0;
  double mu0 = 10.0;
  double rho = 1.05;
  ErrorModel error_model = ErrorModel::L21;
  double rel_tol = 1e-5;
  int max_iters = 150;
  DcConfig dc{};
  // Evaluates the augmented Lagrangian around every block update and counts
  // increases. Costs one extra objective evaluation per block.
  bool check_descent = false;

  void validate() const;

  /// lambda = 2, mu0 = 10, rho = 1.05, l21 errors (motion segmentation).
  static SolverConfig motion_preset();
  /// lambda = 1e-5, mu0 = 1.7, rho = 1.03, l1 errors (face clustering).
  static SolverConfig face_preset();
};

/// Factorization of (I + X^T X), reused by every Z update.
class SystemCache {
public:
  explicit SystemCache(const Matrix& x);

  /// Returns (I + X^T X)^{-1} rhs.
  Matrix solve(const Matrix& rhs) const;
  Index size() const noexcept { return n_; }

private:
  Index n_;
  Eigen::LLT<Matrix> llt_;
};

SystemCache precompute_system(const Matrix& x);

struct SolverState {
  Matrix z;   // n x n
  Matrix j;   // n x n
  Matrix e;   // m x n
  Matrix y1;  // m x n
  Matrix y2;  // n x n
  double mu = 0.0;
  int iter = 0;

  /// J = I, E = 0, Y1 = Y2 = 0 (Z is set by the first update).
  static SolverState initial(const Matrix& x, double mu0);
};

Matrix update_z(const SystemCache& cache, const Matrix& x, const Matrix& e, const Matrix& j, const Matrix& y1,
                const Matrix& y2, double mu);

struct JUpdate {
  Matrix j;
  Vector sigma;  // singular values of j
  int dc_iters = 0;
  bool dc_converged = true;
};

/// Prox of the arctangent rank at Z - Y2 / mu.
JUpdate update_j(const Matrix& z, const Matrix& y2, double mu, const DcConfig& dc = {});

/// Singular value thresholding at Z - Y2 / mu with threshold 1 / mu.
JUpdate update_j_nuclear(const Matrix& z, const Matrix& y2, double mu);

/// Closed-form minimizer of lambda ||E||_l + <Y1, X - XZ - E> + mu/2 ||X - XZ - E||_F^2.
Matrix update_e(const Matrix& x, const Matrix& z, const Matrix& y1, double mu, double lambda, ErrorModel model);

struct Multipliers {
  Matrix y1;
  Matrix y2;
};

Multipliers update_multipliers(const Matrix& y1, const Matrix& y2, const Matrix& x, const Matrix& z, const Matrix& e,
                               const Matrix& j, double mu);

/// ||E||_F^2, ||E||_1 or ||E||_{2,1}.
double error_norm(const Matrix& e, ErrorModel model);

/// sum_i arctan(sigma_i(J)) + lambda ||E||_l.
double objective_value(const Matrix& j, const Matrix& e, double lambda, ErrorModel model);

/// Same objective with ||J||_* as the rank term.
double nuclear_objective_value(const Matrix& j, const Matrix& e, double lambda, ErrorModel model);

/// Augmented Lagrangian L(J, Z, E, Y1, Y2, mu) for the chosen rank surrogate.
double augmented_lagrangian(const Matrix& x, const SolverState& s, double lambda, ErrorModel model,
                            RankSurrogate surrogate);

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;     // rank term of the solver's surrogate + lambda ||E||_l
  double r1 = 0.0;            // ||X - XZ - E||_F / ||X||_F
  double r2 = 0.0;            // ||J - Z||_F / ||X||_F
  double mu = 0.0;            // penalty used in this iteration
  int dc_iters = 0;
  double arctan_rank = 0.0;   // sum_i arctan(sigma_i(J))
  double nuclear_norm = 0.0;  // ||J||_*
  double y1_max = 0.0;        // max |Y1| after the multiplier update
  double y2_max = 0.0;
};

struct SolveResult {
  Matrix z;
  Matrix e;
  Matrix j;
  std::vector<IterationRecord> trace;
  bool converged = false;
  // Number of block updates that increased the augmented Lagrangian by more
  // than a relative 1e-9; only counted when check_descent is set.
  int descent_violations = 0;
  // X^T X invertible (full column rank X). The boundedness argument for the
  // iterates needs it; the algorithm does not.
  bool gram_invertible = false;
  bool dc_all_converged = true;

  int iterations() const noexcept { return static_cast<int>(trace.size()); }
};

/// Alternates Z, J, E and multiplier updates with mu <- rho mu until
/// max(r1, r2) <= rel_tol or max_iters. Throws NumericalError if the state
/// becomes non-finite.
SolveResult solve(const Matrix& x, const SolverConfig& cfg, RankSurrogate surrogate);

inline SolveResult solve_arm(const Matrix& x, const SolverConfig& cfg) {
  return solve(x, cfg, RankSurrogate::Arctan);
}

inline SolveResult solve_lrr_baseline(const Matrix& x, const SolverConfig& cfg) {
  return solve(x, cfg, RankSurrogate::Nuclear);
}

/// Partial sums of sum_t mu^{t+1} / (mu^t)^2 and sum_t 1 / mu^t for the
/// geometric schedule mu^t = mu0 rho^t over `terms` iterations. Both series
/// converge for rho > 1.
struct MuScheduleSums {
  double ratio_sum = 0.0;
  double inverse_sum = 0.0;
};

MuScheduleSums mu_schedule_sums(double mu0, double rho, int terms);

}  // namespace arm
