#include "arm/solver.hpp"

#include <cmath>
#include <limits>

#include "arm/linalg.hpp"

namespace arm {
namespace {

void require_shape(const Matrix& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols)
    throw std::invalid_argument(std::string(name) + " has shape " + std::to_string(m.rows()) + "x" +
                                std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                                std::to_string(cols));
}

void require_finite_state(const SolverState& s) {
  if (!s.z.allFinite() || !s.j.allFinite() || !s.e.allFinite() || !s.y1.allFinite() || !s.y2.allFinite())
    throw NumericalError("solver state became non-finite at iteration " + std::to_string(s.iter));
}

double rank_term(const Vector& sigma, RankSurrogate surrogate) {
  return surrogate == RankSurrogate::Arctan ? arctan_rank(sigma) : sigma.sum();
}

struct DescentMonitor {
  const Matrix& x;
  const SolverConfig& cfg;
  RankSurrogate surrogate;
  int violations = 0;
  double last = 0.0;

  void reset(const SolverState& s) { last = augmented_lagrangian(x, s, cfg.lambda, cfg.error_model, surrogate); }

  void step(const SolverState& s) {
    const double now = augmented_lagrangian(x, s, cfg.lambda, cfg.error_model, surrogate);
    if (now > last + 1e-9 * std::max(1.0, std::abs(last))) ++violations;
    last = now;
  }
};

}  // namespace

void SolverConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(mu0 > 0.0) || !std::isfinite(mu0)) throw std::invalid_argument("mu0 must be positive");
  if (!(rho > 1.0) || !std::isfinite(rho)) throw std::invalid_argument("rho must be greater than 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("rel_tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be at least 1");
  dc.validate();
}

SolverConfig SolverConfig::motion_preset() { return SolverConfig{}; }

SolverConfig SolverConfig::face_preset() {
  SolverConfig cfg;
  cfg.lambda = 1e-5;
  cfg.mu0 = 1.7;
  cfg.rho = 1.03;
  cfg.error_model = ErrorModel::L1;
  return cfg;
}

SystemCache::SystemCache(const Matrix& x) : n_(x.cols()) {
  if (!x.allFinite()) throw NumericalError("data matrix contains non-finite entries");
  Matrix gram = Matrix::Identity(n_, n_);
  gram.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose());
  llt_.compute(gram);
  if (llt_.info() != Eigen::Success) throw NumericalError("Cholesky factorization of I + X^T X failed");
}

Matrix SystemCache::solve(const Matrix& rhs) const { return llt_.solve(rhs); }

SystemCache precompute_system(const Matrix& x) { return SystemCache(x); }

SolverState SolverState::initial(const Matrix& x, double mu0) {
  const Index m = x.rows(), n = x.cols();
  return {Matrix::Zero(n, n), Matrix::Identity(n, n), Matrix::Zero(m, n), Matrix::Zero(m, n), Matrix::Zero(n, n),
          mu0, 0};
}

Matrix update_z(const SystemCache& cache, const Matrix& x, const Matrix& e, const Matrix& j, const Matrix& y1,
                const Matrix& y2, double mu) {
  const Index n = x.cols();
  require_shape(e, x.rows(), n, "E");
  require_shape(y1, x.rows(), n, "Y1");
  require_shape(j, n, n, "J");
  require_shape(y2, n, n, "Y2");
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  Matrix rhs = x.transpose() * (x - e + y1 / mu) + j + y2 / mu;
  return cache.solve(rhs);
}

JUpdate update_j(const Matrix& z, const Matrix& y2, double mu, const DcConfig& dc) {
  MatrixProx p = prox_arctan_matrix(z - y2 / mu, mu, dc);
  return {std::move(p.value), std::move(p.sigma), p.dc_iterations, p.dc_converged};
}

JUpdate update_j_nuclear(const Matrix& z, const Matrix& y2, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("mu must be positive");
  const Svd svd = thin_svd(z - y2 / mu);
  Vector sigma = (svd.s.array() - 1.0 / mu).cwiseMax(0.0).matrix();
  return {svd.reconstruct(sigma), sigma, 0, true};
}

Matrix update_e(const Matrix& x, const Matrix& z, const Matrix& y1, double mu, double lambda, ErrorModel model) {
  if (!(mu > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("mu and lambda must be positive");
  const Matrix residual = x - x * z;
  switch (model) {
    case ErrorModel::Frobenius: return (y1 + mu * residual) / (mu + 2.0 * lambda);
    case ErrorModel::L1: return shrink_l1(residual + y1 / mu, lambda / mu);
    case ErrorModel::L21: return shrink_l21(residual + y1 / mu, lambda / mu);
  }
  throw std::logic_error("unhandled error model");
}

Multipliers update_multipliers(const Matrix& y1, const Matrix& y2, const Matrix& x, const Matrix& z, const Matrix& e,
                               const Matrix& j, double mu) {
  return {y1 + mu * (x - x * z - e), y2 + mu * (j - z)};
}

double error_norm(const Matrix& e, ErrorModel model) {
  switch (model) {
    case ErrorModel::Frobenius: return e.squaredNorm();
    case ErrorModel::L1: return e.cwiseAbs().sum();
    case ErrorModel::L21: return e.colwise().norm().sum();
  }
  throw std::logic_error("unhandled error model");
}

double objective_value(const Matrix& j, const Matrix& e, double lambda, ErrorModel model) {
  return arctan_rank(singular_values(j)) + lambda * error_norm(e, model);
}

double nuclear_objective_value(const Matrix& j, const Matrix& e, double lambda, ErrorModel model) {
  return singular_values(j).sum() + lambda * error_norm(e, model);
}

double augmented_lagrangian(const Matrix& x, const SolverState& s, double lambda, ErrorModel model,
                            RankSurrogate surrogate) {
  const Matrix r1 = x - x * s.z - s.e;
  const Matrix r2 = s.j - s.z;
  return rank_term(singular_values(s.j), surrogate) + lambda * error_norm(s.e, model) + s.y1.cwiseProduct(r1).sum() +
         s.y2.cwiseProduct(r2).sum() + 0.5 * s.mu * (r1.squaredNorm() + r2.squaredNorm());
}

SolveResult solve(const Matrix& x, const SolverConfig& cfg, RankSurrogate surrogate) {
  cfg.validate();
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("data matrix must be non-empty");
  const SystemCache cache(x);

  SolveResult result;
  {
    const Vector sx = singular_values(x);
    const Index n = x.cols();
    result.gram_invertible = x.rows() >= n && sx.size() == n && sx[n - 1] > sx[0] * n * std::numeric_limits<double>::epsilon();
  }

  const double x_norm = std::max(x.norm(), std::numeric_limits<double>::min());
  SolverState s = SolverState::initial(x, cfg.mu0);
  DescentMonitor monitor{x, cfg, surrogate};

  for (int t = 0; t < cfg.max_iters; ++t) {
    s.iter = t;
    if (cfg.check_descent) monitor.reset(s);

    s.z = update_z(cache, x, s.e, s.j, s.y1, s.y2, s.mu);
    if (cfg.check_descent) monitor.step(s);

    JUpdate ju = surrogate == RankSurrogate::Arctan ? update_j(s.z, s.y2, s.mu, cfg.dc)
                                                    : update_j_nuclear(s.z, s.y2, s.mu);
    s.j = std::move(ju.j);
    result.dc_all_converged = result.dc_all_converged && ju.dc_converged;
    if (cfg.check_descent) monitor.step(s);

    s.e = update_e(x, s.z, s.y1, s.mu, cfg.lambda, cfg.error_model);
    if (cfg.check_descent) monitor.step(s);

    const Matrix r1 = x - x * s.z - s.e;
    const Matrix r2 = s.j - s.z;
    s.y1 += s.mu * r1;
    s.y2 += s.mu * r2;
    require_finite_state(s);

    IterationRecord rec;
    rec.iter = t + 1;
    rec.arctan_rank = arctan_rank(ju.sigma);
    rec.nuclear_norm = ju.sigma.sum();
    rec.objective = (surrogate == RankSurrogate::Arctan ? rec.arctan_rank : rec.nuclear_norm) +
                    cfg.lambda * error_norm(s.e, cfg.error_model);
    rec.r1 = r1.norm() / x_norm;
    rec.r2 = r2.norm() / x_norm;
    rec.mu = s.mu;
    rec.dc_iters = ju.dc_iters;
    rec.y1_max = s.y1.cwiseAbs().maxCoeff();
    rec.y2_max = s.y2.cwiseAbs().maxCoeff();
    result.trace.push_back(rec);

    s.mu *= cfg.rho;
    if (std::max(rec.r1, rec.r2) <= cfg.rel_tol) {
      result.converged = true;
      break;
    }
  }

  result.z = std::move(s.z);
  result.e = std::move(s.e);
  result.j = std::move(s.j);
  result.descent_violations = monitor.violations;
  return result;
}

MuScheduleSums mu_schedule_sums(double mu0, double rho, int terms) {
  MuScheduleSums sums;
  double mu = mu0;
  for (int t = 0; t < terms; ++t) {
    const double next = mu * rho;
    sums.ratio_sum += next / (mu * mu);
    sums.inverse_sum += 1.0 / mu;
    mu = next;
  }
  return sums;
}

}  // namespace arm
