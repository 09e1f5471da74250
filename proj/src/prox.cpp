#include "arm/prox.hpp"

#include <cmath>

#include "arm/linalg.hpp"

namespace arm {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument(std::string(what) + " must be positive and finite");
}

void require_spectrum(const Vector& sigma) {
  for (Index i = 0; i < sigma.size(); ++i)
    if (!std::isfinite(sigma[i]) || sigma[i] < 0.0)
      throw std::invalid_argument("singular values must be finite and non-negative");
}

// Runs the DC fixed-point map from `start`.
DcResult run_dc(const Vector& sigma_a, Vector start, double mu, const DcConfig& cfg) {
  DcResult out{std::move(start), 0, false};
  for (int k = 0; k < cfg.max_iters; ++k) {
    Vector next = (sigma_a - arctan_weights(out.sigma) / mu).cwiseMax(0.0);
    const double step = sigma_a.size() ? (next - out.sigma).cwiseAbs().maxCoeff() : 0.0;
    out.sigma = std::move(next);
    out.iterations = k + 1;
    if (step <= cfg.tol) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double scalar_objective(double s, double a, double mu) {
  return std::atan(s) + 0.5 * mu * (s - a) * (s - a);
}

}  // namespace

void DcConfig::validate() const {
  if (max_iters < 1) throw std::invalid_argument("DC max_iters must be at least 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("DC tolerance must be non-negative");
}

double arctan_rank(const Vector& sigma) { return sigma.array().abs().atan().sum(); }

Vector arctan_weights(const Vector& sigma) { return (1.0 + sigma.array().square()).inverse().matrix(); }

double arctan_prox_objective(const Vector& sigma, const Vector& sigma_a, double mu) {
  return arctan_rank(sigma) + 0.5 * mu * (sigma - sigma_a).squaredNorm();
}

Matrix shrink_l1(const Matrix& q, double tau) {
  require_positive(tau, "shrinkage threshold");
  return q.unaryExpr([tau](double v) {
    const double mag = std::abs(v) - tau;
    return mag > 0.0 ? std::copysign(mag, v) : 0.0;
  });
}

Matrix shrink_l21(const Matrix& q, double tau) {
  require_positive(tau, "shrinkage threshold");
  Matrix e = Matrix::Zero(q.rows(), q.cols());
  for (Index j = 0; j < q.cols(); ++j) {
    const double norm = q.col(j).norm();
    if (norm > tau) e.col(j) = ((norm - tau) / norm) * q.col(j);
  }
  return e;
}

DcResult prox_arctan_vector(const Vector& sigma_a, double mu, const DcConfig& cfg) {
  require_positive(mu, "penalty mu");
  require_spectrum(sigma_a);
  cfg.validate();

  DcResult best = run_dc(sigma_a, sigma_a, mu, cfg);
  if (mu >= kArctanConvexityPenalty) return best;

  const DcResult low = run_dc(sigma_a, Vector::Zero(sigma_a.size()), mu, cfg);
  for (Index i = 0; i < sigma_a.size(); ++i) {
    if (scalar_objective(low.sigma[i], sigma_a[i], mu) < scalar_objective(best.sigma[i], sigma_a[i], mu))
      best.sigma[i] = low.sigma[i];
  }
  best.iterations = std::max(best.iterations, low.iterations);
  best.converged = best.converged && low.converged;
  return best;
}

MatrixProx prox_arctan_matrix(const Matrix& a, double mu, const DcConfig& cfg) {
  require_positive(mu, "penalty mu");
  const Svd svd = thin_svd(a);
  DcResult dc = prox_arctan_vector(svd.s, mu, cfg);
  return {svd.reconstruct(dc.sigma), dc.sigma, dc.iterations, dc.converged};
}

Matrix spectral_gradient(const Matrix& a) {
  const Svd svd = thin_svd(a);
  return svd.reconstruct(arctan_weights(svd.s));
}

Matrix svt_nuclear(const Matrix& a, double tau) {
  require_positive(tau, "threshold tau");
  const Svd svd = thin_svd(a);
  return svd.reconstruct((svd.s.array() - tau).cwiseMax(0.0).matrix());
}

}  // namespace arm
