#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "arm/linalg.hpp"
#include "arm/prox.hpp"
#include "oracles.hpp"

using arm::Matrix;
using arm::Vector;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

}  // namespace

TEST(ArctanRank, KnownValues) {
  EXPECT_DOUBLE_EQ(arm::arctan_rank(vec({0.0, 0.0})), 0.0);
  EXPECT_DOUBLE_EQ(arm::arctan_rank(vec({1.0})), std::numbers::pi / 4);
  const double scaled = 2.0 / std::numbers::pi * arm::arctan_rank(vec({10.0, 10.0}));
  EXPECT_LE(std::abs(scaled - 2.0), 0.13);
}

TEST(ArctanRank, BoundedByRankAndNuclearNorm) {
  std::mt19937_64 rng(11);
  std::exponential_distribution<double> draw(0.3);
  for (int t = 0; t < 200; ++t) {
    Vector s(4);
    for (auto& v : s) v = draw(rng);
    for (double v : s) {
      const double r = 2.0 / std::numbers::pi * std::atan(v);
      EXPECT_GE(r, 0.0);
      EXPECT_LT(r, 1.0);
    }
    EXPECT_LT(arm::arctan_rank(s), s.sum());
  }
  EXPECT_EQ(arm::arctan_rank(Vector::Zero(3)), Vector::Zero(3).sum());
}

TEST(ArctanWeights, KnownValues) {
  EXPECT_DOUBLE_EQ(arm::arctan_weights(vec({0.0}))[0], 1.0);
  EXPECT_DOUBLE_EQ(arm::arctan_weights(vec({1.0}))[0], 0.5);
  EXPECT_DOUBLE_EQ(arm::arctan_weights(vec({3.0}))[0], 0.1);
  const Vector w = arm::arctan_weights(vec({0.0, 0.2, 7.0, 1e6}));
  EXPECT_TRUE((w.array() > 0.0).all() && (w.array() <= 1.0).all());
}

TEST(ShrinkL1, KnownValues) {
  EXPECT_DOUBLE_EQ(arm::shrink_l1(Matrix::Constant(1, 1, 2.0), 0.5)(0, 0), 1.5);
  EXPECT_DOUBLE_EQ(arm::shrink_l1(Matrix::Constant(1, 1, 0.3), 0.5)(0, 0), 0.0);
  EXPECT_DOUBLE_EQ(arm::shrink_l1(Matrix::Constant(1, 1, -2.0), 0.5)(0, 0), -1.5);
  // |q| == tau lands on zero.
  EXPECT_DOUBLE_EQ(arm::shrink_l1(Matrix::Constant(1, 1, 0.5), 0.5)(0, 0), 0.0);
}

TEST(ShrinkL1, MatchesScalarGridSearch) {
  std::mt19937_64 rng(3);
  const Matrix q = oracle::random_matrix(4, 4, rng);
  const Matrix e = arm::shrink_l1(q, 0.7);
  for (Eigen::Index i = 0; i < q.size(); ++i)
    EXPECT_NEAR(e.data()[i], oracle::grid_soft_threshold(q.data()[i], 0.7), 1e-4);
}

TEST(ShrinkL1, RejectsNonPositiveThreshold) {
  EXPECT_THROW(arm::shrink_l1(Matrix::Ones(2, 2), 0.0), std::invalid_argument);
  EXPECT_THROW(arm::shrink_l21(Matrix::Ones(2, 2), -1.0), std::invalid_argument);
}

TEST(ShrinkL21, KnownValues) {
  Matrix q(2, 2);
  q << 3.0, 0.3, 4.0, 0.4;
  const Matrix e = arm::shrink_l21(q, 1.0);
  EXPECT_NEAR(e(0, 0), 2.4, 1e-15);
  EXPECT_NEAR(e(1, 0), 3.2, 1e-15);
  EXPECT_EQ(e(0, 1), 0.0);
  EXPECT_EQ(e(1, 1), 0.0);
}

TEST(ShrinkL21, MatchesRadialGridSearch) {
  std::mt19937_64 rng(5);
  const Matrix q = oracle::random_matrix(5, 3, rng);
  const Matrix e = arm::shrink_l21(q, 0.9);
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    EXPECT_LE((e.col(j) - oracle::radial_column_shrink(q.col(j), 0.9)).norm(), 1e-5 * q.col(j).norm() + 1e-12);
}

TEST(ProxArctanVector, ZeroIsFixedPoint) {
  for (double mu : {0.1, 1.0, 50.0}) {
    const auto r = arm::prox_arctan_vector(Vector::Zero(2), mu);
    EXPECT_EQ(r.sigma, Vector::Zero(2));
    EXPECT_TRUE(r.converged);
  }
}

TEST(ProxArctanVector, MatchesGridOracle) {
  const auto small = arm::prox_arctan_vector(vec({1.0}), 10.0);
  EXPECT_NEAR(small.sigma[0], oracle::grid_scalar_prox(1.0, 10.0), 1e-5);

  const auto large = arm::prox_arctan_vector(vec({100.0}), 1.0);
  const double s = large.sigma[0];
  EXPECT_NEAR(s, 100.0 - 1.0 / (1.0 + s * s), 1e-6);
  EXPECT_NEAR(s, oracle::grid_scalar_prox(100.0, 1.0), 1e-6);
}

TEST(ProxArctanVector, FindsGlobalMinimumWhenNonconvex) {
  // mu = 0.3, a = 2.8: local minima near 0 and near 2.25; 0 is global.
  const auto r = arm::prox_arctan_vector(vec({2.8}), 0.3);
  const double grid = oracle::grid_scalar_prox(2.8, 0.3);
  EXPECT_NEAR(r.sigma[0], grid, 1e-5);
  EXPECT_EQ(grid, 0.0);
}

TEST(ProxArctanVector, DescentAndOrdering) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> mu_draw(0.2, 20.0);
  std::exponential_distribution<double> s_draw(0.4);
  for (int t = 0; t < 200; ++t) {
    Vector a(5);
    for (auto& v : a) v = s_draw(rng);
    std::sort(a.data(), a.data() + a.size(), std::greater<>());
    const double mu = mu_draw(rng);
    const auto r = arm::prox_arctan_vector(a, mu);
    EXPECT_LE(arm::arctan_prox_objective(r.sigma, a, mu), arm::arctan_prox_objective(a, a, mu) + 1e-14);
    EXPECT_TRUE((r.sigma.array() >= 0.0).all());
    for (Eigen::Index i = 1; i < r.sigma.size(); ++i) EXPECT_GE(r.sigma[i - 1], r.sigma[i]);
  }
}

TEST(ProxArctanVector, ComponentwiseMonotone) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> mu_draw(0.2, 20.0);
  std::uniform_real_distribution<double> s_draw(0.0, 6.0);
  std::uniform_real_distribution<double> bump(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    Vector a(4), b(4);
    for (Eigen::Index i = 0; i < 4; ++i) {
      a[i] = s_draw(rng);
      b[i] = a[i] + bump(rng);
    }
    const double mu = mu_draw(rng);
    const Vector pa = arm::prox_arctan_vector(a, mu).sigma;
    const Vector pb = arm::prox_arctan_vector(b, mu).sigma;
    EXPECT_TRUE((pa.array() <= pb.array() + 1e-9).all()) << "mu=" << mu;
  }
}

TEST(ProxArctanVector, DcIteratesDescend) {
  // Single-start DC from s_a with a tiny iteration budget, re-run with
  // growing budgets: the objective along the iterates must not increase.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> mu_draw(0.7, 5.0);
  std::uniform_real_distribution<double> s_draw(0.0, 4.0);
  for (int t = 0; t < 50; ++t) {
    Vector a(3);
    for (auto& v : a) v = s_draw(rng);
    const double mu = mu_draw(rng);
    double prev = arm::arctan_prox_objective(a, a, mu);
    for (int k = 1; k <= 15; ++k) {
      const auto r = arm::prox_arctan_vector(a, mu, {k, 0.0});
      const double now = arm::arctan_prox_objective(r.sigma, a, mu);
      EXPECT_LE(now, prev + 1e-14);
      prev = now;
    }
  }
}

TEST(ProxArctanVector, ReportsNonConvergence) {
  const auto r = arm::prox_arctan_vector(vec({2.0, 1.0}), 1.0, {1, 0.0});
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 1);
}

TEST(ProxArctanVector, RejectsInvalidInput) {
  EXPECT_THROW(arm::prox_arctan_vector(vec({1.0}), 0.0), std::invalid_argument);
  EXPECT_THROW(arm::prox_arctan_vector(vec({-1.0}), 1.0), std::invalid_argument);
  EXPECT_THROW(arm::prox_arctan_vector(vec({1.0}), 1.0, {0, 1e-8}), std::invalid_argument);
}

TEST(ProxArctanMatrix, ZeroAndDiagonal) {
  EXPECT_EQ(arm::prox_arctan_matrix(Matrix::Zero(3, 3), 1.0).value, Matrix::Zero(3, 3));

  Matrix a = Vector(vec({5.0, 5.0, 0.0})).asDiagonal();
  const Matrix z = arm::prox_arctan_matrix(a, 2.0).value;
  const double d = arm::prox_arctan_vector(vec({5.0}), 2.0).sigma[0];
  Matrix expected = Vector(vec({d, d, 0.0})).asDiagonal();
  EXPECT_LE((z - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProxArctanMatrix, BeatsRandomPerturbations) {
  std::mt19937_64 rng(31);
  const Matrix a = oracle::random_matrix(3, 3, rng, 2.0);
  const double mu = 1.5;
  const Matrix z = arm::prox_arctan_matrix(a, mu).value;
  const double best = oracle::matrix_prox_objective(z, a, mu);
  EXPECT_LE(best, oracle::matrix_prox_objective(a, a, mu));

  std::uniform_real_distribution<double> radius(0.0, 0.1);
  for (int t = 0; t < 100000; ++t) {
    Matrix delta = oracle::random_matrix(3, 3, rng);
    delta *= radius(rng) / delta.norm();
    ASSERT_LE(best, oracle::matrix_prox_objective(z + delta, a, mu) + 1e-12);
  }
  EXPECT_NEAR(best, oracle::proximal_gradient_prox(a, mu, rng), 1e-4);
}

TEST(ProxArctanMatrix, UnitarilyInvariant) {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = oracle::random_matrix(4, 3, rng, 2.0);
    const Matrix p = oracle::random_orthogonal(4, rng);
    const Matrix q = oracle::random_orthogonal(3, rng);
    const Matrix lhs = arm::prox_arctan_matrix(p * a * q.transpose(), 1.3).value;
    const Matrix rhs = p * arm::prox_arctan_matrix(a, 1.3).value * q.transpose();
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(ProxArctanMatrix, RejectsNonFinite) {
  Matrix a = Matrix::Ones(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(arm::prox_arctan_matrix(a, 1.0), arm::NumericalError);
}

TEST(SpectralGradient, KnownValues) {
  EXPECT_DOUBLE_EQ(arm::spectral_gradient(Matrix::Identity(1, 1))(0, 0), 0.5);
  EXPECT_LE((arm::spectral_gradient(3.0 * Matrix::Identity(2, 2)) - 0.1 * Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(SpectralGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(41);
  auto f = [](const Matrix& m) { return oracle::jacobi_singular_values(m).array().atan().sum(); };
  for (int t = 0; t < 10; ++t) {
    const Matrix a = oracle::random_matrix(4, 4, rng);
    const Matrix g = arm::spectral_gradient(a);
    const Matrix fd = oracle::finite_difference_gradient(f, a);
    EXPECT_LE((g - fd).norm() / fd.norm(), 1e-5);
  }
}

TEST(SvtNuclear, KnownValues) {
  EXPECT_EQ(arm::svt_nuclear(Matrix::Zero(2, 2), 1.0), Matrix::Zero(2, 2));
  Matrix a = Vector(vec({2.0, 0.5})).asDiagonal();
  Matrix expected = Vector(vec({1.0, 0.0})).asDiagonal();
  EXPECT_LE((arm::svt_nuclear(a, 1.0) - expected).norm(), 1e-15);
}

TEST(SvtNuclear, ShrinksSingularValues) {
  std::mt19937_64 rng(43);
  const Matrix a = oracle::random_matrix(3, 3, rng);
  const Vector sa = oracle::jacobi_singular_values(a);
  const Vector out = oracle::jacobi_singular_values(arm::svt_nuclear(a, 0.8));
  const Vector expected = arm::shrink_l1(sa, 0.8);
  EXPECT_LE((out - expected).cwiseAbs().maxCoeff(), 1e-12);
}
