#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "test_support.hpp"

using namespace ltlrec;

TEST(MatrixExponential, Zero) {
  EXPECT_EQ(matrix_exponential(Matrix::Zero(3, 3)), Matrix::Identity(3, 3));
}

TEST(MatrixExponential, Diagonal) {
  const Matrix e = matrix_exponential(-Matrix::Identity(2, 2), 1.0);
  EXPECT_NEAR(e(0, 0), std::exp(-1.0), 1e-15);
  EXPECT_EQ(e(0, 1), 0.0);
}

TEST(MatrixExponential, Nilpotent) {
  const Matrix n = (Matrix(2, 2) << 0, 1, 0, 0).finished();
  const Matrix e = matrix_exponential(n, 3.0);
  EXPECT_NEAR(e(0, 1), 3.0, 1e-14);
  EXPECT_NEAR(e(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(e(1, 0), 0.0, 1e-15);
}

// Independent implementation as the oracle, across every Pade branch.
TEST(MatrixExponential, AgreesWithEigenUnsupported) {
  std::mt19937_64 rng(51);
  for (int k = 0; k < 60; ++k) {
    const Eigen::Index n = 1 + k % 9;
    const double scale = std::pow(10.0, -3.0 + 4.0 * (k % 10) / 9.0);
    const Matrix m = ltlrec::testing::random_matrix(rng, n, n, scale);
    const Matrix ours = matrix_exponential(m);
    const Matrix oracle = m.exp();
    EXPECT_LE((ours - oracle).norm(), 1e-11 * std::max(1.0, oracle.norm())) << "scale " << scale;
  }
}

TEST(MatrixExponential, RejectsBadInput) {
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(matrix_exponential(bad), Error);
  EXPECT_THROW(matrix_exponential(Matrix::Identity(2, 2), -1.0), Error);
  EXPECT_THROW(matrix_exponential(Matrix::Zero(2, 3)), Error);
}

TEST(FlowPropagate, ZeroStepIsIdentity) {
  const Vector z = (Vector(2) << 1, 2).finished();
  EXPECT_EQ(flow_propagate(-Matrix::Identity(2, 2), Vector::Ones(2), z, 0.0), z);
}

TEST(FlowPropagate, ScalarAffine) {
  // z' = -z + 1 from 0 gives 1 - e^{-t}.
  const Vector z = flow_propagate(-Matrix::Identity(1, 1), Vector::Ones(1), Vector::Zero(1), 1.0);
  EXPECT_NEAR(z(0), 1.0 - std::exp(-1.0), 1e-15);
}

TEST(FlowPropagate, SemigroupProperty) {
  std::mt19937_64 rng(52);
  const Matrix F = ltlrec::testing::random_hurwitz(rng, 4);
  const Vector g = ltlrec::testing::random_matrix(rng, 4, 1);
  const Vector z = ltlrec::testing::random_matrix(rng, 4, 1);
  const Vector once = flow_propagate(F, g, z, 0.7);
  const Vector twice = flow_propagate(F, g, flow_propagate(F, g, z, 0.3), 0.4);
  EXPECT_LE((once - twice).norm(), 1e-13);
}

TEST(FlowPropagate, StableFlowDecaysToEquilibrium) {
  const Matrix F = -Matrix::Identity(2, 2);
  const Vector g = (Vector(2) << 2, -2).finished();
  Vector z = Vector::Zero(2);
  double gap = (z - g).norm();
  for (int k = 0; k < 20; ++k) {
    z = flow_propagate(F, g, z, 0.5);
    const double next = (z - g).norm();
    EXPECT_LT(next, gap);
    gap = next;
  }
}
