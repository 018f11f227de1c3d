#include <gtest/gtest.h>

#include <algorithm>

#include "test_support.hpp"

using namespace ltlrec;

namespace {

LinearPlant robot_axis() {
  LinearPlant p;
  p.A = (Matrix(2, 2) << 0, 1, 0, -1).finished();
  p.B = (Matrix(2, 1) << 0, 1).finished();
  p.C = (Matrix(1, 2) << 1, 0).finished();
  return p;
}

Region ball_region(ObsId obs, Vector center, Norm norm, double radius) {
  Region r;
  r.obs = obs;
  std::vector<int> idx(static_cast<std::size_t>(center.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<int>(k);
  r.blocks.push_back({idx, center, norm, radius});
  r.target = center;
  return r;
}

std::vector<std::complex<double>> sorted_spectrum(const Matrix& m) {
  auto ev = eigenvalues(m);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return ev;
}

}  // namespace

TEST(Assumption5, RobotAxisPasses) { EXPECT_TRUE(check_assumption5(robot_axis()).all_passed()); }

TEST(Assumption5, ScalarIntegratorPasses) {
  LinearPlant p{Matrix::Zero(1, 1), Matrix::Ones(1, 1), Matrix::Ones(1, 1)};
  EXPECT_TRUE(check_assumption5(p).all_passed());
}

TEST(Assumption5, ZeroInputFails) {
  LinearPlant p = robot_axis();
  p.B.setZero();
  const auto report = check_assumption5(p);
  EXPECT_FALSE(report.all_passed());
  bool controllable = true;
  for (const auto& c : report.checks)
    if (c.name == "controllable") controllable = c.passed;
  EXPECT_FALSE(controllable);
}

TEST(Assumption5, NonSquareFails) {
  LinearPlant p = robot_axis();
  p.C = Matrix::Identity(2, 2);
  EXPECT_FALSE(check_assumption5(p).all_passed());
}

TEST(SteadyState, RobotAxis) {
  const auto [xi, u] = steady_state(robot_axis(), Vector::Constant(1, 2.0));
  EXPECT_NEAR(xi(0), 2.0, 1e-14);
  EXPECT_NEAR(xi(1), 0.0, 1e-14);
  EXPECT_NEAR(u(0), 0.0, 1e-14);
}

// The equilibrium solves the bordered system for random square plants.
TEST(SteadyState, RandomResiduals) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 2 + k % 5, m = 1 + k % 2;
    LinearPlant p{ltlrec::testing::random_matrix(rng, n, n), ltlrec::testing::random_matrix(rng, n, m),
                  ltlrec::testing::random_matrix(rng, m, n)};
    const Vector y = ltlrec::testing::random_matrix(rng, m, 1);
    const auto [xi, u] = steady_state(p, y);
    const double scale = 1.0 + xi.norm() + u.norm();
    EXPECT_LE((p.A * xi + p.B * u).norm(), 1e-9 * scale);
    EXPECT_LE((p.C * xi - y).norm(), 1e-9 * scale);
  }
}

TEST(Regions, InscribedRadiusPerNorm) {
  const Vector c = (Vector(2) << -3, 1).finished();
  EXPECT_NEAR(max_inscribed_radius(ball_region(2, c, Norm::L2, 0.3), c), 0.3, 1e-15);
  EXPECT_NEAR(inscribed_jump_radius(ball_region(2, c, Norm::L2, 0.3), c), 0.27, 1e-15);
  EXPECT_NEAR(max_inscribed_radius(ball_region(3, c, Norm::Linf, 0.2), c), 0.2, 1e-15);
  EXPECT_NEAR(max_inscribed_radius(ball_region(1, c, Norm::L1, 0.1), c), 0.1 / std::sqrt(2.0), 1e-15);
}

TEST(Regions, JumpBallContainment) {
  const Vector c = Vector::Zero(2);
  const Region r = ball_region(1, c, Norm::L1, 0.1);
  EXPECT_TRUE(jump_ball_contained(r, c, 0.07));
  EXPECT_FALSE(jump_ball_contained(r, c, 0.09));
  EXPECT_FALSE(jump_ball_contained(r, c, 0.0));
}

TEST(Regions, TargetOutsideRegionThrows) {
  const Region r = ball_region(1, Vector::Zero(2), Norm::L2, 0.5);
  EXPECT_THROW(max_inscribed_radius(r, Vector::Ones(2)), Error);
}

TEST(Regions, OpenBallsExcludeBoundary) {
  const Region r = ball_region(1, Vector::Zero(1), Norm::Linf, 0.5);
  EXPECT_TRUE(r.contains(Vector::Constant(1, 0.4999)));
  EXPECT_FALSE(r.contains(Vector::Constant(1, 0.5)));
}

TEST(Disjoint, SeparatedBlocksAreCertified) {
  const Region a = ball_region(1, (Vector(2) << 0, 0).finished(), Norm::Linf, 0.2);
  const Region b = ball_region(2, (Vector(2) << 0.5, 0).finished(), Norm::L2, 0.3);
  EXPECT_EQ(check_disjoint(a, b, 2), Disjointness::Certified);
}

TEST(Disjoint, OverlapIsFound) {
  const Region a = ball_region(1, (Vector(2) << 0, 0).finished(), Norm::L2, 0.3);
  const Region b = ball_region(2, (Vector(2) << 0.4, 0).finished(), Norm::L2, 0.3);
  EXPECT_EQ(check_disjoint(a, b, 2), Disjointness::Overlap);
}

TEST(Lyapunov, ScalarIdentity) {
  const Matrix P = solve_lyapunov(-Matrix::Identity(3, 3), Matrix::Identity(3, 3));
  EXPECT_LE((P - 0.5 * Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(Lyapunov, JordanBlock) {
  const Matrix F = (Matrix(2, 2) << -1, 1, 0, -1).finished();
  const Matrix expected = (Matrix(2, 2) << 0.5, 0.25, 0.25, 0.75).finished();
  EXPECT_LE((solve_lyapunov(F, Matrix::Identity(2, 2)) - expected).norm(), 1e-14);
}

// Relative residual and positive definiteness on random Hurwitz matrices.
TEST(Lyapunov, RandomResiduals) {
  std::mt19937_64 rng(42);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index n = 2 + (k * 7) % 31;
    const Matrix F = ltlrec::testing::random_hurwitz(rng, n);
    const Matrix Q = ltlrec::testing::random_spd(rng, n);
    const Matrix P = solve_lyapunov(F, Q);
    const double residual = (P * F + F.transpose() * P + Q).norm();
    EXPECT_LE(residual, 1e-8 * std::max(1.0, Q.norm())) << "n = " << n;
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(P).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(ClosedLoop, RobotAxisSpectra) {
  const LinearPlant p = robot_axis();
  const Matrix K = (Matrix(1, 2) << 1.25, 1).finished();
  const Matrix L = (Matrix(2, 1) << 9, 16).finished();
  const auto ctrl = eigenvalues(p.A - p.B * K);
  const auto obs = eigenvalues(p.A - L * p.C);
  EXPECT_NEAR(std::abs(ctrl[0] - std::complex<double>(-1, 0.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ctrl[1] - std::complex<double>(-1, -0.5)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(obs[0] + 5.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(obs[1] + 5.0), 0.0, 1e-12);
}

TEST(ClosedLoop, UnstableGainThrows) {
  const LinearPlant p = robot_axis();
  try {
    assemble_closed_loop(p, (Matrix(1, 2) << -1, 0).finished(), (Matrix(2, 1) << 9, 16).finished(), {});
    FAIL() << "expected NotHurwitz";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHurwitz);
  }
}

// The two coordinate systems describe the same flow.
TEST(ClosedLoop, ErrorCoordinatesShareSpectrum) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 30; ++k) {
    const Eigen::Index n = 2 + k % 3;
    LinearPlant p{ltlrec::testing::random_matrix(rng, n, n), ltlrec::testing::random_matrix(rng, n, 1),
                  ltlrec::testing::random_matrix(rng, 1, n)};
    // Place A-BK and A-LC using Hurwitz targets by construction.
    const Matrix K = ltlrec::testing::random_matrix(rng, 1, n);
    const Matrix L = ltlrec::testing::random_matrix(rng, n, 1);
    p.A = ltlrec::testing::random_hurwitz(rng, n) + p.B * K;
    if (spectral_abscissa(p.A - L * p.C) > -0.1) continue;
    const ClosedLoop loop = assemble_closed_loop(p, K, L, {});
    const auto a = sorted_spectrum(loop.F);
    const auto b = sorted_spectrum(loop.F_tilde);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-6);
  }
}

TEST(ClosedLoop, TargetsAreEquilibria) {
  const LinearPlant p = robot_axis();
  const Region r = ball_region(1, Vector::Constant(1, -1.0), Norm::L2, 0.3);
  const ClosedLoop loop = assemble_closed_loop(p, (Matrix(1, 2) << 1.25, 1).finished(),
                                               (Matrix(2, 1) << 9, 16).finished(), {r});
  const auto& t = loop.targets.at(1);
  Vector zeta(4);
  zeta << t.xi, t.xi;
  EXPECT_LE((loop.F * zeta + t.g).norm(), 1e-14);
}
