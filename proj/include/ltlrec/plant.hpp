#pragma once

// Linear output-feedback plant: assumption checks, steady-state targets,
// regions of interest, closed-loop assembly and the Lyapunov equation.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ltlrec/automaton.hpp"
#include "ltlrec/errors.hpp"

namespace ltlrec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct LinearPlant {
  Matrix A;  // nu x nu
  Matrix B;  // nu x m
  Matrix C;  // p x nu

  Eigen::Index nu() const { return A.rows(); }
  Eigen::Index m() const { return B.cols(); }
  Eigen::Index p() const { return C.rows(); }
};

struct Tolerances {
  double hurwitz = 1e-9;        // max Re(lambda) <= -hurwitz
  double rank = 1e-10;          // relative singular-value cutoff
  double condition = 1e-12;     // sigma_min / sigma_max of the bordered matrix
  double jump_margin = 0.9;     // default rho_o = margin * largest inscribed radius
};

// ---------------------------------------------------------------------------
// Small numerical helpers.

/// Numerical rank: singular values <= rel_tol * sigma_max count as zero.
inline Eigen::Index numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

/// Eigenvalues; 2x2 inputs use the characteristic polynomial so that
/// repeated real roots come out exactly.
inline std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  std::vector<std::complex<double>> out;
  if (m.rows() == 2 && m.cols() == 2) {
    const double half_trace = 0.5 * (m(0, 0) + m(1, 1));
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const std::complex<double> root = std::sqrt(std::complex<double>(half_trace * half_trace - det));
    out.push_back(half_trace + root);
    out.push_back(half_trace - root);
    return out;
  }
  Eigen::EigenSolver<Matrix> solver(m, false);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) out.push_back(solver.eigenvalues()(i));
  return out;
}

inline double spectral_abscissa(const Matrix& m) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& lambda : eigenvalues(m)) worst = std::max(worst, lambda.real());
  return worst;
}

inline Matrix controllability_matrix(const Matrix& A, const Matrix& B) {
  const Eigen::Index n = A.rows();
  Matrix out(n, n * B.cols());
  Matrix block = B;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.middleCols(k * B.cols(), B.cols()) = block;
    block = A * block;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Assumption checks.

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
  }
  void add(std::string name, bool passed, std::string detail) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }
};

/// m = p, [A B; C 0] invertible, (A, B) controllable, (A, C) observable.
inline ValidationReport check_assumption5(const LinearPlant& plant, const Tolerances& tol = {}) {
  ValidationReport report;
  const auto nu = plant.nu();
  bool shapes_ok = plant.A.cols() == nu && plant.B.rows() == nu && plant.C.cols() == nu;
  report.add("dimensions", shapes_ok,
             "A " + std::to_string(plant.A.rows()) + "x" + std::to_string(plant.A.cols()) + ", B " +
                 std::to_string(plant.B.rows()) + "x" + std::to_string(plant.B.cols()) + ", C " +
                 std::to_string(plant.C.rows()) + "x" + std::to_string(plant.C.cols()));
  if (!shapes_ok) return report;

  report.add("square", plant.m() == plant.p(),
             "m = " + std::to_string(plant.m()) + ", p = " + std::to_string(plant.p()));

  if (plant.m() == plant.p()) {
    Matrix bordered = Matrix::Zero(nu + plant.p(), nu + plant.m());
    bordered.topLeftCorner(nu, nu) = plant.A;
    bordered.topRightCorner(nu, plant.m()) = plant.B;
    bordered.bottomLeftCorner(plant.p(), nu) = plant.C;
    Eigen::JacobiSVD<Matrix> svd(bordered);
    const Vector& sv = svd.singularValues();
    const double ratio = sv(0) > 0.0 ? sv(sv.size() - 1) / sv(0) : 0.0;
    report.add("bordered_invertible", ratio > tol.condition,
               "sigma_min/sigma_max = " + std::to_string(ratio));
  } else {
    report.add("bordered_invertible", false, "bordered matrix is not square");
  }

  const auto ctrb_rank = numerical_rank(controllability_matrix(plant.A, plant.B), tol.rank);
  report.add("controllable", ctrb_rank == nu,
             "rank " + std::to_string(ctrb_rank) + " of " + std::to_string(nu));
  const Matrix At = plant.A.transpose();
  const Matrix Ct = plant.C.transpose();
  const auto obsv_rank = numerical_rank(controllability_matrix(At, Ct), tol.rank);
  report.add("observable", obsv_rank == nu,
             "rank " + std::to_string(obsv_rank) + " of " + std::to_string(nu));
  return report;
}

/// Solves 0 = A xi + B u, y = C xi for (xi, u).
inline std::pair<Vector, Vector> steady_state(const LinearPlant& plant, const Vector& y) {
  const auto nu = plant.nu();
  const auto m = plant.m();
  const auto p = plant.p();
  if (y.size() != p) throw Error(ErrorKind::Validation, "target has wrong dimension");
  Matrix bordered = Matrix::Zero(nu + p, nu + m);
  bordered.topLeftCorner(nu, nu) = plant.A;
  bordered.topRightCorner(nu, m) = plant.B;
  bordered.bottomLeftCorner(p, nu) = plant.C;
  Vector rhs = Vector::Zero(nu + p);
  rhs.tail(p) = y;
  Eigen::FullPivLU<Matrix> lu(bordered);
  if (!lu.isInvertible()) throw Error(ErrorKind::Numerical, "steady-state system is singular");
  Vector sol = lu.solve(rhs);
  return {sol.head(nu), sol.tail(m)};
}

// ---------------------------------------------------------------------------
// Regions of interest.

enum class Norm { L1, L2, Linf };

inline const char* to_string(Norm n) {
  switch (n) {
    case Norm::L1: return "1";
    case Norm::L2: return "2";
    case Norm::Linf: return "inf";
  }
  return "?";
}

inline double vector_norm(const Vector& v, Norm n) {
  switch (n) {
    case Norm::L1: return v.lpNorm<1>();
    case Norm::L2: return v.norm();
    case Norm::Linf: return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0;
  }
  return 0.0;
}

/// {y : |y[indices] - center|_norm < radius}.
struct RegionBlock {
  std::vector<int> indices;
  Vector center;
  Norm norm = Norm::L2;
  double radius = 0.0;

  Vector project(const Vector& y) const {
    Vector out(static_cast<Eigen::Index>(indices.size()));
    for (std::size_t k = 0; k < indices.size(); ++k) out(k) = y(indices[k]);
    return out;
  }
  bool contains(const Vector& y) const { return vector_norm(project(y) - center, norm) < radius; }

  /// Euclidean distance from an interior point to the block boundary.
  double boundary_distance(const Vector& y) const {
    const Vector offset = project(y) - center;
    const double k = static_cast<double>(indices.size());
    switch (norm) {
      case Norm::L2: return radius - offset.norm();
      case Norm::Linf: return (radius - offset.cwiseAbs().array()).minCoeff();
      case Norm::L1: return (radius - offset.lpNorm<1>()) / std::sqrt(k);
    }
    return 0.0;
  }
};

/// Region Y_o (intersection of its blocks) with the jump ball B(target, jump_radius).
struct Region {
  ObsId obs = 0;
  std::vector<RegionBlock> blocks;
  Vector target;              // y_o
  double jump_radius = 0.0;   // rho_o, Euclidean

  bool contains(const Vector& y) const {
    return std::all_of(blocks.begin(), blocks.end(), [&](const RegionBlock& b) { return b.contains(y); });
  }
  bool in_jump_ball(const Vector& y) const { return (y - target).norm() <= jump_radius; }

  /// Concatenation of block centers; uncovered outputs are 0.
  Vector default_target(Eigen::Index p) const {
    Vector y = Vector::Zero(p);
    for (const auto& b : blocks)
      for (std::size_t k = 0; k < b.indices.size(); ++k) y(b.indices[k]) = b.center(k);
    return y;
  }
};

/// Largest Euclidean radius rho with B(y, rho) inside the closure of the
/// region; throws if y is not interior.
inline double max_inscribed_radius(const Region& region, const Vector& y) {
  if (!region.contains(y))
    throw Error(ErrorKind::Validation,
                "target of observation " + std::to_string(region.obs) + " is not inside its region");
  double rho = std::numeric_limits<double>::infinity();
  for (const auto& b : region.blocks) rho = std::min(rho, b.boundary_distance(y));
  return rho;
}

inline double inscribed_jump_radius(const Region& region, const Vector& y, double margin = 0.9) {
  return margin * max_inscribed_radius(region, y);
}

/// Closed ball B(y, rho) lies in the open region.
inline bool jump_ball_contained(const Region& region, const Vector& y, double rho) {
  return rho > 0.0 && region.contains(y) && rho < max_inscribed_radius(region, y);
}

enum class Disjointness { Certified, Overlap, Unverified };

namespace detail {

/// Radius of a ball in `common` norm containing the k-dim `norm` ball of radius r.
inline double enclosing_radius(Norm norm, double r, double k, Norm common) {
  if (common == Norm::L2) return norm == Norm::Linf ? r * std::sqrt(k) : r;
  return r;  // the inf-norm ball of radius r encloses the 1-, 2- and inf-balls of radius r
}

/// Uniform sample from a block's norm ball by rejection from its bounding box.
inline Vector sample_block(const RegionBlock& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto k = static_cast<Eigen::Index>(b.indices.size());
  for (;;) {
    Vector v(k);
    for (Eigen::Index i = 0; i < k; ++i) v(i) = b.radius * unit(rng);
    if (vector_norm(v, b.norm) < b.radius) return b.center + v;
  }
}

}  // namespace detail

/// Sufficient certificate: some block of `a` and some block of `b` over the
/// same output indices have centers further apart, in a common norm, than the
/// sum of their enclosing radii. Otherwise falls back to random falsification.
inline Disjointness check_disjoint(const Region& a, const Region& b, Eigen::Index p,
                                   int samples = 100000, unsigned seed = 7) {
  for (const auto& ba : a.blocks) {
    for (const auto& bb : b.blocks) {
      if (ba.indices != bb.indices) continue;
      const double k = static_cast<double>(ba.indices.size());
      for (Norm common : {Norm::L2, Norm::Linf}) {
        const double gap = vector_norm(ba.center - bb.center, common);
        if (gap >= detail::enclosing_radius(ba.norm, ba.radius, k, common) +
                       detail::enclosing_radius(bb.norm, bb.radius, k, common))
          return Disjointness::Certified;
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (int n = 0; n < samples; ++n) {
    Vector y = Vector::Zero(p);
    for (const auto& bb : b.blocks) {
      Vector v = detail::sample_block(bb, rng);
      for (std::size_t k = 0; k < bb.indices.size(); ++k) y(bb.indices[k]) = v(k);
    }
    for (const auto& ba : a.blocks) {
      Vector v = detail::sample_block(ba, rng);
      for (std::size_t k = 0; k < ba.indices.size(); ++k) y(ba.indices[k]) = v(k);
    }
    if (a.contains(y) && b.contains(y)) return Disjointness::Overlap;
  }
  return Disjointness::Unverified;
}

// ---------------------------------------------------------------------------
// Closed loop.

/// Per-observation setpoint data.
struct ObservationTarget {
  Vector y;    // y_o
  Vector xi;   // xi_o
  Vector u;    // u_o
  Vector g;    // affine term of the flow, size 2 nu
};

struct ClosedLoop {
  Matrix K;        // m x nu
  Matrix L;        // nu x p
  Matrix F;        // flow matrix on zeta = (xi, xi_hat)
  Matrix F_tilde;  // same flow on the error coordinates (xi - xi_o, xi - xi_hat)
  Matrix P;
  Matrix Q;
  std::map<ObsId, ObservationTarget> targets;
};

/// Throws NotHurwitz naming the matrix and its worst eigenvalue.
inline void require_hurwitz(const Matrix& m, const std::string& name, double tol) {
  std::complex<double> worst(-std::numeric_limits<double>::infinity(), 0.0);
  for (const auto& lambda : eigenvalues(m))
    if (lambda.real() > worst.real()) worst = lambda;
  if (worst.real() > -tol)
    throw Error(ErrorKind::NotHurwitz, name + " has eigenvalue " + std::to_string(worst.real()) +
                                           (worst.imag() >= 0 ? "+" : "") +
                                           std::to_string(worst.imag()) + "i");
}

/// Solves P F + F^T P = -Q through the Kronecker-sum linear system and
/// symmetrizes the result.
inline Matrix solve_lyapunov(const Matrix& F, const Matrix& Q) {
  const Eigen::Index n = F.rows();
  const Eigen::Index nn = n * n;
  const Matrix Ft = F.transpose();
  // vec(P F) = (F^T kron I) vec(P), vec(F^T P) = (I kron F^T) vec(P).
  Matrix kron = Matrix::Zero(nn, nn);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (Ft(i, j) != 0.0) kron.block(i * n, j * n, n, n).diagonal().array() += Ft(i, j);
    }
    kron.block(i * n, i * n, n, n) += Ft;
  }
  Eigen::PartialPivLU<Matrix> lu(kron);
  if (!(lu.rcond() > 1e-14))
    throw Error(ErrorKind::Numerical, "Lyapunov operator is singular (F is not Hurwitz)");
  Vector rhs = -Eigen::Map<const Vector>(Q.data(), nn);
  Vector vecP = lu.solve(rhs);
  Matrix P = Eigen::Map<Matrix>(vecP.data(), n, n);
  P = 0.5 * (P + P.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(P, Eigen::EigenvaluesOnly);
  if (!(eig.eigenvalues().minCoeff() > 0.0))
    throw Error(ErrorKind::Numerical, "Lyapunov solution is not positive definite");
  return P;
}

/// Assembles F, g_o and the error-coordinate matrix; solves for P with the
/// given Q (identity when empty).
inline ClosedLoop assemble_closed_loop(const LinearPlant& plant, const Matrix& K, const Matrix& L,
                                       const std::vector<Region>& regions, const Matrix& Q = {},
                                       const Tolerances& tol = {}) {
  const auto nu = plant.nu();
  if (K.rows() != plant.m() || K.cols() != nu)
    throw Error(ErrorKind::Validation, "K must be m x nu");
  if (L.rows() != nu || L.cols() != plant.p())
    throw Error(ErrorKind::Validation, "L must be nu x p");
  const Matrix BK = plant.B * K;
  const Matrix LC = L * plant.C;
  require_hurwitz(plant.A - BK, "A-BK", tol.hurwitz);
  require_hurwitz(plant.A - LC, "A-LC", tol.hurwitz);

  ClosedLoop loop;
  loop.K = K;
  loop.L = L;
  loop.F.resize(2 * nu, 2 * nu);
  loop.F << plant.A, -BK, LC, plant.A - BK - LC;
  loop.F_tilde.resize(2 * nu, 2 * nu);
  loop.F_tilde << plant.A - BK, BK, Matrix::Zero(nu, nu), plant.A - LC;

  for (const auto& region : regions) {
    ObservationTarget target;
    target.y = region.target;
    std::tie(target.xi, target.u) = steady_state(plant, region.target);
    const Vector drive = BK * target.xi + plant.B * target.u;
    target.g.resize(2 * nu);
    target.g << drive, drive;
    loop.targets[region.obs] = std::move(target);
  }

  loop.Q = Q.size() ? Q : Matrix::Identity(2 * nu, 2 * nu);
  loop.P = solve_lyapunov(loop.F_tilde, loop.Q);
  return loop;
}

}  // namespace ltlrec
