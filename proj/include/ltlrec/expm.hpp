#pragma once

// Matrix exponential by scaling and squaring with diagonal Pade approximants
// (degrees 3, 5, 7, 9, 13 selected by the 1-norm, as in Higham 2005), and the
// exact propagator of the affine flow zeta' = F zeta + g.

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "ltlrec/errors.hpp"

namespace ltlrec {

namespace detail {

inline double one_norm(const Eigen::MatrixXd& m) {
  return m.size() ? m.cwiseAbs().colwise().sum().maxCoeff() : 0.0;
}

template <std::size_t N>
Eigen::MatrixXd pade_low(const Eigen::MatrixXd& a, const std::array<double, N>& b) {
  // Odd powers feed U, even powers feed V. N = degree + 1.
  const auto n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = ident;
  Eigen::MatrixXd u_inner = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k + 1 < N; k += 2) {
    v += b[k] * power;
    u_inner += b[k + 1] * power;
    power = power * a2;
  }
  const Eigen::MatrixXd u = a * u_inner;
  return (v - u).partialPivLu().solve(v + u);
}

inline Eigen::MatrixXd pade13(const Eigen::MatrixXd& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const auto n = a.rows();
  const Eigen::MatrixXd ident = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a4 = a2 * a2;
  const Eigen::MatrixXd a6 = a4 * a2;
  const Eigen::MatrixXd u =
      a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Eigen::MatrixXd v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;
  return (v - u).partialPivLu().solve(v + u);
}

}  // namespace detail

/// e^{M h}.
inline Eigen::MatrixXd matrix_exponential(const Eigen::MatrixXd& m, double h = 1.0) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::Numerical, "matrix exponential of a non-square matrix");
  if (!(h >= 0.0) || !std::isfinite(h)) throw Error(ErrorKind::Numerical, "time step must be finite and >= 0");
  if (!m.allFinite()) throw Error(ErrorKind::Numerical, "matrix exponential of non-finite entries");
  const Eigen::MatrixXd a = m * h;
  const double norm = detail::one_norm(a);

  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr std::array<double, 8> b7 = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                               25200.0,    1512.0,    56.0,      1.0};
  static constexpr std::array<double, 10> b9 = {17643225600.0, 8821612800.0, 2075673600.0,
                                                302702400.0,   30270240.0,   2162160.0,
                                                110880.0,      3960.0,       90.0,
                                                1.0};
  Eigen::MatrixXd result;
  if (norm <= 1.495585217958292e-2) {
    result = detail::pade_low(a, b3);
  } else if (norm <= 2.539398330063230e-1) {
    result = detail::pade_low(a, b5);
  } else if (norm <= 9.504178996162932e-1) {
    result = detail::pade_low(a, b7);
  } else if (norm <= 2.097847961257068) {
    result = detail::pade_low(a, b9);
  } else {
    constexpr double theta13 = 5.371920351148152;
    int squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
    result = detail::pade13(a / std::ldexp(1.0, squarings));
    for (int k = 0; k < squarings; ++k) result = result * result;
  }
  if (!result.allFinite()) throw Error(ErrorKind::Numerical, "matrix exponential overflowed");
  return result;
}

/// Transition matrix of the augmented linear system [[F, g], [0, 0]] over h,
/// so that (zeta(h), 1) = Phi (zeta(0), 1).
inline Eigen::MatrixXd affine_transition(const Eigen::MatrixXd& F, const Eigen::VectorXd& g, double h) {
  const auto n = F.rows();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + 1, n + 1);
  aug.topLeftCorner(n, n) = F;
  aug.topRightCorner(n, 1) = g;
  return matrix_exponential(aug, h);
}

inline Eigen::VectorXd apply_affine(const Eigen::MatrixXd& phi, const Eigen::VectorXd& zeta) {
  const auto n = zeta.size();
  return phi.topLeftCorner(n, n) * zeta + phi.topRightCorner(n, 1);
}

/// Exact solution of zeta' = F zeta + g after time h.
inline Eigen::VectorXd flow_propagate(const Eigen::MatrixXd& F, const Eigen::VectorXd& g,
                                      const Eigen::VectorXd& zeta, double h) {
  if (h == 0.0) return zeta;
  return apply_affine(affine_transition(F, g, h), zeta);
}

}  // namespace ltlrec
