#pragma once

// Recurrence certificate for the closed loop: the constants of the composite
// Lyapunov-like function V_H = d(s) + lambda W, sampled verification of its
// flow and jump inequalities, the restricted-solution time bound, and
// empirical hitting-time sweeps.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "ltlrec/hybrid_sim.hpp"

namespace ltlrec {

// ---------------------------------------------------------------------------
// Constants.

/// S = P_aa - P_ab P_bb^-1 P_ba for P partitioned into nu x nu blocks.
inline Matrix schur_complement(const Matrix& P, Eigen::Index nu) {
  const Matrix Pbb = P.bottomRightCorner(nu, nu);
  Eigen::LDLT<Matrix> ldlt(Pbb);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw Error(ErrorKind::Numerical, "estimator block of P is singular");
  return P.topLeftCorner(nu, nu) - P.topRightCorner(nu, nu) * ldlt.solve(P.bottomLeftCorner(nu, nu));
}

/// Minimum of e^T P e over {e = (e_a, e_b) : ||C e_a|| = rho}, for unit rho.
/// Scale by rho^2 for other radii.
inline double w_min_unit(const Matrix& P, const Matrix& C) {
  const Eigen::Index nu = C.cols();
  const Matrix S = schur_complement(P, nu);
  const Matrix N = C * S.llt().solve(C.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (N + N.transpose()), Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  if (!(top > 0.0)) throw Error(ErrorKind::Numerical, "C S^-1 C^T is not positive");
  return 1.0 / top;
}

/// (min_o rho_o^2) / lambda_max(C S^-1 C^T).
inline double w_min(const Matrix& P, const Matrix& C, const std::vector<double>& rhos) {
  if (rhos.empty()) throw Error(ErrorKind::Validation, "no jump radii");
  double rho_min = std::numeric_limits<double>::infinity();
  for (double r : rhos) {
    if (!(r > 0.0)) throw Error(ErrorKind::Validation, "jump radii must be positive");
    rho_min = std::min(rho_min, r);
  }
  return rho_min * rho_min * w_min_unit(P, C);
}

/// Error-coordinate point attaining w_min on the sphere ||C e_a|| = rho.
inline Vector w_min_minimizer(const Matrix& P, const Matrix& C, double rho) {
  const Eigen::Index nu = C.cols();
  const Matrix S = schur_complement(P, nu);
  const Eigen::LLT<Matrix> s_llt(S);
  const Matrix SiCt = s_llt.solve(C.transpose());
  const Matrix N = C * SiCt;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (N + N.transpose()));
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  const Vector v = rho * eig.eigenvectors().col(top);
  Vector e(2 * nu);
  e.head(nu) = SiCt * N.ldlt().solve(v);
  e.tail(nu) = -P.bottomRightCorner(nu, nu).ldlt().solve(P.bottomLeftCorner(nu, nu) * e.head(nu));
  return e;
}

/// max over ordered pairs of (xi_o - xi_o', 0)^T P (xi_o - xi_o', 0).
inline double j1(const Matrix& P, const std::vector<Vector>& setpoints) {
  if (setpoints.size() < 2) throw Error(ErrorKind::Validation, "J1 needs at least two observations");
  const Eigen::Index nu = setpoints.front().size();
  const Matrix Paa = P.topLeftCorner(nu, nu);
  double best = 0.0;
  for (std::size_t a = 0; a < setpoints.size(); ++a)
    for (std::size_t b = 0; b < setpoints.size(); ++b) {
      if (a == b) continue;
      const Vector diff = setpoints[a] - setpoints[b];
      best = std::max(best, diff.dot(Paa * diff));
    }
  if (!(best > 0.0)) throw Error(ErrorKind::Validation, "J1 = 0: two observations share a setpoint");
  return best;
}

struct ThetaLambda {
  double theta_min = 0.0;
  double theta = 0.0;
  double lambda_lo = 0.0;  // (1 - theta)/theta * d_max / w_min
  double lambda_hi = 0.0;  // 1 / J1
  double lambda = 0.0;
};

/// theta halfway between theta_min and 1; lambda the geometric mean of the
/// open interval, or half its upper end when d_max = 0 closes it at zero.
inline ThetaLambda select_theta_lambda(int d_max, double w_min_value, double j1_value) {
  if (d_max < 0 || !(w_min_value > 0.0) || !(j1_value > 0.0))
    throw Error(ErrorKind::Validation, "theta/lambda selection needs d_max >= 0, w_min > 0, J1 > 0");
  ThetaLambda out;
  const double dj = static_cast<double>(d_max) * j1_value;
  out.theta_min = dj / (dj + w_min_value);
  out.theta = 0.5 * (1.0 + out.theta_min);
  out.lambda_lo = (1.0 - out.theta) / out.theta * static_cast<double>(d_max) / w_min_value;
  out.lambda_hi = 1.0 / j1_value;
  out.lambda = out.lambda_lo > 0.0 ? std::sqrt(out.lambda_lo * out.lambda_hi) : 0.5 * out.lambda_hi;
  if (!(out.lambda_lo < out.lambda && out.lambda < out.lambda_hi))
    throw Error(ErrorKind::Numerical, "lambda is not strictly inside its feasible interval");
  return out;
}

struct CertificateConstants {
  int d_max = 0;
  double w_min = 0.0;
  double j1 = 0.0;
  double lambda_prime = 0.0;  // lambda_min(Q) / lambda_max(P)
  ThetaLambda selection;
  double lambda_c = 0.0;      // flow rate, -lambda' (1 - theta)
  double lambda_d = 0.0;      // jump rate, log 2
  double mu_ba = 0.0;         // 1 + d_max
  double M = 0.0;             // (lambda_d - lambda_c) d_max
  double gamma = 0.0;         // -lambda_c

  double lambda() const { return selection.lambda; }
  double theta() const { return selection.theta; }
};

inline CertificateConstants certificate_constants(const HybridSystem& sys) {
  CertificateConstants k;
  const ClosedLoop& loop = sys.loop();
  k.d_max = sys.automaton().d_max();
  std::vector<double> rhos;
  std::vector<Vector> setpoints;
  for (const auto& [o, region] : sys.regions()) {
    rhos.push_back(region.jump_radius);
    setpoints.push_back(sys.target(o).xi);
  }
  k.w_min = w_min(loop.P, sys.plant().C, rhos);
  k.j1 = j1(loop.P, setpoints);
  Eigen::SelfAdjointEigenSolver<Matrix> p_eig(loop.P, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> q_eig(0.5 * (loop.Q + loop.Q.transpose()), Eigen::EigenvaluesOnly);
  k.lambda_prime = q_eig.eigenvalues().minCoeff() / p_eig.eigenvalues().maxCoeff();
  k.selection = select_theta_lambda(k.d_max, k.w_min, k.j1);
  k.lambda_c = -k.lambda_prime * (1.0 - k.selection.theta);
  k.lambda_d = std::log(2.0);
  k.mu_ba = 1.0 + k.d_max;
  k.M = (k.lambda_d - k.lambda_c) * k.d_max;
  k.gamma = -k.lambda_c;
  return k;
}

struct SignCheck {
  std::string name;
  bool passed = false;
};

/// w_min, J1, lambda', lambda, M, gamma > 0; lambda_c < 0; theta in (0, 1);
/// lambda strictly inside its interval.
inline std::vector<SignCheck> sign_checks(const CertificateConstants& k) {
  const auto& s = k.selection;
  return {
      {"w_min > 0", k.w_min > 0.0},
      {"J1 > 0", k.j1 > 0.0},
      {"lambda' > 0", k.lambda_prime > 0.0},
      {"0 < theta < 1", s.theta > 0.0 && s.theta < 1.0},
      {"lambda in (lo, hi)", s.lambda_lo < s.lambda && s.lambda < s.lambda_hi},
      {"lambda_c < 0", k.lambda_c < 0.0},
      {"lambda_d = log 2", k.lambda_d == std::log(2.0)},
      {"M > 0", k.M > 0.0},
      {"gamma > 0", k.gamma > 0.0},
  };
}

// ---------------------------------------------------------------------------
// The Lyapunov-like function.

/// (xi - xi_o, xi - xi_hat).
inline Vector error_coordinates(const HybridSystem& sys, const Vector& zeta, ObsId o) {
  const Eigen::Index nu = sys.plant().nu();
  Vector e(2 * nu);
  e.head(nu) = zeta.head(nu) - sys.target(o).xi;
  e.tail(nu) = zeta.head(nu) - zeta.tail(nu);
  return e;
}

/// W(zeta, o) = e^T P e.
inline double w_value(const HybridSystem& sys, const Vector& zeta, ObsId o) {
  const Vector e = error_coordinates(sys, zeta, o);
  return e.dot(sys.loop().P * e);
}

inline double v_h(const HybridSystem& sys, const CertificateConstants& k, const HybridState& x) {
  if (!sys.automaton().in_jump_set(x.chi))
    throw Error(ErrorKind::NotInJumpSet, "V_H is defined on the constrained jump set only");
  return sys.automaton().v_ba(x.chi) + k.lambda() * w_value(sys, x.zeta, x.chi.o);
}

/// <grad V_H, f_H> from the plant-coordinate flow F zeta + g mapped into
/// error coordinates, independently of the Lyapunov identity.
inline double v_h_flow_derivative(const HybridSystem& sys, const CertificateConstants& k, const HybridState& x) {
  const Eigen::Index nu = sys.plant().nu();
  const Vector e = error_coordinates(sys, x.zeta, x.chi.o);
  const Vector zeta_dot = sys.loop().F * x.zeta + sys.target(x.chi.o).g;
  Vector e_dot(2 * nu);
  e_dot.head(nu) = zeta_dot.head(nu);
  e_dot.tail(nu) = zeta_dot.head(nu) - zeta_dot.tail(nu);
  return 2.0 * k.lambda() * e.dot(sys.loop().P * e_dot);
}

/// Maps an error-coordinate point back to zeta = (xi, xi_hat).
inline Vector zeta_from_error(const HybridSystem& sys, const Vector& e, ObsId o) {
  const Eigen::Index nu = sys.plant().nu();
  Vector zeta(2 * nu);
  zeta.head(nu) = sys.target(o).xi + e.head(nu);
  zeta.tail(nu) = zeta.head(nu) - e.tail(nu);
  return zeta;
}

// ---------------------------------------------------------------------------
// Sampled conditions.

struct SampleSpec {
  long samples = 100000;   // per observation
  double box_radius = 10;  // half-width of the error-coordinate box
  std::uint64_t seed = 1;
};

struct Witness {
  HybridState x;
  std::optional<AutomatonState> successor;
  double margin = 0.0;
};

struct ConditionResult {
  explicit ConditionResult(std::string check = {}) : name(std::move(check)) {}

  std::string name;
  bool passed = true;
  long evaluations = 0;
  long violations = 0;
  double min_margin = std::numeric_limits<double>::infinity();
  std::optional<Witness> worst;

  void record(double margin, const HybridState& x, std::optional<AutomatonState> successor = std::nullopt) {
    ++evaluations;
    if (!(margin > 0.0)) {
      ++violations;
      passed = false;
    }
    if (!worst || margin < min_margin) {
      min_margin = margin;
      worst = Witness{x, successor, margin};
    }
  }
};

namespace detail {

inline std::vector<ObsId> observations_in_use(const HybridSystem& sys) {
  std::set<ObsId> out;
  for (const auto& chi : sys.automaton().jump_set()) out.insert(chi.o);
  return {out.begin(), out.end()};
}

inline std::vector<StateId> states_with_observation(const HybridSystem& sys, ObsId o) {
  std::vector<StateId> out;
  for (const auto& chi : sys.automaton().jump_set())
    if (chi.o == o) out.push_back(chi.s);
  return out;
}

}  // namespace detail

/// Samples C_o inside the error box (plus sphere points and the w_min
/// minimizer) and checks <grad V_H, f_H> <= lambda_c V_H. Also records the
/// intermediate bound theta V_H - V_BA - (theta lambda w_min - (1-theta) d_max).
inline std::pair<ConditionResult, ConditionResult> check_flow_condition(const HybridSystem& sys,
                                                                        const CertificateConstants& k,
                                                                        const SampleSpec& spec = {}) {
  ConditionResult flow{"flow"};
  ConditionResult intermediate{"flow-intermediate"};
  const Eigen::Index nu = sys.plant().nu();
  const Matrix& C = sys.plant().C;
  const double floor_bound = k.theta() * k.lambda() * k.w_min - (1.0 - k.theta()) * k.d_max;
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> box(-spec.box_radius, spec.box_radius);
  const Matrix Pbb_inv_Pba =
      sys.loop().P.bottomRightCorner(nu, nu).ldlt().solve(sys.loop().P.bottomLeftCorner(nu, nu));

  for (ObsId o : detail::observations_in_use(sys)) {
    const double rho = sys.region(o).jump_radius;
    const auto states = detail::states_with_observation(sys, o);
    auto evaluate = [&](const Vector& e) {
      const Vector zeta = zeta_from_error(sys, e, o);
      for (StateId s : states) {
        HybridState x{{s, o}, zeta};
        const double vh = v_h(sys, k, x);
        flow.record(k.lambda_c * vh - v_h_flow_derivative(sys, k, x), x);
        intermediate.record(k.theta() * vh - sys.automaton().v_ba(x.chi) - floor_bound, x);
      }
    };
    evaluate(w_min_minimizer(sys.loop().P, C, rho));
    for (long n = 0; n < spec.samples; ++n) {
      Vector e(2 * nu);
      for (Eigen::Index i = 0; i < e.size(); ++i) e(i) = box(rng);
      const double out = (C * e.head(nu)).norm();
      if (n % 10 == 0 && out > 0.0) {
        // Sphere point with the estimator error at its W-minimizing value.
        e.head(nu) *= rho / out;
        if (n % 20 == 0) e.tail(nu) = -Pbb_inv_Pba * e.head(nu);
      } else if (out < rho) {
        continue;  // inside the open jump ball, not in C_o
      }
      evaluate(e);
    }
  }
  return {flow, intermediate};
}

/// Samples D_o (output inside the jump ball, the rest of zeta in the box) and
/// checks V_H(x+) <= 2 V_H(x) off the recurrent set and
/// V_H(x+) <= 2 V_H(x) + mu_H(x) on it, for every successor.
inline ConditionResult check_jump_condition(const HybridSystem& sys, const CertificateConstants& k,
                                            const SampleSpec& spec = {}) {
  ConditionResult result{"jump"};
  const Eigen::Index nu = sys.plant().nu();
  const Matrix& C = sys.plant().C;
  const Matrix C_pinv = C.completeOrthogonalDecomposition().pseudoInverse();
  const Matrix null_proj = Matrix::Identity(nu, nu) - C_pinv * C;
  const double growth = std::exp(k.lambda_d);
  std::mt19937_64 rng(spec.seed + 1);
  std::uniform_real_distribution<double> box(-spec.box_radius, spec.box_radius);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (ObsId o : detail::observations_in_use(sys)) {
    const double rho = sys.region(o).jump_radius;
    const auto states = detail::states_with_observation(sys, o);
    auto evaluate = [&](const Vector& zeta) {
      for (StateId s : states) {
        HybridState x{{s, o}, zeta};
        const double vh = v_h(sys, k, x);
        const bool recurrent = sys.in_recurrent_set(x);
        const double w = w_value(sys, zeta, o);
        const double mu_h = recurrent ? k.d_max + k.lambda() * (2.0 * w + 2.0 * k.j1) : 0.0;
        for (const auto& next : sys.automaton().jump_map(x.chi)) {
          const double v_next = v_h(sys, k, {next, zeta});
          result.record(growth * vh + mu_h - v_next, x, next);
        }
      }
    };
    evaluate(zeta_from_error(sys, Vector::Zero(2 * nu), o));
    const auto p = C.rows();
    for (long n = 0; n < spec.samples; ++n) {
      Vector dir(p);
      for (Eigen::Index i = 0; i < p; ++i) dir(i) = gauss(rng);
      // Uniform in the ball; every 10th sample on its boundary sphere.
      const double radius = n % 10 == 0 ? rho : rho * std::pow(unit(rng), 1.0 / static_cast<double>(p));
      const Vector out_offset = radius * dir / dir.norm();
      Vector free(nu);
      for (Eigen::Index i = 0; i < nu; ++i) free(i) = box(rng);
      Vector e(2 * nu);
      e.head(nu) = C_pinv * out_offset + null_proj * free;
      for (Eigen::Index i = 0; i < nu; ++i) e(nu + i) = box(rng);
      Vector zeta = zeta_from_error(sys, e, o);
      if (sys.guard(o, zeta) > 0.0) continue;  // rounding pushed it outside the ball
      evaluate(zeta);
    }
  }
  return result;
}

/// Decrease check on the discrete part: off the accepting set every jump
/// lowers V_BA by at least 1; on it the increase is at most -1 + (1 + d_max).
/// Returns the offending (chi, successor) pairs.
inline std::vector<std::pair<AutomatonState, AutomatonState>> discrete_decrease_violations(
    const ConstrainedAutomaton& c) {
  std::vector<std::pair<AutomatonState, AutomatonState>> out;
  const double mu = 1.0 + c.d_max();
  for (const auto& chi : c.jump_set()) {
    const bool accepting = c.base().is_accepting(chi.s);
    for (const auto& next : c.jump_map(chi)) {
      const double change = c.v_ba(next) - c.v_ba(chi);
      if (change > -1.0 + (accepting ? mu : 0.0)) out.push_back({chi, next});
    }
  }
  return out;
}

struct RestrictedTimeResult {
  bool passed = true;
  int max_discrete_jumps = 0;      // longest jump chain off the accepting set
  int max_enumerated_jumps = 0;    // over hybrid runs of the restricted system
  long enumerated_leaves = 0;
  double min_algebraic_slack = std::numeric_limits<double>::infinity();  // zero at j = d_max
  std::string detail;
};

/// Restricted to the complement of the recurrent set, every run makes at most
/// d_max jumps, and then lambda_c t + lambda_d j <= M - gamma (t + j).
inline RestrictedTimeResult check_restricted_time_condition(const HybridSystem& sys,
                                                            const CertificateConstants& k,
                                                            const std::vector<HybridState>& starts,
                                                            const SimulationLimits& limits) {
  RestrictedTimeResult result;
  const ConstrainedAutomaton& c = sys.automaton();

  // A jump from an accepting state happens inside the jump ball, hence inside
  // Y_o, hence on the recurrent set: restricted chains stop at Sf.
  std::map<AutomatonState, int> memo;
  std::function<int(const AutomatonState&)> chain = [&](const AutomatonState& chi) -> int {
    if (c.base().is_accepting(chi.s)) return 0;
    if (auto it = memo.find(chi); it != memo.end()) return it->second;
    memo[chi] = std::numeric_limits<int>::max() / 2;  // cycle guard
    int best = 0;
    for (const auto& next : c.jump_map(chi)) {
      if (c.v_ba(next) >= c.v_ba(chi)) {
        result.passed = false;
        result.detail = "non-decreasing jump off the accepting set";
      }
      best = std::max(best, 1 + chain(next));
    }
    return memo[chi] = best;
  };
  for (const auto& chi : c.jump_set()) result.max_discrete_jumps = std::max(result.max_discrete_jumps, chain(chi));
  if (result.max_discrete_jumps > k.d_max) {
    result.passed = false;
    result.detail = "discrete chain longer than d_max";
  }

  const HybridSystem restricted = restrict(sys, outside_recurrent_set);
  const int depth = std::min(kMaxEnumerationDepth, k.d_max + 1);
  for (const auto& x0 : starts) {
    if (!restricted.admits(x0)) continue;
    const RunTree tree = enumerate_runs(restricted, x0, depth, limits);
    for (const auto& arc : tree.leaf_arcs()) {
      ++result.enumerated_leaves;
      result.max_enumerated_jumps = std::max(result.max_enumerated_jumps, arc.jump_count());
    }
  }
  if (result.max_enumerated_jumps > k.d_max) {
    result.passed = false;
    result.detail = "restricted run with more than d_max jumps";
  }

  for (int j = 0; j <= k.d_max; ++j)
    for (double t : {0.0, 1.0, 10.0, 100.0, 1000.0, 1e6}) {
      const double lhs = k.lambda_c * t + k.lambda_d * j;
      const double rhs = k.M - k.gamma * (t + j);
      const double slack = rhs - lhs;
      result.min_algebraic_slack = std::min(result.min_algebraic_slack, slack);
      if (slack < -1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)})) {
        result.passed = false;
        result.detail = "time bound violated at j = " + std::to_string(j);
      }
    }
  return result;
}

// ---------------------------------------------------------------------------
// Recurrence time.

/// Compact box of initial conditions. With `matching_estimate` the box is over
/// xi and xi_hat = xi; otherwise it is over the full zeta.
struct StateBox {
  Vector lo;
  Vector hi;
  bool matching_estimate = true;
};

struct UgrBound {
  double v_upper = 0.0;
  double v_lower = 0.0;
  double t_hat = 0.0;
  bool exact_vertex_max = false;  // false: rigorous absolute-value bound
};

/// Upper bound on V_H over the box (all chi in the jump set) and
/// T_hat = (M + log V_u - log V_l) / gamma with V_l = min(1, lambda w_min).
inline UgrBound predicted_ugr_bound(const HybridSystem& sys, const CertificateConstants& k, const StateBox& box) {
  const Eigen::Index nu = sys.plant().nu();
  const Eigen::Index dim = box.matching_estimate ? nu : 2 * nu;
  if (box.lo.size() != dim || box.hi.size() != dim || (box.hi - box.lo).minCoeff() < 0.0)
    throw Error(ErrorKind::Validation, "empty or mis-sized initial-condition box");

  // W as a quadratic in the box variable z around the setpoint: z -> zeta - zeta_o.
  Matrix T(2 * nu, dim);
  if (box.matching_estimate) {
    T.setZero();
    T.topRows(nu).setIdentity();  // xi - xi_hat = 0
  } else {
    T.setZero();
    T.topLeftCorner(nu, nu).setIdentity();
    T.bottomLeftCorner(nu, nu).setIdentity();
    T.bottomRightCorner(nu, nu) = -Matrix::Identity(nu, nu);
  }
  const Matrix Wq = T.transpose() * sys.loop().P * T;

  std::vector<Eigen::Index> free_axes;
  for (Eigen::Index i = 0; i < dim; ++i)
    if (box.hi(i) > box.lo(i)) free_axes.push_back(i);

  UgrBound out;
  out.exact_vertex_max = free_axes.size() <= 20;
  double v_upper = 0.0;
  for (ObsId o : detail::observations_in_use(sys)) {
    int d_top = 0;
    for (StateId s : detail::states_with_observation(sys, o)) d_top = std::max(d_top, sys.automaton().distances()(s));
    Vector origin(dim);
    if (box.matching_estimate) {
      origin = sys.target(o).xi;
    } else {
      origin << sys.target(o).xi, sys.target(o).xi;
    }
    double w_top = 0.0;
    if (out.exact_vertex_max) {
      // A convex quadratic attains its box maximum at a vertex.
      const std::size_t count = std::size_t{1} << free_axes.size();
      Vector z = box.lo - origin;
      for (std::size_t mask = 0; mask < count; ++mask) {
        for (std::size_t b = 0; b < free_axes.size(); ++b) {
          const Eigen::Index i = free_axes[b];
          z(i) = ((mask >> b) & 1U ? box.hi(i) : box.lo(i)) - origin(i);
        }
        w_top = std::max(w_top, z.dot(Wq * z));
      }
    } else {
      const Vector reach = (box.lo - origin).cwiseAbs().cwiseMax((box.hi - origin).cwiseAbs());
      w_top = reach.dot(Wq.cwiseAbs() * reach);
    }
    v_upper = std::max(v_upper, d_top + k.lambda() * w_top);
  }
  out.v_upper = v_upper;
  out.v_lower = std::min(1.0, k.lambda() * k.w_min);
  out.v_upper = std::max(out.v_upper, out.v_lower);
  out.t_hat = (k.M + std::log(out.v_upper) - std::log(out.v_lower)) / k.gamma;
  return out;
}

struct ArcRecurrence {
  std::size_t start_index = 0;
  std::string policy;
  Termination termination = Termination::TimeLimit;
  int jumps = 0;
  std::vector<int> visit_intervals;  // j values whose segment meets the recurrent set
  std::optional<double> first_hit_t;
  std::optional<int> first_hit_j;
  int max_gap = 0;

  std::optional<double> hitting_time() const {
    if (!first_hit_t) return std::nullopt;
    return *first_hit_t + *first_hit_j;
  }
};

struct UgrSweep {
  std::vector<ArcRecurrence> arcs;
  double max_hitting_time = 0.0;
  long never_hit = 0;
};

/// Visits of the recurrent set along a simulated arc, per interval j.
inline ArcRecurrence recurrence_profile(const HybridSystem& sys, const HybridArc& arc) {
  ArcRecurrence out;
  out.termination = arc.termination;
  out.jumps = arc.jump_count();
  for (const auto& seg : arc.segments) {
    for (const auto& sample : seg.samples) {
      if (!sys.in_recurrent_set(sample.x)) continue;
      if (!out.first_hit_t) {
        out.first_hit_t = sample.t;
        out.first_hit_j = seg.j;
      }
      out.visit_intervals.push_back(seg.j);
      break;
    }
  }
  for (std::size_t i = 1; i < out.visit_intervals.size(); ++i)
    out.max_gap = std::max(out.max_gap, out.visit_intervals[i] - out.visit_intervals[i - 1]);
  return out;
}

/// Simulates every start under every policy and records hitting times.
inline UgrSweep empirical_ugr(const HybridSystem& sys, const std::vector<HybridState>& starts,
                              const std::vector<BranchPolicy>& policies, const SimulationLimits& limits) {
  if (starts.empty() || policies.empty()) throw Error(ErrorKind::Validation, "empty sweep");
  UgrSweep sweep;
  for (std::size_t i = 0; i < starts.size(); ++i)
    for (const auto& policy : policies) {
      ArcRecurrence rec = recurrence_profile(sys, simulate(sys, starts[i], policy, limits));
      rec.start_index = i;
      rec.policy = policy.to_string();
      if (auto h = rec.hitting_time())
        sweep.max_hitting_time = std::max(sweep.max_hitting_time, *h);
      else
        ++sweep.never_hit;
      sweep.arcs.push_back(std::move(rec));
    }
  return sweep;
}

// ---------------------------------------------------------------------------
// Full report.

struct CertificateReport {
  CertificateConstants constants;
  std::vector<SignCheck> signs;
  ConditionResult flow;
  ConditionResult flow_intermediate;
  ConditionResult jump;
  RestrictedTimeResult restricted;
  std::vector<std::pair<AutomatonState, AutomatonState>> discrete_violations;
  std::optional<UgrBound> ugr;

  bool passed() const {
    bool ok = flow.passed && flow_intermediate.passed && jump.passed && restricted.passed &&
              discrete_violations.empty();
    for (const auto& s : signs) ok = ok && s.passed;
    return ok;
  }
};

inline CertificateReport certify(const HybridSystem& sys, const SampleSpec& spec,
                                 const std::vector<HybridState>& starts, const SimulationLimits& limits,
                                 const std::optional<StateBox>& box = std::nullopt) {
  CertificateReport report;
  report.constants = certificate_constants(sys);
  report.signs = sign_checks(report.constants);
  std::tie(report.flow, report.flow_intermediate) = check_flow_condition(sys, report.constants, spec);
  report.jump = check_jump_condition(sys, report.constants, spec);
  report.restricted = check_restricted_time_condition(sys, report.constants, starts, limits);
  report.discrete_violations = discrete_decrease_violations(sys.automaton());
  if (box) report.ugr = predicted_ugr_bound(sys, report.constants, *box);
  return report;
}

}  // namespace ltlrec
