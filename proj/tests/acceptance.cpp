// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.
// Tolerances and time budgets are fixed here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>

#include "test_support.hpp"

using namespace ltlrec;

namespace {

constexpr double kLyapunovResidual = 1e-8;
constexpr double kWMinAgreement = 1e-6;
constexpr double kDerivativeAgreement = 1e-6;
constexpr double kSpectrumTol = 1e-9;
constexpr int kMinVisits = 3;
constexpr int kSweepJumps = 20;

struct Outcome {
  bool passed = false;
  std::string detail;
};

bool run_criterion(int number, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = elapsed < budget_s;
  const bool passed = out.passed && in_time;
  std::printf("criterion %d: %s (%.2f s of %.0f s) %s\n", number, passed ? "PASS" : "FAIL", elapsed, budget_s,
              out.detail.c_str());
  std::fflush(stdout);
  return passed;
}

Scenario robots() { return load_scenario(ltlrec::testing::scenario_path("robots4.json")); }

template <typename T>
std::string join(const std::vector<T>& xs, const char* prefix) {
  std::ostringstream out;
  for (std::size_t i = 0; i < xs.size(); ++i) out << (i ? " " : "") << prefix << xs[i];
  return out.str();
}

Outcome table_reproduction() {
  const std::vector<std::string> expected{
      "(s0,o2),(s2,o2),(s6,o2) -> {s4} -> {(s4,o3)}",
      "(s1,o3),(s3,o3) -> {s2} -> {(s2,o2)}",
      "(s4,o3) -> {s5} -> {(s5,o1)}",
      "(s5,o1) -> {s3,s6} -> {(s3,o3),(s6,o2)}",
  };
  const auto lines =
      constrained_table_lines(ConstrainedAutomaton(prune_infeasible(ltlrec::testing::fig2())));
  return {lines == expected, std::to_string(lines.size()) + " rows"};
}

Outcome run_reproduction() {
  const Scenario sc = robots();
  const HybridArc arc = simulate(build_system(sc), initial_state(sc), BranchPolicy::parse("scripted:s6"),
                                 {sc.limits.t_max, 7});
  const auto states = state_word(arc);
  const auto obs = observation_word(arc);
  const std::vector<StateId> want_states{0, 4, 5, 6, 4, 5, 6, 4};
  const std::vector<ObsId> want_obs{2, 3, 1, 2, 3, 1, 2};
  const bool ok = states.size() >= want_states.size() && obs.size() >= want_obs.size() &&
                  std::equal(want_states.begin(), want_states.end(), states.begin()) &&
                  std::equal(want_obs.begin(), want_obs.end(), obs.begin());
  return {ok, "states " + join(states, "s") + ", observations " + join(obs, "o")};
}

struct SweepResult {
  UgrSweep sweep;
  int d_max = 0;
  UgrBound bound;
};

SweepResult robot_sweep() {
  const Scenario sc = robots();
  const HybridSystem sys = build_system(sc);
  const auto starts = grid_states(sc);
  SweepResult out;
  out.sweep = empirical_ugr(sys, starts, grid_policies(sc), {sc.limits.t_max, kSweepJumps});
  out.d_max = sys.automaton().d_max();
  out.bound = predicted_ugr_bound(sys, certificate_constants(sys), grid_box(starts));
  return out;
}

Outcome recurrence(const SweepResult& r) {
  long few_visits = 0, wide_gaps = 0, short_arcs = 0;
  for (const auto& arc : r.sweep.arcs) {
    if (static_cast<int>(arc.visit_intervals.size()) < kMinVisits) ++few_visits;
    if (arc.max_gap > r.d_max + 1) ++wide_gaps;
    if (arc.jumps < kSweepJumps) ++short_arcs;
  }
  std::ostringstream d;
  d << r.sweep.arcs.size() << " arcs; under " << kMinVisits << " visits: " << few_visits
    << "; gaps over d_max+1: " << wide_gaps << "; arcs short of " << kSweepJumps << " jumps: " << short_arcs;
  return {r.sweep.arcs.size() == 405 && few_visits == 0 && wide_gaps == 0 && short_arcs == 0, d.str()};
}

Outcome certificate() {
  const Scenario sc = robots();
  const HybridSystem sys = build_system(sc);
  const SampleSpec spec{100000, 10.0, sc.certification.seed};
  const auto starts = grid_states(sc);
  const auto report = certify(sys, spec, starts, sc.limits);
  const auto& k = report.constants;
  const auto& s = k.selection;
  const bool constants_ok = k.lambda_c < 0.0 && k.lambda_d == std::log(2.0) && s.lambda_lo < s.lambda &&
                            s.lambda < s.lambda_hi;
  const bool ok = report.flow.passed && report.flow.min_margin > 0.0 && report.jump.passed &&
                  report.jump.min_margin > 0.0 && report.restricted.passed && constants_ok && report.passed();
  std::ostringstream d;
  d << "flow margin " << report.flow.min_margin << " over " << report.flow.evaluations << ", jump margin "
    << report.jump.min_margin << " over " << report.jump.evaluations << ", restricted jumps "
    << report.restricted.max_enumerated_jumps << "/" << k.d_max << " (algebraic slack "
    << report.restricted.min_algebraic_slack << "), lambda_c " << k.lambda_c << ", lambda " << s.lambda << " in ("
    << s.lambda_lo << ", " << s.lambda_hi << ")";
  return {ok, d.str()};
}

Outcome lemma_suite() {
  std::mt19937_64 rng(2024);
  long l1 = 0, l2 = 0, l6 = 0, pairs = 0;
  for (int n = 0; n < 200; ++n) {
    const ConstrainedAutomaton c(ltlrec::testing::random_pruned_automaton(rng, 12, 4));
    const double mu = 1.0 + c.d_max();
    for (StateId s : c.base().states())
      if (c.constrained_observations(s).empty()) ++l1;
    for (const auto& chi : c.jump_set()) {
      const auto next = c.jump_map(chi);
      if (next.empty()) ++l2;
      for (const auto& g : next) {
        ++pairs;
        if (!c.in_jump_set(g)) ++l2;
        const double change = c.v_ba(g) - c.v_ba(chi);
        if (change > -1.0 + (c.base().is_accepting(chi.s) ? mu : 0.0)) ++l6;
      }
    }
  }
  std::ostringstream d;
  d << pairs << " jump pairs; violations: empty O^C " << l1 << ", closure " << l2 << ", decrease " << l6;
  return {l1 == 0 && l2 == 0 && l6 == 0, d.str()};
}

Outcome numerics() {
  std::mt19937_64 rng(7);
  double worst_residual = 0.0;
  bool pd = true;
  for (int n = 0; n < 100; ++n) {
    const Eigen::Index dim = 2 + (n * 13) % 31;
    const Matrix F = ltlrec::testing::random_hurwitz(rng, dim);
    const Matrix Q = ltlrec::testing::random_spd(rng, dim);
    const Matrix P = solve_lyapunov(F, Q);
    worst_residual = std::max(worst_residual, (P * F + F.transpose() * P + Q).norm() / Q.norm());
    pd = pd && Eigen::SelfAdjointEigenSolver<Matrix>(P).eigenvalues().minCoeff() > 0.0;
  }

  double worst_wmin = 0.0;
  for (int n = 0; n < 50; ++n) {
    const Eigen::Index nu = 1 + n % 4;
    const Matrix P = ltlrec::testing::random_spd(rng, 2 * nu);
    const Matrix C = ltlrec::testing::random_matrix(rng, nu, nu);
    const double closed = w_min(P, C, {0.3});
    const double oracle = ltlrec::testing::w_min_oracle(P, C, 0.3, rng);
    worst_wmin = std::max(worst_wmin, std::abs(closed - oracle) / oracle);
  }

  const HybridSystem sys = build_system(robots());
  const auto k = certificate_constants(sys);
  const std::vector<AutomatonState> chis(sys.automaton().jump_set().begin(), sys.automaton().jump_set().end());
  double worst_fd = 0.0;
  for (int n = 0; n < 100; ++n) {
    const AutomatonState chi = chis[static_cast<std::size_t>(n) % chis.size()];
    const Vector& xi = sys.target(chi.o).xi;
    const Vector zeta = (Vector(2 * xi.size()) << xi, xi).finished() +
                        ltlrec::testing::random_matrix(rng, 2 * xi.size(), 1, 1.0);
    const HybridState x{chi, zeta};
    const double exact = v_h_flow_derivative(sys, k, x);
    const double fd = ltlrec::testing::v_h_derivative_fd(sys, k, x);
    worst_fd = std::max(worst_fd, std::abs(exact - fd) / std::max(1.0, std::abs(fd)));
  }
  std::ostringstream d;
  d << "Lyapunov residual " << worst_residual << (pd ? ", P > 0" : ", P not PD") << "; w_min gap " << worst_wmin
    << "; derivative gap " << worst_fd;
  return {worst_residual <= kLyapunovResidual && pd && worst_wmin <= kWMinAgreement &&
              worst_fd <= kDerivativeAgreement,
          d.str()};
}

Outcome ugr_soundness(const SweepResult& r) {
  std::ostringstream d;
  d << "max hitting time " << r.sweep.max_hitting_time << " vs T_hat " << r.bound.t_hat << ", never hit "
    << r.sweep.never_hit;
  return {r.sweep.never_hit == 0 && r.sweep.max_hitting_time <= r.bound.t_hat, d.str()};
}

Outcome spectrum() {
  const Scenario sc = robots();
  const LinearPlant& p = sc.plant;
  double worst = 0.0;
  const std::complex<double> ctrl(-1.0, 0.5);
  for (Eigen::Index i = 0; i < p.m(); ++i) {
    const Matrix A = p.A.block(2 * i, 2 * i, 2, 2);
    const Matrix B = p.B.block(2 * i, i, 2, 1);
    const Matrix C = p.C.block(i, 2 * i, 1, 2);
    const Matrix K = sc.K.block(i, 2 * i, 1, 2);
    const Matrix L = sc.L.block(2 * i, i, 2, 1);
    auto ec = eigenvalues(A - B * K);
    auto eo = eigenvalues(A - L * C);
    worst = std::max({worst, std::min(std::abs(ec[0] - ctrl), std::abs(ec[0] - std::conj(ctrl))),
                      std::abs(ec[0] - std::conj(ec[1])), std::abs(eo[0] + 5.0), std::abs(eo[1] + 5.0)});
  }
  // The per-axis blocks are the whole story only if the full matrices are block diagonal.
  Matrix mask = Matrix::Zero(p.nu(), p.nu());
  for (Eigen::Index i = 0; i < p.m(); ++i) mask.block(2 * i, 2 * i, 2, 2).setOnes();
  const Matrix closed = p.A - p.B * sc.K;
  const bool block_diagonal = (closed.array() * (1.0 - mask.array())).abs().maxCoeff() == 0.0;
  std::ostringstream d;
  d << p.m() << " axes, worst eigenvalue error " << worst << (block_diagonal ? "" : ", coupling present");
  return {worst <= kSpectrumTol && block_diagonal, d.str()};
}

}  // namespace

int main() {
  bool all = true;
  all &= run_criterion(1, 1.0, table_reproduction);
  all &= run_criterion(2, 10.0, run_reproduction);
  // Criterion 7 reuses the sweep of criterion 3, whose budget covers it.
  std::optional<SweepResult> sweep;
  all &= run_criterion(3, 120.0, [&] {
    sweep = robot_sweep();
    return recurrence(*sweep);
  });
  all &= run_criterion(4, 120.0, certificate);
  all &= run_criterion(5, 30.0, lemma_suite);
  all &= run_criterion(6, 60.0, numerics);
  all &= run_criterion(7, 1.0, [&] { return sweep ? ugr_soundness(*sweep) : Outcome{false, "sweep did not run"}; });
  all &= run_criterion(8, 1.0, spectrum);
  std::printf("%s\n", all ? "all criteria pass" : "some criteria fail");
  return all ? 0 : 1;
}
