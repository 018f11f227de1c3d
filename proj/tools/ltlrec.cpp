// Command-line front end: validate, inspect, simulate and certify scenarios.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "ltlrec/io.hpp"

namespace fs = std::filesystem;
using namespace ltlrec;

namespace {

constexpr int kChecksFailed = 1;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return 2;
    case ErrorKind::Validation: return 3;
    case ErrorKind::Infeasible: return 4;
    case ErrorKind::InfiniteDistance: return 5;
    case ErrorKind::NotInJumpSet: return 6;
    case ErrorKind::NotHurwitz: return 7;
    case ErrorKind::Numerical: return 8;
    case ErrorKind::InitialStateOutsideDomain: return 9;
    case ErrorKind::PolicyViolation: return 10;
    case ErrorKind::DepthExceeded: return 11;
    case ErrorKind::Io: return 12;
  }
  return 13;
}

struct Options {
  std::string scenario;
  std::string automaton;
  std::string policy;
  std::string out;
  std::optional<double> t_max;
  std::optional<int> j_max;
  int depth = 3;
  int min_visits = 3;
  std::optional<long> samples;
};

Scenario load(const Options& opt) {
  if (opt.scenario.empty()) throw Error(ErrorKind::Validation, "--scenario is required");
  return load_scenario(opt.scenario);
}

SimulationLimits limits_for(const Scenario& sc, const Options& opt) {
  SimulationLimits limits = sc.limits;
  if (opt.t_max) limits.t_max = *opt.t_max;
  if (opt.j_max) limits.j_max = *opt.j_max;
  return limits;
}

void emit(const Options& opt, const std::string& file, const std::string& text) {
  if (opt.out.empty()) return;
  const fs::path path = fs::path(opt.out) / file;
  write_text(path, text);
  std::cout << "wrote " << path.string() << "\n";
}

/// Automaton from --automaton, else from the scenario.
BuchiAutomaton automaton_for(const Options& opt) {
  if (!opt.automaton.empty()) return parse_automaton(detail::read_text(opt.automaton));
  return load(opt).automaton;
}

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

int cmd_validate(const Options& opt) {
  const Scenario sc = load(opt);
  const ValidationReport report = validate_scenario(sc);
  bool hurwitz_failed = false;
  for (const auto& c : report.checks) {
    std::printf("%-24s %-4s %s\n", c.name.c_str(), c.passed ? "ok" : "FAIL", c.detail.c_str());
    if (!c.passed && c.name.rfind("hurwitz", 0) == 0) hurwitz_failed = true;
  }
  emit(opt, "validate.json", to_json(report).dump(2) + "\n");
  if (report.all_passed()) return 0;
  return hurwitz_failed ? exit_code(ErrorKind::NotHurwitz) : kChecksFailed;
}

int cmd_distances(const Options& opt) {
  const ConstrainedAutomaton c(prune_infeasible(automaton_for(opt)));
  Json out = Json::object();
  for (const auto& [s, d] : c.distances().d) {
    std::printf("s%d %d\n", s, d);
    out["s" + std::to_string(s)] = d;
  }
  std::printf("d_max %d\n", c.d_max());
  emit(opt, "distances.json", Json{{"d", out}, {"d_max", c.d_max()}}.dump(2) + "\n");
  return 0;
}

int cmd_constrain(const Options& opt) {
  const ConstrainedAutomaton c(prune_infeasible(automaton_for(opt)));
  Json rows = Json::array();
  for (const auto& line : constrained_table_lines(c)) {
    std::cout << line << "\n";
    rows.push_back(line);
  }
  emit(opt, "constrained.json", Json{{"rows", rows}}.dump(2) + "\n");
  return 0;
}

int cmd_synthesize(const Options& opt) {
  const Scenario sc = load(opt);
  const HybridSystem sys = build_system(sc);
  const auto& loop = sys.loop();
  std::printf("nu %ld, m %ld, p %ld\n", static_cast<long>(sc.plant.nu()), static_cast<long>(sc.plant.m()),
              static_cast<long>(sc.plant.p()));
  std::printf("max Re eig(A-BK) %s\n", fixed(spectral_abscissa(sc.plant.A - sc.plant.B * sc.K), 10).c_str());
  std::printf("max Re eig(A-LC) %s\n", fixed(spectral_abscissa(sc.plant.A - sc.L * sc.plant.C), 10).c_str());
  const double residual = (loop.P * loop.F_tilde + loop.F_tilde.transpose() * loop.P + loop.Q).norm() / loop.Q.norm();
  std::printf("Lyapunov relative residual %s\n", fixed(residual, 3).c_str());
  for (const auto& [o, t] : loop.targets)
    std::printf("o%d rho %s |xi_o| %s\n", o, fixed(sys.region(o).jump_radius).c_str(), fixed(t.xi.norm()).c_str());
  emit(opt, "synthesis.json", to_json(loop).dump(2) + "\n");
  return 0;
}

std::string join_word(const std::vector<int>& word, char prefix) {
  std::string out;
  for (int w : word) out += (out.empty() ? "" : " ") + std::string(1, prefix) + std::to_string(w);
  return out;
}

int cmd_simulate(const Options& opt) {
  const Scenario sc = load(opt);
  const HybridSystem sys = build_system(sc);
  const BranchPolicy policy = BranchPolicy::parse(opt.policy.empty() ? sc.default_policy : opt.policy);
  const HybridArc arc = simulate(sys, initial_state(sc), policy, limits_for(sc, opt));
  std::cout << "policy " << policy.to_string() << "\n";
  std::cout << "termination " << to_string(arc.termination) << ", jumps " << arc.jump_count() << ", t_end "
            << fixed(arc.final_sample().t) << "\n";
  std::cout << "states " << join_word(state_word(arc), 's') << "\n";
  std::cout << "observations " << join_word(observation_word(arc), 'o') << "\n";
  std::function<double(const HybridState&)> vh;
  std::optional<CertificateConstants> k;
  try {
    k = certificate_constants(sys);
  } catch (const Error&) {
    // V_H column stays NaN when the certificate constants are undefined.
  }
  if (k) vh = [&](const HybridState& x) { return v_h(sys, *k, x); };
  emit(opt, "trace.csv", trace_csv(arc, sc.plant.nu(), vh));
  emit(opt, "arc.json", to_json(arc).dump(2) + "\n");
  emit(opt, "plot.svg", svg_plot(sys, {arc}));
  return 0;
}

int cmd_enumerate(const Options& opt) {
  const Scenario sc = load(opt);
  const HybridSystem sys = build_system(sc);
  const RunTree tree = enumerate_runs(sys, initial_state(sc), opt.depth, limits_for(sc, opt));
  const auto leaves = tree.leaves();
  std::cout << "nodes " << tree.nodes.size() << ", leaves " << leaves.size() << "\n";
  for (int leaf : leaves) {
    const HybridArc arc = tree.arc_to(leaf);
    std::cout << join_word(state_word(arc), 's') << "  |  " << join_word(observation_word(arc), 'o') << "\n";
  }
  emit(opt, "runs.json", to_json(tree).dump(2) + "\n");
  return 0;
}

int cmd_certify(const Options& opt) {
  const Scenario sc = load(opt);
  const HybridSystem sys = build_system(sc);
  SampleSpec spec = sc.certification;
  if (opt.samples) spec.samples = *opt.samples;
  const auto starts = grid_states(sc);
  const CertificateReport report = certify(sys, spec, starts, limits_for(sc, opt), grid_box(starts));
  const auto& k = report.constants;
  std::printf("%-22s %s\n", "d_max", std::to_string(k.d_max).c_str());
  std::printf("%-22s %s\n", "w_min", fixed(k.w_min, 10).c_str());
  std::printf("%-22s %s\n", "J1", fixed(k.j1, 10).c_str());
  std::printf("%-22s %s\n", "lambda'", fixed(k.lambda_prime, 10).c_str());
  std::printf("%-22s %s\n", "theta", fixed(k.theta(), 12).c_str());
  std::printf("%-22s %s in (%s, %s)\n", "lambda", fixed(k.lambda(), 10).c_str(),
              fixed(k.selection.lambda_lo, 10).c_str(), fixed(k.selection.lambda_hi, 10).c_str());
  std::printf("%-22s %s\n", "lambda_c", fixed(k.lambda_c, 10).c_str());
  std::printf("%-22s %s\n", "lambda_d", fixed(k.lambda_d, 10).c_str());
  std::printf("%-22s %s\n", "M", fixed(k.M, 10).c_str());
  std::printf("%-22s %s\n", "gamma", fixed(k.gamma, 10).c_str());
  if (report.ugr) std::printf("%-22s %s\n", "T_hat", fixed(report.ugr->t_hat, 10).c_str());
  std::printf("\n%-22s %-5s %12s %14s\n", "check", "pass", "evaluations", "min margin");
  auto row = [](const ConditionResult& r) {
    std::printf("%-22s %-5s %12ld %14s\n", r.name.c_str(), r.passed ? "yes" : "NO", r.evaluations,
                fixed(r.min_margin).c_str());
  };
  row(report.flow);
  row(report.flow_intermediate);
  row(report.jump);
  std::printf("%-22s %-5s %12ld %14s\n", "restricted-time", report.restricted.passed ? "yes" : "NO",
              report.restricted.enumerated_leaves, fixed(report.restricted.min_algebraic_slack).c_str());
  std::printf("%-22s %-5s %12zu\n", "discrete-decrease", report.discrete_violations.empty() ? "yes" : "NO",
              report.discrete_violations.size());
  for (const auto& s : report.signs)
    if (!s.passed) std::printf("sign check failed: %s\n", s.name.c_str());
  std::printf("\nverdict %s\n", report.passed() ? "PASS" : "FAIL");
  emit(opt, "certificate.json", to_json(report).dump(2) + "\n");
  return report.passed() ? 0 : kChecksFailed;
}

int cmd_ugr_sweep(const Options& opt) {
  const Scenario sc = load(opt);
  const HybridSystem sys = build_system(sc);
  const auto starts = grid_states(sc);
  const auto policies = grid_policies(sc);
  const SimulationLimits limits = limits_for(sc, opt);
  const CertificateConstants k = certificate_constants(sys);
  const UgrBound bound = predicted_ugr_bound(sys, k, grid_box(starts));
  const UgrSweep sweep = empirical_ugr(sys, starts, policies, limits);
  long short_arcs = 0, wide_gaps = 0;
  Json arcs = Json::array();
  for (const auto& a : sweep.arcs) {
    if (static_cast<int>(a.visit_intervals.size()) < opt.min_visits) ++short_arcs;
    if (a.max_gap > k.d_max + 1) ++wide_gaps;
    Json entry{{"start", a.start_index}, {"policy", a.policy}, {"jumps", a.jumps},
               {"visits", a.visit_intervals}, {"max_gap", a.max_gap}};
    if (auto h = a.hitting_time()) entry["hitting_time"] = *h;
    arcs.push_back(entry);
  }
  const bool ok = sweep.never_hit == 0 && short_arcs == 0 && wide_gaps == 0 && sweep.max_hitting_time <= bound.t_hat;
  std::printf("arcs %zu (starts %zu x policies %zu)\n", sweep.arcs.size(), starts.size(), policies.size());
  std::printf("never hit %ld, fewer than %d visits %ld, gaps above d_max+1 %ld\n", sweep.never_hit, opt.min_visits,
              short_arcs, wide_gaps);
  std::printf("max hitting time t+j %s, T_hat %s\n", fixed(sweep.max_hitting_time).c_str(),
              fixed(bound.t_hat).c_str());
  std::printf("verdict %s\n", ok ? "PASS" : "FAIL");
  emit(opt, "ugr.json",
       Json{{"passed", ok}, {"max_hitting_time", sweep.max_hitting_time}, {"T_hat", bound.t_hat},
            {"V_u", bound.v_upper}, {"V_l", bound.v_lower}, {"arcs", arcs}}
               .dump(2) +
           "\n");
  return ok ? 0 : kChecksFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recurrence-based controller synthesis for Buchi tasks on linear plants"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool automaton_ok = false) {
    sub->add_option("--scenario", opt.scenario, "Scenario JSON file");
    if (automaton_ok) sub->add_option("--automaton", opt.automaton, "Automaton file (instead of a scenario)");
    sub->add_option("--out", opt.out, "Output directory");
  };
  auto add_limits = [&](CLI::App* sub) {
    sub->add_option("--tmax", opt.t_max, "Flow time limit");
    sub->add_option("--jmax", opt.j_max, "Jump limit");
  };

  auto* validate = app.add_subcommand("validate", "Check plant assumptions, gains and regions");
  add_common(validate);
  auto* distances = app.add_subcommand("distances", "Distances to the accepting set");
  add_common(distances, true);
  auto* constrain = app.add_subcommand("constrain", "Distance-constrained transition table");
  add_common(constrain, true);
  auto* synthesize = app.add_subcommand("synthesize", "Closed loop, setpoints and Lyapunov matrix");
  add_common(synthesize);
  auto* sim = app.add_subcommand("simulate", "Simulate one hybrid arc");
  add_common(sim);
  add_limits(sim);
  sim->add_option("--policy", opt.policy, "first | random:<seed> | scripted:<list>");
  auto* enumerate = app.add_subcommand("enumerate-runs", "Enumerate every branch of the jump map");
  add_common(enumerate);
  add_limits(enumerate);
  enumerate->add_option("--depth", opt.depth, "Number of jumps")->check(CLI::NonNegativeNumber);
  auto* cert = app.add_subcommand("certify", "Compute and check the recurrence certificate");
  add_common(cert);
  add_limits(cert);
  cert->add_option("--samples", opt.samples, "Samples per observation");
  auto* sweep = app.add_subcommand("ugr-sweep", "Hitting times over the initial-condition grid");
  add_common(sweep);
  add_limits(sweep);
  sweep->add_option("--min-visits", opt.min_visits, "Required visits of the recurrent set per arc");
  auto* tmpl = app.add_subcommand("template", "Print a scenario template with every default");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(opt);
    if (*distances) return cmd_distances(opt);
    if (*constrain) return cmd_constrain(opt);
    if (*synthesize) return cmd_synthesize(opt);
    if (*sim) return cmd_simulate(opt);
    if (*enumerate) return cmd_enumerate(opt);
    if (*cert) return cmd_certify(opt);
    if (*sweep) return cmd_ugr_sweep(opt);
    if (*tmpl) {
      std::cout << scenario_template().dump(2) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}
