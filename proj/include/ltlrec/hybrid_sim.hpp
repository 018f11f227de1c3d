#pragma once

// Closed-loop hybrid system of automaton and plant: exact affine flow between
// events, jumps through the constrained automaton, branch policies,
// restriction to a subset of the state space and run enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ltlrec/constrain.hpp"
#include "ltlrec/expm.hpp"
#include "ltlrec/plant.hpp"

namespace ltlrec {

/// x_H = (chi, zeta) with zeta = (xi, xi_hat).
struct HybridState {
  AutomatonState chi;
  Vector zeta;

  Eigen::Index nu() const { return zeta.size() / 2; }
  auto xi() const { return zeta.head(nu()); }
  auto xi_hat() const { return zeta.tail(nu()); }

  static HybridState make(AutomatonState chi, const Vector& xi, const Vector& xi_hat) {
    HybridState x{chi, Vector(xi.size() + xi_hat.size())};
    x.zeta << xi, xi_hat;
    return x;
  }
};

struct SimulationSettings {
  double h_step = 0.01;
  double event_tol = 1e-9;
};

struct SimulationLimits {
  double t_max = 100.0;
  int j_max = 20;
};

/// exp(h 2^-k [[F, g], [0, 0]]) for k = 0..kLevels. Lets event bisection run on
/// cached propagators only.
struct FlowTable {
  static constexpr int kLevels = 48;

  double h = 0.0;
  std::vector<Matrix> phi;

  FlowTable() = default;
  FlowTable(const Matrix& F, const Vector& g, double step) : h(step) {
    phi.reserve(kLevels + 1);
    for (int k = 0; k <= kLevels; ++k) phi.push_back(affine_transition(F, g, std::ldexp(step, -k)));
  }
};

class HybridSystem;

/// Membership test used by `restrict`; evaluated with the system it restricts.
using StatePredicate = std::function<bool(const HybridSystem&, const HybridState&)>;

class HybridSystem {
 public:
  HybridSystem(ConstrainedAutomaton automaton, LinearPlant plant, ClosedLoop loop,
               std::vector<Region> regions, SimulationSettings settings = {})
      : automaton_(std::move(automaton)),
        plant_(std::move(plant)),
        loop_(std::move(loop)),
        settings_(settings) {
    for (auto& r : regions) regions_[r.obs] = std::move(r);
    auto tables = std::make_shared<std::map<ObsId, FlowTable>>();
    for (const auto& [o, target] : loop_.targets)
      (*tables)[o] = FlowTable(loop_.F, target.g, settings_.h_step);
    tables_ = std::move(tables);
  }

  const ConstrainedAutomaton& automaton() const { return automaton_; }
  const LinearPlant& plant() const { return plant_; }
  const ClosedLoop& loop() const { return loop_; }
  const SimulationSettings& settings() const { return settings_; }
  const std::map<ObsId, Region>& regions() const { return regions_; }
  const Region& region(ObsId o) const { return regions_.at(o); }
  const ObservationTarget& target(ObsId o) const { return loop_.targets.at(o); }
  const FlowTable& flow_table(ObsId o) const { return tables_->at(o); }
  bool restricted() const { return static_cast<bool>(restriction_); }

  Vector output(const Vector& zeta) const { return plant_.C * zeta.head(plant_.nu()); }

  /// ||C xi - y_o|| - rho_o: negative inside the jump ball.
  double guard(ObsId o, const Vector& zeta) const {
    const Region& r = region(o);
    return (output(zeta) - r.target).norm() - r.jump_radius;
  }

  bool admits(const HybridState& x) const { return !restriction_ || restriction_(*this, x); }

  bool in_flow_set(const HybridState& x) const {
    return automaton_.in_jump_set(x.chi) && guard(x.chi.o, x.zeta) >= 0.0 && admits(x);
  }
  bool in_jump_set(const HybridState& x) const {
    return automaton_.in_jump_set(x.chi) && guard(x.chi.o, x.zeta) <= 0.0 && admits(x);
  }

  /// Accepting automaton state with o in O^C_s and C xi inside the open Y_o.
  bool in_recurrent_set(const HybridState& x) const {
    return automaton_.in_recurrent_set_ba(x.chi) && regions_.count(x.chi.o) &&
           region(x.chi.o).contains(output(x.zeta));
  }

  friend HybridSystem restrict(const HybridSystem& system, StatePredicate gamma);

 private:
  ConstrainedAutomaton automaton_;
  LinearPlant plant_;
  ClosedLoop loop_;
  std::map<ObsId, Region> regions_;
  SimulationSettings settings_;
  std::shared_ptr<const std::map<ObsId, FlowTable>> tables_;
  StatePredicate restriction_;
};

/// Same data with flow and jump sets intersected with gamma.
inline HybridSystem restrict(const HybridSystem& system, StatePredicate gamma) {
  HybridSystem out = system;
  if (out.restriction_) {
    auto previous = out.restriction_;
    out.restriction_ = [previous, gamma](const HybridSystem& s, const HybridState& x) {
      return previous(s, x) && gamma(s, x);
    };
  } else {
    out.restriction_ = std::move(gamma);
  }
  return out;
}

/// Gamma for the complement of the recurrent set.
inline bool outside_recurrent_set(const HybridSystem& s, const HybridState& x) {
  return !s.in_recurrent_set(x);
}

// ---------------------------------------------------------------------------
// Arcs.

struct Sample {
  double t = 0.0;
  HybridState x;
};

struct FlowSegment {
  int j = 0;
  std::vector<Sample> samples;  // first at t_j, last at t_{j+1} (or the arc end)
};

struct JumpRecord {
  int j = 0;  // jump from interval j to j + 1
  double t = 0.0;
  HybridState pre;
  AutomatonState chosen;
  std::vector<AutomatonState> alternatives;  // successors not taken
};

enum class Termination {
  TimeLimit,        // no jump-set entry before t_max (flow exhausted)
  JumpLimit,        // reached j_max at a jump-ready state
  LeftRestriction,  // next point would leave the restriction set
};

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::TimeLimit: return "flow-exhausted";
    case Termination::JumpLimit: return "jump-limit";
    case Termination::LeftRestriction: return "left-restriction";
  }
  return "?";
}

struct HybridArc {
  std::vector<FlowSegment> segments;
  std::vector<JumpRecord> jumps;
  Termination termination = Termination::TimeLimit;

  int jump_count() const { return static_cast<int>(jumps.size()); }

  /// t_0 = 0, t_1, ..., t_J.
  std::vector<double> jump_times() const {
    std::vector<double> out{segments.empty() || segments.front().samples.empty()
                                ? 0.0
                                : segments.front().samples.front().t};
    for (const auto& jump : jumps) out.push_back(jump.t);
    return out;
  }

  const Sample& final_sample() const { return segments.back().samples.back(); }
};

/// j -> o(t_j, j).
inline std::vector<ObsId> observation_word(const HybridArc& arc) {
  std::vector<ObsId> out;
  for (const auto& seg : arc.segments)
    if (!seg.samples.empty()) out.push_back(seg.samples.front().x.chi.o);
  return out;
}

/// j -> s(t_j, j).
inline std::vector<StateId> state_word(const HybridArc& arc) {
  std::vector<StateId> out;
  for (const auto& seg : arc.segments)
    if (!seg.samples.empty()) out.push_back(seg.samples.front().x.chi.s);
  return out;
}

// ---------------------------------------------------------------------------
// Event detection.

namespace detail {

/// Bisects [lo, lo + width] where the guard is positive at lo and <= 0 at the
/// right end. `level` is k when width = h 2^-k (cached halvings), -1 otherwise.
template <typename Guard>
std::pair<double, Vector> bisect_entry(const FlowTable& table, const Matrix& F, const Vector& g,
                                       Guard&& guard, double lo, Vector z_lo, double width, int level,
                                       Vector z_hi, double eps) {
  double hi = lo + width;
  for (int iter = 0; iter < 200; ++iter) {
    const double g_hi = guard(z_hi);
    const double scale = std::max(1.0, std::abs(hi));
    if (g_hi >= -eps && width <= 1e-12 * scale) break;
    if (width <= 4e-16 * scale) break;
    Matrix computed;
    const Matrix* half = nullptr;
    if (level >= 0 && level + 1 <= FlowTable::kLevels) {
      half = &table.phi[static_cast<std::size_t>(level + 1)];
      ++level;
    } else {
      computed = affine_transition(F, g, width / 2);
      half = &computed;
      level = -1;
    }
    Vector z_mid = apply_affine(*half, z_lo);
    width /= 2;
    const double mid = lo + width;
    if (guard(z_mid) <= 0.0) {
      hi = mid;
      z_hi = std::move(z_mid);
    } else {
      lo = mid;
      z_lo = std::move(z_mid);
    }
  }
  return {hi, std::move(z_hi)};
}

struct PhaseResult {
  FlowSegment segment;
  bool crossed = false;
  bool left_restriction = false;
  double t_end = 0.0;
  Vector zeta_end;
};

/// Flows from `x` at time t0 until the jump ball is entered, the horizon is
/// exhausted, or the restriction is left.
inline PhaseResult flow_phase(const HybridSystem& sys, const HybridState& x, double t0, int j,
                              double horizon) {
  const ObsId o = x.chi.o;
  const FlowTable& table = sys.flow_table(o);
  const Matrix& F = sys.loop().F;
  const Vector& g = sys.target(o).g;
  const double eps = sys.settings().event_tol;
  auto guard = [&](const Vector& z) { return sys.guard(o, z); };

  PhaseResult out;
  out.segment.j = j;
  auto emit = [&](double t, const Vector& z) -> bool {
    HybridState state{x.chi, z};
    if (!sys.admits(state)) {
      out.left_restriction = true;
      return false;
    }
    out.segment.samples.push_back({t, std::move(state)});
    return true;
  };

  Vector z = x.zeta;
  if (!emit(t0, z)) {
    out.t_end = t0;
    out.zeta_end = z;
    return out;
  }
  if (guard(z) <= 0.0) {
    out.crossed = true;
    out.t_end = t0;
    out.zeta_end = z;
    return out;
  }
  const double h = table.h;
  for (long k = 0;; ++k) {
    const double tau = static_cast<double>(k) * h;
    if (tau >= horizon) break;
    const bool full = tau + h <= horizon;
    const double step = full ? h : horizon - tau;
    Vector z_next = full ? apply_affine(table.phi[0], z) : apply_affine(affine_transition(F, g, step), z);
    if (guard(z_next) <= 0.0) {
      auto [t_hit, z_hit] = bisect_entry(table, F, g, guard, tau, z, step, full ? 0 : -1,
                                         std::move(z_next), eps);
      out.t_end = t0 + t_hit;
      out.zeta_end = z_hit;
      out.crossed = emit(out.t_end, z_hit);
      return out;
    }
    const double t_next = t0 + (full ? static_cast<double>(k + 1) * h : horizon);
    if (!emit(t_next, z_next)) {
      out.t_end = out.segment.samples.back().t;
      out.zeta_end = out.segment.samples.back().x.zeta;
      return out;
    }
    z = std::move(z_next);
  }
  out.t_end = out.segment.samples.back().t;
  out.zeta_end = z;
  return out;
}

}  // namespace detail

/// Earliest time in [0, horizon] at which ||C xi(t) - y|| <= rho, located by a
/// fixed-step scan plus bisection to |guard| <= eps on the jump side.
inline std::optional<double> detect_jump_entry(const Matrix& F, const Vector& g, const Matrix& C,
                                               const Vector& zeta, const Vector& y, double rho,
                                               double h_step, double eps, double horizon) {
  const auto nu = C.cols();
  auto guard = [&](const Vector& z) { return (C * z.head(nu) - y).norm() - rho; };
  if (guard(zeta) <= 0.0) return 0.0;
  FlowTable table(F, g, h_step);
  Vector z = zeta;
  for (long k = 0;; ++k) {
    const double tau = static_cast<double>(k) * h_step;
    if (tau >= horizon) return std::nullopt;
    const bool full = tau + h_step <= horizon;
    const double step = full ? h_step : horizon - tau;
    Vector z_next = full ? apply_affine(table.phi[0], z) : apply_affine(affine_transition(F, g, step), z);
    if (guard(z_next) <= 0.0)
      return detail::bisect_entry(table, F, g, guard, tau, z, step, full ? 0 : -1, std::move(z_next), eps)
          .first;
    z = std::move(z_next);
  }
}

// ---------------------------------------------------------------------------
// Branch policies.

struct ScriptEntry {
  StateId s = 0;
  std::optional<ObsId> o;
};

struct BranchPolicy {
  enum class Mode { First, Random, Scripted };

  Mode mode = Mode::First;
  std::uint64_t seed = 0;
  std::vector<ScriptEntry> script;

  static BranchPolicy first() { return {}; }
  static BranchPolicy random(std::uint64_t seed) { return {Mode::Random, seed, {}}; }
  static BranchPolicy scripted(std::vector<ScriptEntry> script) {
    return {Mode::Scripted, 0, std::move(script)};
  }

  /// "first", "random:<seed>" or "scripted:<entry>[,<entry>...]" where an
  /// entry is a state id ("6" or "s6"), optionally with an observation
  /// ("6:2" or "s6:o2").
  static BranchPolicy parse(const std::string& text) {
    if (text == "first") return first();
    auto strip = [](std::string token, char prefix) {
      if (!token.empty() && token[0] == prefix) token.erase(0, 1);
      return token;
    };
    auto to_int = [&](const std::string& token) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (token.empty() || used != token.size())
        throw Error(ErrorKind::Validation, "bad policy '" + text + "'");
      return value;
    };
    if (text.rfind("random:", 0) == 0) {
      const std::string digits = text.substr(7);
      std::size_t used = 0;
      std::uint64_t value = 0;
      try {
        value = std::stoull(digits, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (digits.empty() || used != digits.size())
        throw Error(ErrorKind::Validation, "bad policy '" + text + "'");
      return random(value);
    }
    if (text.rfind("scripted:", 0) == 0) {
      std::vector<ScriptEntry> script;
      std::string rest = text.substr(9);
      std::size_t start = 0;
      while (start <= rest.size()) {
        std::size_t comma = rest.find(',', start);
        std::string entry = rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        ScriptEntry parsed;
        auto colon = entry.find(':');
        parsed.s = to_int(strip(entry.substr(0, colon), 's'));
        if (colon != std::string::npos) parsed.o = to_int(strip(entry.substr(colon + 1), 'o'));
        script.push_back(parsed);
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return scripted(std::move(script));
    }
    throw Error(ErrorKind::Validation, "unknown policy '" + text + "'");
  }

  std::string to_string() const {
    switch (mode) {
      case Mode::First: return "first";
      case Mode::Random: return "random:" + std::to_string(seed);
      case Mode::Scripted: {
        std::string out = "scripted:";
        for (std::size_t k = 0; k < script.size(); ++k) {
          if (k) out += ',';
          out += std::to_string(script[k].s);
          if (script[k].o) out += ":" + std::to_string(*script[k].o);
        }
        return out;
      }
    }
    return "?";
  }
};

/// Resolves the nondeterminism of the jump map. First-by-index picks the
/// smallest (s, o). Scripted entries are consumed, cyclically, only at jumps
/// with more than one successor.
class BranchChooser {
 public:
  explicit BranchChooser(BranchPolicy policy) : policy_(std::move(policy)), rng_(policy_.seed) {}

  AutomatonState choose(const AutomatonState& pre, const std::set<AutomatonState>& successors) {
    if (successors.size() == 1 || policy_.mode == BranchPolicy::Mode::First) return *successors.begin();
    if (policy_.mode == BranchPolicy::Mode::Random) {
      auto it = successors.begin();
      std::advance(it, static_cast<long>(rng_() % successors.size()));
      return *it;
    }
    if (policy_.script.empty()) throw Error(ErrorKind::PolicyViolation, "empty script");
    const ScriptEntry& entry = policy_.script[cursor_++ % policy_.script.size()];
    for (const auto& candidate : successors)
      if (candidate.s == entry.s && (!entry.o || candidate.o == *entry.o)) return candidate;
    throw Error(ErrorKind::PolicyViolation,
                "scripted successor s" + std::to_string(entry.s) +
                    (entry.o ? ":o" + std::to_string(*entry.o) : std::string()) +
                    " is not in G(s" + std::to_string(pre.s) + ", o" + std::to_string(pre.o) + ")");
  }

 private:
  BranchPolicy policy_;
  std::mt19937_64 rng_;
  std::size_t cursor_ = 0;
};

// ---------------------------------------------------------------------------
// Simulation.

inline void require_initial_state(const HybridSystem& sys, const HybridState& x0) {
  if (!sys.automaton().in_jump_set(x0.chi))
    throw Error(ErrorKind::InitialStateOutsideDomain,
                "(s" + std::to_string(x0.chi.s) + ", o" + std::to_string(x0.chi.o) +
                    ") is not in the constrained jump set");
  if (x0.zeta.size() != 2 * sys.plant().nu())
    throw Error(ErrorKind::InitialStateOutsideDomain, "initial zeta has wrong dimension");
  if (!sys.admits(x0))
    throw Error(ErrorKind::InitialStateOutsideDomain, "initial state is outside the restriction");
}

/// Alternates flow to the earliest jump-set entry with jumps chosen by the
/// policy, until t_max or j_max.
inline HybridArc simulate(const HybridSystem& sys, const HybridState& x0, const BranchPolicy& policy,
                          const SimulationLimits& limits) {
  require_initial_state(sys, x0);
  BranchChooser chooser(policy);
  HybridArc arc;
  HybridState x = x0;
  double t = 0.0;
  for (int j = 0;; ++j) {
    detail::PhaseResult phase = detail::flow_phase(sys, x, t, j, limits.t_max - t);
    arc.segments.push_back(std::move(phase.segment));
    if (phase.left_restriction) {
      arc.termination = Termination::LeftRestriction;
      break;
    }
    if (!phase.crossed) {
      arc.termination = Termination::TimeLimit;
      break;
    }
    if (j >= limits.j_max) {
      arc.termination = Termination::JumpLimit;
      break;
    }
    t = phase.t_end;
    x.zeta = std::move(phase.zeta_end);
    const auto successors = sys.automaton().jump_map(x.chi);
    JumpRecord jump{j, t, x, chooser.choose(x.chi, successors), {}};
    for (const auto& s : successors)
      if (s != jump.chosen) jump.alternatives.push_back(s);
    x.chi = jump.chosen;
    arc.jumps.push_back(std::move(jump));
    if (!sys.admits(x)) {
      // The post-jump point lies outside the restriction: the arc ends there.
      arc.segments.push_back({j + 1, {{t, x}}});
      arc.termination = Termination::LeftRestriction;
      break;
    }
  }
  return arc;
}

// ---------------------------------------------------------------------------
// Run enumeration.

struct RunNode {
  int parent = -1;
  int depth = 0;  // jumps taken before this node's flow
  FlowSegment segment;
  bool jump_ready = false;
  double jump_time = 0.0;
  HybridState jump_state;
  std::vector<AutomatonState> successors;  // G at the jump, in child order
  std::vector<int> children;
  Termination termination = Termination::JumpLimit;
};

struct RunTree {
  std::vector<RunNode> nodes;  // nodes[0] is the root

  std::vector<int> leaves() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].children.empty()) out.push_back(static_cast<int>(i));
    return out;
  }

  /// The arc from the root to `leaf`.
  HybridArc arc_to(int leaf) const {
    std::vector<int> path;
    for (int n = leaf; n >= 0; n = nodes[static_cast<std::size_t>(n)].parent) path.push_back(n);
    std::reverse(path.begin(), path.end());
    HybridArc arc;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const RunNode& node = nodes[static_cast<std::size_t>(path[k])];
      arc.segments.push_back(node.segment);
      if (k + 1 < path.size()) {
        const RunNode& child = nodes[static_cast<std::size_t>(path[k + 1])];
        JumpRecord jump{node.depth, node.jump_time, node.jump_state,
                        child.segment.samples.front().x.chi, {}};
        for (const auto& s : node.successors)
          if (s != jump.chosen) jump.alternatives.push_back(s);
        arc.jumps.push_back(std::move(jump));
      } else {
        arc.termination = node.termination;
      }
    }
    return arc;
  }

  std::vector<HybridArc> leaf_arcs() const {
    std::vector<HybridArc> out;
    for (int leaf : leaves()) out.push_back(arc_to(leaf));
    return out;
  }
};

inline constexpr int kMaxEnumerationDepth = 12;

/// Every branch of the jump map up to `depth` jumps.
inline RunTree enumerate_runs(const HybridSystem& sys, const HybridState& x0, int depth,
                              const SimulationLimits& limits) {
  if (depth < 0 || depth > kMaxEnumerationDepth)
    throw Error(ErrorKind::DepthExceeded, "enumeration depth " + std::to_string(depth) +
                                              " outside [0, " + std::to_string(kMaxEnumerationDepth) + "]");
  require_initial_state(sys, x0);
  RunTree tree;
  std::function<void(const HybridState&, double, int, int)> explore = [&](const HybridState& x, double t,
                                                                         int j, int parent) {
    const int id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back({});
    tree.nodes.back().parent = parent;
    tree.nodes.back().depth = j;
    if (parent >= 0) tree.nodes[static_cast<std::size_t>(parent)].children.push_back(id);

    if (!sys.admits(x)) {
      tree.nodes.back().segment = {j, {{t, x}}};
      tree.nodes.back().termination = Termination::LeftRestriction;
      return;
    }
    detail::PhaseResult phase = detail::flow_phase(sys, x, t, j, limits.t_max - t);
    RunNode& node = tree.nodes[static_cast<std::size_t>(id)];
    node.segment = std::move(phase.segment);
    if (phase.left_restriction) {
      node.termination = Termination::LeftRestriction;
      return;
    }
    if (!phase.crossed) {
      node.termination = Termination::TimeLimit;
      return;
    }
    node.jump_ready = true;
    node.jump_time = phase.t_end;
    node.jump_state = {x.chi, phase.zeta_end};
    if (j >= depth) {
      node.termination = Termination::JumpLimit;
      return;
    }
    const auto successors = sys.automaton().jump_map(x.chi);
    node.successors.assign(successors.begin(), successors.end());
    const HybridState pre = node.jump_state;
    const double t_jump = node.jump_time;
    for (const auto& next : successors) explore({next, pre.zeta}, t_jump, j + 1, id);
  };
  explore(x0, 0.0, 0, -1);
  return tree;
}

}  // namespace ltlrec
