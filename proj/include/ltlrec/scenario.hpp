#pragma once

// Scenario documents: one JSON file naming the automaton, plant, gains,
// regions, initial condition and the simulation/certification knobs.
// Loading aggregates every problem it finds before failing.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "ltlrec/certify.hpp"

namespace ltlrec {

using Json = nlohmann::json;

struct GridSpec {
  std::vector<std::vector<int>> groups;        // xi indices moved together (one robot's positions)
  std::vector<std::vector<double>> offsets;    // candidate offsets per group
  std::vector<std::string> policies;

  bool empty() const { return groups.empty() || offsets.empty(); }
};

struct InitialCondition {
  AutomatonState chi;
  Vector xi;
  Vector xi_hat;
};

struct Scenario {
  std::string name;
  std::filesystem::path source;
  std::filesystem::path automaton_path;
  BuchiAutomaton automaton;
  LinearPlant plant;
  Matrix K;
  Matrix L;
  Matrix Q;  // empty means identity
  std::vector<Region> regions;
  InitialCondition initial;
  SimulationSettings simulation;
  SimulationLimits limits;
  SampleSpec certification;
  GridSpec grid;
  Tolerances tolerances;
  std::string default_policy = "first";
};

namespace detail {

class Problems {
 public:
  void add(std::string what) { items_.push_back(std::move(what)); }
  bool empty() const { return items_.empty(); }
  [[noreturn]] void raise() { throw ValidationError(std::move(items_)); }
  void raise_if_any() {
    if (!items_.empty()) raise();
  }

 private:
  std::vector<std::string> items_;
};

inline bool is_number_array(const Json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_number(); });
}

inline std::optional<Vector> parse_vector(const Json& j, const std::string& where, Problems& problems) {
  if (!is_number_array(j)) {
    problems.add(where + ": expected an array of numbers");
    return std::nullopt;
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

/// Row arrays, {"identity": n}, {"zeros": [r, c]} or
/// {"block_diag": [m, ...], "repeat": k}.
inline std::optional<Matrix> parse_matrix(const Json& j, const std::string& where, Problems& problems) {
  if (j.is_object()) {
    if (j.contains("identity")) {
      if (!j["identity"].is_number_integer() || j["identity"].get<int>() <= 0) {
        problems.add(where + ": identity needs a positive size");
        return std::nullopt;
      }
      const int n = j["identity"].get<int>();
      return Matrix(Matrix::Identity(n, n));
    }
    if (j.contains("zeros")) {
      const Json& shape = j["zeros"];
      if (!shape.is_array() || shape.size() != 2 || !shape[0].is_number_integer() ||
          !shape[1].is_number_integer() || shape[0].get<int>() < 0 || shape[1].get<int>() < 0) {
        problems.add(where + ": zeros needs [rows, cols]");
        return std::nullopt;
      }
      return Matrix(Matrix::Zero(shape[0].get<int>(), shape[1].get<int>()));
    }
    if (j.contains("block_diag")) {
      if (!j["block_diag"].is_array() || j["block_diag"].empty()) {
        problems.add(where + ": block_diag needs a non-empty list");
        return std::nullopt;
      }
      int repeat = 1;
      if (j.contains("repeat")) {
        if (!j["repeat"].is_number_integer() || j["repeat"].get<int>() <= 0) {
          problems.add(where + ": repeat must be a positive integer");
          return std::nullopt;
        }
        repeat = j["repeat"].get<int>();
      }
      std::vector<Matrix> blocks;
      for (std::size_t i = 0; i < j["block_diag"].size(); ++i) {
        auto b = parse_matrix(j["block_diag"][i], where + ".block_diag[" + std::to_string(i) + "]", problems);
        if (!b) return std::nullopt;
        blocks.push_back(std::move(*b));
      }
      Eigen::Index rows = 0, cols = 0;
      for (const auto& b : blocks) {
        rows += b.rows();
        cols += b.cols();
      }
      Matrix out = Matrix::Zero(rows * repeat, cols * repeat);
      Eigen::Index r = 0, c = 0;
      for (int k = 0; k < repeat; ++k)
        for (const auto& b : blocks) {
          out.block(r, c, b.rows(), b.cols()) = b;
          r += b.rows();
          c += b.cols();
        }
      return out;
    }
    problems.add(where + ": unknown matrix form");
    return std::nullopt;
  }
  if (!j.is_array() || j.empty() || !std::all_of(j.begin(), j.end(), is_number_array)) {
    problems.add(where + ": expected a non-empty array of numeric rows");
    return std::nullopt;
  }
  const std::size_t cols = j[0].size();
  for (const auto& row : j)
    if (row.size() != cols) {
      problems.add(where + ": ragged rows");
      return std::nullopt;
    }
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r)
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
  return m;
}

inline std::optional<Norm> parse_norm(const Json& j) {
  if (j.is_number_integer()) {
    if (j.get<int>() == 1) return Norm::L1;
    if (j.get<int>() == 2) return Norm::L2;
  }
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "1") return Norm::L1;
    if (s == "2") return Norm::L2;
    if (s == "inf" || s == "infinity") return Norm::Linf;
  }
  return std::nullopt;
}

template <typename T>
void read_optional(const Json& obj, const char* key, T& target, const std::string& where, Problems& problems) {
  if (!obj.contains(key)) return;
  try {
    target = obj[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    problems.add(where + "." + key + ": wrong type");
  }
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

}  // namespace detail

/// Builds a scenario from a parsed document; relative automaton paths are
/// resolved against `base_dir`. Throws ValidationError listing every problem.
inline Scenario scenario_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  using detail::Problems;
  Problems problems;
  Scenario sc;
  if (!doc.is_object()) {
    problems.add("scenario must be a JSON object");
    problems.raise();
  }
  detail::read_optional(doc, "name", sc.name, "", problems);

  // Automaton.
  bool have_automaton = false;
  if (!doc.contains("automaton") || !doc["automaton"].is_string()) {
    problems.add("automaton: path string required");
  } else {
    sc.automaton_path = base_dir / doc["automaton"].get<std::string>();
    try {
      sc.automaton = parse_automaton(detail::read_text(sc.automaton_path));
      have_automaton = true;
    } catch (const ValidationError& e) {
      for (const auto& p : e.problems()) problems.add("automaton: " + p);
    } catch (const Error& e) {
      problems.add(std::string("automaton: ") + e.what());
    }
  }

  // Plant and gains.
  auto section = [&](const char* key) -> const Json* {
    if (!doc.contains(key) || !doc[key].is_object()) {
      problems.add(std::string(key) + ": object required");
      return nullptr;
    }
    return &doc[key];
  };
  bool shapes_ok = true;
  auto matrix_field = [&](const Json* obj, const char* key, const std::string& where, Matrix& target) {
    if (!obj) {
      shapes_ok = false;
      return;
    }
    if (!obj->contains(key)) {
      problems.add(where + "." + key + ": required");
      shapes_ok = false;
      return;
    }
    auto m = detail::parse_matrix((*obj)[key], where + "." + key, problems);
    if (m)
      target = std::move(*m);
    else
      shapes_ok = false;
  };
  const Json* plant = section("plant");
  matrix_field(plant, "A", "plant", sc.plant.A);
  matrix_field(plant, "B", "plant", sc.plant.B);
  matrix_field(plant, "C", "plant", sc.plant.C);
  const Json* gains = section("gains");
  matrix_field(gains, "K", "gains", sc.K);
  matrix_field(gains, "L", "gains", sc.L);
  if (doc.contains("lyapunov_Q")) {
    auto q = detail::parse_matrix(doc["lyapunov_Q"], "lyapunov_Q", problems);
    if (q) sc.Q = std::move(*q);
  }

  Eigen::Index nu = 0, m = 0, p = 0;
  if (shapes_ok) {
    nu = sc.plant.A.rows();
    m = sc.plant.B.cols();
    p = sc.plant.C.rows();
    if (sc.plant.A.cols() != nu) problems.add("plant.A must be square");
    if (sc.plant.B.rows() != nu) problems.add("plant.B must have as many rows as A");
    if (sc.plant.C.cols() != nu) problems.add("plant.C must have as many columns as A");
    if (sc.K.rows() != m || sc.K.cols() != nu) problems.add("gains.K must be m x nu");
    if (sc.L.rows() != nu || sc.L.cols() != p) problems.add("gains.L must be nu x p");
    if (sc.Q.size() && (sc.Q.rows() != 2 * nu || sc.Q.cols() != 2 * nu))
      problems.add("lyapunov_Q must be 2nu x 2nu");
    if (sc.Q.size() && sc.Q.rows() == sc.Q.cols()) {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (sc.Q + sc.Q.transpose()), Eigen::EigenvaluesOnly);
      if (!(eig.eigenvalues().minCoeff() > 0.0)) problems.add("lyapunov_Q must be positive definite");
    }
  }

  // Tolerances come first: the default jump radius depends on them.
  if (doc.contains("tolerances")) {
    const Json& t = doc["tolerances"];
    detail::read_optional(t, "hurwitz", sc.tolerances.hurwitz, "tolerances", problems);
    detail::read_optional(t, "rank", sc.tolerances.rank, "tolerances", problems);
    detail::read_optional(t, "condition", sc.tolerances.condition, "tolerances", problems);
    detail::read_optional(t, "jump_margin", sc.tolerances.jump_margin, "tolerances", problems);
    if (!(sc.tolerances.jump_margin > 0.0 && sc.tolerances.jump_margin < 1.0))
      problems.add("tolerances.jump_margin must be in (0, 1)");
  }

  // Regions.
  std::set<ObsId> region_obs;
  if (!doc.contains("regions") || !doc["regions"].is_array() || doc["regions"].empty()) {
    problems.add("regions: non-empty array required");
  } else {
    for (std::size_t r = 0; r < doc["regions"].size(); ++r) {
      const Json& jr = doc["regions"][r];
      const std::string where = "regions[" + std::to_string(r) + "]";
      Region region;
      if (!jr.is_object() || !jr.contains("obs") || !jr["obs"].is_number_integer()) {
        problems.add(where + ": integer obs required");
        continue;
      }
      region.obs = jr["obs"].get<int>();
      if (have_automaton && !sc.automaton.has_observation(region.obs))
        problems.add(where + ": observation " + std::to_string(region.obs) + " is not in the automaton (obs = " +
                     std::to_string(sc.automaton.n_obs()) + ")");
      if (!region_obs.insert(region.obs).second)
        problems.add(where + ": duplicate region for observation " + std::to_string(region.obs));
      bool region_ok = true;
      if (!jr.contains("blocks") || !jr["blocks"].is_array() || jr["blocks"].empty()) {
        problems.add(where + ": non-empty blocks array required");
        continue;
      }
      for (std::size_t b = 0; b < jr["blocks"].size(); ++b) {
        const Json& jb = jr["blocks"][b];
        const std::string bw = where + ".blocks[" + std::to_string(b) + "]";
        RegionBlock block;
        if (!jb.is_object()) {
          problems.add(bw + ": object required");
          region_ok = false;
          continue;
        }
        if (!jb.contains("indices") || !jb["indices"].is_array() || jb["indices"].empty()) {
          problems.add(bw + ".indices: non-empty integer array required");
          region_ok = false;
        } else {
          for (const auto& idx : jb["indices"]) {
            if (!idx.is_number_integer() || idx.get<int>() < 0 || (shapes_ok && idx.get<int>() >= p)) {
              problems.add(bw + ".indices: output index out of range");
              region_ok = false;
              break;
            }
            block.indices.push_back(idx.get<int>());
          }
        }
        auto center = jb.contains("center") ? detail::parse_vector(jb["center"], bw + ".center", problems)
                                            : std::nullopt;
        if (!jb.contains("center")) problems.add(bw + ".center: required");
        if (center) {
          block.center = *center;
          if (block.center.size() != static_cast<Eigen::Index>(block.indices.size())) {
            problems.add(bw + ".center: size must match indices");
            region_ok = false;
          }
        } else {
          region_ok = false;
        }
        auto norm = jb.contains("norm") ? detail::parse_norm(jb["norm"]) : std::nullopt;
        if (!norm) {
          problems.add(bw + ".norm: one of 1, 2, \"inf\"");
          region_ok = false;
        } else {
          block.norm = *norm;
        }
        if (!jb.contains("radius") || !jb["radius"].is_number() || !(jb["radius"].get<double>() > 0.0)) {
          problems.add(bw + ".radius: positive number required");
          region_ok = false;
        } else {
          block.radius = jb["radius"].get<double>();
        }
        region.blocks.push_back(std::move(block));
      }
      if (!region_ok || !shapes_ok) continue;
      if (jr.contains("target")) {
        auto t = detail::parse_vector(jr["target"], where + ".target", problems);
        if (!t) continue;
        if (t->size() != p) {
          problems.add(where + ".target: size must be p");
          continue;
        }
        region.target = *t;
      } else {
        region.target = region.default_target(p);
      }
      if (!region.contains(region.target)) {
        problems.add(where + ": target is not inside the region");
        continue;
      }
      const double inscribed = max_inscribed_radius(region, region.target);
      if (jr.contains("jump_radius")) {
        if (!jr["jump_radius"].is_number()) {
          problems.add(where + ".jump_radius: number required");
          continue;
        }
        region.jump_radius = jr["jump_radius"].get<double>();
        if (!jump_ball_contained(region, region.target, region.jump_radius))
          problems.add(where + ".jump_radius " + std::to_string(region.jump_radius) +
                       ": ball is not inside the region (largest inscribed radius " + std::to_string(inscribed) +
                       ")");
      } else {
        region.jump_radius = sc.tolerances.jump_margin * inscribed;
      }
      sc.regions.push_back(std::move(region));
    }
  }
  if (have_automaton)
    for (ObsId o : sc.automaton.observations())
      if (!region_obs.count(o)) problems.add("regions: no region for observation " + std::to_string(o));

  // Pairwise disjointness.
  if (shapes_ok)
    for (std::size_t a = 0; a < sc.regions.size(); ++a)
      for (std::size_t b = a + 1; b < sc.regions.size(); ++b) {
        const auto verdict = check_disjoint(sc.regions[a], sc.regions[b], p);
        if (verdict != Disjointness::Certified)
          problems.add("regions for observations " + std::to_string(sc.regions[a].obs) + " and " +
                       std::to_string(sc.regions[b].obs) +
                       (verdict == Disjointness::Overlap ? " overlap" : " could not be certified disjoint"));
      }

  // Initial condition.
  if (!doc.contains("initial") || !doc["initial"].is_object()) {
    problems.add("initial: object required");
  } else {
    const Json& ji = doc["initial"];
    if (!ji.contains("s") || !ji["s"].is_number_integer() || !ji.contains("o") || !ji["o"].is_number_integer()) {
      problems.add("initial: integer s and o required");
    } else {
      sc.initial.chi = {ji["s"].get<int>(), ji["o"].get<int>()};
      if (have_automaton && !sc.automaton.has_state(sc.initial.chi.s))
        problems.add("initial.s: unknown state " + std::to_string(sc.initial.chi.s));
      if (have_automaton && !sc.automaton.has_observation(sc.initial.chi.o))
        problems.add("initial.o: unknown observation " + std::to_string(sc.initial.chi.o));
    }
    auto xi = ji.contains("xi") ? detail::parse_vector(ji["xi"], "initial.xi", problems) : std::nullopt;
    if (!ji.contains("xi")) problems.add("initial.xi: required");
    if (xi) {
      sc.initial.xi = *xi;
      if (shapes_ok && xi->size() != nu) problems.add("initial.xi: size must be nu");
      sc.initial.xi_hat = *xi;
      if (ji.contains("xi_hat")) {
        auto xh = detail::parse_vector(ji["xi_hat"], "initial.xi_hat", problems);
        if (xh) {
          sc.initial.xi_hat = *xh;
          if (shapes_ok && xh->size() != nu) problems.add("initial.xi_hat: size must be nu");
        }
      }
    }
  }

  // Knobs.
  if (doc.contains("simulation")) {
    const Json& js = doc["simulation"];
    detail::read_optional(js, "h_step", sc.simulation.h_step, "simulation", problems);
    detail::read_optional(js, "event_tol", sc.simulation.event_tol, "simulation", problems);
    detail::read_optional(js, "t_max", sc.limits.t_max, "simulation", problems);
    detail::read_optional(js, "j_max", sc.limits.j_max, "simulation", problems);
    detail::read_optional(js, "policy", sc.default_policy, "simulation", problems);
  }
  if (!(sc.simulation.h_step > 0.0)) problems.add("simulation.h_step must be positive");
  if (!(sc.simulation.event_tol > 0.0)) problems.add("simulation.event_tol must be positive");
  if (!(sc.limits.t_max >= 0.0)) problems.add("simulation.t_max must be >= 0");
  if (sc.limits.j_max < 0) problems.add("simulation.j_max must be >= 0");
  try {
    BranchPolicy::parse(sc.default_policy);
  } catch (const Error& e) {
    problems.add(std::string("simulation.policy: ") + e.what());
  }
  if (doc.contains("certification")) {
    const Json& jc = doc["certification"];
    detail::read_optional(jc, "samples", sc.certification.samples, "certification", problems);
    detail::read_optional(jc, "box_radius", sc.certification.box_radius, "certification", problems);
    detail::read_optional(jc, "seed", sc.certification.seed, "certification", problems);
  }
  if (sc.certification.samples <= 0) problems.add("certification.samples must be positive");
  if (!(sc.certification.box_radius > 0.0)) problems.add("certification.box_radius must be positive");

  if (doc.contains("grid")) {
    const Json& jg = doc["grid"];
    detail::read_optional(jg, "groups", sc.grid.groups, "grid", problems);
    detail::read_optional(jg, "offsets", sc.grid.offsets, "grid", problems);
    detail::read_optional(jg, "policies", sc.grid.policies, "grid", problems);
    for (const auto& group : sc.grid.groups)
      for (int idx : group)
        if (idx < 0 || (shapes_ok && idx >= nu)) problems.add("grid.groups: state index out of range");
    for (const auto& off : sc.grid.offsets)
      for (const auto& group : sc.grid.groups)
        if (off.size() != group.size()) problems.add("grid.offsets: size must match every group");
    for (const auto& pol : sc.grid.policies) {
      try {
        BranchPolicy::parse(pol);
      } catch (const Error& e) {
        problems.add(std::string("grid.policies: ") + e.what());
      }
    }
  }

  problems.raise_if_any();
  return sc;
}

/// Reads and validates a scenario file. JSON syntax errors are ParseErrors
/// with a line number; everything else is aggregated into one ValidationError.
inline Scenario load_scenario(const std::filesystem::path& path) {
  const std::string text = detail::read_text(path);
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(detail::line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  Scenario sc = scenario_from_json(doc, path.parent_path());
  sc.source = path;
  if (sc.name.empty()) sc.name = path.stem().string();
  return sc;
}

/// Plant assumptions, gain stability, automaton feasibility and the initial
/// automaton state, as a list of named checks.
inline ValidationReport validate_scenario(const Scenario& sc) {
  ValidationReport report = check_assumption5(sc.plant, sc.tolerances);
  auto hurwitz = [&](const Matrix& mat, const std::string& name) {
    try {
      require_hurwitz(mat, name, sc.tolerances.hurwitz);
      report.add("hurwitz " + name, true, "max Re = " + std::to_string(spectral_abscissa(mat)));
    } catch (const Error& e) {
      report.add("hurwitz " + name, false, e.what());
    }
  };
  hurwitz(sc.plant.A - sc.plant.B * sc.K, "A-BK");
  hurwitz(sc.plant.A - sc.L * sc.plant.C, "A-LC");
  try {
    const ConstrainedAutomaton c(prune_infeasible(sc.automaton));
    report.add("automaton feasible", true,
               std::to_string(c.base().n_states()) + " states kept, d_max = " + std::to_string(c.d_max()));
    const bool ok = c.in_jump_set(sc.initial.chi);
    report.add("initial in jump set", ok,
               "(s" + std::to_string(sc.initial.chi.s) + ", o" + std::to_string(sc.initial.chi.o) + ")");
  } catch (const Error& e) {
    report.add("automaton feasible", false, e.what());
  }
  for (const auto& r : sc.regions)
    report.add("jump ball o" + std::to_string(r.obs), jump_ball_contained(r, r.target, r.jump_radius),
               "rho = " + std::to_string(r.jump_radius));
  return report;
}

inline HybridSystem build_system(const Scenario& sc) {
  ConstrainedAutomaton c(prune_infeasible(sc.automaton));
  ClosedLoop loop = assemble_closed_loop(sc.plant, sc.K, sc.L, sc.regions, sc.Q, sc.tolerances);
  return HybridSystem(std::move(c), sc.plant, std::move(loop), sc.regions, sc.simulation);
}

inline HybridState initial_state(const Scenario& sc) {
  return HybridState::make(sc.initial.chi, sc.initial.xi, sc.initial.xi_hat);
}

/// Cartesian product of offsets over groups, applied to xi and xi_hat alike.
inline std::vector<HybridState> grid_states(const Scenario& sc) {
  const HybridState base = initial_state(sc);
  if (sc.grid.empty()) return {base};
  std::vector<HybridState> out;
  const std::size_t groups = sc.grid.groups.size();
  const std::size_t choices = sc.grid.offsets.size();
  std::vector<std::size_t> pick(groups, 0);
  const Eigen::Index nu = base.nu();
  for (;;) {
    HybridState x = base;
    for (std::size_t g = 0; g < groups; ++g)
      for (std::size_t k = 0; k < sc.grid.groups[g].size(); ++k) {
        const double off = sc.grid.offsets[pick[g]][k];
        x.zeta(sc.grid.groups[g][k]) += off;
        x.zeta(nu + sc.grid.groups[g][k]) += off;
      }
    out.push_back(std::move(x));
    std::size_t g = 0;
    while (g < groups && ++pick[g] == choices) pick[g++] = 0;
    if (g == groups) break;
  }
  return out;
}

inline std::vector<BranchPolicy> grid_policies(const Scenario& sc) {
  std::vector<BranchPolicy> out;
  for (const auto& p : sc.grid.policies) out.push_back(BranchPolicy::parse(p));
  if (out.empty()) out.push_back(BranchPolicy::parse(sc.default_policy));
  return out;
}

/// Bounding box of the grid in xi, with xi_hat = xi when every start has a
/// matching estimate.
inline StateBox grid_box(const std::vector<HybridState>& starts) {
  const Eigen::Index nu = starts.front().nu();
  bool matching = true;
  for (const auto& x : starts) matching = matching && x.xi() == x.xi_hat();
  const Eigen::Index dim = matching ? nu : 2 * nu;
  StateBox box{starts.front().zeta.head(dim), starts.front().zeta.head(dim), matching};
  for (const auto& x : starts) {
    box.lo = box.lo.cwiseMin(x.zeta.head(dim));
    box.hi = box.hi.cwiseMax(x.zeta.head(dim));
  }
  return box;
}

/// Every knob with its default, for `ltlrec template`.
inline Json scenario_template() {
  const SimulationSettings s;
  const SimulationLimits l;
  const SampleSpec c;
  const Tolerances t;
  return Json{
      {"name", "example"},
      {"automaton", "task.ba"},
      {"plant",
       {{"A", {{0.0, 1.0}, {0.0, -1.0}}}, {"B", {{0.0}, {1.0}}}, {"C", {{1.0, 0.0}}}}},
      {"gains", {{"K", {{1.25, 1.0}}}, {"L", {{9.0}, {16.0}}}}},
      {"lyapunov_Q", {{"identity", 4}}},
      {"regions",
       {{{"obs", 1}, {"blocks", {{{"indices", {0}}, {"center", {-1.0}}, {"norm", "2"}, {"radius", 0.2}}}}},
        {{"obs", 2}, {"blocks", {{{"indices", {0}}, {"center", {1.0}}, {"norm", "2"}, {"radius", 0.2}}}}}}},
      {"initial", {{"s", 0}, {"o", 1}, {"xi", {0.0, 0.0}}, {"xi_hat", {0.0, 0.0}}}},
      {"simulation",
       {{"h_step", s.h_step}, {"event_tol", s.event_tol}, {"t_max", l.t_max}, {"j_max", l.j_max},
        {"policy", "first"}}},
      {"certification", {{"samples", c.samples}, {"box_radius", c.box_radius}, {"seed", c.seed}}},
      {"grid", {{"groups", {{0}}}, {"offsets", {{-0.5}, {0.0}, {0.5}}}, {"policies", {"first", "random:1"}}}},
      {"tolerances",
       {{"hurwitz", t.hurwitz}, {"rank", t.rank}, {"condition", t.condition}, {"jump_margin", t.jump_margin}}},
  };
}

}  // namespace ltlrec
