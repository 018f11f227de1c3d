#pragma once

// Trace CSV (write and read back), JSON reports and SVG plots.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "ltlrec/scenario.hpp"

namespace ltlrec {

// ---------------------------------------------------------------------------
// Trace CSV. Shortest round-trip formatting, so reading back is exact.

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorKind::Parse, "bad number '" + s + "' in trace");
  return v;
}

/// Columns t, j, s, o, xi1..xinu, xihat1..xihatnu, V_H. Each jump appears
/// twice at t_j: last row of interval j and first row of j + 1.
inline std::string trace_csv(const HybridArc& arc, Eigen::Index nu,
                             const std::function<double(const HybridState&)>& v_h_of = {}) {
  std::ostringstream out;
  out << "t,j,s,o";
  for (Eigen::Index i = 1; i <= nu; ++i) out << ",xi" << i;
  for (Eigen::Index i = 1; i <= nu; ++i) out << ",xihat" << i;
  out << ",V_H\n";
  for (const auto& seg : arc.segments)
    for (const auto& sample : seg.samples) {
      out << format_double(sample.t) << ',' << seg.j << ',' << sample.x.chi.s << ',' << sample.x.chi.o;
      for (Eigen::Index i = 0; i < sample.x.zeta.size(); ++i) out << ',' << format_double(sample.x.zeta(i));
      out << ',' << format_double(v_h_of ? v_h_of(sample.x) : std::nan("")) << '\n';
    }
  return out.str();
}

/// Rebuilds segments and jump records (without alternatives) from a trace.
inline HybridArc read_trace_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Parse, "empty trace");
  const auto columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',') + 1);
  if (columns < 7 || (columns - 5) % 2 != 0) throw Error(ErrorKind::Parse, "bad trace header");
  const auto nu = static_cast<Eigen::Index>((columns - 5) / 2);
  HybridArc arc;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != columns)
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields");
    Sample sample;
    sample.t = parse_double(fields[0]);
    const int j = std::stoi(fields[1]);
    sample.x.chi = {std::stoi(fields[2]), std::stoi(fields[3])};
    sample.x.zeta.resize(2 * nu);
    for (Eigen::Index i = 0; i < 2 * nu; ++i) sample.x.zeta(i) = parse_double(fields[4 + static_cast<std::size_t>(i)]);
    if (arc.segments.empty() || arc.segments.back().j != j) {
      if (!arc.segments.empty()) {
        const Sample& pre = arc.segments.back().samples.back();
        arc.jumps.push_back({arc.segments.back().j, sample.t, pre.x, sample.x.chi, {}});
      }
      arc.segments.push_back({j, {}});
    }
    arc.segments.back().samples.push_back(std::move(sample));
  }
  if (arc.segments.empty()) throw Error(ErrorKind::Parse, "trace has no samples");
  return arc;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// JSON views.

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

inline Json to_json(const AutomatonState& chi) { return Json{{"s", chi.s}, {"o", chi.o}}; }

inline Json to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return Json{{"passed", report.all_passed()}, {"checks", checks}};
}

inline Json to_json(const ConditionResult& r) {
  Json out{{"name", r.name},
           {"passed", r.passed},
           {"evaluations", r.evaluations},
           {"violations", r.violations},
           {"min_margin", r.min_margin}};
  if (r.worst) {
    Json w{{"chi", to_json(r.worst->x.chi)}, {"zeta", to_json(r.worst->x.zeta)}, {"margin", r.worst->margin}};
    if (r.worst->successor) w["successor"] = to_json(*r.worst->successor);
    out["witness"] = w;
  }
  return out;
}

inline Json to_json(const CertificateConstants& k) {
  return Json{{"d_max", k.d_max},
              {"w_min", k.w_min},
              {"J1", k.j1},
              {"lambda_prime", k.lambda_prime},
              {"theta_min", k.selection.theta_min},
              {"theta", k.selection.theta},
              {"lambda_interval", {k.selection.lambda_lo, k.selection.lambda_hi}},
              {"lambda", k.lambda()},
              {"lambda_c", k.lambda_c},
              {"lambda_d", k.lambda_d},
              {"mu_BA", k.mu_ba},
              {"M", k.M},
              {"gamma", k.gamma}};
}

inline Json to_json(const CertificateReport& r) {
  Json signs = Json::array();
  for (const auto& s : r.signs) signs.push_back({{"name", s.name}, {"passed", s.passed}});
  Json discrete = Json::array();
  for (const auto& [chi, next] : r.discrete_violations) discrete.push_back({to_json(chi), to_json(next)});
  Json out{{"passed", r.passed()},
           {"constants", to_json(r.constants)},
           {"signs", signs},
           {"flow", to_json(r.flow)},
           {"flow_intermediate", to_json(r.flow_intermediate)},
           {"jump", to_json(r.jump)},
           {"restricted_time",
            {{"passed", r.restricted.passed},
             {"max_discrete_jumps", r.restricted.max_discrete_jumps},
             {"max_enumerated_jumps", r.restricted.max_enumerated_jumps},
             {"enumerated_leaves", r.restricted.enumerated_leaves},
             {"min_algebraic_slack", r.restricted.min_algebraic_slack},
             {"detail", r.restricted.detail}}},
           {"discrete_decrease_violations", discrete}};
  if (r.ugr)
    out["ugr_bound"] = {{"V_u", r.ugr->v_upper},
                        {"V_l", r.ugr->v_lower},
                        {"T_hat", r.ugr->t_hat},
                        {"exact_vertex_max", r.ugr->exact_vertex_max}};
  return out;
}

inline Json to_json(const ClosedLoop& loop) {
  Json targets = Json::object();
  for (const auto& [o, t] : loop.targets)
    targets[std::to_string(o)] = {{"y", to_json(t.y)}, {"xi", to_json(t.xi)}, {"u", to_json(t.u)}, {"g", to_json(t.g)}};
  return Json{{"K", to_json(loop.K)}, {"L", to_json(loop.L)}, {"F", to_json(loop.F)},
              {"F_tilde", to_json(loop.F_tilde)}, {"P", to_json(loop.P)}, {"Q", to_json(loop.Q)},
              {"targets", targets}};
}

inline Json to_json(const HybridArc& arc) {
  Json jumps = Json::array();
  for (const auto& jump : arc.jumps) {
    Json alts = Json::array();
    for (const auto& a : jump.alternatives) alts.push_back(to_json(a));
    jumps.push_back({{"j", jump.j}, {"t", jump.t}, {"pre", to_json(jump.pre.chi)}, {"chosen", to_json(jump.chosen)},
                     {"alternatives", alts}});
  }
  return Json{{"termination", to_string(arc.termination)},
              {"state_word", state_word(arc)},
              {"observation_word", observation_word(arc)},
              {"jumps", jumps}};
}

inline Json to_json(const RunTree& tree) {
  Json nodes = Json::array();
  for (const auto& n : tree.nodes) {
    const auto& first = n.segment.samples.front();
    Json node{{"parent", n.parent},
              {"depth", n.depth},
              {"chi", to_json(first.x.chi)},
              {"t_start", first.t},
              {"children", n.children},
              {"termination", n.children.empty() ? to_string(n.termination) : "branch"}};
    if (n.jump_ready) node["t_jump"] = n.jump_time;
    nodes.push_back(node);
  }
  Json leaves = Json::array();
  for (int leaf : tree.leaves()) {
    const HybridArc arc = tree.arc_to(leaf);
    leaves.push_back({{"node", leaf}, {"state_word", state_word(arc)}, {"observation_word", observation_word(arc)}});
  }
  return Json{{"nodes", nodes}, {"leaves", leaves}};
}

// ---------------------------------------------------------------------------
// Text tables.

inline std::string format_chi(const AutomatonState& chi) {
  return "(s" + std::to_string(chi.s) + ",o" + std::to_string(chi.o) + ")";
}

/// One line per row: "(s0,o2),(s2,o2) -> {s4} -> {(s4,o3)}".
inline std::vector<std::string> constrained_table_lines(const ConstrainedAutomaton& c) {
  std::vector<std::string> out;
  for (const auto& row : constrained_table(c)) {
    std::string line;
    for (std::size_t i = 0; i < row.pairs.size(); ++i) line += (i ? "," : "") + format_chi(row.pairs[i]);
    line += " -> {";
    bool first = true;
    for (StateId s : row.delta_c) {
      line += (first ? "s" : ",s") + std::to_string(s);
      first = false;
    }
    line += "} -> {";
    first = true;
    for (const auto& chi : row.successors) {
      line += (first ? "" : ",") + format_chi(chi);
      first = false;
    }
    out.push_back(line + "}");
  }
  return out;
}

// ---------------------------------------------------------------------------
// SVG.

namespace detail {

/// Output index pairs to draw: the two-dimensional blocks of the first region,
/// else outputs (0, 1).
inline std::vector<std::pair<int, int>> plot_axes(const HybridSystem& sys) {
  std::vector<std::pair<int, int>> out;
  if (!sys.regions().empty())
    for (const auto& b : sys.regions().begin()->second.blocks)
      if (b.indices.size() == 2) out.push_back({b.indices[0], b.indices[1]});
  if (out.empty() && sys.plant().p() >= 2) out.push_back({0, 1});
  return out;
}

}  // namespace detail

/// Output-plane trajectories with region outlines. Jump markers: diamond,
/// circle, square for observations 1, 2, 3 (cycling); crosses at the start.
inline std::string svg_plot(const HybridSystem& sys, const std::vector<HybridArc>& arcs) {
  const auto axes = detail::plot_axes(sys);
  double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
  auto grow = [&](double x, double y) {
    x_lo = std::min(x_lo, x);
    x_hi = std::max(x_hi, x);
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  };
  for (const auto& [o, r] : sys.regions())
    for (const auto& b : r.blocks)
      if (b.indices.size() == 2) {
        grow(b.center(0) - b.radius, b.center(1) - b.radius);
        grow(b.center(0) + b.radius, b.center(1) + b.radius);
      }
  std::vector<std::vector<std::vector<std::pair<double, double>>>> paths;  // arc, axis, points
  for (const auto& arc : arcs) {
    std::vector<std::vector<std::pair<double, double>>> per_axis(axes.size());
    for (const auto& seg : arc.segments)
      for (const auto& s : seg.samples) {
        const Vector y = sys.output(s.x.zeta);
        for (std::size_t a = 0; a < axes.size(); ++a) {
          per_axis[a].push_back({y(axes[a].first), y(axes[a].second)});
          grow(y(axes[a].first), y(axes[a].second));
        }
      }
    paths.push_back(std::move(per_axis));
  }
  if (x_lo > x_hi) x_lo = -1, x_hi = 1, y_lo = -1, y_hi = 1;
  const double pad = 0.05 * std::max(x_hi - x_lo, y_hi - y_lo) + 1e-9;
  x_lo -= pad, x_hi += pad, y_lo -= pad, y_hi += pad;
  const double width = 800.0;
  const double scale = width / (x_hi - x_lo);
  const double height = (y_hi - y_lo) * scale;
  auto px = [&](double x) { return format_double(std::round((x - x_lo) * scale * 100) / 100); };
  auto py = [&](double y) { return format_double(std::round((y_hi - y) * scale * 100) / 100); };
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << std::ceil(height)
      << "\" viewBox=\"0 0 " << width << ' ' << std::ceil(height) << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& [o, r] : sys.regions()) {
    for (const auto& b : r.blocks) {
      if (b.indices.size() != 2) continue;
      const double cx = b.center(0), cy = b.center(1), rad = b.radius;
      svg << "<g class=\"region o" << o << "\" fill=\"#eeeeee\" stroke=\"#555555\" stroke-width=\"1\">";
      switch (b.norm) {
        case Norm::L1:
          svg << "<polygon points=\"" << px(cx) << ',' << py(cy + rad) << ' ' << px(cx + rad) << ',' << py(cy) << ' '
              << px(cx) << ',' << py(cy - rad) << ' ' << px(cx - rad) << ',' << py(cy) << "\"/>";
          break;
        case Norm::L2:
          svg << "<circle cx=\"" << px(cx) << "\" cy=\"" << py(cy) << "\" r=\"" << format_double(rad * scale)
              << "\"/>";
          break;
        case Norm::Linf:
          svg << "<rect x=\"" << px(cx - rad) << "\" y=\"" << py(cy + rad) << "\" width=\""
              << format_double(2 * rad * scale) << "\" height=\"" << format_double(2 * rad * scale) << "\"/>";
          break;
      }
      svg << "</g>\n";
    }
  }
  auto marker = [&](ObsId o, double x, double y, const char* colour) {
    const double m = 4.0;
    const std::string X = px(x), Y = py(y);
    const double xs = (x - x_lo) * scale, ys = (y_hi - y) * scale;
    switch ((o - 1) % 3) {
      case 0:
        svg << "<polygon fill=\"" << colour << "\" points=\"" << xs << ',' << ys - m << ' ' << xs + m << ',' << ys
            << ' ' << xs << ',' << ys + m << ' ' << xs - m << ',' << ys << "\"/>\n";
        break;
      case 1:
        svg << "<circle fill=\"" << colour << "\" cx=\"" << X << "\" cy=\"" << Y << "\" r=\"" << m << "\"/>\n";
        break;
      default:
        svg << "<rect fill=\"" << colour << "\" x=\"" << xs - m << "\" y=\"" << ys - m << "\" width=\"" << 2 * m
            << "\" height=\"" << 2 * m << "\"/>\n";
    }
  };
  for (std::size_t k = 0; k < arcs.size(); ++k) {
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const char* colour = palette[a % 6];
      const auto& pts = paths[k][a];
      if (pts.empty()) continue;
      svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) svg << (i ? " " : "") << px(pts[i].first) << ',' << py(pts[i].second);
      svg << "\"/>\n";
      const double x0 = (pts.front().first - x_lo) * scale, y0 = (y_hi - pts.front().second) * scale;
      svg << "<path stroke=\"" << colour << "\" stroke-width=\"1.5\" d=\"M" << x0 - 4 << ' ' << y0 - 4 << " L"
          << x0 + 4 << ' ' << y0 + 4 << " M" << x0 - 4 << ' ' << y0 + 4 << " L" << x0 + 4 << ' ' << y0 - 4
          << "\"/>\n";
      for (const auto& jump : arcs[k].jumps) {
        const Vector y = sys.output(jump.pre.zeta);
        marker(jump.pre.chi.o, y(axes[a].first), y(axes[a].second), colour);
      }
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace ltlrec
