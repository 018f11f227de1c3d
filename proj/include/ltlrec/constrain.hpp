#pragma once

// Shortest-path distances to the accepting set and the distance-constrained
// transition structure built on top of them.

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "ltlrec/automaton.hpp"

namespace ltlrec {

inline constexpr int kUnreachable = std::numeric_limits<int>::max();

/// Fewest-edge distance from each state to the accepting set.
struct DistanceTable {
  std::map<StateId, int> d;
  int d_max = 0;

  int operator()(StateId s) const {
    auto it = d.find(s);
    return it == d.end() ? kUnreachable : it->second;
  }
};

/// Fewest edges on any path s -> target (0 when s == target); kUnreachable if
/// none. Forward BFS from s, evaluated on demand.
inline int pairwise_distance(const BuchiAutomaton& a, StateId s, StateId target) {
  if (s == target) return 0;
  std::map<StateId, int> dist{{s, 0}};
  std::deque<StateId> queue{s};
  while (!queue.empty()) {
    StateId u = queue.front();
    queue.pop_front();
    for (StateId v : a.all_successors(u)) {
      if (dist.count(v)) continue;
      dist[v] = dist[u] + 1;
      if (v == target) return dist[v];
      queue.push_back(v);
    }
  }
  return kUnreachable;
}

/// One reverse BFS seeded with every accepting state.
/// Throws InfiniteDistance if some state cannot reach the accepting set.
inline DistanceTable distances(const BuchiAutomaton& a) {
  std::map<StateId, std::vector<StateId>> predecessors;
  for (const auto& [key, next] : a.delta())
    for (StateId t : next) predecessors[t].push_back(key.first);

  DistanceTable table;
  std::deque<StateId> queue;
  for (StateId sf : a.accepting()) {
    table.d[sf] = 0;
    queue.push_back(sf);
  }
  while (!queue.empty()) {
    StateId v = queue.front();
    queue.pop_front();
    for (StateId u : predecessors[v]) {
      if (table.d.count(u)) continue;
      table.d[u] = table.d[v] + 1;
      queue.push_back(u);
    }
  }
  for (StateId s : a.states()) {
    if (!table.d.count(s))
      throw Error(ErrorKind::InfiniteDistance,
                  "state " + std::to_string(s) + " cannot reach the accepting set (prune first)");
    table.d_max = std::max(table.d_max, table.d[s]);
  }
  return table;
}

/// The automaton with the distance-constrained transition map, the constrained
/// observation sets and the jump set of the discrete dynamics.
class ConstrainedAutomaton {
 public:
  ConstrainedAutomaton() = default;

  /// `a` must already be pruned.
  explicit ConstrainedAutomaton(BuchiAutomaton a) : base_(std::move(a)), dist_(ltlrec::distances(base_)) {
    for (StateId s : base_.states()) {
      std::set<ObsId>& allowed = oc_[s];
      for (ObsId o : enabled_observations(base_, s)) {
        std::set<StateId> next = compute_delta_c(s, o);
        if (next.empty()) continue;
        delta_c_[{s, o}] = std::move(next);
        allowed.insert(o);
        jump_set_.insert({s, o});
      }
    }
  }

  const BuchiAutomaton& base() const { return base_; }
  const DistanceTable& distances() const { return dist_; }
  int d_max() const { return dist_.d_max; }

  /// delta^C(s, o); empty when no successor satisfies the distance constraint.
  const std::set<StateId>& delta_c(StateId s, ObsId o) const {
    static const std::set<StateId> kEmpty;
    auto it = delta_c_.find({s, o});
    return it == delta_c_.end() ? kEmpty : it->second;
  }

  /// O^C_s.
  const std::set<ObsId>& constrained_observations(StateId s) const {
    static const std::set<ObsId> kEmpty;
    auto it = oc_.find(s);
    return it == oc_.end() ? kEmpty : it->second;
  }

  /// D^C_BA.
  const std::set<AutomatonState>& jump_set() const { return jump_set_; }
  bool in_jump_set(const AutomatonState& chi) const { return jump_set_.count(chi) != 0; }

  /// G^C_BA(chi) = {(s', o') : s' in delta^C(s, o), o' in O^C_{s'}}.
  std::set<AutomatonState> jump_map(const AutomatonState& chi) const {
    if (!in_jump_set(chi))
      throw Error(ErrorKind::NotInJumpSet, "(" + std::to_string(chi.s) + ", " +
                                               std::to_string(chi.o) + ") is not in the jump set");
    std::set<AutomatonState> out;
    for (StateId next : delta_c(chi.s, chi.o))
      for (ObsId o : constrained_observations(next)) out.insert({next, o});
    return out;
  }

  /// V_BA(s, o) = d(s).
  int v_ba(const AutomatonState& chi) const { return dist_(chi.s); }

  /// Integer-lattice section of the recurrent set: s accepting and o in O^C_s.
  /// The open 1/3-ball inflation adds no lattice points.
  bool in_recurrent_set_ba(const AutomatonState& chi) const {
    return base_.is_accepting(chi.s) && constrained_observations(chi.s).count(chi.o) != 0;
  }

 private:
  std::set<StateId> compute_delta_c(StateId s, ObsId o) const {
    const std::set<StateId>& next = base_.successors(s, o);
    std::set<StateId> out;
    if (!base_.is_accepting(s)) {
      for (StateId t : next)
        if (dist_(t) < dist_(s)) out.insert(t);
      return out;
    }
    int best = kUnreachable;
    for (StateId t : base_.all_successors(s)) best = std::min(best, dist_(t));
    for (StateId t : next)
      if (dist_(t) == best) out.insert(t);
    return out;
  }

  BuchiAutomaton base_;
  DistanceTable dist_;
  std::map<std::pair<StateId, ObsId>, std::set<StateId>> delta_c_;
  std::map<StateId, std::set<ObsId>> oc_;
  std::set<AutomatonState> jump_set_;
};

/// One row of the delta^C / G^C_BA table: every (s, o) sharing the same
/// delta^C(s, o) and G^C_BA((s, o)).
struct ConstrainedTableRow {
  std::vector<AutomatonState> pairs;
  std::set<StateId> delta_c;
  std::set<AutomatonState> successors;
};

/// Groups the non-empty entries, ordered by their first (s, o) pair.
inline std::vector<ConstrainedTableRow> constrained_table(const ConstrainedAutomaton& c) {
  std::vector<ConstrainedTableRow> rows;
  for (const AutomatonState& chi : c.jump_set()) {
    const auto& dc = c.delta_c(chi.s, chi.o);
    auto succ = c.jump_map(chi);
    auto it = std::find_if(rows.begin(), rows.end(), [&](const ConstrainedTableRow& row) {
      return row.delta_c == dc && row.successors == succ;
    });
    if (it == rows.end())
      rows.push_back({{chi}, dc, std::move(succ)});
    else
      it->pairs.push_back(chi);
  }
  return rows;
}

}  // namespace ltlrec
