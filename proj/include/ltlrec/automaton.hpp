#pragma once

// Nondeterministic Buchi automata over integer states and observations,
// the line-oriented file format, and feasibility pruning.

#include <compare>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ltlrec/errors.hpp"

namespace ltlrec {

using StateId = int;
using ObsId = int;

/// Discrete part of the hybrid state: automaton state s and current observation o.
struct AutomatonState {
  StateId s = 0;
  ObsId o = 0;

  auto operator<=>(const AutomatonState&) const = default;
};

/// Automaton (S, S0, O, delta, Sf). States are 0..n_states-1 and observations
/// 1..n_obs. Pruning removes states but never renumbers the survivors.
class BuchiAutomaton {
 public:
  using Delta = std::map<std::pair<StateId, ObsId>, std::set<StateId>>;

  BuchiAutomaton() = default;

  /// Validates every invariant; throws ValidationError listing all problems.
  BuchiAutomaton(int n_states, int n_obs, std::set<StateId> initial,
                 std::set<StateId> accepting, Delta delta)
      : n_states_(n_states),
        n_obs_(n_obs),
        initial_(std::move(initial)),
        accepting_(std::move(accepting)),
        delta_(std::move(delta)) {
    for (StateId s = 0; s < n_states_; ++s) states_.insert(s);
    validate();
  }

  int n_states() const { return static_cast<int>(states_.size()); }
  int id_bound() const { return n_states_; }
  int n_obs() const { return n_obs_; }
  const std::set<StateId>& states() const { return states_; }
  const std::set<StateId>& initial() const { return initial_; }
  const std::set<StateId>& accepting() const { return accepting_; }
  const Delta& delta() const { return delta_; }

  bool has_state(StateId s) const { return states_.count(s) != 0; }
  bool is_accepting(StateId s) const { return accepting_.count(s) != 0; }
  bool has_observation(ObsId o) const { return o >= 1 && o <= n_obs_; }

  std::vector<ObsId> observations() const {
    std::vector<ObsId> out;
    for (ObsId o = 1; o <= n_obs_; ++o) out.push_back(o);
    return out;
  }

  /// delta(s, o); empty when no transition is labelled o.
  const std::set<StateId>& successors(StateId s, ObsId o) const {
    static const std::set<StateId> kEmpty;
    auto it = delta_.find({s, o});
    return it == delta_.end() ? kEmpty : it->second;
  }

  /// delta(s, O): successors under any observation.
  std::set<StateId> all_successors(StateId s) const {
    std::set<StateId> out;
    for (ObsId o = 1; o <= n_obs_; ++o) {
      const auto& next = successors(s, o);
      out.insert(next.begin(), next.end());
    }
    return out;
  }

  bool operator==(const BuchiAutomaton& other) const {
    return n_states_ == other.n_states_ && n_obs_ == other.n_obs_ &&
           states_ == other.states_ && initial_ == other.initial_ &&
           accepting_ == other.accepting_ && delta_ == other.delta_;
  }

  /// Keeps only `keep`; drops removed states from every set and transition.
  BuchiAutomaton restricted_to(const std::set<StateId>& keep) const {
    BuchiAutomaton out = *this;
    out.states_.clear();
    for (StateId s : states_)
      if (keep.count(s)) out.states_.insert(s);
    auto filter = [&](std::set<StateId>& set) {
      for (auto it = set.begin(); it != set.end();)
        it = out.states_.count(*it) ? std::next(it) : set.erase(it);
    };
    filter(out.initial_);
    filter(out.accepting_);
    out.delta_.clear();
    for (const auto& [key, targets] : delta_) {
      if (!out.states_.count(key.first)) continue;
      std::set<StateId> kept = targets;
      filter(kept);
      if (!kept.empty()) out.delta_[key] = std::move(kept);
    }
    return out;
  }

 private:
  void validate() const {
    std::vector<std::string> problems;
    if (n_states_ <= 0) problems.push_back("automaton needs at least one state");
    if (n_obs_ <= 0) problems.push_back("automaton needs at least one observation");
    if (initial_.empty()) problems.push_back("empty initial set");
    if (accepting_.empty()) problems.push_back("empty accepting set");
    auto check_state = [&](StateId s, const char* where) {
      if (!states_.count(s))
        problems.push_back("dangling state id " + std::to_string(s) + " in " + where);
    };
    for (StateId s : initial_) check_state(s, "initial");
    for (StateId s : accepting_) check_state(s, "accepting");
    for (const auto& [key, targets] : delta_) {
      check_state(key.first, "transition source");
      if (key.second < 1 || key.second > n_obs_)
        problems.push_back("dangling observation id " + std::to_string(key.second));
      for (StateId t : targets) check_state(t, "transition target");
    }
    if (!problems.empty()) throw ValidationError(std::move(problems));
  }

  int n_states_ = 0;
  int n_obs_ = 0;
  std::set<StateId> states_;
  std::set<StateId> initial_;
  std::set<StateId> accepting_;
  Delta delta_;
};

/// Parses the line-oriented automaton format:
///   states <n> / initial <id>... / accepting <id>... / obs <n> /
///   trans <from> <obs> <to> [<to>...]
/// `#` starts a comment. A repeated (from, obs) pair is a parse error.
inline BuchiAutomaton parse_automaton(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  int n_states = -1;
  int n_obs = -1;
  std::set<StateId> initial;
  std::set<StateId> accepting;
  bool saw_initial = false;
  bool saw_accepting = false;
  BuchiAutomaton::Delta delta;
  std::vector<std::string> dangling;

  auto read_ints = [&](std::istringstream& fields) {
    std::vector<int> values;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      int value = 0;
      try {
        value = std::stoi(token, &used);
      } catch (const std::exception&) {
        throw ParseError(line_no, "expected integer, got '" + token + "'");
      }
      if (used != token.size()) throw ParseError(line_no, "expected integer, got '" + token + "'");
      values.push_back(value);
    }
    return values;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string keyword;
    if (!(fields >> keyword)) continue;
    std::vector<int> values = read_ints(fields);

    if (keyword == "states" || keyword == "obs") {
      if (values.size() != 1 || values[0] <= 0)
        throw ParseError(line_no, "'" + keyword + "' takes one positive count");
      int& target = keyword == "states" ? n_states : n_obs;
      if (target != -1) throw ParseError(line_no, "duplicate '" + keyword + "' line");
      target = values[0];
    } else if (keyword == "initial" || keyword == "accepting") {
      if (values.empty()) throw ParseError(line_no, "'" + keyword + "' needs at least one id");
      auto& target = keyword == "initial" ? initial : accepting;
      (keyword == "initial" ? saw_initial : saw_accepting) = true;
      target.insert(values.begin(), values.end());
    } else if (keyword == "trans") {
      if (values.size() < 3) throw ParseError(line_no, "'trans' needs <from> <obs> <to>...");
      std::pair<StateId, ObsId> key{values[0], values[1]};
      if (delta.count(key))
        throw ParseError(line_no, "repeated transition pair (" + std::to_string(key.first) +
                                      ", " + std::to_string(key.second) + ")");
      delta[key] = std::set<StateId>(values.begin() + 2, values.end());
    } else {
      throw ParseError(line_no, "unknown keyword '" + keyword + "'");
    }
  }
  if (n_states == -1) throw ParseError(line_no, "missing 'states' line");
  if (n_obs == -1) throw ParseError(line_no, "missing 'obs' line");
  if (!saw_initial) throw ParseError(line_no, "missing 'initial' line");
  if (!saw_accepting) throw ParseError(line_no, "missing 'accepting' line");
  return BuchiAutomaton(n_states, n_obs, std::move(initial), std::move(accepting),
                        std::move(delta));
}

inline std::string serialize_automaton(const BuchiAutomaton& a) {
  std::ostringstream out;
  out << "states " << a.id_bound() << "\n";
  out << "initial";
  for (StateId s : a.initial()) out << ' ' << s;
  out << "\naccepting";
  for (StateId s : a.accepting()) out << ' ' << s;
  out << "\nobs " << a.n_obs() << "\n";
  for (const auto& [key, targets] : a.delta()) {
    out << "trans " << key.first << ' ' << key.second;
    for (StateId t : targets) out << ' ' << t;
    out << "\n";
  }
  return out.str();
}

/// O_s: observations with at least one outgoing transition from s.
inline std::set<ObsId> enabled_observations(const BuchiAutomaton& a, StateId s) {
  std::set<ObsId> out;
  for (ObsId o = 1; o <= a.n_obs(); ++o)
    if (!a.successors(s, o).empty()) out.insert(o);
  return out;
}

namespace detail {

/// States reachable from `source` along paths of length >= 1.
inline std::set<StateId> reachable_nonempty(const BuchiAutomaton& a, StateId source) {
  std::set<StateId> seen;
  std::deque<StateId> queue;
  for (StateId t : a.all_successors(source))
    if (seen.insert(t).second) queue.push_back(t);
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId t : a.all_successors(s))
      if (seen.insert(t).second) queue.push_back(t);
  }
  return seen;
}

/// States that can reach some element of `targets` (path length >= 0).
inline std::set<StateId> backward_closure(const BuchiAutomaton& a, const std::set<StateId>& targets) {
  std::map<StateId, std::vector<StateId>> predecessors;
  for (const auto& [key, next] : a.delta())
    for (StateId t : next) predecessors[t].push_back(key.first);
  std::set<StateId> seen(targets.begin(), targets.end());
  std::deque<StateId> queue(targets.begin(), targets.end());
  while (!queue.empty()) {
    StateId s = queue.front();
    queue.pop_front();
    for (StateId p : predecessors[s])
      if (seen.insert(p).second) queue.push_back(p);
  }
  return seen;
}

}  // namespace detail

/// Accepting states that lie on a cycle through themselves.
inline std::set<StateId> cyclic_accepting_states(const BuchiAutomaton& a) {
  std::set<StateId> out;
  for (StateId sf : a.accepting())
    if (detail::reachable_nonempty(a, sf).count(sf)) out.insert(sf);
  return out;
}

/// Removes every state that cannot reach a cyclic accepting state.
/// Throws Infeasible when no initial state survives.
inline BuchiAutomaton prune_infeasible(const BuchiAutomaton& a) {
  std::set<StateId> keep = detail::backward_closure(a, cyclic_accepting_states(a));
  bool any_initial = false;
  for (StateId s : a.initial()) any_initial |= keep.count(s) != 0;
  if (!any_initial)
    throw Error(ErrorKind::Infeasible,
                "no initial state reaches an accepting state on a cycle through itself");
  return a.restricted_to(keep);
}

}  // namespace ltlrec
