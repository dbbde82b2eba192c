#pragma once

// Finite weighted MDP with exact rational transition probabilities and
// weights, plus the deterministic weight-based scheduler representation the
// constructions prescribe.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lrs2mdp/rational.hpp"

namespace lrs2mdp {

struct Branch {
  Rational prob;
  int to = -1;
};

struct ActionDef {
  std::string name;
  Rational weight;
  std::vector<Branch> branches;
};

struct Mdp {
  struct State {
    std::string name;
    std::vector<ActionDef> actions;  // empty: terminal/trap state
  };

  std::vector<State> states;
  int initial = 0;
  std::map<std::string, std::set<int>> marks;  // "goal", "fail", "trap", ...

  int add_state(const std::string& name);
  int index_of(const std::string& name) const;             // throws if absent
  std::optional<int> find_state(const std::string& name) const;
  const ActionDef& action(int state, int idx) const { return states[static_cast<size_t>(state)].actions[static_cast<size_t>(idx)]; }
  int num_states() const { return static_cast<int>(states.size()); }

  bool is_terminal(int s) const { return states[static_cast<size_t>(s)].actions.empty(); }
  // Absorbing per the usual convention: every action self-loops with
  // probability 1 and weight 0.
  bool is_absorbing(int s) const;
};

// Empty iff all invariants hold: distributions have probabilities in (0,1]
// summing to exactly 1, branch targets in range, action names unique per
// state, marks in range. Unreachable states produce "warning:" entries.
std::vector<std::string> validate(const Mdp& mdp);

// Deterministic weight-based scheduler: an action per (state, weight) inside
// an integer window, with per-state fallback rules outside it. States with a
// single enabled action never need an entry.
struct WeightScheduler {
  enum class Fallback { Fixed, ClampLow, ClampHigh };

  long w_lo = 0;
  long w_hi = -1;  // empty window when w_hi < w_lo
  std::map<std::pair<int, long>, int> table;  // (state, weight) -> action index
  struct Rule {
    Fallback kind = Fallback::Fixed;
    int action = 0;
  };
  std::map<int, Rule> below;
  std::map<int, Rule> above;

  // Resolves the action for (state, accumulated weight). Single-action
  // states resolve without a table entry. Throws std::invalid_argument if
  // undefined at a reached pair.
  int action_at(const Mdp& mdp, int state, const Rational& weight) const;
};

// Uniform random scheduler over [w_lo, w_hi], reproducible from the seed;
// outside the window it clamps to the edge decision.
WeightScheduler random_scheduler(const Mdp& mdp, long w_lo, long w_hi, std::uint64_t seed);

nlohmann::ordered_json mdp_to_json(const Mdp& mdp);
Mdp mdp_from_json(const nlohmann::ordered_json& j);

// PRISM-style module text; requires integer weights (throws otherwise).
std::string mdp_to_prism(const Mdp& mdp);

}  // namespace lrs2mdp
