#pragma once

// Generic exact analyses on weighted MDPs: the weight-unfolded finite
// approximation with certified clamping, exact value iteration on it, exact
// finite-horizon transient analysis under a fixed scheduler, Monte Carlo
// simulation, unary one-counter expansion, and weight integerization.

#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "lrs2mdp/mdp.hpp"

namespace lrs2mdp {

// ---------------------------------------------------------------------------
// Weight unfolding + value iteration (the independent oracle for termination
// probabilities).

struct UnfoldedMdp {
  const Mdp* base = nullptr;
  long w_lo = 0;
  long w_hi = 0;
  // Node ids: (state, w) for w in [w_lo, w_hi] laid out row-major, then two
  // sinks: terminated (crossed below w_lo) and overflow (crossed above w_hi).
  int node(int state, long w) const;
  int terminated_sink() const;
  int overflow_sink() const;
  int num_nodes() const;
};

// Requires integer weights and w_lo < 0 <= w_hi.
UnfoldedMdp weight_unfold(const Mdp& mdp, long w_lo, long w_hi);

enum class OptMode { Max, Min };

struct ValueIterationResult {
  std::vector<Rational> value;  // indexed by unfolded node id
  bool exact = true;            // false if the budget fallback was used
  Rational residual;            // last sweep's max change when not exact
  Rational at(const UnfoldedMdp& u, int state, long w) const;
};

// Termination objective: value 1 for accumulated weight < 0, absorbing
// states that can never cross again get 0, the overflow sink gets
// `overflow_value` (1 = optimistic upper bound, 0 = pessimistic lower bound;
// both bound the optimum for either optimization mode). Solves exactly by
// backward induction when the unfolding is acyclic apart from absorbing
// nodes, otherwise iterates up to `round_budget` sweeps.
ValueIterationResult value_iteration(const UnfoldedMdp& u, OptMode mode, const Rational& overflow_value,
                                     long round_budget = 0);

struct ValueBounds {
  ValueIterationResult lower;
  ValueIterationResult upper;
};

// Runs both clampings.
ValueBounds termination_value_bounds(const Mdp& mdp, OptMode mode, long w_lo, long w_hi);

// ---------------------------------------------------------------------------
// Exact transient analysis under a fixed scheduler.

struct TransientOptions {
  long step_budget = 10000;
  std::optional<Rational> tail_stop;    // stop once tail < this
  bool absorb_on_negative = false;      // crossing below 0 absorbs (termination semantics)
  std::vector<int> first_passage_states;  // record mass entering these states
};

struct TransientResult {
  // (state, weight at absorption) -> mass; state = -1 encodes the crossing
  // pseudo-outcome used by termination semantics.
  std::map<std::pair<int, Rational>, Rational> outcomes;
  std::map<int, Rational> step_sum;      // per outcome state: sum of mass * absorption step
  std::map<int, Rational> first_passage; // mass that entered a requested state
  Rational tail;                         // un-absorbed mass left in the frontier
  long steps_used = 0;

  Rational total_outcome_mass() const;
  Rational mass_at(int state) const;                       // sum over weights
  Rational expected_weight_at(int state) const;            // sum of w * mass (not normalized)
  Rational expected_steps() const;                         // sum over all outcomes
};

TransientResult transient_distribution(const Mdp& mdp, const WeightScheduler& sched, const TransientOptions& opt);

// ---------------------------------------------------------------------------
// Monte Carlo simulation (sanity cross-check only; statistics are doubles,
// branch sampling uses exact rational thresholds).

struct SimulationStats {
  long episodes = 0;
  long terminated = 0;    // crossed below 0
  long reached_goal = 0;  // absorbed in a "goal"-marked state
  long capped = 0;        // hit the step cap
  double termination_frequency = 0.0;
  double mean_weight_at_goal = 0.0;
  double mean_steps = 0.0;
};

SimulationStats simulate(const Mdp& mdp, const WeightScheduler& sched, long episodes, std::uint64_t seed,
                         long step_cap);

// ---------------------------------------------------------------------------
// Structural passes.

// Replaces every |weight| >= 2 transition by the probabilistic branch
// (weight 0) followed by a chain of |w| fresh states stepping sign(w)*1; the
// result only uses weights in {-1, 0, +1} and preserves termination events.
Mdp unary_expand(const Mdp& mdp);

// Multiplies all weights by the lcm of their denominators; returns the
// scaled MDP and the scale factor L.
std::pair<Mdp, Rational> integerize_weights(const Mdp& mdp);

}  // namespace lrs2mdp
