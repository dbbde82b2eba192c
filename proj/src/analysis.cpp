#include "lrs2mdp/analysis.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <stdexcept>

namespace lrs2mdp {

// ---------------------------------------------------------------------------
// Unfolding

int UnfoldedMdp::node(int state, long w) const {
  return static_cast<int>((w - w_lo) * base->num_states() + state);
}
int UnfoldedMdp::terminated_sink() const {
  return static_cast<int>((w_hi - w_lo + 1) * base->num_states());
}
int UnfoldedMdp::overflow_sink() const { return terminated_sink() + 1; }
int UnfoldedMdp::num_nodes() const { return terminated_sink() + 2; }

UnfoldedMdp weight_unfold(const Mdp& mdp, long w_lo, long w_hi) {
  if (!(w_lo < 0 && 0 <= w_hi)) throw std::invalid_argument("weight_unfold: need w_lo < 0 <= w_hi");
  for (const auto& st : mdp.states) {
    for (const auto& a : st.actions) {
      if (!a.weight.is_integer()) {
        throw std::invalid_argument("weight_unfold: non-integer weight on '" + st.name + "'/'" + a.name +
                                    "' (integerize first)");
      }
    }
  }
  UnfoldedMdp u;
  u.base = &mdp;
  u.w_lo = w_lo;
  u.w_hi = w_hi;
  return u;
}

Rational ValueIterationResult::at(const UnfoldedMdp& u, int state, long w) const {
  if (w < 0) return 1;
  if (w < u.w_lo || w > u.w_hi) throw std::invalid_argument("value out of unfolding window");
  return value[static_cast<size_t>(u.node(state, w))];
}

namespace {

struct UnfoldEdge {
  int to;
  Rational prob;
};

// Successor nodes of (state, w) under one action, already clamped to sinks.
std::vector<UnfoldEdge> unfold_action(const UnfoldedMdp& u, int state, long w, const ActionDef& a) {
  std::vector<UnfoldEdge> out;
  const long w2 = w + a.weight.to_long();
  for (const auto& b : a.branches) {
    int to;
    if (w2 < 0) {
      to = u.terminated_sink();  // crossed: value 1 for termination
    } else if (w2 > u.w_hi) {
      to = u.overflow_sink();
    } else {
      to = u.node(b.to, w2);
    }
    out.push_back({to, b.prob});
  }
  return out;
}

}  // namespace

ValueIterationResult value_iteration(const UnfoldedMdp& u, OptMode mode, const Rational& overflow_value,
                                     long round_budget) {
  const Mdp& m = *u.base;
  const int ns = m.num_states();
  const int nn = u.num_nodes();
  std::vector<Rational> value(static_cast<size_t>(nn));
  std::vector<bool> fixed(static_cast<size_t>(nn), false);

  value[static_cast<size_t>(u.terminated_sink())] = 1;
  fixed[static_cast<size_t>(u.terminated_sink())] = true;
  value[static_cast<size_t>(u.overflow_sink())] = overflow_value;
  fixed[static_cast<size_t>(u.overflow_sink())] = true;

  // Terminal and absorbing base states at w >= 0 can never cross: value 0.
  for (long w = u.w_lo; w <= u.w_hi; ++w) {
    for (int s = 0; s < ns; ++s) {
      int id = u.node(s, w);
      if (w < 0) {
        value[static_cast<size_t>(id)] = 1;
        fixed[static_cast<size_t>(id)] = true;
      } else if (m.is_terminal(s) || m.is_absorbing(s)) {
        value[static_cast<size_t>(id)] = 0;
        fixed[static_cast<size_t>(id)] = true;
      }
    }
  }

  // Kahn topological ordering over the open nodes.
  std::vector<std::vector<int>> preds(static_cast<size_t>(nn));
  std::vector<int> outdeg(static_cast<size_t>(nn), 0);
  for (long w = u.w_lo; w <= u.w_hi; ++w) {
    for (int s = 0; s < ns; ++s) {
      int id = u.node(s, w);
      if (fixed[static_cast<size_t>(id)]) continue;
      std::vector<bool> seen(static_cast<size_t>(nn), false);
      for (const auto& a : m.states[static_cast<size_t>(s)].actions) {
        for (const auto& e : unfold_action(u, s, w, a)) {
          if (!fixed[static_cast<size_t>(e.to)] && !seen[static_cast<size_t>(e.to)]) {
            seen[static_cast<size_t>(e.to)] = true;
            preds[static_cast<size_t>(e.to)].push_back(id);
            ++outdeg[static_cast<size_t>(id)];
          }
        }
      }
    }
  }

  auto eval_node = [&](int id) {
    const int s = id % ns;
    const long w = u.w_lo + id / ns;
    const auto& acts = m.states[static_cast<size_t>(s)].actions;
    Rational best;
    bool first = true;
    for (const auto& a : acts) {
      Rational v = 0;
      for (const auto& e : unfold_action(u, s, w, a)) v += e.prob * value[static_cast<size_t>(e.to)];
      if (first || (mode == OptMode::Max ? v > best : v < best)) best = v;
      first = false;
    }
    return best;
  };

  std::queue<int> ready;
  long open = 0;
  for (int id = 0; id < nn; ++id) {
    if (fixed[static_cast<size_t>(id)]) continue;
    ++open;
    if (outdeg[static_cast<size_t>(id)] == 0) ready.push(id);
  }
  long resolved = 0;
  while (!ready.empty()) {
    int id = ready.front();
    ready.pop();
    value[static_cast<size_t>(id)] = eval_node(id);
    fixed[static_cast<size_t>(id)] = true;
    ++resolved;
    for (int p : preds[static_cast<size_t>(id)]) {
      if (--outdeg[static_cast<size_t>(p)] == 0 && !fixed[static_cast<size_t>(p)]) ready.push(p);
    }
  }

  ValueIterationResult res;
  if (resolved == open) {
    res.exact = true;
    res.residual = 0;
    res.value = std::move(value);
    return res;
  }

  // Cycles among open nodes: iterate to the budget and report the residual.
  if (round_budget <= 0) round_budget = 200;
  Rational residual = 0;
  for (long round = 0; round < round_budget; ++round) {
    residual = 0;
    for (int id = 0; id < nn; ++id) {
      if (fixed[static_cast<size_t>(id)]) continue;
      Rational v = eval_node(id);
      residual = max(residual, (v - value[static_cast<size_t>(id)]).abs());
      value[static_cast<size_t>(id)] = v;
    }
    if (residual.is_zero()) break;
  }
  res.exact = residual.is_zero();
  res.residual = residual;
  res.value = std::move(value);
  return res;
}

ValueBounds termination_value_bounds(const Mdp& mdp, OptMode mode, long w_lo, long w_hi) {
  UnfoldedMdp u = weight_unfold(mdp, w_lo, w_hi);
  ValueBounds b;
  b.lower = value_iteration(u, mode, Rational(0));
  b.upper = value_iteration(u, mode, Rational(1));
  return b;
}

// ---------------------------------------------------------------------------
// Transient analysis

Rational TransientResult::total_outcome_mass() const {
  Rational s = 0;
  for (const auto& [k, m] : outcomes) s += m;
  return s;
}

Rational TransientResult::mass_at(int state) const {
  Rational s = 0;
  for (const auto& [k, m] : outcomes) {
    if (k.first == state) s += m;
  }
  return s;
}

Rational TransientResult::expected_weight_at(int state) const {
  Rational s = 0;
  for (const auto& [k, m] : outcomes) {
    if (k.first == state) s += k.second * m;
  }
  return s;
}

Rational TransientResult::expected_steps() const {
  Rational s = 0;
  for (const auto& [st, v] : step_sum) s += v;
  return s;
}

TransientResult transient_distribution(const Mdp& mdp, const WeightScheduler& sched, const TransientOptions& opt) {
  TransientResult res;
  using Key = std::pair<int, Rational>;
  std::map<Key, Rational> frontier;

  auto absorb = [&](int state, const Rational& w, const Rational& mass, long step) {
    res.outcomes[{state, w}] += mass;
    res.step_sum[state] += mass * Rational(step);
  };

  auto settle = [&](int state, const Rational& w, const Rational& mass, long step) {
    // Absorption checks in order: crossing, then structural absorption.
    if (opt.absorb_on_negative && w < Rational(0)) {
      absorb(-1, w, mass, step);
      return;
    }
    for (int fp : opt.first_passage_states) {
      if (fp == state) res.first_passage[state] += mass;
    }
    if (mdp.is_terminal(state) || mdp.is_absorbing(state)) {
      absorb(state, w, mass, step);
      return;
    }
    frontier[{state, w}] += mass;
  };

  settle(mdp.initial, Rational(0), Rational(1), 0);

  long step = 0;
  while (step < opt.step_budget && !frontier.empty()) {
    ++step;
    std::map<Key, Rational> next;
    std::swap(next, frontier);
    for (const auto& [key, mass] : next) {
      const auto& [state, w] = key;
      int ai = sched.action_at(mdp, state, w);
      const ActionDef& a = mdp.action(state, ai);
      const Rational w2 = w + a.weight;
      for (const auto& b : a.branches) settle(b.to, w2, mass * b.prob, step);
    }
    if (opt.tail_stop) {
      Rational tail = 0;
      for (const auto& [k, m] : frontier) tail += m;
      if (tail < *opt.tail_stop) break;
    }
  }

  res.steps_used = step;
  res.tail = 0;
  for (const auto& [k, m] : frontier) res.tail += m;
  return res;
}

// ---------------------------------------------------------------------------
// Simulation

SimulationStats simulate(const Mdp& mdp, const WeightScheduler& sched, long episodes, std::uint64_t seed,
                         long step_cap) {
  std::mt19937_64 rng(seed);
  const Rational two64 = Rational::pow2(64);

  SimulationStats st;
  st.episodes = episodes;
  double weight_at_goal_sum = 0.0;
  double steps_sum = 0.0;

  const auto& goal_mark = mdp.marks.find("goal");

  for (long ep = 0; ep < episodes; ++ep) {
    int state = mdp.initial;
    Rational w = 0;
    long steps = 0;
    bool terminated = false;
    bool goal = false;
    while (steps < step_cap) {
      if (!terminated && w < Rational(0)) {
        terminated = true;
        ++st.terminated;
      }
      if (mdp.is_terminal(state) || mdp.is_absorbing(state)) break;
      int ai = sched.action_at(mdp, state, w);
      const ActionDef& a = mdp.action(state, ai);
      // Exact threshold sampling: u/2^64 uniform vs cumulative branch mass.
      Rational u(mpz_class(rng()));
      u /= two64;
      Rational acc = 0;
      int to = a.branches.back().to;
      for (const auto& b : a.branches) {
        acc += b.prob;
        if (u < acc) {
          to = b.to;
          break;
        }
      }
      state = to;
      w += a.weight;
      ++steps;
    }
    if (!terminated && w < Rational(0)) {
      terminated = true;
      ++st.terminated;
    }
    if (steps >= step_cap) ++st.capped;
    if (goal_mark != mdp.marks.end() && goal_mark->second.count(state)) {
      goal = true;
      ++st.reached_goal;
      weight_at_goal_sum += w.to_double();
    }
    (void)goal;
    steps_sum += static_cast<double>(steps);
  }

  st.termination_frequency = episodes ? static_cast<double>(st.terminated) / static_cast<double>(episodes) : 0.0;
  st.mean_weight_at_goal = st.reached_goal ? weight_at_goal_sum / static_cast<double>(st.reached_goal) : 0.0;
  st.mean_steps = episodes ? steps_sum / static_cast<double>(episodes) : 0.0;
  return st;
}

// ---------------------------------------------------------------------------
// Structural passes

Mdp unary_expand(const Mdp& mdp) {
  for (const auto& st : mdp.states) {
    for (const auto& a : st.actions) {
      if (!a.weight.is_integer()) {
        throw std::invalid_argument("unary_expand: non-integer weight on '" + st.name + "'/'" + a.name + "'");
      }
    }
  }
  Mdp out;
  out.initial = mdp.initial;
  for (const auto& st : mdp.states) out.add_state(st.name);
  out.marks = mdp.marks;

  for (size_t si = 0; si < mdp.states.size(); ++si) {
    const auto& st = mdp.states[si];
    for (const auto& a : st.actions) {
      const long w = a.weight.to_long();
      const long mag = w < 0 ? -w : w;
      if (mag <= 1) {
        out.states[si].actions.push_back(a);
        continue;
      }
      const Rational unit(w < 0 ? -1 : 1);
      // Branch first with weight 0, then |w| unit steps per branch target.
      ActionDef head;
      head.name = a.name;
      head.weight = 0;
      for (const auto& b : a.branches) {
        int prev = -1;
        for (long i = 0; i < mag; ++i) {
          std::string name = st.name + "." + a.name + ".to." + mdp.states[static_cast<size_t>(b.to)].name + ".u" +
                             std::to_string(i + 1);
          int node = out.add_state(name);
          if (i == 0) {
            head.branches.push_back(Branch{b.prob, node});
          } else {
            out.states[static_cast<size_t>(prev)].actions.push_back(
                ActionDef{"step", unit, {Branch{Rational(1), node}}});
          }
          prev = node;
        }
        out.states[static_cast<size_t>(prev)].actions.push_back(
            ActionDef{"step", unit, {Branch{Rational(1), b.to}}});
      }
      out.states[si].actions.push_back(std::move(head));
    }
  }
  return out;
}

std::pair<Mdp, Rational> integerize_weights(const Mdp& mdp) {
  mpz_class l(1);
  for (const auto& st : mdp.states) {
    for (const auto& a : st.actions) {
      mpz_class d = a.weight.den();
      mpz_class g;
      mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
      l = l / g * d;
    }
  }
  Rational scale{mpz_class(l)};
  Mdp out = mdp;
  for (auto& st : out.states) {
    for (auto& a : st.actions) a.weight *= scale;
  }
  return {out, scale};
}

}  // namespace lrs2mdp
