#include "lrs2mdp/mdp.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lrs2mdp {

int Mdp::add_state(const std::string& name) {
  if (find_state(name)) throw std::invalid_argument("Mdp: duplicate state name '" + name + "'");
  states.push_back(State{name, {}});
  return static_cast<int>(states.size()) - 1;
}

int Mdp::index_of(const std::string& name) const {
  auto i = find_state(name);
  if (!i) throw std::invalid_argument("Mdp: no state named '" + name + "'");
  return *i;
}

std::optional<int> Mdp::find_state(const std::string& name) const {
  for (size_t i = 0; i < states.size(); ++i) {
    if (states[i].name == name) return static_cast<int>(i);
  }
  return std::nullopt;
}

bool Mdp::is_absorbing(int s) const {
  const auto& acts = states[static_cast<size_t>(s)].actions;
  if (acts.empty()) return false;
  for (const auto& a : acts) {
    if (!a.weight.is_zero()) return false;
    for (const auto& b : a.branches) {
      if (b.to != s) return false;
    }
  }
  return true;
}

std::vector<std::string> validate(const Mdp& mdp) {
  std::vector<std::string> out;
  const int n = mdp.num_states();
  if (n == 0) {
    out.push_back("no states");
    return out;
  }
  if (mdp.initial < 0 || mdp.initial >= n) out.push_back("initial state index out of range");

  for (int s = 0; s < n; ++s) {
    const auto& st = mdp.states[static_cast<size_t>(s)];
    std::set<std::string> names;
    for (const auto& a : st.actions) {
      if (!names.insert(a.name).second) {
        out.push_back("state '" + st.name + "': duplicate action name '" + a.name + "'");
      }
      if (a.branches.empty()) {
        out.push_back("state '" + st.name + "' action '" + a.name + "': no branches");
        continue;
      }
      Rational sum = 0;
      for (const auto& b : a.branches) {
        if (b.to < 0 || b.to >= n) {
          out.push_back("state '" + st.name + "' action '" + a.name + "': branch target out of range");
        }
        if (!(b.prob > Rational(0)) || b.prob > Rational(1)) {
          out.push_back("state '" + st.name + "' action '" + a.name + "': branch probability " + b.prob.str() +
                        " not in (0,1]");
        }
        sum += b.prob;
      }
      if (sum != Rational(1)) {
        out.push_back("state '" + st.name + "' action '" + a.name + "': sum = " + sum.str() + " != 1");
      }
    }
  }

  for (const auto& [mark, set] : mdp.marks) {
    for (int s : set) {
      if (s < 0 || s >= n) out.push_back("mark '" + mark + "': state index out of range");
    }
  }

  // Reachability from the initial state is a warning, not an error.
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<int> stack{mdp.initial};
  if (mdp.initial >= 0 && mdp.initial < n) seen[static_cast<size_t>(mdp.initial)] = true;
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& a : mdp.states[static_cast<size_t>(s)].actions) {
      for (const auto& b : a.branches) {
        if (b.to >= 0 && b.to < n && !seen[static_cast<size_t>(b.to)]) {
          seen[static_cast<size_t>(b.to)] = true;
          stack.push_back(b.to);
        }
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    if (!seen[static_cast<size_t>(s)]) {
      out.push_back("warning: state '" + mdp.states[static_cast<size_t>(s)].name + "' unreachable from initial");
    }
  }
  return out;
}

int WeightScheduler::action_at(const Mdp& mdp, int state, const Rational& weight) const {
  const auto& acts = mdp.states[static_cast<size_t>(state)].actions;
  if (acts.empty()) throw std::invalid_argument("scheduler queried at terminal state '" +
                                                mdp.states[static_cast<size_t>(state)].name + "'");
  if (acts.size() == 1) return 0;

  if (weight.is_integer()) {
    long w = weight.to_long();
    if (w >= w_lo && w <= w_hi) {
      auto it = table.find({state, w});
      if (it != table.end()) return it->second;
      throw std::invalid_argument("scheduler undefined at ('" + mdp.states[static_cast<size_t>(state)].name +
                                  "', " + std::to_string(w) + ")");
    }
  }

  const bool low = weight < Rational(w_lo);
  const auto& rules = low ? below : above;
  auto it = rules.find(state);
  if (it == rules.end()) {
    throw std::invalid_argument("scheduler has no out-of-window rule for state '" +
                                mdp.states[static_cast<size_t>(state)].name + "'");
  }
  const Rule& r = it->second;
  switch (r.kind) {
    case Fallback::Fixed:
      return r.action;
    case Fallback::ClampLow: {
      auto e = table.find({state, w_lo});
      if (e == table.end()) throw std::invalid_argument("scheduler clamp-low entry missing");
      return e->second;
    }
    case Fallback::ClampHigh: {
      auto e = table.find({state, w_hi});
      if (e == table.end()) throw std::invalid_argument("scheduler clamp-high entry missing");
      return e->second;
    }
  }
  throw std::logic_error("unreachable");
}

WeightScheduler random_scheduler(const Mdp& mdp, long w_lo, long w_hi, std::uint64_t seed) {
  WeightScheduler s;
  s.w_lo = w_lo;
  s.w_hi = w_hi;
  std::mt19937_64 rng(seed);
  for (int st = 0; st < mdp.num_states(); ++st) {
    const auto& acts = mdp.states[static_cast<size_t>(st)].actions;
    if (acts.size() < 2) continue;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(acts.size()) - 1);
    for (long w = w_lo; w <= w_hi; ++w) s.table[{st, w}] = pick(rng);
    s.below[st] = {WeightScheduler::Fallback::ClampLow, 0};
    s.above[st] = {WeightScheduler::Fallback::ClampHigh, 0};
  }
  return s;
}

nlohmann::ordered_json mdp_to_json(const Mdp& mdp) {
  nlohmann::ordered_json j;
  j["states"] = nlohmann::ordered_json::array();
  for (const auto& st : mdp.states) j["states"].push_back(st.name);
  j["initial"] = mdp.states[static_cast<size_t>(mdp.initial)].name;
  nlohmann::ordered_json marks = nlohmann::ordered_json::object();
  for (const auto& [mark, set] : mdp.marks) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (int s : set) arr.push_back(mdp.states[static_cast<size_t>(s)].name);
    marks[mark] = arr;
  }
  j["marks"] = marks;
  nlohmann::ordered_json trans = nlohmann::ordered_json::array();
  for (const auto& st : mdp.states) {
    for (const auto& a : st.actions) {
      nlohmann::ordered_json t;
      t["from"] = st.name;
      t["action"] = a.name;
      t["weight"] = a.weight.str();
      nlohmann::ordered_json branches = nlohmann::ordered_json::array();
      for (const auto& b : a.branches) {
        branches.push_back({{"prob", b.prob.str()}, {"to", mdp.states[static_cast<size_t>(b.to)].name}});
      }
      t["branches"] = branches;
      trans.push_back(t);
    }
  }
  j["transitions"] = trans;
  return j;
}

Mdp mdp_from_json(const nlohmann::ordered_json& j) {
  Mdp m;
  for (const auto& s : j.at("states")) m.add_state(s.get<std::string>());
  m.initial = m.index_of(j.at("initial").get<std::string>());
  if (j.contains("marks")) {
    for (auto it = j.at("marks").begin(); it != j.at("marks").end(); ++it) {
      std::set<int> set;
      for (const auto& name : it.value()) set.insert(m.index_of(name.get<std::string>()));
      m.marks[it.key()] = set;
    }
  }
  for (const auto& t : j.at("transitions")) {
    int from = m.index_of(t.at("from").get<std::string>());
    ActionDef a;
    a.name = t.at("action").get<std::string>();
    a.weight = Rational::parse(t.at("weight").get<std::string>());
    for (const auto& b : t.at("branches")) {
      a.branches.push_back(Branch{Rational::parse(b.at("prob").get<std::string>()),
                                  m.index_of(b.at("to").get<std::string>())});
    }
    m.states[static_cast<size_t>(from)].actions.push_back(std::move(a));
  }
  return m;
}

std::string mdp_to_prism(const Mdp& mdp) {
  for (const auto& st : mdp.states) {
    for (const auto& a : st.actions) {
      if (!a.weight.is_integer()) {
        throw std::invalid_argument("prism export requires integer weights; state '" + st.name + "' action '" +
                                    a.name + "' has weight " + a.weight.str());
      }
    }
  }
  std::ostringstream os;
  os << "mdp\n\n";
  os << "module main\n";
  os << "  s : [0.." << mdp.num_states() - 1 << "] init " << mdp.initial << ";\n";
  int label = 0;
  std::ostringstream rewards;
  for (int i = 0; i < mdp.num_states(); ++i) {
    const auto& st = mdp.states[static_cast<size_t>(i)];
    for (const auto& a : st.actions) {
      std::string act = "a" + std::to_string(label++);
      os << "  [" << act << "] s=" << i << " -> ";
      for (size_t b = 0; b < a.branches.size(); ++b) {
        if (b) os << " + ";
        os << a.branches[b].prob.str() << ":(s'=" << a.branches[b].to << ")";
      }
      os << "; // " << st.name << " : " << a.name << "\n";
      rewards << "  [" << act << "] true : " << a.weight.str() << ";\n";
    }
  }
  os << "endmodule\n\n";
  os << "rewards \"weight\"\n" << rewards.str() << "endrewards\n";
  for (const auto& [mark, set] : mdp.marks) {
    os << "\nlabel \"" << mark << "\" = ";
    if (set.empty()) {
      os << "false;";
    } else {
      bool first = true;
      for (int s : set) {
        if (!first) os << " | ";
        os << "s=" << s;
        first = false;
      }
      os << ";";
    }
  }
  os << "\n";
  return os.str();
}

}  // namespace lrs2mdp
