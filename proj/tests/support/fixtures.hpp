#pragma once

#include <vector>

#include "dyncausal/model.hpp"
#include "dyncausal/scenario.hpp"

namespace fixture {

using namespace dyncausal;

inline CausalGraph one_edge(double coef, unsigned delay = 1, EdgeForm form = EdgeForm::Linear,
                            std::size_t d_state = 1, std::size_t d_action = 1) {
  return CausalGraph{d_state, d_action, {CausalEdge{action_var(0), 0, coef, delay, form}}};
}

inline ScenarioConfig scenario(CausalGraph g, std::vector<double> s0) {
  ScenarioConfig c;
  c.name = "fixture";
  c.d_state = g.d_state;
  c.d_action = g.d_action;
  c.initial_state = StateVec(std::move(s0));
  c.initial_graph = g;
  c.agent.initial_graph = g;
  return c;
}

// Transitions for a scalar state driven by fixed actions through `g`, delta 0.
inline std::vector<Transition> scalar_history(const CausalGraph& g, const std::vector<double>& actions,
                                              double s0 = 0.0) {
  std::vector<Transition> out;
  double s = s0;
  for (std::size_t t = 0; t < actions.size(); ++t) {
    double next = s;
    for (const auto& e : g.edges) {
      if (e.delay > t + 1) continue;
      const std::size_t c = t + 1 - e.delay;
      next += e.coefficient * apply_form(e.form, actions[c]);
    }
    out.push_back(Transition{CausalTuple{StateVec{s}, ActionVec{actions[t]}, t, {}}, 1, StateVec{next}});
    s = next;
  }
  return out;
}

inline CausalModel with_history(CausalGraph g, const std::vector<Transition>& h, ModelParams p = {}) {
  CausalModel m = make_model(std::move(g), p);
  for (const auto& t : h) m.record(t);
  return m;
}

}  // namespace fixture
