#include "dyncausal/world.hpp"

#include <cmath>

namespace dyncausal {

bool same_evolution_state(const WorldState& a, const WorldState& b) {
  const bool laws_equal =
      a.laws == b.laws ||
      (a.laws && b.laws && a.laws->initial_graph == b.laws->initial_graph &&
       a.laws->breaks == b.laws->breaks && a.laws->perturbation == b.laws->perturbation &&
       a.laws->delta_max == b.laws->delta_max);
  return laws_equal && a.current == b.current && a.tick == b.tick && a.pending == b.pending &&
         a.perturbation_rng == b.perturbation_rng && a.noise_rng == b.noise_rng &&
         a.last_delta == b.last_delta && a.noise_sigma == b.noise_sigma;
}

WorldState world_init(const ScenarioConfig& scenario, std::uint64_t seed) {
  validate(scenario);
  auto laws = std::make_shared<WorldLaws>();
  laws->initial_graph = scenario.initial_graph;
  laws->breaks = scenario.breaks;
  laws->perturbation = scenario.perturbation;
  laws->delta_max = scenario.delta_max;

  WorldState w;
  w.laws = std::move(laws);
  w.current = scenario.initial_state;
  w.tick = 0;
  w.perturbation_rng = CounterRng(seed, rng_stream::kPerturbation);
  w.noise_rng = CounterRng(seed, rng_stream::kObservationNoise);
  w.noise_sigma = scenario.noise_sigma;
  return w;
}

WorldStepResult world_step(WorldState w, const ActionVec& action) {
  const WorldLaws& laws = *w.laws;
  const CausalGraph& graph = active_graph(laws.breaks, laws.initial_graph, w.tick);
  if (action.size() != graph.d_action) {
    throw Error(ErrorKind::Dimension, "world_step: action has " + std::to_string(action.size()) +
                                          " dims, scenario declares " +
                                          std::to_string(graph.d_action));
  }
  if (!action.all_finite()) throw Error(ErrorKind::Input, "world_step: action is not finite");

  const Perturbation delta =
      draw_perturbation(laws.perturbation, w.last_delta, laws.delta_max, w.perturbation_rng);
  w.last_delta = delta.delta;
  const double scale = std::exp(-delta.delta);

  for (const auto& e : graph.edges) {
    const double v = e.source.kind == SourceKind::Action ? action[e.source.index]
                                                         : w.current[e.source.index];
    w.pending.push_back({w.tick + e.delay, e.target, e.coefficient * apply_form(e.form, v) * scale});
  }

  ++w.tick;
  std::deque<PendingEffect> later;
  for (const auto& p : w.pending) {
    if (p.due_tick == w.tick) {
      w.current[p.target] += p.value;
    } else {
      later.push_back(p);
    }
  }
  w.pending = std::move(later);

  StateVec observed = w.current;
  if (w.noise_sigma > 0.0) {
    for (std::size_t i = 0; i < observed.size(); ++i) {
      observed[i] += w.noise_sigma * w.noise_rng.next_normal();
    }
  }
  return {std::move(w), std::move(observed), delta};
}

}  // namespace dyncausal
