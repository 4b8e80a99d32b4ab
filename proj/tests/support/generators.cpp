#include "support/generators.hpp"

#include "dyncausal/policy.hpp"
#include "dyncausal/world.hpp"

namespace gen {

double uniform(CounterRng& rng, double lo, double hi) { return lo + (hi - lo) * rng.next_uniform(); }

std::size_t below(CounterRng& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.next_u64() % n);
}

CausalGraph random_graph(CounterRng& rng, std::size_t d_state, std::size_t d_action, std::size_t n_edges,
                         const GraphShape& shape) {
  CausalGraph g{d_state, d_action, {}};
  std::size_t attempts = 0;
  while (g.edges.size() < n_edges && attempts++ < 200) {
    const bool from_state = shape.state_sources && (d_action == 0 || rng.next_uniform() < 0.3);
    if (!from_state && d_action == 0) break;
    CausalEdge e;
    e.source = from_state ? state_var(below(rng, d_state)) : action_var(below(rng, d_action));
    e.target = below(rng, d_state);
    e.delay = 1 + static_cast<unsigned>(below(rng, shape.max_delay));
    if (g.has_triple(e.source, e.target, e.delay)) continue;
    const double mag = uniform(rng, 0.3, 2.0);
    e.coefficient = rng.next_uniform() < 0.5 ? -mag : mag;
    if (from_state) {
      e.form = EdgeForm::Tanh;
      e.coefficient *= 0.3;
    } else {
      const std::size_t f = below(rng, 3);
      e.form = f == 0 ? EdgeForm::Linear : f == 1 ? EdgeForm::Tanh : EdgeForm::Quadratic;
    }
    g.edges.push_back(e);
  }
  return g;
}

ScenarioConfig random_scenario(std::uint64_t seed, const GraphShape& shape) {
  CounterRng rng(seed, rng_stream::kScenarioGenerator);
  ScenarioConfig c;
  c.name = "random-" + std::to_string(seed);
  c.d_state = 1 + below(rng, shape.max_state);
  c.d_action = 1 + below(rng, shape.max_action);
  std::vector<double> s0(c.d_state);
  for (auto& v : s0) v = uniform(rng, -1.0, 1.0);
  c.initial_state = StateVec(s0);
  c.initial_graph = random_graph(rng, c.d_state, c.d_action, 1 + below(rng, shape.max_edges), shape);
  c.perturbation = NoPerturbation{};
  c.noise_sigma = 0.0;
  c.policy = RandomPolicy{};
  c.agent.initial_graph = c.initial_graph;
  c.agent.tau = default_tau(0.0);
  validate(c);
  return c;
}

std::vector<Transition> rollout(const ScenarioConfig& sc, std::uint64_t seed, std::size_t n) {
  WorldState w = world_init(sc, seed);
  PolicyRunner policy(sc.policy, sc.d_action, seed);
  StateVec s = sc.initial_state;
  std::vector<Transition> out;
  for (std::size_t t = 0; t < n; ++t) {
    const ActionVec a = policy.next(t);
    auto r = world_step(std::move(w), a);
    w = std::move(r.state);
    out.push_back(Transition{CausalTuple{s, a, t, Perturbation{}}, 1, r.observed});
    s = r.observed;
  }
  return out;
}

std::optional<Injected> inject(CounterRng& rng, const CausalGraph& base, Discrepancy kind, unsigned k_max) {
  Injected out{base, base};
  if (kind == Discrepancy::MissingEdge) {
    std::vector<std::pair<std::size_t, std::size_t>> free;
    for (std::size_t a = 0; a < base.d_action; ++a) {
      for (std::size_t t = 0; t < base.d_state; ++t) {
        if (!base.has_pair(action_var(a), t)) free.emplace_back(a, t);
      }
    }
    if (free.empty()) return std::nullopt;
    const auto [a, t] = free[below(rng, free.size())];
    const double mag = uniform(rng, 0.8, 2.0);
    out.truth.edges.push_back({action_var(a), t, rng.next_uniform() < 0.5 ? -mag : mag,
                               1 + static_cast<unsigned>(below(rng, 2)), EdgeForm::Linear});
    return out;
  }
  if (base.edges.empty()) return std::nullopt;
  const std::size_t j = below(rng, base.edges.size());
  auto& e = out.model.edges[j];
  if (kind == Discrepancy::Coefficient) {
    const double f = uniform(rng, 1.8, 3.0);
    e.coefficient = rng.next_uniform() < 0.25 ? -e.coefficient : e.coefficient / f;
    return out;
  }
  std::vector<unsigned> options;
  for (int step : {-2, -1, 1, 2}) {
    const long k = static_cast<long>(e.delay) + step;
    if (k < 1 || k > static_cast<long>(k_max)) continue;
    if (base.has_triple(e.source, e.target, static_cast<unsigned>(k))) continue;
    options.push_back(static_cast<unsigned>(k));
  }
  if (options.empty()) return std::nullopt;
  e.delay = options[below(rng, options.size())];
  return out;
}

}  // namespace gen
