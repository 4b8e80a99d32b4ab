#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dyncausal/rng.hpp"
#include "dyncausal/core.hpp"
#include "dyncausal/scenario.hpp"

namespace gen {

using namespace dyncausal;

struct GraphShape {
  std::size_t max_state = 4;
  std::size_t max_action = 2;
  std::size_t max_edges = 6;
  unsigned max_delay = 3;
  bool state_sources = true;  // state-sourced edges are Tanh so states stay bounded
};

double uniform(CounterRng& rng, double lo, double hi);
std::size_t below(CounterRng& rng, std::size_t n);

CausalGraph random_graph(CounterRng& rng, std::size_t d_state, std::size_t d_action, std::size_t n_edges,
                         const GraphShape& shape);

/// Noise-free, unperturbed scenario whose agent starts from the true graph.
ScenarioConfig random_scenario(std::uint64_t seed, const GraphShape& shape = {});

/// World transitions under the scenario's policy, tuples carrying delta 0.
std::vector<Transition> rollout(const ScenarioConfig& sc, std::uint64_t seed, std::size_t n);

enum class Discrepancy { Coefficient, Delay, MissingEdge };

struct Injected {
  CausalGraph model;  // what the agent believes
  CausalGraph truth;  // what the world runs
};

/// One discrepancy between belief and world. Delay shifts stay within +-2 and
/// missing edges are linear action edges with delay 1 or 2.
std::optional<Injected> inject(CounterRng& rng, const CausalGraph& base, Discrepancy kind, unsigned k_max);

}  // namespace gen
