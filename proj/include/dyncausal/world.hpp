#pragma once

#include <cstdint>
#include <deque>
#include <memory>

#include "dyncausal/core.hpp"
#include "dyncausal/graph.hpp"
#include "dyncausal/perturbation_process.hpp"
#include "dyncausal/rng.hpp"
#include "dyncausal/scenario.hpp"

namespace dyncausal {

/// The immutable ground-truth laws of a scenario.
struct WorldLaws {
  CausalGraph initial_graph;
  BreakSchedule breaks;
  PerturbationProcess perturbation;
  double delta_max = kDefaultDeltaMax;
};

struct PendingEffect {
  Tick due_tick = 0;
  std::size_t target = 0;
  double value = 0.0;

  friend bool operator==(const PendingEffect&, const PendingEffect&) = default;
};

struct WorldState {
  std::shared_ptr<const WorldLaws> laws;
  StateVec current;
  Tick tick = 0;
  std::deque<PendingEffect> pending;  // insertion order: cause tick, then edge index
  CounterRng perturbation_rng;
  CounterRng noise_rng;
  double last_delta = 0.0;
  double noise_sigma = 0.0;
};

/// Value equality over everything that determines future evolution.
bool same_evolution_state(const WorldState& a, const WorldState& b);

WorldState world_init(const ScenarioConfig& scenario, std::uint64_t seed);

struct WorldStepResult {
  WorldState state;
  StateVec observed;
  Perturbation true_delta;
};

/// One tick: draw delta_t, enqueue coefficient * form(source) * exp(-delta_t) for
/// every active edge at tick + delay, advance, land due effects, add observation noise.
WorldStepResult world_step(WorldState w, const ActionVec& action);

}  // namespace dyncausal
