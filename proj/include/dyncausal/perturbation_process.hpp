#pragma once

#include <variant>

#include "dyncausal/core.hpp"
#include "dyncausal/rng.hpp"

namespace dyncausal {

struct NoPerturbation {
  friend bool operator==(const NoPerturbation&, const NoPerturbation&) = default;
};

/// delta_t = clamp(delta_{t-1} + sigma_delta * z)
struct GaussianWalk {
  double sigma_delta = 0.0;
  friend bool operator==(const GaussianWalk&, const GaussianWalk&) = default;
};

/// delta_t = magnitude with probability prob, else 0.
struct Spike {
  double prob = 0.0;
  double magnitude = 0.0;
  friend bool operator==(const Spike&, const Spike&) = default;
};

using PerturbationProcess = std::variant<NoPerturbation, GaussianWalk, Spike>;

void validate(const PerturbationProcess& process, double delta_max);

/// Draws the next delta. `previous` is the last drawn value (walk memory).
Perturbation draw_perturbation(const PerturbationProcess& process, double previous, double delta_max,
                               CounterRng& rng);

}  // namespace dyncausal
