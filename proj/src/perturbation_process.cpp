#include "dyncausal/perturbation_process.hpp"

#include <cmath>

namespace dyncausal {

void validate(const PerturbationProcess& process, double delta_max) {
  if (!(delta_max > 0.0) || !std::isfinite(delta_max)) {
    throw Error(ErrorKind::Configuration, "delta_max must be positive and finite");
  }
  if (const auto* walk = std::get_if<GaussianWalk>(&process)) {
    if (!(walk->sigma_delta >= 0.0) || !std::isfinite(walk->sigma_delta)) {
      throw Error(ErrorKind::Configuration, "gaussian_walk sigma_delta must be >= 0");
    }
  } else if (const auto* spike = std::get_if<Spike>(&process)) {
    if (!(spike->prob >= 0.0 && spike->prob <= 1.0)) {
      throw Error(ErrorKind::Configuration, "spike prob must lie in [0, 1]");
    }
    if (!std::isfinite(spike->magnitude) || std::abs(spike->magnitude) > delta_max) {
      throw Error(ErrorKind::Configuration, "spike magnitude must satisfy |magnitude| <= delta_max");
    }
  }
}

Perturbation draw_perturbation(const PerturbationProcess& process, double previous, double delta_max,
                               CounterRng& rng) {
  return std::visit(
      [&](const auto& p) -> Perturbation {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, NoPerturbation>) {
          return {};
        } else if constexpr (std::is_same_v<P, GaussianWalk>) {
          return clamp_perturbation(previous + p.sigma_delta * rng.next_normal(), delta_max);
        } else {
          return Perturbation{rng.next_uniform() < p.prob ? p.magnitude : 0.0};
        }
      },
      process);
}

}  // namespace dyncausal
