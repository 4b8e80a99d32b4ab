#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "dyncausal/core.hpp"
#include "dyncausal/graph.hpp"
#include "dyncausal/scenario.hpp"

namespace dyncausal {

struct ModelParams {
  std::size_t fit_window = 64;
  std::size_t history_capacity = 256;
  double sigma_lik = 1.0;
  double delta_max = kDefaultDeltaMax;
  double delta_decay = 0.9;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

ModelParams model_params_from(const ScenarioConfig& scenario);

/// The agent's causal function. History holds one-step transitions ordered by tick;
/// rows before regime_start are kept for lag lookups but never fitted.
struct CausalModel {
  CausalGraph graph;
  Perturbation delta_hat;
  std::vector<Transition> history;
  ModelParams params;
  Tick regime_start = 0;

  /// Appends, evicting the oldest entry beyond history_capacity.
  void record(Transition t);

  friend bool operator==(const CausalModel&, const CausalModel&) = default;
};

CausalModel make_model(CausalGraph graph, ModelParams params, Perturbation delta_hat = {});

struct Contribution {
  std::size_t edge = 0;
  Tick cause_tick = 0;
  unsigned horizon = 1;  // ticks after the tuple's tick at which the effect lands
  double effect = 0.0;

  friend bool operator==(const Contribution&, const Contribution&) = default;
};

struct Prediction {
  std::map<unsigned, StateVec> horizon_states;
  std::vector<Contribution> contributions;

  const StateVec& next() const { return horizon_states.at(1); }
  /// State after every known effect has landed (largest horizon).
  const StateVec& settled() const { return horizon_states.rbegin()->second; }
  unsigned max_horizon() const { return horizon_states.rbegin()->first; }

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Effects of the tuple and of still-pending causes found in `past`, all scaled by
/// `scale`. Contributions are ordered oldest cause first, then by edge index, which
/// is the order the world lands them in.
Prediction predict_from(const CausalGraph& graph, double scale, std::span<const Transition> past,
                        const CausalTuple& tuple);

/// Horizon-1 state only; bit-identical to predict_from(...).next().
StateVec predict_next(const CausalGraph& graph, double scale, std::span<const Transition> past,
                      const CausalTuple& tuple);

Prediction predict(const CausalModel& m, const CausalTuple& tuple);

Prediction counterfactual(const CausalModel& m, const CausalTuple& tuple, Perturbation delta_prime);

/// form(source) of the cause that lands on seq[i]'s observation through `edge`, or
/// nullopt when that cause lies outside seq.
std::optional<double> edge_feature(const CausalEdge& edge, std::span<const Transition> seq,
                                   std::size_t i);

/// Least-squares coefficients for every target with incoming edges, using rows
/// seq[i] for i in `rows`. Throws NotEnoughData when a target has fewer than
/// min_rows_per_param * (#incoming) usable rows and DegenerateData when a
/// regressor shows fewer than two distinct values or the design is rank deficient.
CausalGraph fit_coefficients(const CausalGraph& graph, double scale, std::span<const Transition> seq,
                             std::span<const std::size_t> rows, std::size_t min_rows_per_param);

/// Re-estimates coefficients on the last fit_window post-regime transitions with
/// delta treated as 0. Structure is left untouched.
CausalModel fit(const CausalModel& m);

/// Minimum history for fit: max(fit_window / 4, 2 * #edges).
std::size_t fit_min_rows(const CausalModel& m);

/// Inverts the exponential scaling: returns delta_hat + ln(predicted / observed), clamped.
Perturbation estimate_delta(const CausalModel& m, double predicted_effect, double observed_effect);

}  // namespace dyncausal
