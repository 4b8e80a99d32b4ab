#include "dyncausal/scenario.hpp"

#include <cmath>

namespace dyncausal {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::Configuration, what);
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(c.d_state >= 1, "d_state must be >= 1");
  require(c.initial_state.size() == c.d_state, "initial_state length must equal d_state");
  require(c.initial_state.all_finite(), "initial_state must be finite");
  require(c.initial_graph.d_state == c.d_state && c.initial_graph.d_action == c.d_action,
          "initial_graph dimensions must match d_state/d_action");
  validate(c.initial_graph);
  validate(c.breaks, c.initial_graph);
  validate(c.perturbation, c.delta_max);
  require(std::isfinite(c.noise_sigma) && c.noise_sigma >= 0.0, "noise_sigma must be >= 0");
  require(c.state_labels.empty() || c.state_labels.size() == c.d_state,
          "state_labels must be empty or have d_state entries");
  require(c.action_labels.empty() || c.action_labels.size() == c.d_action,
          "action_labels must be empty or have d_action entries");
  validate(c.policy, c.d_action);

  const auto& a = c.agent;
  require(a.initial_graph.d_state == c.d_state && a.initial_graph.d_action == c.d_action,
          "agent.initial_graph dimensions must match d_state/d_action");
  validate(a.initial_graph);
  validate(Perturbation{a.initial_delta_hat}, c.delta_max);
  require(std::isfinite(a.tau) && a.tau > 0.0, "agent.tau must be > 0");
  require(a.fit_window >= 1, "agent.fit_window must be >= 1");
  require(a.history_capacity >= a.fit_window, "agent.history_capacity must be >= fit_window");
  require(a.holdout >= 1, "agent.holdout must be >= 1");
  require(a.max_accept >= 1, "agent.max_accept must be >= 1");
  require(a.fit_every >= 1, "agent.fit_every must be >= 1");
  require(std::isfinite(a.sigma_lik) && a.sigma_lik > 0.0, "agent.sigma_lik must be > 0");
  require(a.rho > 0.0 && a.rho < 1.0, "agent.rho must lie in (0, 1)");
  require(a.k_max >= 1, "agent.k_max must be >= 1");
  require(a.delta_decay >= 0.0 && a.delta_decay <= 1.0, "agent.delta_decay must lie in [0, 1]");
  for (const auto& e : a.initial_graph.edges) {
    require(e.delay <= a.history_capacity, "agent edge delay exceeds history capacity");
  }
}

}  // namespace dyncausal
