#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dyncausal/core.hpp"
#include "dyncausal/graph.hpp"
#include "dyncausal/perturbation_process.hpp"
#include "dyncausal/policy.hpp"

namespace dyncausal {

inline double default_tau(double noise_sigma) { return 4.0 * (noise_sigma * noise_sigma + 0.01); }

/// Agent hyperparameters. Every field is explicit once a scenario is loaded.
struct AgentParams {
  CausalGraph initial_graph;          // the agent's starting hypothesis
  double initial_delta_hat = 0.0;
  double tau = default_tau(0.0);      // mismatch threshold
  std::size_t fit_window = 64;
  std::size_t history_capacity = 256; // W
  std::size_t holdout = 8;            // V
  std::size_t budget = 32;            // B
  std::size_t max_accept = 2;         // M
  std::size_t fit_every = 16;         // F
  double sigma_lik = 1.0;
  double rho = 0.1;
  unsigned k_max = 8;
  double delta_decay = 0.9;

  friend bool operator==(const AgentParams&, const AgentParams&) = default;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  std::size_t d_state = 0;
  std::size_t d_action = 0;
  StateVec initial_state;
  CausalGraph initial_graph;
  BreakSchedule breaks;
  PerturbationProcess perturbation;
  double noise_sigma = 0.0;
  double delta_max = kDefaultDeltaMax;
  std::string tick_label = "1 tick";
  std::vector<std::string> state_labels;
  std::vector<std::string> action_labels;
  std::string perturbation_label;
  Policy policy = RandomPolicy{};
  AgentParams agent;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Checks every cross-field invariant; throws ErrorKind::Configuration.
void validate(const ScenarioConfig& config);

}  // namespace dyncausal
