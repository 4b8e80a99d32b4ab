#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "dyncausal/core.hpp"
#include "dyncausal/rng.hpp"

namespace dyncausal {

/// Uniform on [lo, hi]^D_A, drawn from the policy stream.
struct RandomPolicy {
  double lo = -1.0;
  double hi = 1.0;
  friend bool operator==(const RandomPolicy&, const RandomPolicy&) = default;
};

struct CyclicPolicy {
  std::vector<ActionVec> actions;
  friend bool operator==(const CyclicPolicy&, const CyclicPolicy&) = default;
};

/// One-hot actions: tick t drives dimension t mod D_A with `magnitude`.
struct ProbePolicy {
  double magnitude = 1.0;
  friend bool operator==(const ProbePolicy&, const ProbePolicy&) = default;
};

/// Explicit per-tick actions; ticks past the end of the script emit zeros.
struct ScriptedPolicy {
  std::vector<ActionVec> actions;
  friend bool operator==(const ScriptedPolicy&, const ScriptedPolicy&) = default;
};

using Policy = std::variant<RandomPolicy, CyclicPolicy, ProbePolicy, ScriptedPolicy>;

void validate(const Policy& policy, std::size_t d_action);

class PolicyRunner {
 public:
  PolicyRunner(Policy policy, std::size_t d_action, std::uint64_t seed);

  ActionVec next(Tick t);

 private:
  Policy policy_;
  std::size_t d_action_;
  CounterRng rng_;
};

}  // namespace dyncausal
