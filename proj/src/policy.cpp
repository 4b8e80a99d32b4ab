#include "dyncausal/policy.hpp"

#include <cmath>
#include <string>

namespace dyncausal {

namespace {

void validate_actions(const std::vector<ActionVec>& actions, std::size_t d_action, const char* what) {
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (actions[i].size() != d_action) {
      throw Error(ErrorKind::Configuration,
                  std::string(what) + " action " + std::to_string(i) + " has wrong length");
    }
    if (!actions[i].all_finite()) {
      throw Error(ErrorKind::Configuration,
                  std::string(what) + " action " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

void validate(const Policy& policy, std::size_t d_action) {
  if (const auto* r = std::get_if<RandomPolicy>(&policy)) {
    if (!std::isfinite(r->lo) || !std::isfinite(r->hi) || !(r->lo <= r->hi)) {
      throw Error(ErrorKind::Configuration, "random policy needs finite lo <= hi");
    }
  } else if (const auto* c = std::get_if<CyclicPolicy>(&policy)) {
    if (c->actions.empty()) throw Error(ErrorKind::Configuration, "cyclic policy needs actions");
    validate_actions(c->actions, d_action, "cyclic");
  } else if (const auto* p = std::get_if<ProbePolicy>(&policy)) {
    if (!std::isfinite(p->magnitude)) {
      throw Error(ErrorKind::Configuration, "probe magnitude must be finite");
    }
  } else if (const auto* s = std::get_if<ScriptedPolicy>(&policy)) {
    validate_actions(s->actions, d_action, "scripted");
  }
}

PolicyRunner::PolicyRunner(Policy policy, std::size_t d_action, std::uint64_t seed)
    : policy_(std::move(policy)), d_action_(d_action), rng_(seed, rng_stream::kPolicy) {}

ActionVec PolicyRunner::next(Tick t) {
  return std::visit(
      [&](const auto& p) -> ActionVec {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, RandomPolicy>) {
          std::vector<double> a(d_action_);
          for (auto& v : a) v = rng_.next_uniform(p.lo, p.hi);
          return ActionVec(std::move(a));
        } else if constexpr (std::is_same_v<P, CyclicPolicy>) {
          return p.actions[t % p.actions.size()];
        } else if constexpr (std::is_same_v<P, ProbePolicy>) {
          std::vector<double> a(d_action_, 0.0);
          if (d_action_ > 0) a[t % d_action_] = p.magnitude;
          return ActionVec(std::move(a));
        } else {
          if (t < p.actions.size()) return p.actions[t];
          return ActionVec(std::vector<double>(d_action_, 0.0));
        }
      },
      policy_);
}

}  // namespace dyncausal
