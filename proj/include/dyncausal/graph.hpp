#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "dyncausal/core.hpp"

namespace dyncausal {

enum class SourceKind { State, Action };

struct VarRef {
  SourceKind kind = SourceKind::Action;
  std::size_t index = 0;

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

inline VarRef state_var(std::size_t i) { return {SourceKind::State, i}; }
inline VarRef action_var(std::size_t i) { return {SourceKind::Action, i}; }

enum class EdgeForm { Linear, Tanh, Quadratic };

double apply_form(EdgeForm form, double v);
const char* to_string(EdgeForm form) noexcept;
EdgeForm edge_form_from_string(const std::string& name);

/// `coefficient * form(source)` lands on `target` after `delay` ticks.
struct CausalEdge {
  VarRef source;
  std::size_t target = 0;
  double coefficient = 0.0;
  unsigned delay = 1;
  EdgeForm form = EdgeForm::Linear;

  friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

struct CausalGraph {
  std::size_t d_state = 0;
  std::size_t d_action = 0;
  std::vector<CausalEdge> edges;

  unsigned max_delay() const noexcept;
  bool has_triple(const VarRef& source, std::size_t target, unsigned delay) const noexcept;
  bool has_pair(const VarRef& source, std::size_t target) const noexcept;

  friend bool operator==(const CausalGraph&, const CausalGraph&) = default;
};

/// Throws ErrorKind::Configuration naming the violated invariant.
void validate(const CausalGraph& g);

struct ScheduledBreak {
  Tick at_tick = 0;
  CausalGraph graph;

  friend bool operator==(const ScheduledBreak&, const ScheduledBreak&) = default;
};

using BreakSchedule = std::vector<ScheduledBreak>;

void validate(const BreakSchedule& schedule, const CausalGraph& initial);

/// Graph in force at tick t: the latest break with at_tick <= t, else `initial`.
const CausalGraph& active_graph(const BreakSchedule& schedule, const CausalGraph& initial, Tick t);

}  // namespace dyncausal
