#include "dyncausal/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace dyncausal {

double apply_form(EdgeForm form, double v) {
  switch (form) {
    case EdgeForm::Linear: return v;
    case EdgeForm::Tanh: return std::tanh(v);
    case EdgeForm::Quadratic: return v * v;
  }
  return v;
}

const char* to_string(EdgeForm form) noexcept {
  switch (form) {
    case EdgeForm::Linear: return "linear";
    case EdgeForm::Tanh: return "tanh";
    case EdgeForm::Quadratic: return "quadratic";
  }
  return "linear";
}

EdgeForm edge_form_from_string(const std::string& name) {
  if (name == "linear") return EdgeForm::Linear;
  if (name == "tanh") return EdgeForm::Tanh;
  if (name == "quadratic") return EdgeForm::Quadratic;
  throw Error(ErrorKind::Configuration, "unknown edge form '" + name + "'");
}

unsigned CausalGraph::max_delay() const noexcept {
  unsigned k = 0;
  for (const auto& e : edges) k = std::max(k, e.delay);
  return k;
}

bool CausalGraph::has_triple(const VarRef& source, std::size_t target, unsigned delay) const noexcept {
  return std::any_of(edges.begin(), edges.end(), [&](const CausalEdge& e) {
    return e.source == source && e.target == target && e.delay == delay;
  });
}

bool CausalGraph::has_pair(const VarRef& source, std::size_t target) const noexcept {
  return std::any_of(edges.begin(), edges.end(),
                     [&](const CausalEdge& e) { return e.source == source && e.target == target; });
}

void validate(const CausalGraph& g) {
  if (g.d_state == 0) throw Error(ErrorKind::Configuration, "graph d_state must be >= 1");
  std::set<std::tuple<int, std::size_t, std::size_t, unsigned>> seen;
  for (std::size_t i = 0; i < g.edges.size(); ++i) {
    const auto& e = g.edges[i];
    const std::string where = "edge " + std::to_string(i) + ": ";
    if (e.delay < 1) throw Error(ErrorKind::Configuration, where + "delay must be >= 1");
    if (!std::isfinite(e.coefficient)) {
      throw Error(ErrorKind::Configuration, where + "coefficient must be finite");
    }
    if (e.target >= g.d_state) throw Error(ErrorKind::Configuration, where + "target out of range");
    const std::size_t bound = e.source.kind == SourceKind::State ? g.d_state : g.d_action;
    if (e.source.index >= bound) throw Error(ErrorKind::Configuration, where + "source out of range");
    if (!seen.emplace(static_cast<int>(e.source.kind), e.source.index, e.target, e.delay).second) {
      throw Error(ErrorKind::Configuration, where + "duplicate (source, target, delay) triple");
    }
  }
}

void validate(const BreakSchedule& schedule, const CausalGraph& initial) {
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (i > 0 && schedule[i].at_tick <= schedule[i - 1].at_tick) {
      throw Error(ErrorKind::Configuration, "break ticks must be strictly increasing (break " +
                                                std::to_string(i) + " at tick " +
                                                std::to_string(schedule[i].at_tick) + ")");
    }
    const auto& g = schedule[i].graph;
    if (g.d_state != initial.d_state || g.d_action != initial.d_action) {
      throw Error(ErrorKind::Configuration,
                  "break " + std::to_string(i) + " graph dimensions differ from the initial graph");
    }
    validate(g);
  }
}

const CausalGraph& active_graph(const BreakSchedule& schedule, const CausalGraph& initial, Tick t) {
  const CausalGraph* active = &initial;
  for (const auto& b : schedule) {
    if (b.at_tick > t) break;
    active = &b.graph;
  }
  return *active;
}

}  // namespace dyncausal
