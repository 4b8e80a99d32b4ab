#include "dyncausal/reflect.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>

namespace dyncausal {

namespace {

// History entries that precede `data` followed by `data` itself, so that every
// element of data can find its lagged causes.
struct Context {
  std::vector<Transition> seq;
  std::size_t offset = 0;  // index of data[0] inside seq
};

// `lag` must cover the largest delay of any graph that will predict over the data.
Context build_context(const CausalModel& m, std::span<const Transition> data, unsigned lag) {
  Context c;
  if (data.empty()) return c;
  const Tick first = data.front().tuple.time;
  std::size_t begin = m.history.size();
  while (begin > 0 && m.history[begin - 1].tuple.time >= first) --begin;
  std::size_t lag_begin = begin;
  while (lag_begin > 0 && first - m.history[lag_begin - 1].tuple.time <= lag) --lag_begin;
  c.seq.assign(m.history.begin() + static_cast<std::ptrdiff_t>(lag_begin),
               m.history.begin() + static_cast<std::ptrdiff_t>(begin));
  c.offset = c.seq.size();
  c.seq.insert(c.seq.end(), data.begin(), data.end());
  return c;
}

struct Revision {
  CausalGraph graph;
  double scale = 1.0;
};

std::vector<StateVec> predictions_over(const Revision& r, const Context& c) {
  std::vector<StateVec> out;
  out.reserve(c.seq.size() - c.offset);
  const std::span<const Transition> all(c.seq);
  for (std::size_t i = c.offset; i < c.seq.size(); ++i) {
    out.push_back(predict_next(r.graph, r.scale, all.first(i), c.seq[i].tuple));
  }
  return out;
}

double sum_sq(const StateVec& a, const StateVec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double r = a[i] - b[i];
    s += r * r;
  }
  return s;
}

double mse_over(const Revision& r, const Context& c) {
  if (c.seq.size() == c.offset) return 0.0;
  const auto preds = predictions_over(r, c);
  double total = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    total += loss(preds[i], c.seq[c.offset + i].observed).epsilon;
  }
  return total / static_cast<double>(preds.size());
}

Revision current_revision(const CausalModel& m) {
  return {m.graph, scale_factor(m.delta_hat, m.params.delta_max)};
}

Revision revise(const CausalModel& m, const Hypothesis& h) {
  const CausalModel applied = apply_hypothesis(
      CausalModel{m.graph, m.delta_hat, {}, m.params, m.regime_start}, h);
  return current_revision(applied);
}

// Single-coefficient least squares: the best c for `edge` given every other
// modeled effect, over the context's data rows.
std::optional<double> refit_single(const CausalEdge& edge, std::optional<double> current_coefficient,
                                   double scale, const Context& c,
                                   const std::vector<StateVec>& base_predictions) {
  const std::span<const Transition> all(c.seq);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < base_predictions.size(); ++k) {
    const std::size_t i = c.offset + k;
    const auto f = edge_feature(edge, all, i);
    if (!f) continue;
    const double x = *f * scale;
    double y = c.seq[i].observed[edge.target] - base_predictions[k][edge.target];
    if (current_coefficient) y += *current_coefficient * x;
    sxy += x * y;
    sxx += x * x;
  }
  if (!(sxx > 0.0)) return std::nullopt;
  const double v = sxy / sxx;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

int kind_rank(const Hypothesis& h) { return static_cast<int>(h.index()); }

std::tuple<int, std::size_t, std::size_t, std::size_t, unsigned, double> parsimony_key(
    const Hypothesis& h) {
  return std::visit(
      [&](const auto& x) -> std::tuple<int, std::size_t, std::size_t, std::size_t, unsigned, double> {
        using X = std::decay_t<decltype(x)>;
        const int k = kind_rank(h);
        if constexpr (std::is_same_v<X, DeltaShift>) {
          return {k, 0, 0, 0, 0, x.new_delta.delta};
        } else if constexpr (std::is_same_v<X, CoefChange>) {
          return {k, x.edge, 0, 0, 0, x.new_coefficient};
        } else if constexpr (std::is_same_v<X, DelayChange>) {
          return {k, x.edge, 0, 0, x.new_delay, 0.0};
        } else if constexpr (std::is_same_v<X, EdgeRemove>) {
          return {k, x.edge, 0, 0, 0, 0.0};
        } else if constexpr (std::is_same_v<X, EdgeAdd>) {
          return {k, static_cast<std::size_t>(x.source.kind), x.source.index, x.target, x.delay,
                  x.coefficient};
        } else {
          return {k, 0, 0, 0, 0, 0.0};
        }
      },
      h);
}

template <class Key>
std::vector<std::size_t> ranking_by(const std::vector<HypothesisScore>& cands, Key key) {
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Strict order first, then chain ties into groups and reorder each by parsimony.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ka = key(cands[a]);
    const double kb = key(cands[b]);
    if (ka != kb) return ka > kb;
    return parsimony_key(cands[a].hypothesis) < parsimony_key(cands[b].hypothesis);
  });
  std::size_t begin = 0;
  while (begin < order.size()) {
    std::size_t end = begin + 1;
    while (end < order.size() &&
           key(cands[order[end - 1]]) - key(cands[order[end]]) <= kScoreTieTolerance) {
      ++end;
    }
    std::stable_sort(order.begin() + static_cast<std::ptrdiff_t>(begin),
                     order.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) {
                       return parsimony_key(cands[a].hypothesis) <
                              parsimony_key(cands[b].hypothesis);
                     });
    begin = end;
  }
  return order;
}

std::optional<std::size_t> touched_edge(const Hypothesis& h) {
  if (const auto* c = std::get_if<CoefChange>(&h)) return c->edge;
  if (const auto* d = std::get_if<DelayChange>(&h)) return d->edge;
  if (const auto* r = std::get_if<EdgeRemove>(&h)) return r->edge;
  return std::nullopt;
}

bool conflicts_with(const Hypothesis& h, const std::vector<Hypothesis>& accepted) {
  for (const auto& a : accepted) {
    if (a.index() == h.index() && std::holds_alternative<DeltaShift>(h)) return true;
    const auto ea = touched_edge(a);
    const auto eh = touched_edge(h);
    if (ea && eh && *ea == *eh) return true;
    const auto* xa = std::get_if<EdgeAdd>(&a);
    const auto* xh = std::get_if<EdgeAdd>(&h);
    if (xa && xh && xa->source == xh->source && xa->target == xh->target) return true;
  }
  return false;
}

std::string fmt(double v) { return format_number(v); }

std::string var_name(const VarRef& v) {
  return (v.kind == SourceKind::Action ? "action " : "state ") + std::to_string(v.index);
}

}  // namespace

ReflectParams reflect_params_from(const ScenarioConfig& s) {
  ReflectParams p;
  p.tau = s.agent.tau;
  p.holdout = s.agent.holdout;
  p.budget = s.agent.budget;
  p.max_accept = s.agent.max_accept;
  p.rho = s.agent.rho;
  p.k_max = s.agent.k_max;
  return p;
}

const char* kind_name(const Hypothesis& h) noexcept {
  switch (h.index()) {
    case 0: return "delta_shift";
    case 1: return "coef_change";
    case 2: return "delay_change";
    case 3: return "edge_remove";
    case 4: return "edge_add";
    default: return "structural_break";
  }
}

std::string describe(const Hypothesis& h) {
  return std::visit(
      [](const auto& x) -> std::string {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, DeltaShift>) {
          return "delta_shift(delta=" + fmt(x.new_delta.delta) + ")";
        } else if constexpr (std::is_same_v<X, CoefChange>) {
          return "coef_change(edge " + std::to_string(x.edge) + ", coefficient=" +
                 fmt(x.new_coefficient) + ")";
        } else if constexpr (std::is_same_v<X, DelayChange>) {
          return "delay_change(edge " + std::to_string(x.edge) + ", delay=" +
                 std::to_string(x.new_delay) + ")";
        } else if constexpr (std::is_same_v<X, EdgeRemove>) {
          return "edge_remove(edge " + std::to_string(x.edge) + ")";
        } else if constexpr (std::is_same_v<X, EdgeAdd>) {
          return "edge_add(" + var_name(x.source) + " -> state " + std::to_string(x.target) +
                 ", delay=" + std::to_string(x.delay) + ", " + to_string(x.form) +
                 ", coefficient=" + fmt(x.coefficient) + ")";
        } else {
          return "structural_break(since tick " + std::to_string(x.since) + ")";
        }
      },
      h);
}

CausalModel apply_hypothesis(const CausalModel& m, const Hypothesis& h) {
  CausalModel out = m;
  auto check_edge = [&](std::size_t e) {
    if (e >= out.graph.edges.size()) {
      throw Error(ErrorKind::Input, "hypothesis references edge " + std::to_string(e) +
                                        " but the model has " +
                                        std::to_string(out.graph.edges.size()));
    }
  };
  std::visit(
      [&](const auto& x) {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, DeltaShift>) {
          validate(x.new_delta, out.params.delta_max);
          out.delta_hat = x.new_delta;
        } else if constexpr (std::is_same_v<X, CoefChange>) {
          check_edge(x.edge);
          if (!std::isfinite(x.new_coefficient)) {
            throw Error(ErrorKind::Input, "coefficient must be finite");
          }
          out.graph.edges[x.edge].coefficient = x.new_coefficient;
        } else if constexpr (std::is_same_v<X, DelayChange>) {
          check_edge(x.edge);
          const auto& e = out.graph.edges[x.edge];
          if (x.new_delay < 1) throw Error(ErrorKind::Input, "delay must be >= 1");
          if (x.new_delay != e.delay && out.graph.has_triple(e.source, e.target, x.new_delay)) {
            throw Error(ErrorKind::Input, "delay change would duplicate an edge");
          }
          out.graph.edges[x.edge].delay = x.new_delay;
        } else if constexpr (std::is_same_v<X, EdgeRemove>) {
          check_edge(x.edge);
          out.graph.edges.erase(out.graph.edges.begin() + static_cast<std::ptrdiff_t>(x.edge));
        } else if constexpr (std::is_same_v<X, EdgeAdd>) {
          const std::size_t bound =
              x.source.kind == SourceKind::State ? out.graph.d_state : out.graph.d_action;
          if (x.source.index >= bound || x.target >= out.graph.d_state || x.delay < 1) {
            throw Error(ErrorKind::Input, "edge_add references variables out of range");
          }
          if (out.graph.has_triple(x.source, x.target, x.delay)) {
            throw Error(ErrorKind::Input, "edge_add would duplicate an edge");
          }
          if (!std::isfinite(x.coefficient)) throw Error(ErrorKind::Input, "coefficient must be finite");
          out.graph.edges.push_back({x.source, x.target, x.coefficient, x.delay, x.form});
        } else {
          if (x.coefficients.size() != out.graph.edges.size()) {
            throw Error(ErrorKind::Input, "structural_break coefficient count does not match edges");
          }
          for (std::size_t i = 0; i < x.coefficients.size(); ++i) {
            out.graph.edges[i].coefficient = x.coefficients[i];
          }
          out.regime_start = std::max(out.regime_start, x.since);
        }
      },
      h);
  return out;
}

bool detect_mismatch(const PredictionError& epsilon, double tau) { return epsilon.epsilon > tau; }

std::span<const Transition> Evidence::window() const {
  return std::span<const Transition>(sequence).subspan(window_begin, window_end - window_begin);
}

std::span<const Transition> Evidence::holdout() const {
  return std::span<const Transition>(sequence).subspan(holdout_begin, holdout_end - holdout_begin);
}

Evidence gather_evidence(const CausalModel& m, const Transition& ctx, const ReflectParams& params,
                         Tick from_tick) {
  Evidence ev;
  ev.sequence = m.history;
  ev.sequence.push_back(ctx);
  std::size_t begin = ev.sequence.size();
  while (begin > 0 && ev.sequence.size() - begin < m.params.fit_window &&
         ev.sequence[begin - 1].tuple.time >= from_tick) {
    --begin;
  }
  const std::size_t n = ev.sequence.size() - begin;
  const std::size_t h = std::min(params.holdout, n / 2);
  ev.window_begin = begin;
  ev.window_end = ev.sequence.size() - h;
  ev.holdout_begin = ev.window_end;
  ev.holdout_end = ev.sequence.size();
  return ev;
}

std::vector<Hypothesis> generate_hypotheses(const CausalModel& m, const Transition& ctx,
                                            const PredictionError& err, const ReflectParams& params,
                                            std::span<const Transition> window) {
  const auto& g = m.graph;
  const double scale = scale_factor(m.delta_hat, m.params.delta_max);
  const double per_dim_threshold = params.tau / static_cast<double>(g.d_state);
  std::vector<bool> offending(g.d_state, false);
  for (std::size_t i = 0; i < g.d_state && i < err.per_dim.size(); ++i) {
    offending[i] = err.per_dim[i] > per_dim_threshold;
  }

  const Context context =
      build_context(m, window, std::max({g.max_delay() + 2, params.k_max, 2u}));
  const Revision base = current_revision(m);
  const std::vector<StateVec> base_preds = predictions_over(base, context);

  std::vector<std::vector<Hypothesis>> lists(6);

  // Perturbation: invert the scaling on the worst offending dimension.
  {
    const StateVec predicted = predict(m, ctx.tuple).next();
    std::optional<std::size_t> worst;
    for (std::size_t i = 0; i < g.d_state; ++i) {
      if (offending[i] && (!worst || err.per_dim[i] > err.per_dim[*worst])) worst = i;
    }
    if (worst) {
      const double pred_effect = predicted[*worst] - ctx.tuple.state[*worst];
      const double obs_effect = ctx.observed[*worst] - ctx.tuple.state[*worst];
      try {
        const Perturbation d = estimate_delta(m, pred_effect, obs_effect);
        if (d.delta != m.delta_hat.delta) lists[0].push_back(DeltaShift{d});
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotIdentifiable) throw;
      }
    }
  }

  std::vector<std::size_t> incoming;
  for (std::size_t idx = 0; idx < g.edges.size(); ++idx) {
    if (offending[g.edges[idx].target]) incoming.push_back(idx);
  }

  // Coefficient grid: refit values first so a budget cut keeps them.
  {
    std::vector<Hypothesis> refits;
    std::vector<Hypothesis> multiples;
    for (std::size_t idx : incoming) {
      const auto& e = g.edges[idx];
      std::vector<double> seen{e.coefficient};
      auto push = [&](std::vector<Hypothesis>& into, double v) {
        if (!std::isfinite(v) || std::find(seen.begin(), seen.end(), v) != seen.end()) return;
        seen.push_back(v);
        into.push_back(CoefChange{idx, v});
      };
      if (const auto v = refit_single(e, e.coefficient, scale, context, base_preds)) push(refits, *v);
      push(multiples, e.coefficient * 2.0);
      push(multiples, e.coefficient * 0.5);
      push(multiples, -e.coefficient);
    }
    lists[1] = std::move(refits);
    lists[1].insert(lists[1].end(), multiples.begin(), multiples.end());
  }

  // Delay grid: +-1 for every edge before +-2.
  for (int step : {1, 2}) {
    for (std::size_t idx : incoming) {
      const auto& e = g.edges[idx];
      for (int sign : {+1, -1}) {
        const long k = static_cast<long>(e.delay) + sign * step;
        if (k < 1 || k > static_cast<long>(params.k_max)) continue;
        if (g.has_triple(e.source, e.target, static_cast<unsigned>(k))) continue;
        lists[2].push_back(DelayChange{idx, static_cast<unsigned>(k)});
      }
    }
  }

  for (std::size_t idx : incoming) lists[3].push_back(EdgeRemove{idx});

  // Unused (source, target) pairs, delay 1 before delay 2.
  for (unsigned delay : {1u, 2u}) {
    if (delay > params.k_max) continue;
    for (std::size_t target = 0; target < g.d_state; ++target) {
      if (!offending[target]) continue;
      std::vector<VarRef> sources;
      for (std::size_t i = 0; i < g.d_state; ++i) sources.push_back(state_var(i));
      for (std::size_t i = 0; i < g.d_action; ++i) sources.push_back(action_var(i));
      for (const auto& src : sources) {
        if (g.has_pair(src, target)) continue;
        EdgeAdd add{src, target, delay, EdgeForm::Linear, 0.0};
        const CausalEdge probe{src, target, 0.0, delay, EdgeForm::Linear};
        if (const auto v = refit_single(probe, std::nullopt, scale, context, base_preds)) {
          add.coefficient = *v;
        }
        lists[4].push_back(add);
      }
    }
  }

  {
    StructuralBreak brk;
    brk.since = window.empty() ? ctx.tuple.time : window.front().tuple.time;
    brk.coefficients.reserve(g.edges.size());
    for (const auto& e : g.edges) brk.coefficients.push_back(e.coefficient);
    if (!window.empty() && !g.edges.empty()) {
      std::vector<std::size_t> rows(window.size());
      std::iota(rows.begin(), rows.end(), context.offset);
      // Refit per target where the window supports it; others keep their values.
      for (std::size_t target = 0; target < g.d_state; ++target) {
        CausalGraph sub{g.d_state, g.d_action, {}};
        std::vector<std::size_t> map;
        for (std::size_t idx = 0; idx < g.edges.size(); ++idx) {
          if (g.edges[idx].target == target) {
            sub.edges.push_back(g.edges[idx]);
            map.push_back(idx);
          }
        }
        if (sub.edges.empty()) continue;
        try {
          const CausalGraph refit = fit_coefficients(sub, scale, context.seq, rows, 2);
          for (std::size_t j = 0; j < map.size(); ++j) {
            brk.coefficients[map[j]] = refit.edges[j].coefficient;
          }
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::NotEnoughData && e.kind() != ErrorKind::DegenerateData) throw;
        }
      }
    }
    lists[5].push_back(std::move(brk));
  }

  // Round-robin across kinds until the budget is spent, then canonical order.
  std::size_t total = 0;
  for (const auto& l : lists) total += l.size();
  std::vector<std::vector<Hypothesis>> taken(lists.size());
  if (total <= params.budget) {
    taken = std::move(lists);
  } else {
    std::vector<std::size_t> cursor(lists.size(), 0);
    std::size_t count = 0;
    bool progress = true;
    while (count < params.budget && progress) {
      progress = false;
      for (std::size_t k = 0; k < lists.size() && count < params.budget; ++k) {
        if (cursor[k] < lists[k].size()) {
          taken[k].push_back(lists[k][cursor[k]++]);
          ++count;
          progress = true;
        }
      }
    }
  }
  std::vector<Hypothesis> out;
  for (auto& l : taken) {
    for (auto& h : l) out.push_back(std::move(h));
  }
  return out;
}

std::vector<Hypothesis> generate_hypotheses(const CausalModel& m, const Transition& ctx,
                                            const PredictionError& err,
                                            const ReflectParams& params) {
  std::vector<Transition> window;
  const std::size_t keep = m.params.fit_window > 0 ? m.params.fit_window - 1 : 0;
  const std::size_t begin = m.history.size() > keep ? m.history.size() - keep : 0;
  window.assign(m.history.begin() + static_cast<std::ptrdiff_t>(begin), m.history.end());
  window.push_back(ctx);
  return generate_hypotheses(m, ctx, err, params, window);
}

HypothesisScore score_hypothesis(const CausalModel& m, const Hypothesis& h,
                                 std::span<const Transition> window) {
  if (window.empty()) throw Error(ErrorKind::Input, "score_hypothesis needs a non-empty window");
  const Revision current = current_revision(m);
  const Revision revised = revise(m, h);
  const Context context =
      build_context(m, window, std::max(current.graph.max_delay(), revised.graph.max_delay()));
  const auto preds_m = predictions_over(current, context);
  const auto preds_h = predictions_over(revised, context);

  const double two_var = 2.0 * m.params.sigma_lik * m.params.sigma_lik;
  const double dims = static_cast<double>(m.graph.d_state);
  const double log_norm = 0.5 * dims * std::log(std::numbers::pi * two_var);
  double q_m = 0.0;
  double q_h = 0.0;
  for (std::size_t k = 0; k < window.size(); ++k) {
    q_m += sum_sq(preds_m[k], window[k].observed) / two_var;
    q_h += sum_sq(preds_h[k], window[k].observed) / two_var;
  }
  HypothesisScore s;
  s.hypothesis = h;
  s.score = q_m - q_h;
  s.log_lik = -q_h - static_cast<double>(window.size()) * log_norm;
  return s;
}

double window_mse(const CausalModel& m, std::span<const Transition> data) {
  return mse_over(current_revision(m), build_context(m, data, m.graph.max_delay()));
}

bool test_hypothesis(const CausalModel& m, const Hypothesis& h, std::span<const Transition> holdout,
                     double rho) {
  if (holdout.empty()) throw Error(ErrorKind::NotEnoughData, "test_hypothesis needs a holdout");
  const Revision current = current_revision(m);
  const Revision revised = revise(m, h);
  const Context context =
      build_context(m, holdout, std::max(current.graph.max_delay(), revised.graph.max_delay()));
  const double mse_m = mse_over(current, context);
  const double mse_h = mse_over(revised, context);
  return mse_h <= (1.0 - rho) * mse_m && mse_h < mse_m;
}

std::vector<std::size_t> ranking_by_score(const std::vector<HypothesisScore>& candidates) {
  return ranking_by(candidates, [](const HypothesisScore& s) { return s.score; });
}

std::vector<std::size_t> ranking_by_log_lik(const std::vector<HypothesisScore>& candidates,
                                            double baseline_term) {
  return ranking_by(candidates,
                    [&](const HypothesisScore& s) { return s.log_lik - baseline_term; });
}

void rank_candidates(std::vector<HypothesisScore>& candidates) {
  const auto order = ranking_by_score(candidates);
  std::vector<HypothesisScore> sorted;
  sorted.reserve(candidates.size());
  for (std::size_t i : order) sorted.push_back(std::move(candidates[i]));
  candidates = std::move(sorted);
}

ReflectReport reflect(const CausalModel& m, const Transition& ctx, const ReflectParams& params,
                      Tick evidence_from) {
  ReflectReport report;
  const Prediction pred = predict(m, ctx.tuple);
  report.epsilon = loss(pred.next(), ctx.observed);
  report.updated_model = m;
  if (!detect_mismatch(report.epsilon, params.tau)) return report;
  report.triggered = true;

  const Evidence ev = gather_evidence(m, ctx, params, evidence_from);
  const auto window = ev.window();
  const auto holdout = ev.holdout();
  const auto hyps = generate_hypotheses(m, ctx, report.epsilon, params, window);

  const Context holdout_ctx =
      build_context(m, holdout, std::max({m.graph.max_delay() + 2, params.k_max, 2u}));
  for (const auto& h : hyps) {
    HypothesisScore s = score_hypothesis(m, h, window);
    s.holdout_mse = holdout.empty() ? 0.0 : mse_over(revise(m, h), holdout_ctx);
    report.candidates.push_back(std::move(s));
  }
  rank_candidates(report.candidates);

  // Nothing is accepted on less than a full holdout: a handful of post-onset
  // rows is enough to fit noise, and the spurious edge would stay.
  if (holdout.size() < std::max<std::size_t>(params.holdout, 1)) return report;

  CausalModel working = m;
  double working_mse = mse_over(current_revision(working), holdout_ctx);
  bool revised_structure = false;
  for (const auto& cand : report.candidates) {
    if (report.accepted.size() >= params.max_accept) break;
    if (!(cand.score > 0.0)) break;
    if (conflicts_with(cand.hypothesis, report.accepted)) continue;
    CausalModel applied;
    try {
      applied = apply_hypothesis(working, cand.hypothesis);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Input || e.kind() == ErrorKind::Domain) continue;
      throw;
    }
    const double mse_h = mse_over(current_revision(applied), holdout_ctx);
    if (!(mse_h <= (1.0 - params.rho) * working_mse && mse_h < working_mse)) continue;
    working = std::move(applied);
    working_mse = mse_h;
    report.accepted.push_back(cand.hypothesis);
    if (!std::holds_alternative<DeltaShift>(cand.hypothesis)) revised_structure = true;
    if (std::holds_alternative<EdgeRemove>(cand.hypothesis) ||
        std::holds_alternative<StructuralBreak>(cand.hypothesis)) {
      break;
    }
  }
  if (revised_structure) working.regime_start = std::max(working.regime_start, evidence_from);
  report.updated_model = std::move(working);
  return report;
}

}  // namespace dyncausal
