#include "dyncausal/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace dyncausal {

namespace {

double source_value(const CausalEdge& e, const CausalTuple& tuple) {
  return e.source.kind == SourceKind::Action ? tuple.action[e.source.index]
                                             : tuple.state[e.source.index];
}

const CausalTuple* find_cause(std::span<const Transition> past, Tick cause_tick) {
  for (std::size_t k = past.size(); k-- > 0;) {
    const Tick t = past[k].tuple.time;
    if (t == cause_tick) return &past[k].tuple;
    if (t < cause_tick) break;
  }
  return nullptr;
}

void check_tuple(const CausalGraph& graph, const CausalTuple& tuple) {
  if (tuple.state.size() != graph.d_state || tuple.action.size() != graph.d_action) {
    throw Error(ErrorKind::Input, "tuple dimensions (" + std::to_string(tuple.state.size()) + ", " +
                                      std::to_string(tuple.action.size()) +
                                      ") do not match the model (" +
                                      std::to_string(graph.d_state) + ", " +
                                      std::to_string(graph.d_action) + ")");
  }
}

// Edge indices in landing order for a horizon-1 prediction: oldest cause first
// (largest delay), ties by edge index.
std::vector<std::size_t> landing_order(const CausalGraph& graph) {
  std::vector<std::size_t> order(graph.edges.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return graph.edges[a].delay > graph.edges[b].delay;
  });
  return order;
}

}  // namespace

ModelParams model_params_from(const ScenarioConfig& s) {
  ModelParams p;
  p.fit_window = s.agent.fit_window;
  p.history_capacity = s.agent.history_capacity;
  p.sigma_lik = s.agent.sigma_lik;
  p.delta_max = s.delta_max;
  p.delta_decay = s.agent.delta_decay;
  return p;
}

void CausalModel::record(Transition t) {
  if (!history.empty() && t.tuple.time <= history.back().tuple.time) {
    throw Error(ErrorKind::Input, "history ticks must be strictly increasing");
  }
  history.push_back(std::move(t));
  if (history.size() > params.history_capacity) {
    history.erase(history.begin(),
                  history.begin() + static_cast<std::ptrdiff_t>(history.size() - params.history_capacity));
  }
}

CausalModel make_model(CausalGraph graph, ModelParams params, Perturbation delta_hat) {
  validate(graph);
  validate(delta_hat, params.delta_max);
  CausalModel m;
  m.graph = std::move(graph);
  m.delta_hat = delta_hat;
  m.params = params;
  return m;
}

Prediction predict_from(const CausalGraph& graph, double scale, std::span<const Transition> past,
                        const CausalTuple& tuple) {
  check_tuple(graph, tuple);
  Prediction out;
  const unsigned max_delay = graph.max_delay();
  const Tick t = tuple.time;

  // j = age of the cause in ticks; j = 0 is the tuple itself.
  for (unsigned j = max_delay == 0 ? 0 : max_delay - 1;; --j) {
    const CausalTuple* cause = nullptr;
    if (j == 0) {
      cause = &tuple;
    } else if (t >= j) {
      cause = find_cause(past, t - j);
    }
    if (cause != nullptr) {
      for (std::size_t idx = 0; idx < graph.edges.size(); ++idx) {
        const auto& e = graph.edges[idx];
        if (e.delay <= j) continue;
        const double effect = e.coefficient * apply_form(e.form, source_value(e, *cause)) * scale;
        out.contributions.push_back({idx, t - j, e.delay - j, effect});
      }
    }
    if (j == 0) break;
  }

  std::set<unsigned> horizons{1};
  for (const auto& c : out.contributions) horizons.insert(c.horizon);
  StateVec running = tuple.state;
  for (unsigned k : horizons) {
    for (const auto& c : out.contributions) {
      if (c.horizon == k) running[graph.edges[c.edge].target] += c.effect;
    }
    out.horizon_states.emplace(k, running);
  }
  return out;
}

StateVec predict_next(const CausalGraph& graph, double scale, std::span<const Transition> past,
                      const CausalTuple& tuple) {
  check_tuple(graph, tuple);
  StateVec next = tuple.state;
  for (std::size_t idx : landing_order(graph)) {
    const auto& e = graph.edges[idx];
    const CausalTuple* cause = nullptr;
    if (e.delay == 1) {
      cause = &tuple;
    } else if (tuple.time + 1 >= e.delay) {
      cause = find_cause(past, tuple.time + 1 - e.delay);
    }
    if (cause == nullptr) continue;
    next[e.target] += e.coefficient * apply_form(e.form, source_value(e, *cause)) * scale;
  }
  return next;
}

Prediction predict(const CausalModel& m, const CausalTuple& tuple) {
  return predict_from(m.graph, scale_factor(m.delta_hat, m.params.delta_max), m.history, tuple);
}

Prediction counterfactual(const CausalModel& m, const CausalTuple& tuple, Perturbation delta_prime) {
  return predict_from(m.graph, scale_factor(delta_prime, m.params.delta_max), m.history, tuple);
}

std::optional<double> edge_feature(const CausalEdge& edge, std::span<const Transition> seq,
                                   std::size_t i) {
  const CausalTuple& tuple = seq[i].tuple;
  if (edge.delay == 1) return apply_form(edge.form, source_value(edge, tuple));
  if (tuple.time + 1 < edge.delay) return std::nullopt;
  const CausalTuple* cause = find_cause(seq.first(i), tuple.time + 1 - edge.delay);
  if (cause == nullptr) return std::nullopt;
  return apply_form(edge.form, source_value(edge, *cause));
}

CausalGraph fit_coefficients(const CausalGraph& graph, double scale, std::span<const Transition> seq,
                             std::span<const std::size_t> rows, std::size_t min_rows_per_param) {
  CausalGraph out = graph;
  for (std::size_t target = 0; target < graph.d_state; ++target) {
    std::vector<std::size_t> incoming;
    for (std::size_t idx = 0; idx < graph.edges.size(); ++idx) {
      if (graph.edges[idx].target == target) incoming.push_back(idx);
    }
    if (incoming.empty()) continue;

    std::vector<std::vector<double>> features;
    std::vector<double> ys;
    for (std::size_t i : rows) {
      std::vector<double> row;
      row.reserve(incoming.size());
      bool complete = true;
      for (std::size_t idx : incoming) {
        const auto f = edge_feature(graph.edges[idx], seq, i);
        if (!f) {
          complete = false;
          break;
        }
        row.push_back(*f * scale);
      }
      if (!complete) continue;
      features.push_back(std::move(row));
      ys.push_back(seq[i].observed[target] - seq[i].tuple.state[target]);
    }

    const std::size_t cols = incoming.size();
    if (features.size() < min_rows_per_param * cols) {
      throw Error(ErrorKind::NotEnoughData,
                  "state dimension " + std::to_string(target) + " has " +
                      std::to_string(features.size()) + " usable rows for " +
                      std::to_string(cols) + " coefficients");
    }

    Eigen::MatrixXd X(static_cast<Eigen::Index>(features.size()), static_cast<Eigen::Index>(cols));
    Eigen::VectorXd y(static_cast<Eigen::Index>(features.size()));
    for (std::size_t r = 0; r < features.size(); ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = features[r][c];
      }
      y(static_cast<Eigen::Index>(r)) = ys[r];
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto col = X.col(static_cast<Eigen::Index>(c));
      if (col.minCoeff() == col.maxCoeff()) {
        throw Error(ErrorKind::DegenerateData,
                    "regressor for edge " + std::to_string(incoming[c]) +
                        " shows fewer than two distinct values (widen the window or vary the policy)");
      }
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(cols)) {
      throw Error(ErrorKind::DegenerateData,
                  "singular design for state dimension " + std::to_string(target));
    }
    const Eigen::VectorXd beta = qr.solve(y);
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = beta(static_cast<Eigen::Index>(c));
      if (!std::isfinite(v)) {
        throw Error(ErrorKind::DegenerateData, "non-finite least-squares solution");
      }
      out.edges[incoming[c]].coefficient = v;
    }
  }
  return out;
}

std::size_t fit_min_rows(const CausalModel& m) {
  return std::max(m.params.fit_window / 4, 2 * m.graph.edges.size());
}

CausalModel fit(const CausalModel& m) {
  std::vector<std::size_t> rows;
  for (std::size_t i = m.history.size(); i-- > 0 && rows.size() < m.params.fit_window;) {
    if (m.history[i].tuple.time < m.regime_start) break;
    rows.push_back(i);
  }
  std::reverse(rows.begin(), rows.end());
  const std::size_t need = fit_min_rows(m);
  if (rows.size() < need) {
    throw Error(ErrorKind::NotEnoughData, "fit needs " + std::to_string(need) +
                                              " transitions, history has " +
                                              std::to_string(rows.size()));
  }
  CausalModel out = m;
  out.graph = fit_coefficients(m.graph, 1.0, m.history, rows, 1);
  return out;
}

Perturbation estimate_delta(const CausalModel& m, double predicted_effect, double observed_effect) {
  if (predicted_effect == 0.0 || observed_effect == 0.0 ||
      std::signbit(predicted_effect) != std::signbit(observed_effect) ||
      !std::isfinite(predicted_effect) || !std::isfinite(observed_effect)) {
    throw Error(ErrorKind::NotIdentifiable,
                "perturbation cannot explain predicted effect " + std::to_string(predicted_effect) +
                    " vs observed " + std::to_string(observed_effect));
  }
  return clamp_perturbation(m.delta_hat.delta + std::log(predicted_effect / observed_effect),
                            m.params.delta_max);
}

}  // namespace dyncausal
