#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dyncausal/core.hpp"
#include "dyncausal/graph.hpp"
#include "dyncausal/model.hpp"
#include "dyncausal/scenario.hpp"

namespace dyncausal {

struct ReflectParams {
  double tau = default_tau(0.0);
  std::size_t holdout = 8;     // V
  std::size_t budget = 32;     // B
  std::size_t max_accept = 2;  // M
  double rho = 0.1;
  unsigned k_max = 8;
};

ReflectParams reflect_params_from(const ScenarioConfig& scenario);

// Hypotheses are fully resolved when generated: every refit value is already a
// number, so applying one to a model needs no data.

struct DeltaShift {
  Perturbation new_delta;
  friend bool operator==(const DeltaShift&, const DeltaShift&) = default;
};

struct CoefChange {
  std::size_t edge = 0;
  double new_coefficient = 0.0;
  friend bool operator==(const CoefChange&, const CoefChange&) = default;
};

struct DelayChange {
  std::size_t edge = 0;
  unsigned new_delay = 1;
  friend bool operator==(const DelayChange&, const DelayChange&) = default;
};

struct EdgeRemove {
  std::size_t edge = 0;
  friend bool operator==(const EdgeRemove&, const EdgeRemove&) = default;
};

struct EdgeAdd {
  VarRef source;
  std::size_t target = 0;
  unsigned delay = 1;
  EdgeForm form = EdgeForm::Linear;
  double coefficient = 0.0;  // least-squares estimate on the scoring window
  friend bool operator==(const EdgeAdd&, const EdgeAdd&) = default;
};

/// Declares a regime change at `since`: rows before it stop counting for fits and
/// every coefficient takes its refit value on post-break data.
struct StructuralBreak {
  Tick since = 0;
  std::vector<double> coefficients;
  friend bool operator==(const StructuralBreak&, const StructuralBreak&) = default;
};

/// Alternative order is the parsimony order used to break score ties.
using Hypothesis = std::variant<DeltaShift, CoefChange, DelayChange, EdgeRemove, EdgeAdd, StructuralBreak>;

const char* kind_name(const Hypothesis& h) noexcept;
std::string describe(const Hypothesis& h);

/// Throws ErrorKind::Input when h references edges the model does not have or
/// would create a duplicate edge.
CausalModel apply_hypothesis(const CausalModel& m, const Hypothesis& h);

struct HypothesisScore {
  Hypothesis hypothesis;
  double score = 0.0;     // log-likelihood improvement over the current model
  double log_lik = 0.0;   // log-likelihood of the window under the hypothesis alone
  double holdout_mse = 0.0;
};

struct ReflectReport {
  bool triggered = false;
  PredictionError epsilon;
  std::vector<HypothesisScore> candidates;  // descending score
  std::vector<Hypothesis> accepted;
  CausalModel updated_model;
};

bool detect_mismatch(const PredictionError& epsilon, double tau);

/// Evidence for one reflection: `sequence` is the model history followed by the
/// context transition; `window` and `holdout` are disjoint, contiguous, and cover
/// the last min(fit_window, n) transitions with tick >= from_tick, holdout last.
struct Evidence {
  std::vector<Transition> sequence;
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
  std::size_t holdout_begin = 0;
  std::size_t holdout_end = 0;

  std::span<const Transition> window() const;
  std::span<const Transition> holdout() const;
};

Evidence gather_evidence(const CausalModel& m, const Transition& ctx, const ReflectParams& params,
                         Tick from_tick);

/// Candidate revisions targeting the state dimensions whose residual exceeds
/// tau / D_S. Refit values are estimated on `window`.
std::vector<Hypothesis> generate_hypotheses(const CausalModel& m, const Transition& ctx,
                                            const PredictionError& err, const ReflectParams& params,
                                            std::span<const Transition> window);

/// Overload that uses the model's own recent history as the refit window.
std::vector<Hypothesis> generate_hypotheses(const CausalModel& m, const Transition& ctx,
                                            const PredictionError& err,
                                            const ReflectParams& params = {});

/// Sum over the window of log N(obs; prediction under h) - log N(obs; prediction under m).
/// Lags before the window come from m.history.
HypothesisScore score_hypothesis(const CausalModel& m, const Hypothesis& h,
                                 std::span<const Transition> window);

/// Mean one-step loss of `m` over `data`, lags taken from m.history.
double window_mse(const CausalModel& m, std::span<const Transition> data);

/// Accepts iff holdout MSE under h <= (1 - rho) * MSE under m and strictly lower.
bool test_hypothesis(const CausalModel& m, const Hypothesis& h, std::span<const Transition> holdout,
                     double rho);

/// Orders candidates by descending score; scores within kScoreTieTolerance of
/// their neighbour tie and fall back to parsimony, then edge index.
void rank_candidates(std::vector<HypothesisScore>& candidates);
std::vector<std::size_t> ranking_by_score(const std::vector<HypothesisScore>& candidates);

/// Ranking positions when the key is log_lik - baseline_term instead of score.
/// Passing 0 drops the term that does not depend on the hypothesis.
std::vector<std::size_t> ranking_by_log_lik(const std::vector<HypothesisScore>& candidates,
                                            double baseline_term);

inline constexpr double kScoreTieTolerance = 1e-9;

/// The full mechanism: predict, measure, and on mismatch generate, score, test
/// and greedily apply hypotheses. The returned model never includes ctx.
ReflectReport reflect(const CausalModel& m, const Transition& ctx, const ReflectParams& params,
                      Tick evidence_from = 0);

}  // namespace dyncausal
