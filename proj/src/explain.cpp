#include "dyncausal/explain.hpp"

#include <algorithm>

#include "dyncausal/serialize.hpp"

namespace dyncausal {

namespace {

std::string vec_text(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out + "]";
}

// Negative exponents print as e^-(-x) so the template's minus stays literal.
std::string exponent_text(double delta) {
  const std::string d = format_number(delta);
  return delta < 0.0 ? "e^-(" + d + ")" : "e^-" + d;
}

CausalTuple tuple_of(const TraceRecord& r) { return CausalTuple{r.state, r.action, r.tick, r.delta_hat}; }

}  // namespace

const char* to_string(ExplanationKind k) noexcept {
  switch (k) {
    case ExplanationKind::CausalAccount: return "causal_account";
    case ExplanationKind::Counterfactual: return "counterfactual";
    case ExplanationKind::ReflectionSummary: return "reflection_summary";
  }
  return "unknown";
}

Explanation explain_transition(const TraceRecord& record, const CausalModel& model) {
  Explanation ex;
  ex.kind = ExplanationKind::CausalAccount;
  const double scale = scale_factor(record.delta_hat, model.params.delta_max);
  nlohmann::json contribs = nlohmann::json::array();
  std::string text;
  for (const auto& c : record.prediction.contributions) {
    if (c.cause_tick != record.tick || c.effect == 0.0) continue;
    if (c.edge >= model.graph.edges.size()) {
      throw Error(ErrorKind::Input, "prediction references edge " + std::to_string(c.edge) +
                                        " that the model does not have");
    }
    const CausalEdge& e = model.graph.edges[c.edge];
    std::string cause;
    if (e.source.kind == SourceKind::Action) {
      cause = "action " + vec_text(record.action.raw());
    } else {
      cause = "state dimension " + std::to_string(e.source.index) + " at " +
              format_number(record.state.raw()[e.source.index]);
    }
    if (!text.empty()) text += ' ';
    text += "At tick " + std::to_string(record.tick) + ", " + cause +
            " is predicted to change state dimension " + std::to_string(e.target) + " by " +
            format_number(c.effect) + " after a delay of " + std::to_string(c.horizon) +
            " ticks, scaled by perturbation factor " + exponent_text(record.delta_hat.delta) +
            " = " + format_number(scale) + ".";
    contribs.push_back({{"edge", c.edge},
                        {"source", e.source},
                        {"target", e.target},
                        {"delay", c.horizon},
                        {"coefficient", e.coefficient},
                        {"effect", c.effect}});
  }
  if (text.empty()) {
    text = "At tick " + std::to_string(record.tick) +
           ", the model has no modeled causal effect of the current state or action.";
  }
  ex.text = std::move(text);
  ex.grounding = {{"tick", record.tick},
                  {"state", record.state},
                  {"action", record.action},
                  {"delta_hat", record.delta_hat.delta},
                  {"scale", scale},
                  {"contributions", contribs}};
  return ex;
}

Explanation explain_counterfactual(const TraceRecord& record, const CausalModel& model,
                                   Perturbation delta_prime) {
  Explanation ex;
  ex.kind = ExplanationKind::Counterfactual;
  const Prediction cf = counterfactual(model, tuple_of(record), delta_prime);
  const StateVec& factual = record.prediction.settled();
  const StateVec& alt = cf.settled();
  const std::string lead = "Had perturbation δ=" + format_number(record.delta_hat.delta) +
                           (delta_prime.delta == 0.0 ? " not occurred"
                                                     : " been δ=" + format_number(delta_prime.delta) + " instead");
  if (alt == factual) {
    ex.text = lead + ", the model predicts no difference: the system would still have transitioned to state " +
              vec_text(factual.raw()) + ".";
  } else {
    ex.text = lead + ", the model predicts the system would have transitioned to state " +
              vec_text(alt.raw()) + " instead of " + vec_text(factual.raw()) + ".";
  }
  ex.grounding = {{"tick", record.tick},
                  {"delta_hat", record.delta_hat.delta},
                  {"delta_prime", delta_prime.delta},
                  {"horizon", record.prediction.max_horizon()},
                  {"factual", factual},
                  {"counterfactual", alt}};
  return ex;
}

Explanation explain_reflection(const TraceRecord& record, const ReflectReport& report, double tau) {
  Explanation ex;
  ex.kind = ExplanationKind::ReflectionSummary;
  nlohmann::json accepted = nlohmann::json::array();
  std::string text = "At tick " + std::to_string(record.tick) + ", prediction error " +
                     format_number(report.epsilon.epsilon);
  if (!report.triggered) {
    text += " stayed within threshold " + format_number(tau) + "; no reflection ran.";
  } else {
    text += " exceeded threshold " + format_number(tau) + "; " + std::to_string(report.candidates.size()) +
            " candidate hypotheses were scored and " + std::to_string(report.accepted.size()) +
            " accepted.";
    for (const auto& h : report.accepted) {
      const auto it = std::find_if(report.candidates.begin(), report.candidates.end(),
                                   [&](const HypothesisScore& s) { return s.hypothesis == h; });
      const double score = it == report.candidates.end() ? 0.0 : it->score;
      text += " Accepted " + describe(h) + " with score " + format_number(score) + ".";
      accepted.push_back({{"hypothesis", h}, {"score", score}});
    }
  }
  ex.text = std::move(text);
  ex.grounding = {{"tick", record.tick},
                  {"epsilon", report.epsilon.epsilon},
                  {"tau", tau},
                  {"triggered", report.triggered},
                  {"candidates", report.candidates.size()},
                  {"accepted", accepted}};
  return ex;
}

CausalModel model_at_tick(const Trace& trace, Tick tick) {
  if (tick >= trace.records.size()) {
    throw Error(ErrorKind::Input, "tick " + std::to_string(tick) + " is past the end of the trace (" +
                                      std::to_string(trace.records.size()) + " records)");
  }
  EpisodeRunner runner(trace.header.scenario, trace.header.seed, trace.header.reflect_enabled);
  while (runner.tick() < tick) runner.step();
  return runner.model();
}

PromptBundle render_prompt(const TraceRecord& record, const std::optional<ReflectReport>& report) {
  PromptBundle b;
  b.system_preamble =
      "You translate the output of a causal model into plain language for a human reader. "
      "The model is the only source of truth.";
  b.facts = {{"tick", record.tick},
             {"tuple", tuple_of(record)},
             {"prediction", record.prediction},
             {"observed", record.observed},
             {"error", record.error},
             {"reflect_report", report ? nlohmann::json(*report) : nlohmann::json(nullptr)}};
  b.instruction =
      "Explain the prediction and, if present, the reflection outcome using only the values in the "
      "facts block. Do not introduce any number, variable, cause or event that the facts block does "
      "not contain. Quote numbers exactly as given.";
  return b;
}

std::string flatten(const PromptBundle& bundle) {
  return bundle.system_preamble + "\n\nFACTS:\n" + bundle.facts.dump(2) + "\n\nINSTRUCTION:\n" +
         bundle.instruction + "\n";
}

}  // namespace dyncausal
