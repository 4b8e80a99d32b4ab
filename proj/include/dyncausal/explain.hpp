#pragma once

#include <optional>
#include <string>

#include "dyncausal/agent.hpp"
#include "dyncausal/model.hpp"
#include "dyncausal/reflect.hpp"
#include "json.hpp"

namespace dyncausal {

enum class ExplanationKind { CausalAccount, Counterfactual, ReflectionSummary };

const char* to_string(ExplanationKind k) noexcept;

/// `grounding` holds every value the text quotes, already rounded the way the
/// text prints it, next to the full-precision source value.
struct Explanation {
  ExplanationKind kind = ExplanationKind::CausalAccount;
  std::string text;
  nlohmann::json grounding;
};

/// One sentence per nonzero effect caused by the record's own tuple.
Explanation explain_transition(const TraceRecord& record, const CausalModel& model);

/// Compares the settled prediction under delta_hat with the one under delta_prime.
Explanation explain_counterfactual(const TraceRecord& record, const CausalModel& model,
                                   Perturbation delta_prime);

/// Threshold, candidate count and each accepted hypothesis with its score.
Explanation explain_reflection(const TraceRecord& record, const ReflectReport& report, double tau);

/// Model the agent held when it predicted `tick`, rebuilt by re-running the episode.
CausalModel model_at_tick(const Trace& trace, Tick tick);

struct PromptBundle {
  std::string system_preamble;
  nlohmann::json facts;
  std::string instruction;

  friend bool operator==(const PromptBundle&, const PromptBundle&) = default;
};

PromptBundle render_prompt(const TraceRecord& record, const std::optional<ReflectReport>& report);
inline PromptBundle render_prompt(const TraceRecord& record) { return render_prompt(record, record.reflect_report); }

std::string flatten(const PromptBundle& bundle);

struct LlmEndpoint {
  std::string url;  // http://host[:port]/path
  std::string key;
};

/// EXPLAIN_LLM_URL / EXPLAIN_LLM_KEY; nullopt when the URL is unset or empty.
std::optional<LlmEndpoint> llm_endpoint_from_env();

struct Narration {
  std::string text;
  std::string backend;     // "template" or "llm"
  bool verified = true;    // false for anything the template engine did not produce
};

/// Sends the flattened bundle to the endpoint, or returns `fallback` verbatim
/// when there is no endpoint. Throws ErrorKind::Input on transport failure.
Narration narrate(const PromptBundle& bundle, const Explanation& fallback,
                  const std::optional<LlmEndpoint>& endpoint, int max_tokens = 256);

}  // namespace dyncausal
