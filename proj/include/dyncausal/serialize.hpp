#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dyncausal/agent.hpp"
#include "dyncausal/core.hpp"
#include "dyncausal/graph.hpp"
#include "dyncausal/model.hpp"
#include "dyncausal/reflect.hpp"
#include "dyncausal/scenario.hpp"

namespace dyncausal {

using json = nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) noexcept;
std::string hex64(std::uint64_t v);

// nlohmann ADL hooks. Decoders throw nlohmann exceptions on malformed input;
// the file-level readers below convert those into ErrorKind::Parse.
void to_json(json& j, const StateVec& v);
void from_json(const json& j, StateVec& v);
void to_json(json& j, const ActionVec& v);
void from_json(const json& j, ActionVec& v);
void to_json(json& j, const VarRef& v);
void from_json(const json& j, VarRef& v);
void to_json(json& j, const CausalEdge& e);
void from_json(const json& j, CausalEdge& e);
void to_json(json& j, const CausalTuple& t);
void from_json(const json& j, CausalTuple& t);
void to_json(json& j, const Transition& t);
void from_json(const json& j, Transition& t);
void to_json(json& j, const PredictionError& e);
void from_json(const json& j, PredictionError& e);
void to_json(json& j, const Contribution& c);
void from_json(const json& j, Contribution& c);
void to_json(json& j, const Prediction& p);
void from_json(const json& j, Prediction& p);
void to_json(json& j, const ModelParams& p);
void from_json(const json& j, ModelParams& p);
void to_json(json& j, const ModelSnapshot& s);
void from_json(const json& j, ModelSnapshot& s);
void to_json(json& j, const Hypothesis& h);
void from_json(const json& j, Hypothesis& h);
void to_json(json& j, const HypothesisScore& s);
void from_json(const json& j, HypothesisScore& s);
/// The updated model is not serialized; the record's model_snapshot carries it.
void to_json(json& j, const ReflectReport& r);
void from_json(const json& j, ReflectReport& r);
void to_json(json& j, const FitEvent& f);
void from_json(const json& j, FitEvent& f);
void to_json(json& j, const TraceRecord& r);
void from_json(const json& j, TraceRecord& r);

/// Graph edges only; dimensions come from the enclosing scenario.
json graph_edges_to_json(const CausalGraph& g);
CausalGraph graph_from_json(const json& edges, std::size_t d_state, std::size_t d_action);

/// Canonical, fully explicit scenario document (sorted keys, all defaults present).
json scenario_to_json(const ScenarioConfig& c);
/// Fills defaults, rejects unknown keys and validates. Throws ErrorKind::Configuration.
ScenarioConfig scenario_from_json(const json& j);
std::string scenario_digest(const ScenarioConfig& c);

/// Reads a scenario file (JSON, // comments allowed). A bare bundled name such as
/// "productivity" resolves to the built-in scenario when no such file exists.
ScenarioConfig load_scenario(const std::filesystem::path& path);
void save_scenario(const ScenarioConfig& c, const std::filesystem::path& path);

/// Names and canonical text of the scenarios shipped with the tool.
std::vector<std::string> bundled_scenario_names();
std::string bundled_scenario_text(const std::string& name);

json header_to_json(const TraceHeader& h);
TraceHeader header_from_json(const json& j);

/// JSON Lines: header, then one record per tick.
std::string trace_to_jsonl(const Trace& t);
Trace trace_from_jsonl(std::string_view text);
void write_trace(const Trace& t, const std::filesystem::path& path);
Trace read_trace(const std::filesystem::path& path);

/// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace dyncausal
