#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyncausal/core.hpp"
#include "dyncausal/model.hpp"
#include "dyncausal/policy.hpp"
#include "dyncausal/reflect.hpp"
#include "dyncausal/scenario.hpp"
#include "dyncausal/world.hpp"

namespace dyncausal {

inline constexpr const char* kArtifactVersion = "dyncausal-trace/1";

/// Everything but the history and delta_hat: the part of a model that only fit
/// and accepted hypotheses change.
struct ModelSnapshot {
  CausalGraph graph;
  ModelParams params;
  Tick regime_start = 0;

  friend bool operator==(const ModelSnapshot&, const ModelSnapshot&) = default;
};

ModelSnapshot snapshot_of(const CausalModel& m);

/// Stable FNV-1a hash (hex) of the canonical serialized snapshot.
std::string model_digest(const CausalModel& m);

struct FitEvent {
  std::string status;  // "ok", "not_enough_data" or "degenerate_data"
  std::string message;

  friend bool operator==(const FitEvent&, const FitEvent&) = default;
};

struct TraceRecord {
  Tick tick = 0;
  StateVec state;
  ActionVec action;
  Perturbation true_delta;  // evaluation only; the agent never sees it
  Perturbation delta_hat;
  Prediction prediction;
  StateVec observed;
  PredictionError error;
  std::optional<ReflectReport> reflect_report;
  std::optional<FitEvent> fit;
  std::string model_digest;
  std::optional<ModelSnapshot> model_snapshot;  // present whenever the digest changes
};

struct TraceHeader {
  std::string artifact_version = kArtifactVersion;
  std::string rng = "splitmix64-ctr/v1";
  std::string scenario_digest;
  std::uint64_t seed = 0;
  std::size_t length = 0;
  bool reflect_enabled = true;
  ScenarioConfig scenario;
};

struct Trace {
  TraceHeader header;
  std::vector<TraceRecord> records;
};

/// Steps one episode: act, predict, observe, compare, reflect on mismatch, and
/// fit every F ticks. Exposed so callers can inspect the model mid-episode.
class EpisodeRunner {
 public:
  EpisodeRunner(const ScenarioConfig& scenario, std::uint64_t seed, bool reflect_enabled);

  /// Replaces the agent's starting model; only valid before the first step.
  void set_model(CausalModel model);

  const CausalModel& model() const noexcept { return model_; }
  const WorldState& world() const noexcept { return world_; }
  Tick tick() const noexcept { return world_.tick; }

  TraceRecord step();

 private:
  ScenarioConfig scenario_;
  bool reflect_enabled_;
  ReflectParams reflect_params_;
  WorldState world_;
  PolicyRunner policy_;
  CausalModel model_;
  StateVec state_;
  std::optional<Tick> onset_;
  std::size_t calm_run_ = 0;
  std::string last_digest_;
};

Trace run_episode(const ScenarioConfig& scenario, std::uint64_t seed, std::size_t length,
                  bool reflect_enabled);

/// Re-executes the trace from its header and checks every record bit-exactly.
/// Throws ErrorKind::Replay on version or scenario mismatch, an empty trace, or
/// the first diverging record.
Trace replay(const Trace& trace, const ScenarioConfig& scenario);

}  // namespace dyncausal
