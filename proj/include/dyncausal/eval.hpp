#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dyncausal/agent.hpp"
#include "dyncausal/graph.hpp"
#include "dyncausal/scenario.hpp"
#include "json.hpp"

namespace dyncausal {

inline constexpr std::size_t kRmseWindow = 16;

/// Temporal, signed structural Hamming distance. Edges are grouped by
/// (source, target); within a group they pair up in (delay, sign) order.
/// Throws ErrorKind::Input on a dimension mismatch.
std::size_t shd(const CausalGraph& inferred, const CausalGraph& truth);

/// Smallest d >= 0 with rmse[break_tick + d] <= threshold, or nullopt.
std::optional<std::size_t> recovery_time(std::span<const double> rmse, std::size_t break_tick,
                                         double threshold);

/// sqrt of the mean per-tick loss over the trailing `window` ticks (fewer at the start).
std::vector<double> rolling_rmse(std::span<const TraceRecord> records, std::size_t window = kRmseWindow);

/// Agent graph after each tick, rebuilt from the snapshots carried in the trace.
std::vector<CausalGraph> agent_graphs(const Trace& trace);

struct BreakRecovery {
  Tick break_tick = 0;
  double threshold = 0.0;                 // 2 x median pre-break rolling RMSE
  std::optional<Tick> excursion;          // first tick >= break above threshold
  std::optional<std::size_t> ticks;       // from the break; 0 when there was no excursion
};

struct ReflectionStats {
  std::size_t triggers = 0;
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::map<std::string, std::size_t> candidates_by_kind;
  std::map<std::string, std::size_t> accepted_by_kind;
  std::size_t fits_ok = 0;
  std::size_t fits_failed = 0;
};

struct EvalReport {
  std::string scenario;
  std::uint64_t seed = 0;
  bool reflect_enabled = true;
  std::vector<std::size_t> shd_series;
  std::vector<double> rmse_series;
  std::vector<BreakRecovery> recovery;
  ReflectionStats reflection_stats;
};

/// Threshold for the break at index `b` of the schedule: twice the median of
/// the rolling RMSE between the previous break (or tick 0) and this one.
double recovery_threshold(std::span<const double> rmse, const BreakSchedule& breaks, std::size_t b);

/// Throws ErrorKind::Input when the trace was not produced from `scenario`.
EvalReport evaluate(const Trace& trace, const ScenarioConfig& scenario);

struct RecoveryDelta {
  Tick break_tick = 0;
  std::optional<std::size_t> reflect;
  std::optional<std::size_t> baseline;
  std::optional<long long> difference;  // reflect - baseline, when both recovered
};

struct Comparison {
  EvalReport reflect;
  EvalReport baseline;
  double delta_rmse_post_break = 0.0;  // mean over ticks from the first break (or all ticks)
  std::vector<RecoveryDelta> delta_recovery;
  std::vector<long long> delta_shd;    // per tick, reflect - baseline
};

/// Both traces must share scenario, seed and length; throws ErrorKind::Input otherwise.
Comparison compare(const Trace& reflect_trace, const Trace& baseline_trace, const ScenarioConfig& scenario);

nlohmann::json report_to_json(const EvalReport& r);
nlohmann::json comparison_to_json(const Comparison& c);

/// Tab-separated, one row per tick.
std::string report_table(const EvalReport& r, const Trace& trace);
std::string comparison_table(const Comparison& c);

}  // namespace dyncausal
