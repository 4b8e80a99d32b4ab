#include "dyncausal/eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dyncausal/reflect.hpp"
#include "dyncausal/serialize.hpp"

namespace dyncausal {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct KeyedEdge {
  unsigned delay;
  int sign;
  auto operator<=>(const KeyedEdge&) const = default;
};

std::map<std::pair<VarRef, std::size_t>, std::vector<KeyedEdge>> by_key(const CausalGraph& g) {
  std::map<std::pair<VarRef, std::size_t>, std::vector<KeyedEdge>> out;
  for (const auto& e : g.edges) out[{e.source, e.target}].push_back({e.delay, sign_of(e.coefficient)});
  for (auto& [_, v] : out) std::sort(v.begin(), v.end());
  return out;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

double mean_from(const std::vector<double>& v, std::size_t from) {
  if (from >= v.size()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = from; i < v.size(); ++i) sum += v[i];
  return sum / static_cast<double>(v.size() - from);
}

nlohmann::json optional_ticks(const std::optional<std::size_t>& t) {
  return t ? nlohmann::json(*t) : nlohmann::json("not_recovered");
}

}  // namespace

std::size_t shd(const CausalGraph& inferred, const CausalGraph& truth) {
  if (inferred.d_state != truth.d_state || inferred.d_action != truth.d_action) {
    throw Error(ErrorKind::Input, "shd: graphs have different dimensions");
  }
  const auto a = by_key(inferred);
  const auto b = by_key(truth);
  std::size_t d = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      d += ia->second.size();
      ++ia;
    } else if (ia == a.end() || ib->first < ia->first) {
      d += ib->second.size();
      ++ib;
    } else {
      const auto& x = ia->second;
      const auto& y = ib->second;
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        d += (x[i].delay != y[i].delay) + (x[i].sign != y[i].sign);
      }
      d += std::max(x.size(), y.size()) - n;
      ++ia;
      ++ib;
    }
  }
  return d;
}

std::optional<std::size_t> recovery_time(std::span<const double> rmse, std::size_t break_tick,
                                         double threshold) {
  for (std::size_t i = break_tick; i < rmse.size(); ++i) {
    if (rmse[i] <= threshold) return i - break_tick;
  }
  return std::nullopt;
}

std::vector<double> rolling_rmse(std::span<const TraceRecord> records, std::size_t window) {
  if (window == 0) throw Error(ErrorKind::Domain, "rolling window must be positive");
  std::vector<double> out;
  out.reserve(records.size());
  // Summed afresh per tick: a running sum drifts and breaks the all-zero case.
  for (std::size_t i = 0; i < records.size(); ++i) {
    const std::size_t lo = i + 1 > window ? i + 1 - window : 0;
    double sum = 0.0;
    for (std::size_t j = lo; j <= i; ++j) sum += records[j].error.epsilon;
    out.push_back(std::sqrt(sum / static_cast<double>(i + 1 - lo)));
  }
  return out;
}

std::vector<CausalGraph> agent_graphs(const Trace& trace) {
  std::vector<CausalGraph> out;
  out.reserve(trace.records.size());
  std::optional<CausalGraph> current;
  for (const auto& r : trace.records) {
    if (r.model_snapshot) current = r.model_snapshot->graph;
    if (!current) throw Error(ErrorKind::Input, "trace record " + std::to_string(r.tick) + " has no model snapshot");
    out.push_back(*current);
  }
  return out;
}

double recovery_threshold(std::span<const double> rmse, const BreakSchedule& breaks, std::size_t b) {
  const std::size_t lo = b == 0 ? 0 : static_cast<std::size_t>(breaks[b - 1].at_tick);
  const std::size_t hi = std::min(rmse.size(), static_cast<std::size_t>(breaks[b].at_tick));
  if (lo >= hi) return 0.0;
  return 2.0 * median(std::vector<double>(rmse.begin() + static_cast<std::ptrdiff_t>(lo),
                                          rmse.begin() + static_cast<std::ptrdiff_t>(hi)));
}

EvalReport evaluate(const Trace& trace, const ScenarioConfig& scenario) {
  const std::string digest = scenario_digest(scenario);
  if (trace.header.scenario_digest != digest) {
    throw Error(ErrorKind::Input, "trace scenario digest " + trace.header.scenario_digest +
                                      " does not match " + digest);
  }
  EvalReport r;
  r.scenario = scenario.name;
  r.seed = trace.header.seed;
  r.reflect_enabled = trace.header.reflect_enabled;
  r.rmse_series = rolling_rmse(trace.records);

  const auto graphs = agent_graphs(trace);
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    r.shd_series.push_back(shd(graphs[i], active_graph(scenario.breaks, scenario.initial_graph, trace.records[i].tick)));
  }

  for (std::size_t b = 0; b < scenario.breaks.size(); ++b) {
    BreakRecovery br;
    br.break_tick = scenario.breaks[b].at_tick;
    br.threshold = recovery_threshold(r.rmse_series, scenario.breaks, b);
    if (br.break_tick < r.rmse_series.size()) {
      for (std::size_t i = br.break_tick; i < r.rmse_series.size(); ++i) {
        if (r.rmse_series[i] > br.threshold) {
          br.excursion = i;
          break;
        }
      }
      if (!br.excursion) {
        br.ticks = 0;
      } else if (auto d = recovery_time(r.rmse_series, *br.excursion, br.threshold)) {
        br.ticks = (*br.excursion - br.break_tick) + *d;
      }
    }
    r.recovery.push_back(br);
  }

  auto& s = r.reflection_stats;
  for (const auto& rec : trace.records) {
    if (rec.fit) (rec.fit->status == "ok" ? s.fits_ok : s.fits_failed)++;
    if (!rec.reflect_report || !rec.reflect_report->triggered) continue;
    ++s.triggers;
    for (const auto& c : rec.reflect_report->candidates) {
      ++s.candidates;
      ++s.candidates_by_kind[kind_name(c.hypothesis)];
    }
    for (const auto& h : rec.reflect_report->accepted) {
      ++s.accepted;
      ++s.accepted_by_kind[kind_name(h)];
    }
  }
  return r;
}

Comparison compare(const Trace& reflect_trace, const Trace& baseline_trace, const ScenarioConfig& scenario) {
  const auto& a = reflect_trace.header;
  const auto& b = baseline_trace.header;
  if (a.scenario_digest != b.scenario_digest || a.seed != b.seed ||
      reflect_trace.records.size() != baseline_trace.records.size()) {
    throw Error(ErrorKind::Input, "compare: traces differ in scenario, seed or length");
  }
  Comparison c;
  c.reflect = evaluate(reflect_trace, scenario);
  c.baseline = evaluate(baseline_trace, scenario);

  const std::size_t from = scenario.breaks.empty() ? 0 : static_cast<std::size_t>(scenario.breaks.front().at_tick);
  c.delta_rmse_post_break = mean_from(c.reflect.rmse_series, from) - mean_from(c.baseline.rmse_series, from);

  for (std::size_t i = 0; i < c.reflect.recovery.size(); ++i) {
    RecoveryDelta d;
    d.break_tick = c.reflect.recovery[i].break_tick;
    d.reflect = c.reflect.recovery[i].ticks;
    d.baseline = c.baseline.recovery[i].ticks;
    if (d.reflect && d.baseline) {
      d.difference = static_cast<long long>(*d.reflect) - static_cast<long long>(*d.baseline);
    }
    c.delta_recovery.push_back(d);
  }
  for (std::size_t i = 0; i < c.reflect.shd_series.size(); ++i) {
    c.delta_shd.push_back(static_cast<long long>(c.reflect.shd_series[i]) -
                          static_cast<long long>(c.baseline.shd_series[i]));
  }
  return c;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json rec = nlohmann::json::array();
  for (const auto& b : r.recovery) {
    rec.push_back({{"break_tick", b.break_tick},
                   {"threshold", b.threshold},
                   {"excursion", b.excursion ? nlohmann::json(*b.excursion) : nlohmann::json(nullptr)},
                   {"ticks", optional_ticks(b.ticks)}});
  }
  const auto& s = r.reflection_stats;
  return {{"scenario", r.scenario},
          {"seed", r.seed},
          {"reflect_enabled", r.reflect_enabled},
          {"shd_series", r.shd_series},
          {"rmse_series", r.rmse_series},
          {"recovery", rec},
          {"reflection_stats",
           {{"triggers", s.triggers},
            {"candidates", s.candidates},
            {"accepted", s.accepted},
            {"candidates_by_kind", s.candidates_by_kind},
            {"accepted_by_kind", s.accepted_by_kind},
            {"fits_ok", s.fits_ok},
            {"fits_failed", s.fits_failed}}}};
}

nlohmann::json comparison_to_json(const Comparison& c) {
  nlohmann::json rec = nlohmann::json::array();
  for (const auto& d : c.delta_recovery) {
    rec.push_back({{"break_tick", d.break_tick},
                   {"reflect", optional_ticks(d.reflect)},
                   {"baseline", optional_ticks(d.baseline)},
                   {"difference", d.difference ? nlohmann::json(*d.difference) : nlohmann::json(nullptr)}});
  }
  return {{"reflect", report_to_json(c.reflect)},
          {"baseline", report_to_json(c.baseline)},
          {"deltas", {{"rmse_post_break", c.delta_rmse_post_break}, {"recovery", rec}, {"shd", c.delta_shd}}}};
}

std::string report_table(const EvalReport& r, const Trace& trace) {
  std::ostringstream os;
  os.precision(17);
  os << "tick\tepsilon\trmse\tshd\tdelta_hat\ttrue_delta\ttriggered\taccepted\n";
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const auto& rec = trace.records[i];
    const bool trig = rec.reflect_report && rec.reflect_report->triggered;
    os << rec.tick << '\t' << rec.error.epsilon << '\t' << r.rmse_series[i] << '\t' << r.shd_series[i]
       << '\t' << rec.delta_hat.delta << '\t' << rec.true_delta.delta << '\t' << trig << '\t'
       << (rec.reflect_report ? rec.reflect_report->accepted.size() : 0) << '\n';
  }
  return os.str();
}

std::string comparison_table(const Comparison& c) {
  std::ostringstream os;
  os.precision(17);
  os << "tick\trmse_reflect\trmse_baseline\tshd_reflect\tshd_baseline\n";
  for (std::size_t i = 0; i < c.reflect.rmse_series.size(); ++i) {
    os << i << '\t' << c.reflect.rmse_series[i] << '\t' << c.baseline.rmse_series[i] << '\t'
       << c.reflect.shd_series[i] << '\t' << c.baseline.shd_series[i] << '\n';
  }
  return os.str();
}

}  // namespace dyncausal
