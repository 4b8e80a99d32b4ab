#include "dyncausal/agent.hpp"

#include "dyncausal/serialize.hpp"

namespace dyncausal {

ModelSnapshot snapshot_of(const CausalModel& m) { return ModelSnapshot{m.graph, m.params, m.regime_start}; }

std::string model_digest(const CausalModel& m) {
  return hex64(fnv1a64(json(snapshot_of(m)).dump()));
}

EpisodeRunner::EpisodeRunner(const ScenarioConfig& scenario, std::uint64_t seed, bool reflect_enabled)
    : scenario_(scenario),
      reflect_enabled_(reflect_enabled),
      reflect_params_(reflect_params_from(scenario)),
      world_(world_init(scenario, seed)),
      policy_(scenario.policy, scenario.d_action, seed),
      model_(make_model(scenario.agent.initial_graph, model_params_from(scenario),
                        Perturbation{scenario.agent.initial_delta_hat})),
      state_(scenario.initial_state) {}

void EpisodeRunner::set_model(CausalModel model) {
  if (world_.tick != 0) throw Error(ErrorKind::Input, "set_model after the episode started");
  if (model.graph.d_state != scenario_.d_state || model.graph.d_action != scenario_.d_action) {
    throw Error(ErrorKind::Dimension, "model dimensions do not match the scenario");
  }
  model_ = std::move(model);
}

TraceRecord EpisodeRunner::step() {
  const Tick t = world_.tick;
  TraceRecord rec;
  rec.tick = t;
  rec.state = state_;
  rec.action = policy_.next(t);
  rec.delta_hat = model_.delta_hat;

  const CausalTuple tuple{state_, rec.action, t, model_.delta_hat};
  rec.prediction = predict(model_, tuple);

  WorldStepResult res = world_step(std::move(world_), rec.action);
  world_ = std::move(res.state);
  rec.true_delta = res.true_delta;
  rec.observed = res.observed;
  rec.error = loss(rec.prediction.next(), rec.observed);

  const Transition ctx{tuple, 1, rec.observed};
  if (detect_mismatch(rec.error, reflect_params_.tau)) {
    if (!onset_) onset_ = t;
    calm_run_ = 0;
    if (reflect_enabled_) {
      ReflectReport report = reflect(model_, ctx, reflect_params_, *onset_);
      model_ = report.updated_model;
      report.updated_model = CausalModel{};
      rec.reflect_report = std::move(report);
    }
  } else {
    if (++calm_run_ >= reflect_params_.holdout) onset_.reset();
    model_.delta_hat = Perturbation{model_.delta_hat.delta * model_.params.delta_decay};
  }

  model_.record(ctx);
  const std::size_t every = scenario_.agent.fit_every;
  if (every > 0 && (t + 1) % every == 0) {
    try {
      model_ = fit(model_);
      rec.fit = FitEvent{"ok", ""};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotEnoughData) {
        rec.fit = FitEvent{"not_enough_data", e.what()};
      } else if (e.kind() == ErrorKind::DegenerateData) {
        rec.fit = FitEvent{"degenerate_data", e.what()};
      } else {
        throw;
      }
    }
  }

  state_ = rec.observed;
  rec.model_digest = model_digest(model_);
  if (rec.model_digest != last_digest_) {
    rec.model_snapshot = snapshot_of(model_);
    last_digest_ = rec.model_digest;
  }
  return rec;
}

Trace run_episode(const ScenarioConfig& scenario, std::uint64_t seed, std::size_t length,
                  bool reflect_enabled) {
  Trace trace;
  trace.header.scenario_digest = scenario_digest(scenario);
  trace.header.seed = seed;
  trace.header.length = length;
  trace.header.reflect_enabled = reflect_enabled;
  trace.header.scenario = scenario;
  EpisodeRunner runner(scenario, seed, reflect_enabled);
  trace.records.reserve(length);
  for (std::size_t i = 0; i < length; ++i) trace.records.push_back(runner.step());
  return trace;
}

Trace replay(const Trace& trace, const ScenarioConfig& scenario) {
  const auto& h = trace.header;
  if (h.artifact_version != kArtifactVersion) {
    throw Error(ErrorKind::Replay, "unsupported artifact version '" + h.artifact_version + "'");
  }
  if (trace.records.empty()) throw Error(ErrorKind::Replay, "trace has no records");
  if (h.length != trace.records.size()) {
    throw Error(ErrorKind::Replay, "header length " + std::to_string(h.length) + " but " +
                                       std::to_string(trace.records.size()) + " records");
  }
  const std::string digest = scenario_digest(scenario);
  if (digest != h.scenario_digest) {
    throw Error(ErrorKind::Replay, "scenario digest " + digest + " does not match trace " + h.scenario_digest);
  }
  Trace fresh = run_episode(scenario, h.seed, h.length, h.reflect_enabled);
  for (std::size_t i = 0; i < fresh.records.size(); ++i) {
    const std::string want = json(trace.records[i]).dump();
    const std::string got = json(fresh.records[i]).dump();
    if (want != got) {
      throw Error(ErrorKind::Replay, "record " + std::to_string(i) + " (tick " +
                                         std::to_string(trace.records[i].tick) + ") diverges");
    }
  }
  return fresh;
}

}  // namespace dyncausal
