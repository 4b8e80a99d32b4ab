#include "dyncausal/serialize.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace dyncausal {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

// ---------------------------------------------------------------------------
// value types

void to_json(json& j, const StateVec& v) { j = v.raw(); }
void from_json(const json& j, StateVec& v) { v = StateVec(j.get<std::vector<double>>()); }
void to_json(json& j, const ActionVec& v) { j = v.raw(); }
void from_json(const json& j, ActionVec& v) { v = ActionVec(j.get<std::vector<double>>()); }

void to_json(json& j, const VarRef& v) {
  j = json::object();
  j[v.kind == SourceKind::Action ? "action" : "state"] = v.index;
}

void from_json(const json& j, VarRef& v) {
  if (!j.is_object() || j.size() != 1) {
    throw Error(ErrorKind::Configuration, "edge source must look like {\"action\": i} or {\"state\": i}");
  }
  if (j.contains("action")) {
    v = action_var(j.at("action").get<std::size_t>());
  } else if (j.contains("state")) {
    v = state_var(j.at("state").get<std::size_t>());
  } else {
    throw Error(ErrorKind::Configuration, "edge source must name \"action\" or \"state\"");
  }
}

void to_json(json& j, const CausalEdge& e) {
  j = json{{"source", e.source},
           {"target", e.target},
           {"coefficient", e.coefficient},
           {"delay", e.delay},
           {"form", to_string(e.form)}};
}

void from_json(const json& j, CausalEdge& e) {
  for (const auto& [key, _] : j.items()) {
    static const std::set<std::string> known{"source", "target", "coefficient", "delay", "form"};
    if (!known.count(key)) throw Error(ErrorKind::Configuration, "unknown edge key '" + key + "'");
  }
  e.source = j.at("source").get<VarRef>();
  e.target = j.at("target").get<std::size_t>();
  e.coefficient = j.at("coefficient").get<double>();
  e.delay = j.contains("delay") ? j.at("delay").get<unsigned>() : 1u;
  e.form = j.contains("form") ? edge_form_from_string(j.at("form").get<std::string>()) : EdgeForm::Linear;
}

void to_json(json& j, const CausalTuple& t) {
  j = json{{"state", t.state}, {"action", t.action}, {"time", t.time}, {"delta", t.delta.delta}};
}

void from_json(const json& j, CausalTuple& t) {
  t.state = j.at("state").get<StateVec>();
  t.action = j.at("action").get<ActionVec>();
  t.time = j.at("time").get<Tick>();
  t.delta = Perturbation{j.at("delta").get<double>()};
}

void to_json(json& j, const Transition& t) {
  j = json{{"tuple", t.tuple}, {"horizon", t.horizon}, {"observed", t.observed}};
}

void from_json(const json& j, Transition& t) {
  t.tuple = j.at("tuple").get<CausalTuple>();
  t.horizon = j.at("horizon").get<unsigned>();
  t.observed = j.at("observed").get<StateVec>();
}

void to_json(json& j, const PredictionError& e) {
  j = json{{"epsilon", e.epsilon}, {"per_dim", e.per_dim}};
}

void from_json(const json& j, PredictionError& e) {
  e.epsilon = j.at("epsilon").get<double>();
  e.per_dim = j.at("per_dim").get<std::vector<double>>();
}

void to_json(json& j, const Contribution& c) {
  j = json{{"edge", c.edge}, {"cause_tick", c.cause_tick}, {"horizon", c.horizon}, {"effect", c.effect}};
}

void from_json(const json& j, Contribution& c) {
  c.edge = j.at("edge").get<std::size_t>();
  c.cause_tick = j.at("cause_tick").get<Tick>();
  c.horizon = j.at("horizon").get<unsigned>();
  c.effect = j.at("effect").get<double>();
}

void to_json(json& j, const Prediction& p) {
  json horizons = json::array();
  for (const auto& [k, s] : p.horizon_states) horizons.push_back(json{{"k", k}, {"state", s}});
  j = json{{"horizons", horizons}, {"contributions", p.contributions}};
}

void from_json(const json& j, Prediction& p) {
  p.horizon_states.clear();
  for (const auto& h : j.at("horizons")) {
    p.horizon_states.emplace(h.at("k").get<unsigned>(), h.at("state").get<StateVec>());
  }
  p.contributions = j.at("contributions").get<std::vector<Contribution>>();
}

void to_json(json& j, const ModelParams& p) {
  j = json{{"fit_window", p.fit_window},
           {"history_capacity", p.history_capacity},
           {"sigma_lik", p.sigma_lik},
           {"delta_max", p.delta_max},
           {"delta_decay", p.delta_decay}};
}

void from_json(const json& j, ModelParams& p) {
  p.fit_window = j.at("fit_window").get<std::size_t>();
  p.history_capacity = j.at("history_capacity").get<std::size_t>();
  p.sigma_lik = j.at("sigma_lik").get<double>();
  p.delta_max = j.at("delta_max").get<double>();
  p.delta_decay = j.at("delta_decay").get<double>();
}

void to_json(json& j, const ModelSnapshot& s) {
  j = json{{"d_state", s.graph.d_state},
           {"d_action", s.graph.d_action},
           {"edges", s.graph.edges},
           {"params", s.params},
           {"regime_start", s.regime_start}};
}

void from_json(const json& j, ModelSnapshot& s) {
  s.graph.d_state = j.at("d_state").get<std::size_t>();
  s.graph.d_action = j.at("d_action").get<std::size_t>();
  s.graph.edges = j.at("edges").get<std::vector<CausalEdge>>();
  s.params = j.at("params").get<ModelParams>();
  s.regime_start = j.at("regime_start").get<Tick>();
}

void to_json(json& j, const Hypothesis& h) {
  j = std::visit(
      [](const auto& x) -> json {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, DeltaShift>) {
          return {{"kind", "delta_shift"}, {"new_delta", x.new_delta.delta}};
        } else if constexpr (std::is_same_v<X, CoefChange>) {
          return {{"kind", "coef_change"}, {"edge", x.edge}, {"new_coefficient", x.new_coefficient}};
        } else if constexpr (std::is_same_v<X, DelayChange>) {
          return {{"kind", "delay_change"}, {"edge", x.edge}, {"new_delay", x.new_delay}};
        } else if constexpr (std::is_same_v<X, EdgeRemove>) {
          return {{"kind", "edge_remove"}, {"edge", x.edge}};
        } else if constexpr (std::is_same_v<X, EdgeAdd>) {
          return {{"kind", "edge_add"},     {"source", x.source},
                  {"target", x.target},     {"delay", x.delay},
                  {"form", to_string(x.form)}, {"coefficient", x.coefficient}};
        } else {
          return {{"kind", "structural_break"}, {"since", x.since}, {"coefficients", x.coefficients}};
        }
      },
      h);
}

void from_json(const json& j, Hypothesis& h) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "delta_shift") {
    h = DeltaShift{Perturbation{j.at("new_delta").get<double>()}};
  } else if (kind == "coef_change") {
    h = CoefChange{j.at("edge").get<std::size_t>(), j.at("new_coefficient").get<double>()};
  } else if (kind == "delay_change") {
    h = DelayChange{j.at("edge").get<std::size_t>(), j.at("new_delay").get<unsigned>()};
  } else if (kind == "edge_remove") {
    h = EdgeRemove{j.at("edge").get<std::size_t>()};
  } else if (kind == "edge_add") {
    h = EdgeAdd{j.at("source").get<VarRef>(), j.at("target").get<std::size_t>(),
                j.at("delay").get<unsigned>(), edge_form_from_string(j.at("form").get<std::string>()),
                j.at("coefficient").get<double>()};
  } else if (kind == "structural_break") {
    h = StructuralBreak{j.at("since").get<Tick>(), j.at("coefficients").get<std::vector<double>>()};
  } else {
    throw Error(ErrorKind::Parse, "unknown hypothesis kind '" + kind + "'");
  }
}

void to_json(json& j, const HypothesisScore& s) {
  j = json{{"hypothesis", s.hypothesis},
           {"score", s.score},
           {"log_lik", s.log_lik},
           {"holdout_mse", s.holdout_mse}};
}

void from_json(const json& j, HypothesisScore& s) {
  s.hypothesis = j.at("hypothesis").get<Hypothesis>();
  s.score = j.at("score").get<double>();
  s.log_lik = j.at("log_lik").get<double>();
  s.holdout_mse = j.at("holdout_mse").get<double>();
}

void to_json(json& j, const ReflectReport& r) {
  j = json{{"triggered", r.triggered},
           {"epsilon", r.epsilon},
           {"candidates", r.candidates},
           {"accepted", r.accepted}};
}

void from_json(const json& j, ReflectReport& r) {
  r.triggered = j.at("triggered").get<bool>();
  r.epsilon = j.at("epsilon").get<PredictionError>();
  r.candidates = j.at("candidates").get<std::vector<HypothesisScore>>();
  r.accepted = j.at("accepted").get<std::vector<Hypothesis>>();
}

void to_json(json& j, const FitEvent& f) { j = json{{"status", f.status}, {"message", f.message}}; }

void from_json(const json& j, FitEvent& f) {
  f.status = j.at("status").get<std::string>();
  f.message = j.at("message").get<std::string>();
}

void to_json(json& j, const TraceRecord& r) {
  j = json{{"tick", r.tick},
           {"state", r.state},
           {"action", r.action},
           {"true_delta", r.true_delta.delta},
           {"delta_hat", r.delta_hat.delta},
           {"prediction", r.prediction},
           {"observed", r.observed},
           {"error", r.error},
           {"model_digest", r.model_digest}};
  if (r.reflect_report) j["reflect_report"] = *r.reflect_report;
  if (r.fit) j["fit"] = *r.fit;
  if (r.model_snapshot) j["model_snapshot"] = *r.model_snapshot;
}

void from_json(const json& j, TraceRecord& r) {
  r.tick = j.at("tick").get<Tick>();
  r.state = j.at("state").get<StateVec>();
  r.action = j.at("action").get<ActionVec>();
  r.true_delta = Perturbation{j.at("true_delta").get<double>()};
  r.delta_hat = Perturbation{j.at("delta_hat").get<double>()};
  r.prediction = j.at("prediction").get<Prediction>();
  r.observed = j.at("observed").get<StateVec>();
  r.error = j.at("error").get<PredictionError>();
  r.model_digest = j.at("model_digest").get<std::string>();
  r.reflect_report.reset();
  r.fit.reset();
  r.model_snapshot.reset();
  if (j.contains("reflect_report")) r.reflect_report = j.at("reflect_report").get<ReflectReport>();
  if (j.contains("fit")) r.fit = j.at("fit").get<FitEvent>();
  if (j.contains("model_snapshot")) r.model_snapshot = j.at("model_snapshot").get<ModelSnapshot>();
}

// ---------------------------------------------------------------------------
// scenarios

namespace {

/// Reads an object field by field and rejects keys nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) fail("must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& at(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) fail("missing required key '" + key + "'");
    return j_.at(key);
  }

  template <class T>
  T get(const std::string& key) {
    const json& v = at(key);
    try {
      return v.get<T>();
    } catch (const json::exception& e) {
      fail("key '" + key + "': " + e.what());
    }
  }

  template <class T>
  T get_or(const std::string& key, T fallback) {
    if (!j_.contains(key)) {
      used_.insert(key);
      return fallback;
    }
    return get<T>(key);
  }

  void finish() const {
    for (const auto& [key, _] : j_.items()) {
      if (!used_.count(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Configuration, where_ + ": " + what);
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

json process_to_json(const PerturbationProcess& p) {
  return std::visit(
      [](const auto& x) -> json {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, NoPerturbation>) {
          return {{"kind", "none"}};
        } else if constexpr (std::is_same_v<X, GaussianWalk>) {
          return {{"kind", "gaussian_walk"}, {"sigma_delta", x.sigma_delta}};
        } else {
          return {{"kind", "spike"}, {"prob", x.prob}, {"magnitude", x.magnitude}};
        }
      },
      p);
}

PerturbationProcess process_from_json(const json& j) {
  ObjectReader r(j, "perturbation");
  const auto kind = r.get<std::string>("kind");
  PerturbationProcess out;
  if (kind == "none") {
    out = NoPerturbation{};
  } else if (kind == "gaussian_walk") {
    out = GaussianWalk{r.get<double>("sigma_delta")};
  } else if (kind == "spike") {
    out = Spike{r.get<double>("prob"), r.get<double>("magnitude")};
  } else {
    r.fail("unknown kind '" + kind + "'");
  }
  r.finish();
  return out;
}

json actions_to_json(const std::vector<ActionVec>& actions) {
  json a = json::array();
  for (const auto& v : actions) a.push_back(v);
  return a;
}

json policy_to_json(const Policy& p) {
  return std::visit(
      [](const auto& x) -> json {
        using X = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<X, RandomPolicy>) {
          return {{"kind", "random"}, {"lo", x.lo}, {"hi", x.hi}};
        } else if constexpr (std::is_same_v<X, CyclicPolicy>) {
          return {{"kind", "cyclic"}, {"actions", actions_to_json(x.actions)}};
        } else if constexpr (std::is_same_v<X, ProbePolicy>) {
          return {{"kind", "probe"}, {"magnitude", x.magnitude}};
        } else {
          return {{"kind", "scripted"}, {"actions", actions_to_json(x.actions)}};
        }
      },
      p);
}

Policy policy_from_json(const json& j) {
  ObjectReader r(j, "policy");
  const auto kind = r.get<std::string>("kind");
  Policy out;
  if (kind == "random") {
    out = RandomPolicy{r.get_or<double>("lo", -1.0), r.get_or<double>("hi", 1.0)};
  } else if (kind == "cyclic") {
    out = CyclicPolicy{r.get<std::vector<ActionVec>>("actions")};
  } else if (kind == "probe") {
    out = ProbePolicy{r.get_or<double>("magnitude", 1.0)};
  } else if (kind == "scripted") {
    out = ScriptedPolicy{r.get<std::vector<ActionVec>>("actions")};
  } else {
    r.fail("unknown kind '" + kind + "'");
  }
  r.finish();
  return out;
}

}  // namespace

json graph_edges_to_json(const CausalGraph& g) { return g.edges; }

CausalGraph graph_from_json(const json& edges, std::size_t d_state, std::size_t d_action) {
  if (!edges.is_array()) throw Error(ErrorKind::Configuration, "edges must be an array");
  CausalGraph g{d_state, d_action, {}};
  for (std::size_t i = 0; i < edges.size(); ++i) {
    try {
      g.edges.push_back(edges[i].get<CausalEdge>());
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Configuration, "edge " + std::to_string(i) + ": " + e.what());
    }
  }
  return g;
}

json scenario_to_json(const ScenarioConfig& c) {
  json breaks = json::array();
  for (const auto& b : c.breaks) {
    breaks.push_back(json{{"at_tick", b.at_tick}, {"edges", graph_edges_to_json(b.graph)}});
  }
  const auto& a = c.agent;
  json agent{{"initial_graph", graph_edges_to_json(a.initial_graph)},
             {"initial_delta_hat", a.initial_delta_hat},
             {"tau", a.tau},
             {"fit_window", a.fit_window},
             {"history_capacity", a.history_capacity},
             {"holdout", a.holdout},
             {"budget", a.budget},
             {"max_accept", a.max_accept},
             {"fit_every", a.fit_every},
             {"sigma_lik", a.sigma_lik},
             {"rho", a.rho},
             {"k_max", a.k_max},
             {"delta_decay", a.delta_decay}};
  return json{{"name", c.name},
              {"description", c.description},
              {"d_state", c.d_state},
              {"d_action", c.d_action},
              {"initial_state", c.initial_state},
              {"graph", graph_edges_to_json(c.initial_graph)},
              {"breaks", breaks},
              {"perturbation", process_to_json(c.perturbation)},
              {"noise_sigma", c.noise_sigma},
              {"delta_max", c.delta_max},
              {"tick_label", c.tick_label},
              {"state_labels", c.state_labels},
              {"action_labels", c.action_labels},
              {"perturbation_label", c.perturbation_label},
              {"policy", policy_to_json(c.policy)},
              {"agent", agent}};
}

ScenarioConfig scenario_from_json(const json& j) {
  ObjectReader r(j, "scenario");
  ScenarioConfig c;
  c.name = r.get_or<std::string>("name", "unnamed");
  c.description = r.get_or<std::string>("description", "");
  c.d_state = r.get<std::size_t>("d_state");
  c.d_action = r.get<std::size_t>("d_action");
  if (c.d_state == 0) r.fail("d_state must be >= 1");
  c.initial_state = r.get_or<StateVec>("initial_state", StateVec(std::vector<double>(c.d_state, 0.0)));
  c.initial_graph = graph_from_json(r.get_or<json>("graph", json::array()), c.d_state, c.d_action);

  const json breaks = r.get_or<json>("breaks", json::array());
  if (!breaks.is_array()) r.fail("breaks must be an array");
  for (std::size_t i = 0; i < breaks.size(); ++i) {
    ObjectReader b(breaks[i], "breaks[" + std::to_string(i) + "]");
    ScheduledBreak sb;
    sb.at_tick = b.get<Tick>("at_tick");
    sb.graph = graph_from_json(b.at("edges"), c.d_state, c.d_action);
    b.finish();
    c.breaks.push_back(std::move(sb));
  }

  c.perturbation = r.has("perturbation") ? process_from_json(r.at("perturbation"))
                                         : PerturbationProcess{NoPerturbation{}};
  c.noise_sigma = r.get_or<double>("noise_sigma", 0.0);
  c.delta_max = r.get_or<double>("delta_max", kDefaultDeltaMax);
  c.tick_label = r.get_or<std::string>("tick_label", "1 tick");
  c.state_labels = r.get_or<std::vector<std::string>>("state_labels", {});
  c.action_labels = r.get_or<std::vector<std::string>>("action_labels", {});
  c.perturbation_label = r.get_or<std::string>("perturbation_label", "");
  c.policy = r.has("policy") ? policy_from_json(r.at("policy")) : Policy{RandomPolicy{}};

  AgentParams a;
  a.initial_graph = c.initial_graph;
  a.tau = default_tau(c.noise_sigma);
  if (r.has("agent")) {
    ObjectReader ar(r.at("agent"), "agent");
    if (ar.has("initial_graph")) {
      a.initial_graph = graph_from_json(ar.at("initial_graph"), c.d_state, c.d_action);
    }
    a.initial_delta_hat = ar.get_or<double>("initial_delta_hat", a.initial_delta_hat);
    a.tau = ar.get_or<double>("tau", a.tau);
    a.fit_window = ar.get_or<std::size_t>("fit_window", a.fit_window);
    a.history_capacity = ar.get_or<std::size_t>("history_capacity", a.history_capacity);
    a.holdout = ar.get_or<std::size_t>("holdout", a.holdout);
    a.budget = ar.get_or<std::size_t>("budget", a.budget);
    a.max_accept = ar.get_or<std::size_t>("max_accept", a.max_accept);
    a.fit_every = ar.get_or<std::size_t>("fit_every", a.fit_every);
    a.sigma_lik = ar.get_or<double>("sigma_lik", a.sigma_lik);
    a.rho = ar.get_or<double>("rho", a.rho);
    a.k_max = ar.get_or<unsigned>("k_max", a.k_max);
    a.delta_decay = ar.get_or<double>("delta_decay", a.delta_decay);
    ar.finish();
  }
  c.agent = std::move(a);
  r.finish();
  validate(c);
  return c;
}

std::string scenario_digest(const ScenarioConfig& c) {
  return hex64(fnv1a64(scenario_to_json(c).dump()));
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::string text;
  if (std::filesystem::exists(path)) {
    text = read_file(path);
  } else {
    std::string name = path.filename().string();
    if (const auto dot = name.find('.'); dot != std::string::npos) name = name.substr(0, dot);
    const auto names = bundled_scenario_names();
    if (path.has_parent_path() || std::find(names.begin(), names.end(), name) == names.end()) {
      throw Error(ErrorKind::Configuration, "scenario file not found: " + path.string());
    }
    text = bundled_scenario_text(name);
  }
  json j;
  try {
    j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::Parse, path.string() + ":" + std::to_string(line) + ":" +
                                      std::to_string(column) + ": " + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const ScenarioConfig& c, const std::filesystem::path& path) {
  write_file_atomic(path, scenario_to_json(c).dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// traces

json header_to_json(const TraceHeader& h) {
  return json{{"type", "header"},
              {"artifact_version", h.artifact_version},
              {"rng", h.rng},
              {"scenario_digest", h.scenario_digest},
              {"seed", h.seed},
              {"length", h.length},
              {"reflect_enabled", h.reflect_enabled},
              {"scenario", scenario_to_json(h.scenario)}};
}

TraceHeader header_from_json(const json& j) {
  if (!j.is_object() || j.value("type", "") != "header") {
    throw Error(ErrorKind::Parse, "trace line 1 is not a header");
  }
  TraceHeader h;
  h.artifact_version = j.at("artifact_version").get<std::string>();
  h.rng = j.at("rng").get<std::string>();
  h.scenario_digest = j.at("scenario_digest").get<std::string>();
  h.seed = j.at("seed").get<std::uint64_t>();
  h.length = j.at("length").get<std::size_t>();
  h.reflect_enabled = j.at("reflect_enabled").get<bool>();
  h.scenario = scenario_from_json(j.at("scenario"));
  return h;
}

std::string trace_to_jsonl(const Trace& t) {
  std::string out = header_to_json(t.header).dump();
  out += '\n';
  for (const auto& r : t.records) {
    out += json(r).dump();
    out += '\n';
  }
  return out;
}

Trace trace_from_jsonl(std::string_view text) {
  Trace t;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (!have_header) {
        t.header = header_from_json(j);
        have_header = true;
      } else if (j.value("type", "") == "annotation") {
        continue;
      } else {
        t.records.push_back(j.get<TraceRecord>());
      }
    } catch (const json::exception& e) {
      throw Error(ErrorKind::Parse, "trace line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::Parse, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw Error(ErrorKind::Parse, "trace has no header line");
  return t;
}

void write_trace(const Trace& t, const std::filesystem::path& path) {
  write_file_atomic(path, trace_to_jsonl(t));
}

Trace read_trace(const std::filesystem::path& path) { return trace_from_jsonl(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  const auto tmp = std::filesystem::path(path.string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Input, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::Input, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dyncausal
