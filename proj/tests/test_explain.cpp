#include <cmath>
#include <numbers>
#include <thread>

#include "doctest.h"
#include "dyncausal/explain.hpp"
#include "dyncausal/serialize.hpp"
#include "httplib.h"
#include "support/fixtures.hpp"

using namespace dyncausal;

namespace {

TraceRecord record_for(const CausalModel& m, StateVec s, ActionVec a, Tick t = 0) {
  TraceRecord r;
  r.tick = t;
  r.state = std::move(s);
  r.action = std::move(a);
  r.delta_hat = m.delta_hat;
  r.prediction = predict(m, CausalTuple{r.state, r.action, t, m.delta_hat});
  r.observed = r.prediction.next();
  r.error = loss(r.prediction.next(), r.observed);
  return r;
}

}  // namespace

TEST_CASE("zero-edge model has nothing to attribute") {
  const auto m = make_model(CausalGraph{1, 1, {}}, {});
  const auto ex = explain_transition(record_for(m, StateVec{5}, ActionVec{1}), m);
  CHECK(ex.text.find("no modeled causal effect") != std::string::npos);
  CHECK(ex.grounding.at("contributions").empty());
}

TEST_CASE("single-edge causal account") {
  const auto m = make_model(fixture::one_edge(3.0), {});
  const auto ex = explain_transition(record_for(m, StateVec{2}, ActionVec{1}), m);
  CHECK(ex.text ==
        "At tick 0, action [1] is predicted to change state dimension 0 by 3 after a delay of 1 ticks, "
        "scaled by perturbation factor e^-0 = 1.");
  CHECK(ex.grounding.at("contributions").size() == 1);
  CHECK(ex.grounding.at("contributions")[0].at("effect").get<double>() == 3.0);
}

TEST_CASE("causal account under a perturbation") {
  const auto m = make_model(fixture::one_edge(3.0), {}, Perturbation{std::numbers::ln2});
  const auto ex = explain_transition(record_for(m, StateVec{2}, ActionVec{1}), m);
  CHECK(ex.text.find("by 1.5 after a delay of 1 ticks") != std::string::npos);
  CHECK(ex.text.find("e^-0.693147 = 0.5.") != std::string::npos);

  const auto amp = make_model(fixture::one_edge(3.0), {}, Perturbation{-std::numbers::ln2});
  CHECK(explain_transition(record_for(amp, StateVec{2}, ActionVec{1}), amp).text.find("e^-(-0.693147) = 2.") !=
        std::string::npos);
}

TEST_CASE("counterfactual texts") {
  const auto m = make_model(fixture::one_edge(3.0), {}, Perturbation{std::numbers::ln2});
  const auto r = record_for(m, StateVec{2}, ActionVec{1});
  const auto ex = explain_counterfactual(r, m, Perturbation{0});
  CHECK(ex.text.rfind("Had perturbation δ=0.693147 not occurred", 0) == 0);
  CHECK(ex.text.find("state [5] instead of [3.5]") != std::string::npos);
  CHECK(ex.grounding.at("counterfactual").get<StateVec>() == counterfactual(m, CausalTuple{r.state, r.action, 0, m.delta_hat}, Perturbation{0}).settled());

  const auto plain = make_model(fixture::one_edge(3.0), {});
  const auto same = explain_counterfactual(record_for(plain, StateVec{2}, ActionVec{1}), plain, Perturbation{0});
  CHECK(same.text.find("predicts no difference") != std::string::npos);
  CHECK(same.text.find("state [5]") != std::string::npos);

  const auto other = explain_counterfactual(r, m, Perturbation{-std::numbers::ln2});
  CHECK(other.text.find("been δ=-0.693147 instead") != std::string::npos);
  CHECK(other.text.find("state [8] instead of [3.5]") != std::string::npos);
}

TEST_CASE("reflection summary lists accepted hypotheses with scores") {
  TraceRecord r;
  r.tick = 12;
  ReflectReport rep;
  rep.triggered = true;
  rep.epsilon = PredictionError{2.5, {2.5}};
  rep.candidates = {{CoefChange{0, 3.0}, 4.0, 0, 0}, {EdgeRemove{1}, 1.0, 0, 0}, {DelayChange{0, 2}, 0.5, 0, 0}};
  rep.accepted = {CoefChange{0, 3.0}, DelayChange{0, 2}};
  const auto ex = explain_reflection(r, rep, 0.5);
  CHECK(ex.text.rfind("At tick 12, prediction error 2.5 exceeded threshold 0.5; 3 candidate hypotheses were scored and 2 accepted.", 0) == 0);
  CHECK(ex.text.find(describe(rep.accepted[0]) + " with score 4.") != std::string::npos);
  CHECK(ex.text.find(describe(rep.accepted[1]) + " with score 0.5.") != std::string::npos);
  CHECK(ex.grounding.at("accepted").size() == 2);
}

TEST_CASE("prompt bundles are deterministic and carry the facts") {
  const auto sc = load_scenario("break");
  const auto t = run_episode(sc, 0, 260, true);
  const TraceRecord* with_two = nullptr;
  for (const auto& r : t.records)
    if (r.reflect_report && r.reflect_report->accepted.size() == 2) with_two = &r;
  const auto& rec = t.records[100];
  CHECK(render_prompt(rec) == render_prompt(rec));
  CHECK(flatten(render_prompt(rec)) == flatten(render_prompt(rec)));
  const auto facts = render_prompt(rec).facts;
  CHECK(facts.at("tuple").get<CausalTuple>() == CausalTuple{rec.state, rec.action, rec.tick, rec.delta_hat});
  CHECK(facts.at("prediction").get<Prediction>() == rec.prediction);
  CHECK(facts.at("observed").get<StateVec>() == rec.observed);

  ReflectReport rep;
  rep.triggered = true;
  rep.epsilon = rec.error;
  rep.candidates = {{CoefChange{0, 3.0}, 4.0, -1, 0}, {DelayChange{1, 3}, 2.0, -2, 0}};
  rep.accepted = {CoefChange{0, 3.0}, DelayChange{1, 3}};
  const auto f2 = render_prompt(rec, rep).facts;
  CHECK(f2.at("reflect_report").at("accepted").size() == 2);
  CHECK(f2.at("reflect_report").at("candidates")[0].at("score").get<double>() == 4.0);
  CHECK(f2.at("reflect_report").at("candidates")[1].at("score").get<double>() == 2.0);
  if (with_two) CHECK(render_prompt(*with_two).facts.at("reflect_report").at("accepted").size() == 2);
}

TEST_CASE("model at tick matches the live runner") {
  const auto sc = load_scenario("demo");
  const auto t = run_episode(sc, 2, 80, true);
  EpisodeRunner live(sc, 2, true);
  for (int i = 0; i < 50; ++i) live.step();
  CHECK(model_at_tick(t, 50) == live.model());
  CHECK_THROWS_AS(model_at_tick(t, 80), Error);
}

TEST_CASE("narration falls back to the template without an endpoint") {
  const auto m = make_model(fixture::one_edge(3.0), {});
  const auto r = record_for(m, StateVec{2}, ActionVec{1});
  const auto ex = explain_transition(r, m);
  const auto n = narrate(render_prompt(r), ex, std::nullopt);
  CHECK(n.text == ex.text);
  CHECK(n.backend == "template");
  CHECK(n.verified);
  CHECK_THROWS_AS(narrate(render_prompt(r), ex, LlmEndpoint{"https://example.invalid/v1", ""}), Error);
}

TEST_CASE("narration through an http endpoint is marked unverified") {
  httplib::Server srv;
  std::string seen_auth;
  nlohmann::json seen_body;
  srv.Post("/narrate", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = nlohmann::json::parse(req.body);
    res.set_content(R"({"text": "the meeting load went up"})", "application/json");
  });
  const int port = srv.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread th([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();

  const auto m = make_model(fixture::one_edge(3.0), {});
  const auto r = record_for(m, StateVec{2}, ActionVec{1});
  const auto bundle = render_prompt(r);
  const auto n = narrate(bundle, explain_transition(r, m),
                         LlmEndpoint{"http://127.0.0.1:" + std::to_string(port) + "/narrate", "k123"}, 64);
  srv.stop();
  th.join();

  CHECK(n.text == "the meeting load went up");
  CHECK(n.backend == "llm");
  CHECK_FALSE(n.verified);
  CHECK(seen_auth == "Bearer k123");
  CHECK(seen_body.at("prompt").get<std::string>() == flatten(bundle));
  CHECK(seen_body.at("max_tokens").get<int>() == 64);
}
