#include <cmath>

#include "doctest.h"
#include "dyncausal/eval.hpp"
#include "dyncausal/serialize.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"

using namespace dyncausal;

namespace {

CausalGraph g2(std::vector<CausalEdge> edges) { return CausalGraph{2, 2, std::move(edges)}; }
CausalEdge edge(std::size_t a, std::size_t t, double c, unsigned d) {
  return CausalEdge{action_var(a), t, c, d, EdgeForm::Linear};
}

}  // namespace

TEST_CASE("structural Hamming distance examples") {
  const auto base = g2({edge(0, 0, 1.0, 1)});
  CHECK(shd(base, base) == 0);
  CHECK(shd(base, g2({edge(0, 0, 1.0, 1), edge(1, 1, 1.0, 1)})) == 1);
  CHECK(shd(base, g2({edge(0, 0, 2.0, 2)})) == 1);
  CHECK(shd(base, g2({edge(0, 0, -1.0, 1)})) == 1);
  // magnitude alone is not structure
  CHECK(shd(base, g2({edge(0, 0, 7.0, 1)})) == 0);
  CHECK(shd(base, g2({})) == 1);
  try {
    shd(base, CausalGraph{3, 2, {}});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
  }
}

TEST_CASE("structural Hamming distance is a metric on random graphs") {
  CounterRng rng(21, 21);
  gen::GraphShape shape;
  for (int i = 0; i < 300; ++i) {
    CausalGraph g[3];
    for (auto& x : g) x = gen::random_graph(rng, 3, 2, gen::below(rng, 7), shape);
    CHECK(shd(g[0], g[0]) == 0);
    CHECK(shd(g[0], g[1]) == shd(g[1], g[0]));
    CHECK(shd(g[0], g[2]) <= shd(g[0], g[1]) + shd(g[1], g[2]));
  }
}

TEST_CASE("recovery time examples") {
  const std::vector<double> series{5, 5, 0.5, 0.4};
  CHECK(recovery_time(series, 0, 1.0) == 2u);
  CHECK_FALSE(recovery_time(std::vector<double>{5, 5, 5}, 0, 1.0).has_value());
  CHECK(recovery_time(std::vector<double>{9, 0.5, 5}, 1, 1.0) == 0u);
  CHECK_FALSE(recovery_time(series, 10, 1.0).has_value());
}

TEST_CASE("rolling RMSE averages the trailing window") {
  std::vector<TraceRecord> recs(20);
  for (std::size_t i = 0; i < recs.size(); ++i) recs[i].error.epsilon = static_cast<double>(i);
  const auto r = rolling_rmse(recs, 4);
  REQUIRE(r.size() == 20);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == doctest::Approx(std::sqrt(0.5)));
  CHECK(r[10] == doctest::Approx(std::sqrt((7 + 8 + 9 + 10) / 4.0)));
}

TEST_CASE("a perfect agent scores zero everywhere") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto sc = gen::random_scenario(seed);
    const auto rep = evaluate(run_episode(sc, seed, 100, true), sc);
    CHECK(rep.shd_series.size() == 100);
    CHECK(rep.rmse_series.size() == 100);
    for (auto s : rep.shd_series) CHECK(s == 0);
    for (auto v : rep.rmse_series) CHECK(v <= 1e-10);
    CHECK(rep.reflection_stats.triggers == 0);
  }
}

TEST_CASE("evaluation refuses a trace from another scenario") {
  const auto t = run_episode(load_scenario("calm"), 0, 20, true);
  CHECK_THROWS_AS(evaluate(t, load_scenario("break")), Error);
}

TEST_CASE("comparing a trace with itself gives zero deltas") {
  const auto sc = load_scenario("break");
  const auto t = run_episode(sc, 3, 260, true);
  const auto c = compare(t, t, sc);
  CHECK(c.delta_rmse_post_break == 0.0);
  for (auto d : c.delta_shd) CHECK(d == 0);
  REQUIRE(c.delta_recovery.size() == 1);
  if (c.delta_recovery[0].reflect) CHECK(c.delta_recovery[0].difference == 0);
}

TEST_CASE("a baseline that has not recovered is reported as such") {
  const auto sc = load_scenario("break");
  bool seen = false;
  for (std::uint64_t seed = 0; seed < 5 && !seen; ++seed) {
    const auto a = run_episode(sc, seed, 245, true);
    const auto b = run_episode(sc, seed, 245, false);
    const auto c = compare(a, b, sc);
    const auto& d = c.delta_recovery.at(0);
    if (d.reflect && !d.baseline) {
      seen = true;
      CHECK_FALSE(d.difference.has_value());
      const auto j = comparison_to_json(c);
      CHECK(j.dump().find("not_recovered") != std::string::npos);
    }
  }
  CHECK(seen);
}

TEST_CASE("reflect ends with no more structural error than the baseline") {
  const auto sc = load_scenario("break");
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto c = compare(run_episode(sc, seed, 400, true), run_episode(sc, seed, 400, false), sc);
    CHECK(c.delta_shd.back() <= 0);
    CHECK(c.reflect.shd_series.back() == 0);
    CHECK(c.delta_rmse_post_break < 0.0);
  }
}

TEST_CASE("compare needs matching traces") {
  const auto sc = load_scenario("break");
  CHECK_THROWS_AS(compare(run_episode(sc, 1, 50, true), run_episode(sc, 2, 50, false), sc), Error);
  CHECK_THROWS_AS(compare(run_episode(sc, 1, 50, true), run_episode(sc, 1, 40, false), sc), Error);
}

TEST_CASE("metrics are unchanged by replay and serialization") {
  const auto sc = load_scenario("demo");
  const auto t = run_episode(sc, 9, 120, true);
  const auto r1 = report_to_json(evaluate(t, sc));
  const auto r2 = report_to_json(evaluate(trace_from_jsonl(trace_to_jsonl(replay(t, sc))), sc));
  CHECK(r1 == r2);
  CHECK(r1.at("rmse_series").size() == 120);
}

TEST_CASE("tables have one row per tick") {
  const auto sc = load_scenario("calm");
  const auto t = run_episode(sc, 0, 30, true);
  const auto table = report_table(evaluate(t, sc), t);
  CHECK(std::count(table.begin(), table.end(), '\n') == 31);
}
