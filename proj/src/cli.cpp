#include "dyncausal/cli.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "dyncausal/agent.hpp"
#include "dyncausal/eval.hpp"
#include "dyncausal/explain.hpp"
#include "dyncausal/serialize.hpp"

namespace dyncausal {

namespace {

struct RunArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t length = 100;
  bool no_reflect = false;
  std::string trace;
};

struct EvaluateArgs {
  std::vector<std::string> traces;
  std::string scenario;
  std::string out;
  std::string table;
};

struct ExplainArgs {
  std::string trace;
  Tick tick = 0;
  std::optional<double> counterfactual_delta;
  bool reflection = false;
  bool prompt = false;
  bool llm = false;
  bool annotate = false;
};

struct ReplayArgs {
  std::string trace;
  std::string scenario;
};

struct SweepArgs {
  std::string scenario;
  std::string seeds = "0..9";
  std::size_t length = 400;
  std::string out_dir;
  unsigned jobs = 0;
};

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const auto v = std::stoull(s);
      return {v, v};
    }
    const auto lo = std::stoull(s.substr(0, dots));
    const auto hi = std::stoull(s.substr(dots + 2));
    if (hi < lo) throw Error(ErrorKind::Input, "seed range " + s + " is empty");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Input, "seed range must look like A..B, got '" + s + "'");
  }
}

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file_atomic(path, text);
  }
}

std::string first_recovery(const EvalReport& r) {
  if (r.recovery.empty()) return "-";
  const auto& t = r.recovery.front().ticks;
  return t ? std::to_string(*t) : "not_recovered";
}

int cmd_run(const RunArgs& a, std::ostream& out) {
  const ScenarioConfig sc = load_scenario(a.scenario);
  if (a.length == 0) throw Error(ErrorKind::Input, "--length must be at least 1");
  const Trace t = run_episode(sc, a.seed, a.length, !a.no_reflect);
  std::size_t triggers = 0;
  std::size_t accepted = 0;
  for (const auto& r : t.records) {
    if (r.reflect_report && r.reflect_report->triggered) ++triggers;
    if (r.reflect_report) accepted += r.reflect_report->accepted.size();
  }
  if (!a.trace.empty()) write_trace(t, a.trace);
  out << "scenario " << sc.name << " seed " << a.seed << ": " << t.records.size() << " ticks, "
      << triggers << " reflections, " << accepted << " accepted hypotheses";
  if (!a.trace.empty()) out << ", trace " << a.trace;
  out << '\n';
  return 0;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const ScenarioConfig sc = load_scenario(a.scenario);
  if (a.traces.size() == 1) {
    const Trace t = read_trace(a.traces[0]);
    const EvalReport r = evaluate(t, sc);
    emit(a.out, report_to_json(r).dump(2) + "\n", out);
    if (!a.table.empty()) write_file_atomic(a.table, report_table(r, t));
    return 0;
  }
  if (a.traces.size() != 2) throw Error(ErrorKind::Input, "evaluate takes one trace, or a reflect and a baseline trace");
  const Trace refl = read_trace(a.traces[0]);
  const Trace base = read_trace(a.traces[1]);
  const Comparison c = compare(refl, base, sc);
  emit(a.out, comparison_to_json(c).dump(2) + "\n", out);
  if (!a.table.empty()) write_file_atomic(a.table, comparison_table(c));
  return 0;
}

int cmd_explain(const ExplainArgs& a, std::ostream& out, std::ostream& err) {
  const Trace t = read_trace(a.trace);
  if (a.tick >= t.records.size()) {
    throw Error(ErrorKind::Input, "--tick " + std::to_string(a.tick) + " is outside the trace (" +
                                      std::to_string(t.records.size()) + " records)");
  }
  const TraceRecord& rec = t.records[a.tick];
  if (a.prompt) {
    out << flatten(render_prompt(rec));
    return 0;
  }
  const CausalModel m = model_at_tick(t, a.tick);
  Explanation ex;
  if (a.counterfactual_delta) {
    ex = explain_counterfactual(rec, m, Perturbation{*a.counterfactual_delta});
  } else if (a.reflection) {
    const ReflectReport none{false, rec.error, {}, {}, {}};
    ex = explain_reflection(rec, rec.reflect_report ? *rec.reflect_report : none, t.header.scenario.agent.tau);
  } else {
    ex = explain_transition(rec, m);
  }

  Narration n{ex.text, "template", true};
  if (a.llm) n = narrate(render_prompt(rec), ex, llm_endpoint_from_env());
  out << n.text << '\n';
  if (!n.verified) err << "note: " << n.backend << " output is unverified\n";

  if (a.annotate) {
    const nlohmann::json line{{"type", "annotation"}, {"tick", rec.tick},       {"kind", to_string(ex.kind)},
                              {"backend", n.backend}, {"verified", n.verified}, {"text", n.text}};
    std::string text = read_file(a.trace);
    if (!text.empty() && text.back() != '\n') text += '\n';
    write_file_atomic(a.trace, text + line.dump() + "\n");
  }
  return 0;
}

int cmd_replay(const ReplayArgs& a, std::ostream& out) {
  const Trace t = read_trace(a.trace);
  const ScenarioConfig sc = a.scenario.empty() ? t.header.scenario : load_scenario(a.scenario);
  replay(t, sc);
  out << "replay ok: " << t.records.size() << " records match bit-exactly\n";
  return 0;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const ScenarioConfig sc = load_scenario(a.scenario);
  const auto [lo, hi] = parse_seed_range(a.seeds);
  if (a.length == 0) throw Error(ErrorKind::Input, "--length must be at least 1");
  if (!a.out_dir.empty()) std::filesystem::create_directories(a.out_dir);

  const std::size_t n = static_cast<std::size_t>(hi - lo + 1);
  std::vector<std::optional<Comparison>> results(n);
  std::vector<std::string> failures(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        const std::uint64_t seed = lo + i;
        const Trace r = run_episode(sc, seed, a.length, true);
        const Trace b = run_episode(sc, seed, a.length, false);
        results[i] = compare(r, b, sc);
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  for (std::size_t i = 0; i < n; ++i) {
    if (!failures[i].empty()) throw Error(ErrorKind::Input, "seed " + std::to_string(lo + i) + ": " + failures[i]);
  }

  out << "seed\trecovery_reflect\trecovery_baseline\tfinal_shd_reflect\tfinal_shd_baseline\tdelta_rmse_post_break\n";
  for (std::size_t i = 0; i < n; ++i) {
    const Comparison& c = *results[i];
    out << lo + i << '\t' << first_recovery(c.reflect) << '\t' << first_recovery(c.baseline) << '\t' << c.reflect.shd_series.back() << '\t'
        << c.baseline.shd_series.back() << '\t' << c.delta_rmse_post_break << '\n';
    if (!a.out_dir.empty()) {
      const auto path = std::filesystem::path(a.out_dir) / ("seed-" + std::to_string(lo + i) + ".json");
      write_file_atomic(path, comparison_to_json(c).dump(2) + "\n");
    }
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulate worlds with changing causal laws and an agent that revises its causal model"};
  app.name("dyncausal");
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one episode");
  run_cmd->add_option("scenario", run.scenario, "Scenario file or bundled name")->required();
  run_cmd->add_option("--seed", run.seed, "Seed for every random stream");
  run_cmd->add_option("--length", run.length, "Number of ticks");
  run_cmd->add_flag("--no-reflect", run.no_reflect, "Fit-only baseline agent");
  run_cmd->add_option("--trace", run.trace, "Write the trace (JSON Lines) here");

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Metrics for one trace, or a reflect/baseline pair");
  ev_cmd->add_option("traces", ev.traces, "Trace file(s)")->required()->expected(1, 2);
  ev_cmd->add_option("--scenario", ev.scenario, "Scenario the traces were produced from")->required();
  ev_cmd->add_option("--out", ev.out, "Report JSON path (default stdout)");
  ev_cmd->add_option("--table", ev.table, "Per-tick tab-separated table path");

  ExplainArgs ex;
  auto* ex_cmd = app.add_subcommand("explain", "Explain one trace record");
  ex_cmd->add_option("trace", ex.trace, "Trace file")->required();
  ex_cmd->add_option("--tick", ex.tick, "Record to explain")->required();
  auto* cf_opt = ex_cmd->add_option("--counterfactual-delta", ex.counterfactual_delta,
                                    "Counterfactual perturbation value");
  ex_cmd->add_flag("--reflection", ex.reflection, "Summarize the reflection at this tick")->excludes(cf_opt);
  ex_cmd->add_flag("--prompt", ex.prompt, "Print the language-model prompt bundle instead");
  ex_cmd->add_flag("--llm", ex.llm, "Narrate through EXPLAIN_LLM_URL when it is set");
  ex_cmd->add_flag("--annotate", ex.annotate, "Append the explanation to the trace as an annotation");

  ReplayArgs rp;
  auto* rp_cmd = app.add_subcommand("replay", "Re-run a trace and verify it bit-exactly");
  rp_cmd->add_option("trace", rp.trace, "Trace file")->required();
  rp_cmd->add_option("--scenario", rp.scenario, "Scenario to replay against (default: the one in the trace)");

  SweepArgs sw;
  auto* sw_cmd = app.add_subcommand("sweep", "Paired reflect/baseline runs over a seed range");
  sw_cmd->add_option("scenario", sw.scenario, "Scenario file or bundled name")->required();
  sw_cmd->add_option("--seeds", sw.seeds, "Inclusive range A..B")->check([](const std::string& v) {
    try {
      parse_seed_range(v);
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  });
  sw_cmd->add_option("--length", sw.length, "Number of ticks");
  sw_cmd->add_option("--out-dir", sw.out_dir, "Write one comparison report per seed here");
  sw_cmd->add_option("--jobs", sw.jobs, "Worker threads (default: hardware concurrency)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 1;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run, out);
    if (ev_cmd->parsed()) return cmd_evaluate(ev, out);
    if (ex_cmd->parsed()) return cmd_explain(ex, out, err);
    if (rp_cmd->parsed()) return cmd_replay(rp, out);
    if (sw_cmd->parsed()) return cmd_sweep(sw, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace dyncausal
