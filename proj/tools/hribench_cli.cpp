// hribench: run scenarios, calibrate base speed, verify traces, host live sessions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hribench/bridge_server.hpp"
#include "hribench/error.hpp"
#include "hribench/kinematics.hpp"
#include "hribench/scenario.hpp"
#include "hribench/trace_io.hpp"

namespace fs = std::filesystem;
using namespace hribench;

namespace {

// Stable exit codes; documented in README.md.
enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kIo = 3,
  kParse = 4,
  kUnknownPolicy = 5,
  kScriptCoverage = 6,
  kInvalidConfig = 7,
  kReplayMismatch = 8,
  kBindFailure = 9,
  kInsufficientData = 10,
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io: return kIo;
    case ErrorKind::Parse: return kParse;
    case ErrorKind::UnknownPolicy: return kUnknownPolicy;
    case ErrorKind::ScriptCoverage: return kScriptCoverage;
    case ErrorKind::InvalidArgument: return kInvalidConfig;
    case ErrorKind::InsufficientData: return kInsufficientData;
  }
  return kInternal;
}

struct RunOptions {
  std::string scenario;
  std::string policy;
  std::int64_t dt_ms = 0;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
};

fs::path default_out_dir(const Scenario& s) {
  if (const char* env = std::getenv("HRIBENCH_OUT_DIR"); env != nullptr && *env != '\0') {
    return fs::path(env) / s.name;
  }
  return fs::path("hribench_out") / s.name;
}

template <typename Writer>
void write_artifact(const fs::path& path, std::span<const TraceRecord> trace, Writer writer) {
  std::ostringstream ss;
  writer(ss, trace);
  write_text_file(path, ss.str());
}

int cmd_run(const RunOptions& opt) {
  Scenario s = load_scenario(opt.scenario);
  if (!opt.policy.empty()) {
    const auto kind = parse_policy(opt.policy);
    if (!kind) throw Error(ErrorKind::UnknownPolicy, "unknown policy '" + opt.policy + "'");
    s.policy = *kind;
  }
  if (opt.dt_ms != 0) s.sim.dt_ms = opt.dt_ms;
  if (opt.seed) s.sim.seed = *opt.seed;
  s.validate();

  const RunResult result = s.run();
  const fs::path out = opt.out_dir.empty() ? default_out_dir(s) : fs::path(opt.out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out.string() + ": " + ec.message());

  write_artifact(out / "trace.jsonl", result.trace, write_jsonl);
  write_artifact(out / "trace.csv", result.trace, write_csv);
  write_artifact(out / "path.csv", result.trace, write_path_csv);
  write_artifact(out / "distance.csv", result.trace, write_distance_csv);
  write_artifact(out / "arm_flag.csv", result.trace, write_arm_flag_csv);

  nlohmann::ordered_json summary;
  summary["scenario"] = s.name;
  summary["policy"] = std::string(to_string(s.policy));
  summary["steps"] = result.trace.size();
  summary["params"] = to_json(MetricsParams::from(s.sim));
  summary["metrics"] = to_json(result.metrics);
  write_text_file(out / "metrics.json", summary.dump(2) + "\n");

  const SafetyMetrics& m = result.metrics;
  fmt::print("scenario {} ({}), {} steps of {} ms\n", s.name, to_string(s.policy),
             result.trace.size(), s.sim.dt_ms);
  fmt::print("  min distance      {}\n",
             m.min_distance ? fmt::format("{:.2f} cm", *m.min_distance) : std::string("n/a"));
  fmt::print("  unsafe dwell      {} ms\n", m.unsafe_dwell_ms);
  fmt::print("  missed detections {}\n", m.missed_detections);
  fmt::print("  contact events    {}\n", m.violations);
  fmt::print("artifacts in {}\n", out.string());
  return kOk;
}

int cmd_calibrate(const std::string& csv) {
  const auto samples = read_calibration_csv(csv);
  const double mean = calibrate_speed(samples);
  fmt::print("{:>4} {:>10} {:>10} {:>12}\n", "row", "dt_ms", "dd_cm", "dV_cm_per_ms");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    fmt::print("{:>4} {:>10} {:>10} {:>12.4f}\n", i + 1, samples[i].dt_ms, samples[i].dd_cm,
               samples[i].dd_cm / samples[i].dt_ms);
  }
  fmt::print("mean speed {:.4f} cm/ms (~= {:.2f})\n", mean, mean);
  return kOk;
}

int cmd_replay(const std::string& trace_path, std::string metrics_path) {
  if (metrics_path.empty()) metrics_path = (fs::path(trace_path).parent_path() / "metrics.json").string();
  const auto trace = read_jsonl(trace_path);
  nlohmann::json summary;
  try {
    summary = nlohmann::json::parse(read_text_file(metrics_path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::Parse, metrics_path + ": " + e.what());
  }
  if (!summary.contains("params") || !summary.contains("metrics")) {
    throw Error(ErrorKind::Parse, metrics_path + ": needs 'params' and 'metrics'");
  }
  const MetricsParams params = metrics_params_from_json(summary["params"]);
  const SafetyMetrics recorded = metrics_from_json(summary["metrics"]);
  const SafetyMetrics recomputed =
      trace.empty() ? SafetyMetrics{} : compute_metrics(trace, params);
  fmt::print("replayed {} records\n", trace.size());
  fmt::print("recorded   {}\n", to_json(recorded).dump());
  fmt::print("recomputed {}\n", to_json(recomputed).dump());
  if (!(recorded == recomputed)) {
    fmt::print(stderr, "metrics mismatch\n");
    return kReplayMismatch;
  }
  fmt::print("metrics match\n");
  return kOk;
}

int cmd_serve(const std::string& scenario_path, BridgeOptions options) {
  Scenario s = scenario_path.empty() ? blank_world() : load_scenario(scenario_path);
  s.sim.validate();
  options.handle_signals = true;
  BridgeServer server(std::move(s), options);
  try {
    server.listen();
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kBindFailure;
  }
  fmt::print("listening on {}:{}\n", options.bind_address, server.port());
  std::fflush(stdout);
  server.run();
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale human-robot interaction test bench"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file and write trace, metrics and plot data");
  run_cmd->add_option("scenario", run.scenario, "Scenario file (.toml or .json)")->required();
  run_cmd->add_option("--policy", run.policy, "Override the policy: alg1 | alg2");
  run_cmd->add_option("--dt", run.dt_ms, "Override the step length in ms")->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run.out_dir, "Output directory (default $HRIBENCH_OUT_DIR/<name> or hribench_out/<name>)");
  run_cmd->add_option("--seed", run.seed, "Seed for optional sensor noise");

  std::string csv;
  auto* cal_cmd = app.add_subcommand("calibrate", "Mean base speed from dt_ms,dd_cm samples");
  cal_cmd->add_option("csv", csv, "Calibration CSV")->required();

  std::string trace_path, metrics_path;
  auto* replay_cmd = app.add_subcommand("replay", "Recompute metrics from a trace and compare");
  replay_cmd->add_option("trace", trace_path, "trace.jsonl")->required();
  replay_cmd->add_option("--metrics", metrics_path, "metrics.json (default: next to the trace)");

  std::string serve_path;
  BridgeOptions bridge;
  auto* serve_cmd = app.add_subcommand("serve", "Host a live steering session");
  serve_cmd->add_option("scenario", serve_path, "Scenario file; omit for a blank world");
  serve_cmd->add_option("--port", bridge.port, "TCP port (0 picks a free one)");
  serve_cmd->add_option("--bind", bridge.bind_address, "Bind address");
  serve_cmd->add_option("--tick", bridge.tick_ms, "Wall-clock tick in ms (default: scenario dt)");
  serve_cmd->add_option("--max-speed", bridge.max_pedestrian_speed, "Max steer speed, cm/s");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*cal_cmd) return cmd_calibrate(csv);
    if (*replay_cmd) return cmd_replay(trace_path, metrics_path);
    if (*serve_cmd) return cmd_serve(serve_path, bridge);
  } catch (const Error& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    fmt::print(stderr, "internal error: {}\n", e.what());
    return kInternal;
  }
  return kUsage;
}
