#include "doctest.h"
#include "ehfs/io.hpp"

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

using namespace ehfs;
namespace fs = std::filesystem;

namespace {

// Scratch directory per process, wiped on first use.
const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "ehfs_io_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string put(const std::string& name, const std::string& content) {
  const fs::path p = scratch() / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

std::string minimal_config() {
  return R"({
    "scenario": {"kind": "NOP", "n": 3, "payload_bytes": 640, "seed": 5},
    "kappa": 0.5
  })";
}

std::string tiny_run_config(const std::string& extra_scenario = "") {
  return R"({
    "scenario": {"kind": "NOP", "n": 3, "payload_bytes": 320,
                 "slots_per_frame": 5, "seed": 11, "e0_mean": 0.05,
                 "e0_sigma": 0.0, "distance_min": 10, "distance_max": 60)" +
         extra_scenario + R"(},
    "kappa": 0.5,
    "energy": {"wpt": {"tau": 0}}
  })";
}

}  // namespace

TEST_CASE("minimal config gets every default applied and echoed") {
  const RunConfig cfg = parse_config(minimal_config());
  CHECK(cfg.scenario.slots_per_frame == 100);
  CHECK(cfg.energy.e_max == 50.0);
  CHECK(cfg.scenario.max_frames == 1000000);
  CHECK(cfg.scheduler == "ehfs");
  CHECK(cfg.channel.mode == ChannelConfig::Mode::Analytic);
  CHECK(cfg.energy.constants.e_td == doctest::Approx(1.67e-3));

  // The echo carries the effective values and parses back to the same
  // configuration.
  const std::string echo = config_to_json(cfg);
  const RunConfig again = parse_config(echo);
  CHECK(again.scenario.slots_per_frame == 100);
  CHECK(again.scenario.rng_seed == 5);
  CHECK(config_to_json(again) == echo);
}

TEST_CASE("config diagnostics name the offending key") {
  CHECK_THROWS_WITH_AS(parse_config("{\"kappa\": 0.5}"),
                       doctest::Contains("scenario"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"scenario": {"n": 1, "bogus": 2}, "kappa": 0.5})"),
      doctest::Contains("unknown key 'scenario.bogus'"),
      std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"scenario": {"kind": "NOP"}, "kappa": 0.5})"),
      doctest::Contains("missing required key 'scenario.n'"),
      std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"scenario": {"n": 1.5}, "kappa": 0.5})"),
      doctest::Contains("'scenario.n' must be an integer"),
      std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"scenario": {"n": 1}, "kappa": true})"),
      doctest::Contains("'kappa' must be a number"), std::invalid_argument);
  // The fairness domain excludes zero.
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"scenario": {"n": 1}, "kappa": 0.0})"),
      doctest::Contains("kappa must be in (0, 1]"), std::invalid_argument);
}

TEST_CASE("config rejects a missing trace file by path") {
  const std::string cfg = R"({
    "scenario": {"n": 2},
    "kappa": 0.5,
    "channel": {"mode": "trace", "trace": "/nonexistent/rssi.csv"}
  })";
  CHECK_THROWS_WITH_AS(parse_config(cfg),
                       doctest::Contains("/nonexistent/rssi.csv"),
                       std::runtime_error);
}

TEST_CASE("exactly one channel mode") {
  const std::string cfg = R"({
    "scenario": {"n": 2},
    "kappa": 0.5,
    "channel": {"mode": "analytic", "trace": "somewhere.csv"}
  })";
  CHECK_THROWS_WITH_AS(parse_config(cfg), doctest::Contains("analytic"),
                       std::invalid_argument);
}

TEST_CASE("rssi trace loader") {
  const std::string good =
      put("rssi_ok.csv", "node_id,frame,rssi_dbm\n1,1,-90\n1,3,-87\n2,1,-85\n");
  const RssiTrace trace = load_rssi_trace(good);
  CHECK(trace.samples.size() == 3);
  CHECK(trace.samples[1].rssi_dbm == doctest::Approx(-87.0));

  const std::string empty = put("rssi_empty.csv", "node_id,frame,rssi_dbm\n");
  CHECK_THROWS_WITH_AS(load_rssi_trace(empty),
                       doctest::Contains("no samples"), std::runtime_error);

  const std::string header = put("rssi_hdr.csv", "node,frame,rssi\n1,1,-90\n");
  CHECK_THROWS_WITH_AS(load_rssi_trace(header),
                       doctest::Contains("expected header"),
                       std::runtime_error);

  const std::string unordered = put(
      "rssi_order.csv", "node_id,frame,rssi_dbm\n1,5,-90\n1,2,-91\n");
  CHECK_THROWS_WITH_AS(load_rssi_trace(unordered),
                       doctest::Contains("non-decreasing"),
                       std::runtime_error);

  const std::string garbled =
      put("rssi_bad.csv", "node_id,frame,rssi_dbm\n1,1,-90\n1,x,-88\n");
  CHECK_THROWS_WITH_AS(load_rssi_trace(garbled), doctest::Contains("line 3"),
                       std::runtime_error);
}

TEST_CASE("solar trace and efficiency table loaders") {
  const std::string solar =
      put("solar.csv", "node_id,frame,power_mw\n1,1,5.5\n1,10,0\n");
  CHECK(load_solar_trace(solar).samples.size() == 2);

  const std::string negative =
      put("solar_neg.csv", "node_id,frame,power_mw\n1,1,-2\n");
  CHECK_THROWS_AS(load_solar_trace(negative), std::runtime_error);

  const std::string table = put("eff.csv",
                                "kind,key,received_mw\n"
                                "distance,0.2,8\ndistance,1.0,1\n"
                                "orientation,0,6\norientation,90,1.5\n");
  const EfficiencyTable t = load_efficiency_table(table);
  CHECK(t.distance_curve.size() == 2);
  CHECK(t.orientation_curve.size() == 2);

  const std::string bad_kind =
      put("eff_bad.csv", "kind,key,received_mw\nsideways,1,2\n");
  CHECK_THROWS_WITH_AS(load_efficiency_table(bad_kind),
                       doctest::Contains("sideways"), std::runtime_error);
}

TEST_CASE("run emits reconciling record and series files") {
  RunConfig cfg = parse_config(tiny_run_config());
  cfg.output.record_path = (scratch() / "out/record.json").string();
  cfg.output.series_path = (scratch() / "out/series.csv").string();
  const RunRecord record = run_config(cfg);
  emit_results(record, cfg);

  // Record JSON parses and reconciles with the CSV series.
  std::ifstream rec_in(cfg.output.record_path);
  REQUIRE(rec_in.good());
  nlohmann::json j = nlohmann::json::parse(rec_in);
  CHECK(j["metrics"]["total_received"].get<double>() ==
        doctest::Approx(record.metrics.total_received));
  CHECK(j["config"]["scenario"]["n"].get<int>() == 3);

  std::ifstream csv_in(cfg.output.series_path);
  std::string header;
  std::getline(csv_in, header);
  CHECK(header == "frame,gamma,live_nodes,fair_nodes,dead_nodes");
  int rows = 0;
  double gamma_sum = 0.0;
  for (std::string line; std::getline(csv_in, line);) {
    ++rows;
    gamma_sum += std::stod(line.substr(line.find(',') + 1));
  }
  CHECK(rows == record.frames_run);
  CHECK(gamma_sum == doctest::Approx(record.metrics.total_received));
}

TEST_CASE("re-emitting an identical record is byte-identical") {
  const RunConfig cfg = parse_config(tiny_run_config());
  const RunRecord a = run_config(cfg);
  const RunRecord b = run_config(cfg);
  CHECK(record_to_json(a, cfg) == record_to_json(b, cfg));
  CHECK(series_to_csv(a) == series_to_csv(b));
}

TEST_CASE("record json round-trips through the parser") {
  const RunConfig cfg = parse_config(tiny_run_config());
  const RunRecord record = run_config(cfg);
  const std::string text = record_to_json(record, cfg);
  const nlohmann::ordered_json parsed = nlohmann::ordered_json::parse(text);
  CHECK(parsed.dump(2) + "\n" == text);
  // Every top-level field survives.
  for (const char* key : {"config", "scheduler", "kappa", "frames_run",
                          "hit_max_frames", "clamp_events", "metrics",
                          "nodes", "events"}) {
    CHECK(parsed.contains(key));
  }
}

TEST_CASE("sweep produces one record per value, in order") {
  const RunConfig base = parse_config(tiny_run_config());
  const std::vector<double> kappas = {0.1, 0.5, 0.9};
  const std::vector<RunRecord> records =
      sweep(base, SweepAxis::Kappa, kappas);
  REQUIRE(records.size() == 3);
  for (const RunRecord& r : records) CHECK(r.frames_run > 0);

  const std::string csv = sweep_summary_csv(kappas, records);
  CHECK(csv.rfind("axis_value,total_received,fair_nodes,dead_nodes\n", 0) ==
        0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);

  // A single-value sweep equals a plain run.
  const std::vector<RunRecord> single =
      sweep(base, SweepAxis::Kappa, {base.fairness.kappa});
  const RunRecord plain = run_config(base);
  CHECK(single[0].metrics.total_received ==
        doctest::Approx(plain.metrics.total_received));
  CHECK(single[0].frames_run == plain.frames_run);

  CHECK_THROWS_AS(sweep(base, SweepAxis::Kappa, {}), std::invalid_argument);
  CHECK_THROWS_AS(sweep_axis_from_name("sideways"), std::invalid_argument);
}

TEST_CASE("wpt sweep peaks at full efficiency") {
  // Harvest-limited world: the initial charge covers less than the
  // payload, and the per-frame harvest sits below the RCAP cost at low
  // efficiency but above it at full efficiency.
  RunConfig base = parse_config(R"({
    "scenario": {"kind": "NOP", "n": 4, "payload_bytes": 1600,
                 "slots_per_frame": 4, "seed": 3, "e0_mean": 0.004,
                 "e0_sigma": 0.0, "distance_min": 10, "distance_max": 40,
                 "max_frames": 20000},
    "kappa": 0.5,
    "energy": {"wpt": {"tau": 3e-5, "delta_theta": 1.0}}
  })");
  const std::vector<double> deltas = {0.2, 0.6, 1.0};
  const std::vector<RunRecord> records = sweep(base, SweepAxis::DeltaD, deltas);
  CHECK(records.back().metrics.total_received >
        records.front().metrics.total_received);
  CHECK(records.back().metrics.dead_nodes <=
        records.front().metrics.dead_nodes);
}

TEST_CASE("compare crosses schedulers and kappas on one seed") {
  const RunConfig base = parse_config(tiny_run_config());
  const std::vector<CompareRow> rows =
      compare(base, {"ehfs", "fcfs", "le", "hp"}, {0.1, 0.5, 0.9});
  REQUIRE(rows.size() == 12);
  const std::string csv = compare_summary_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  CHECK(csv.rfind("scheduler,kappa,total_received,fair_nodes,dead_nodes\n",
                  0) == 0);

  // Single scheduler, single kappa degenerates to a plain run.
  const std::vector<CompareRow> one = compare(base, {"ehfs"}, {0.5});
  RunConfig plain_cfg = base;
  plain_cfg.scheduler = "ehfs";
  plain_cfg.fairness.kappa = 0.5;
  const RunRecord plain = run_config(plain_cfg);
  CHECK(one[0].total_received ==
        doctest::Approx(plain.metrics.total_received));
}

TEST_CASE("unwritable output path is reported") {
  const RunConfig cfg = parse_config(tiny_run_config());
  const RunRecord record = run_config(cfg);
  RunConfig bad = cfg;
  bad.output.record_path = "/proc/ehfs/forbidden/record.json";
  CHECK_THROWS_AS(emit_results(record, bad), std::runtime_error);
}
