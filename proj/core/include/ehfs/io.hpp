#pragma once

#include <string>
#include <vector>

#include "ehfs/channel.hpp"
#include "ehfs/energy.hpp"
#include "ehfs/sim.hpp"

namespace ehfs {

struct ChannelConfig {
  enum class Mode { Analytic, Trace };
  Mode mode = Mode::Analytic;
  AnalyticChannelParams analytic;
  std::string trace_path;  // Trace mode only
  std::vector<std::pair<double, double>> prr_table =
      PrrTable::default_table().points();
};

struct SolarConfig {
  enum class Mode { None, Trace, Diurnal };
  Mode mode = Mode::None;
  std::string trace_path;
  double amplitude_mw = 0.0;
  long period_frames = 1;
  double tau = 0.0;  // solar charging seconds per frame
};

struct EnergySection {
  EnergyConstants constants;
  double e_max = 50.0;
  WptParams wpt;
  bool wpt_fading = false;
  SolarConfig solar;
  // Optional measured-curve mode: when a table is given, delta_d and
  // delta_theta come from it at (wpt_distance_m, wpt_theta_deg).
  std::string efficiency_table_path;
  double wpt_distance_m = 0.55;
  double wpt_theta_deg = 0.0;
};

struct OutputConfig {
  std::string record_path = "out/record.json";
  std::string series_path = "out/series.csv";
  std::string summary_path = "out/summary.csv";
};

struct RunConfig {
  ScenarioConfig scenario;
  FairnessConfig fairness;
  ChannelConfig channel;
  EnergySection energy;
  std::string scheduler = "ehfs";
  OutputConfig output;
  std::vector<std::string> flag_overrides;  // fields last set by CLI flags
};

/// Parses and fully validates a JSON config document. Unknown keys,
/// missing required keys and type mismatches each produce a diagnostic
/// naming the offending key; every default is applied so the result
/// echoes effective values.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Effective-config echo, embedded in every emitted record.
std::string config_to_json(const RunConfig& cfg);

RssiTrace load_rssi_trace(const std::string& path);
SolarTrace load_solar_trace(const std::string& path);
EfficiencyTable load_efficiency_table(const std::string& path);

/// Builds the world from the config (seeded draws, channel, harvest)
/// and runs it to completion.
RunRecord run_config(const RunConfig& cfg);

enum class SweepAxis { Kappa, N, DeltaD, DeltaTheta };
SweepAxis sweep_axis_from_name(const std::string& name);

/// One run per value on the same seed base, results in input order.
std::vector<RunRecord> sweep(const RunConfig& base, SweepAxis axis,
                             const std::vector<double>& values);

struct CompareRow {
  std::string scheduler;
  double kappa = 0.0;
  double total_received = 0.0;
  int fair_nodes = 0;
  int dead_nodes = 0;
};

/// Cross product of schedulers and kappa values on identical seeds.
std::vector<CompareRow> compare(const RunConfig& base,
                                const std::vector<std::string>& schedulers,
                                const std::vector<double>& kappas);

/// Record JSON with the effective config embedded. Deterministic:
/// identical records serialize byte-identically.
std::string record_to_json(const RunRecord& record, const RunConfig& cfg);

/// frame,gamma,live_nodes,fair_nodes,dead_nodes
std::string series_to_csv(const RunRecord& record);

/// axis_value,total_received,fair_nodes,dead_nodes
std::string sweep_summary_csv(const std::vector<double>& values,
                              const std::vector<RunRecord>& records);

/// scheduler,kappa,total_received,fair_nodes,dead_nodes
std::string compare_summary_csv(const std::vector<CompareRow>& rows);

void write_file(const std::string& path, const std::string& content);

/// Writes the record JSON and series CSV to the configured paths.
void emit_results(const RunRecord& record, const RunConfig& cfg);

}  // namespace ehfs
