#include "ehfs/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ehfs {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

// Strict object reader: every key must be consumed, leftovers are
// reported by name.
class Section {
 public:
  Section(const ordered_json& j, std::string path) : path_(std::move(path)) {
    if (!j.is_object()) bad("'" + path_ + "' must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      pending_.insert(it.key());
    }
    obj_ = &j;
  }

  ~Section() = default;

  bool has(const std::string& key) const { return obj_->contains(key); }

  const ordered_json* take(const std::string& key) {
    pending_.erase(key);
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const ordered_json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number()) bad("'" + at(key) + "' must be a number");
    return v->get<double>();
  }

  double required_number(const std::string& key) {
    if (!has(key)) bad("missing required key '" + at(key) + "'");
    return number(key, 0.0);
  }

  long integer(const std::string& key, long fallback) {
    const ordered_json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_integer()) bad("'" + at(key) + "' must be an integer");
    return v->get<long>();
  }

  long required_integer(const std::string& key) {
    if (!has(key)) bad("missing required key '" + at(key) + "'");
    return integer(key, 0);
  }

  bool boolean(const std::string& key, bool fallback) {
    const ordered_json* v = take(key);
    if (!v) return fallback;
    if (!v->is_boolean()) bad("'" + at(key) + "' must be a boolean");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& fallback) {
    const ordered_json* v = take(key);
    if (!v) return fallback;
    if (!v->is_string()) bad("'" + at(key) + "' must be a string");
    return v->get<std::string>();
  }

  const ordered_json* object(const std::string& key) { return take(key); }

  void finish() {
    if (!pending_.empty()) {
      bad("unknown key '" + at(*pending_.begin()) + "'");
    }
  }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

 private:
  const ordered_json* obj_ = nullptr;
  std::string path_;
  std::set<std::string> pending_;
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void parse_scenario(const ordered_json& j, ScenarioConfig& sc) {
  Section s(j, "scenario");
  const std::string kind = s.text("kind", "NOP");
  if (kind == "NOP") {
    sc.kind = ScenarioKind::NOP;
  } else if (kind == "NAP") {
    sc.kind = ScenarioKind::NAP;
  } else {
    bad("'scenario.kind' must be \"NOP\" or \"NAP\"");
  }
  sc.n = static_cast<int>(s.required_integer("n"));
  sc.payload_bytes =
      s.number("payload_bytes", kind == "NAP" ? 300000.0 : 80000.0);
  sc.arrival_rate = s.number("arrival_rate", 0.0);
  sc.max_frames = s.integer("max_frames", sc.max_frames);
  const std::string mode = s.text("reception_mode", "expected");
  if (mode == "expected") {
    sc.reception_mode = ReceptionMode::Expected;
  } else if (mode == "bernoulli") {
    sc.reception_mode = ReceptionMode::Bernoulli;
  } else {
    bad("'scenario.reception_mode' must be \"expected\" or \"bernoulli\"");
  }
  sc.rng_seed = static_cast<std::uint64_t>(s.integer("seed", 1));
  sc.slots_per_frame =
      static_cast<int>(s.integer("slots_per_frame", sc.slots_per_frame));
  sc.e0_mean = s.number("e0_mean", sc.e0_mean);
  sc.e0_sigma = s.number("e0_sigma", sc.e0_sigma);
  sc.distance_min = s.number("distance_min", sc.distance_min);
  sc.distance_max = s.number("distance_max", sc.distance_max);
  if (const ordered_json* d = s.take("distances")) {
    if (!d->is_array()) bad("'scenario.distances' must be an array");
    for (const auto& v : *d) {
      if (!v.is_number()) bad("'scenario.distances' must hold numbers");
      sc.distances.push_back(v.get<double>());
    }
  }
  s.finish();
  sc.validate();
}

void parse_channel(const ordered_json& j, ChannelConfig& ch) {
  Section s(j, "channel");
  const std::string mode = s.text("mode", "analytic");
  if (mode == "analytic") {
    ch.mode = ChannelConfig::Mode::Analytic;
  } else if (mode == "trace") {
    ch.mode = ChannelConfig::Mode::Trace;
  } else {
    bad("'channel.mode' must be \"analytic\" or \"trace\"");
  }
  ch.analytic.g_tx = s.number("g_tx", ch.analytic.g_tx);
  ch.analytic.g_rx = s.number("g_rx", ch.analytic.g_rx);
  ch.analytic.f0 = s.number("f0", ch.analytic.f0);
  ch.analytic.c = s.number("c", ch.analytic.c);
  ch.analytic.k2 = s.number("k2", ch.analytic.k2);
  ch.analytic.n0 = s.number("n0", ch.analytic.n0);
  ch.analytic.gamma0 = s.number("gamma0", ch.analytic.gamma0);
  ch.analytic.p_tx = s.number("p_tx", ch.analytic.p_tx);
  ch.trace_path = s.text("trace", "");
  if (const ordered_json* t = s.take("prr_table")) {
    if (!t->is_array()) bad("'channel.prr_table' must be an array");
    ch.prr_table.clear();
    for (const auto& row : *t) {
      if (!row.is_array() || row.size() != 2 || !row[0].is_number() ||
          !row[1].is_number()) {
        bad("'channel.prr_table' rows must be [rssi_dbm, prr]");
      }
      ch.prr_table.emplace_back(row[0].get<double>(), row[1].get<double>());
    }
  }
  s.finish();
  // Exactly one mode: a trace path belongs to trace mode only.
  if (ch.mode == ChannelConfig::Mode::Trace && ch.trace_path.empty()) {
    bad("'channel.trace' is required in trace mode");
  }
  if (ch.mode == ChannelConfig::Mode::Analytic && !ch.trace_path.empty()) {
    bad("'channel.trace' given but 'channel.mode' is \"analytic\"");
  }
  if (ch.mode == ChannelConfig::Mode::Analytic) ch.analytic.validate();
  PrrTable table(ch.prr_table);  // validates shape and monotonicity
  if (!ch.trace_path.empty()) {
    load_rssi_trace(ch.trace_path);  // must exist and parse
  }
}

void parse_energy(const ordered_json& j, EnergySection& en) {
  Section s(j, "energy");
  EnergyConstants& c = en.constants;
  c.e_tx_hello = s.number("e_tx_hello", c.e_tx_hello);
  c.e_rx_hack = s.number("e_rx_hack", c.e_rx_hack);
  c.e_rx_sack = s.number("e_rx_sack", c.e_rx_sack);
  c.e_tx = s.number("e_tx", c.e_tx);
  c.e_td = s.number("e_td", c.e_td);
  c.v_cc = s.number("v_cc", c.v_cc);
  c.i_tx = s.number("i_tx", c.i_tx);
  c.i_rx = s.number("i_rx", c.i_rx);
  c.r_b = s.number("r_b", c.r_b);
  en.e_max = s.number("e_max", en.e_max);
  if (const ordered_json* w = s.object("wpt")) {
    Section ws(*w, "energy.wpt");
    en.wpt.p_tx = ws.number("p_tx", en.wpt.p_tx);
    en.wpt.delta_d = ws.number("delta_d", en.wpt.delta_d);
    en.wpt.delta_theta = ws.number("delta_theta", en.wpt.delta_theta);
    en.wpt.channel_gain_sq = ws.number("gain_sq", en.wpt.channel_gain_sq);
    en.wpt.tau = ws.number("tau", en.wpt.tau);
    en.wpt_fading = ws.boolean("fading", en.wpt_fading);
    ws.finish();
  }
  if (const ordered_json* so = s.object("solar")) {
    Section ss(*so, "energy.solar");
    const std::string mode = ss.text("mode", "none");
    if (mode == "none") {
      en.solar.mode = SolarConfig::Mode::None;
    } else if (mode == "trace") {
      en.solar.mode = SolarConfig::Mode::Trace;
    } else if (mode == "diurnal") {
      en.solar.mode = SolarConfig::Mode::Diurnal;
    } else {
      bad("'energy.solar.mode' must be \"none\", \"trace\" or \"diurnal\"");
    }
    en.solar.trace_path = ss.text("trace", "");
    en.solar.amplitude_mw = ss.number("amplitude_mw", en.solar.amplitude_mw);
    en.solar.period_frames =
        ss.integer("period_frames", en.solar.period_frames);
    en.solar.tau = ss.number("tau", en.solar.tau);
    ss.finish();
    if (en.solar.mode == SolarConfig::Mode::Trace &&
        en.solar.trace_path.empty()) {
      bad("'energy.solar.trace' is required in trace mode");
    }
    if (en.solar.mode == SolarConfig::Mode::Trace) {
      load_solar_trace(en.solar.trace_path);
    }
  }
  en.efficiency_table_path = s.text("efficiency_table", "");
  en.wpt_distance_m = s.number("wpt_distance_m", en.wpt_distance_m);
  en.wpt_theta_deg = s.number("wpt_theta_deg", en.wpt_theta_deg);
  s.finish();
  c.validate();
  en.wpt.validate();
  if (!(en.e_max > 0.0)) bad("'energy.e_max' must be positive");
  if (!en.efficiency_table_path.empty()) {
    load_efficiency_table(en.efficiency_table_path);
  }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  RunConfig cfg;
  Section root(j, "");
  if (const ordered_json* sc = root.object("scenario")) {
    parse_scenario(*sc, cfg.scenario);
  } else {
    bad("missing required key 'scenario'");
  }
  if (!root.has("kappa")) bad("missing required key 'kappa'");
  cfg.fairness.kappa = root.number("kappa", 0.5);
  cfg.fairness.validate();
  if (const ordered_json* ch = root.object("channel")) {
    parse_channel(*ch, cfg.channel);
  } else {
    cfg.channel.analytic.validate();
  }
  if (const ordered_json* en = root.object("energy")) {
    parse_energy(*en, cfg.energy);
  }
  cfg.scheduler = root.text("scheduler", cfg.scheduler);
  make_scheduler(cfg.scheduler);  // name must be known
  if (const ordered_json* out = root.object("output")) {
    Section os(*out, "output");
    cfg.output.record_path = os.text("record", cfg.output.record_path);
    cfg.output.series_path = os.text("series", cfg.output.series_path);
    cfg.output.summary_path = os.text("summary", cfg.output.summary_path);
    os.finish();
  }
  if (const ordered_json* fo = root.take("flag_overrides")) {
    if (!fo->is_array()) bad("'flag_overrides' must be an array");
    for (const auto& v : *fo) {
      cfg.flag_overrides.push_back(v.get<std::string>());
    }
  }
  root.finish();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

namespace {

ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  ordered_json sc;
  sc["kind"] = cfg.scenario.kind == ScenarioKind::NOP ? "NOP" : "NAP";
  sc["n"] = cfg.scenario.n;
  sc["payload_bytes"] = cfg.scenario.payload_bytes;
  sc["arrival_rate"] = cfg.scenario.arrival_rate;
  sc["max_frames"] = cfg.scenario.max_frames;
  sc["reception_mode"] =
      cfg.scenario.reception_mode == ReceptionMode::Expected ? "expected"
                                                             : "bernoulli";
  sc["seed"] = cfg.scenario.rng_seed;
  sc["slots_per_frame"] = cfg.scenario.slots_per_frame;
  sc["e0_mean"] = cfg.scenario.e0_mean;
  sc["e0_sigma"] = cfg.scenario.e0_sigma;
  sc["distance_min"] = cfg.scenario.distance_min;
  sc["distance_max"] = cfg.scenario.distance_max;
  if (!cfg.scenario.distances.empty()) sc["distances"] = cfg.scenario.distances;
  j["scenario"] = sc;
  j["kappa"] = cfg.fairness.kappa;

  ordered_json ch;
  ch["mode"] =
      cfg.channel.mode == ChannelConfig::Mode::Analytic ? "analytic" : "trace";
  ch["g_tx"] = cfg.channel.analytic.g_tx;
  ch["g_rx"] = cfg.channel.analytic.g_rx;
  ch["f0"] = cfg.channel.analytic.f0;
  ch["c"] = cfg.channel.analytic.c;
  ch["k2"] = cfg.channel.analytic.k2;
  ch["n0"] = cfg.channel.analytic.n0;
  ch["gamma0"] = cfg.channel.analytic.gamma0;
  ch["p_tx"] = cfg.channel.analytic.p_tx;
  if (!cfg.channel.trace_path.empty()) ch["trace"] = cfg.channel.trace_path;
  ordered_json table = ordered_json::array();
  for (const auto& [rssi, prr] : cfg.channel.prr_table) {
    table.push_back({rssi, prr});
  }
  ch["prr_table"] = table;
  j["channel"] = ch;

  ordered_json en;
  const EnergyConstants& c = cfg.energy.constants;
  en["e_tx_hello"] = c.e_tx_hello;
  en["e_rx_hack"] = c.e_rx_hack;
  en["e_rx_sack"] = c.e_rx_sack;
  en["e_tx"] = c.e_tx;
  en["e_td"] = c.e_td;
  en["v_cc"] = c.v_cc;
  en["i_tx"] = c.i_tx;
  en["i_rx"] = c.i_rx;
  en["r_b"] = c.r_b;
  en["e_max"] = cfg.energy.e_max;
  ordered_json wpt;
  wpt["p_tx"] = cfg.energy.wpt.p_tx;
  wpt["delta_d"] = cfg.energy.wpt.delta_d;
  wpt["delta_theta"] = cfg.energy.wpt.delta_theta;
  wpt["gain_sq"] = cfg.energy.wpt.channel_gain_sq;
  wpt["tau"] = cfg.energy.wpt.tau;
  wpt["fading"] = cfg.energy.wpt_fading;
  en["wpt"] = wpt;
  ordered_json solar;
  solar["mode"] = cfg.energy.solar.mode == SolarConfig::Mode::None ? "none"
                  : cfg.energy.solar.mode == SolarConfig::Mode::Trace
                      ? "trace"
                      : "diurnal";
  if (!cfg.energy.solar.trace_path.empty()) {
    solar["trace"] = cfg.energy.solar.trace_path;
  }
  solar["amplitude_mw"] = cfg.energy.solar.amplitude_mw;
  solar["period_frames"] = cfg.energy.solar.period_frames;
  solar["tau"] = cfg.energy.solar.tau;
  en["solar"] = solar;
  if (!cfg.energy.efficiency_table_path.empty()) {
    en["efficiency_table"] = cfg.energy.efficiency_table_path;
    en["wpt_distance_m"] = cfg.energy.wpt_distance_m;
    en["wpt_theta_deg"] = cfg.energy.wpt_theta_deg;
  }
  j["energy"] = en;

  j["scheduler"] = cfg.scheduler;
  ordered_json out;
  out["record"] = cfg.output.record_path;
  out["series"] = cfg.output.series_path;
  out["summary"] = cfg.output.summary_path;
  j["output"] = out;
  if (!cfg.flag_overrides.empty()) j["flag_overrides"] = cfg.flag_overrides;
  return j;
}

// Shared CSV scaffolding: header check plus numbered row dispatch.
std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file: " + path);
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error(path + ": empty file");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) {
    throw std::runtime_error(path + ": expected header '" + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    fields.push_back(std::to_string(line_no));  // carry the line number
    rows.push_back(std::move(fields));
  }
  if (rows.empty()) {
    throw std::runtime_error(path + ": contains no samples");
  }
  return rows;
}

[[noreturn]] void row_fail(const std::string& path, const std::string& line_no,
                           const std::string& what) {
  throw std::runtime_error(path + ": line " + line_no + ": " + what);
}

double row_number(const std::string& path, const std::vector<std::string>& row,
                  size_t idx) {
  try {
    size_t pos = 0;
    const double v = std::stod(row.at(idx), &pos);
    if (pos != row[idx].size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    row_fail(path, row.back(), "malformed value '" + row.at(idx) + "'");
  }
}

}  // namespace

std::string config_to_json(const RunConfig& cfg) {
  return config_json(cfg).dump(2) + "\n";
}

RssiTrace load_rssi_trace(const std::string& path) {
  RssiTrace trace;
  for (const auto& row : read_csv(path, "node_id,frame,rssi_dbm")) {
    if (row.size() != 4) row_fail(path, row.back(), "expected 3 columns");
    RssiSample s;
    s.node = static_cast<NodeId>(row_number(path, row, 0));
    s.frame = static_cast<int>(row_number(path, row, 1));
    s.rssi_dbm = row_number(path, row, 2);
    if (s.node < 1) row_fail(path, row.back(), "node_id must be >= 1");
    trace.samples.push_back(s);
  }
  try {
    trace.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return trace;
}

SolarTrace load_solar_trace(const std::string& path) {
  SolarTrace trace;
  for (const auto& row : read_csv(path, "node_id,frame,power_mw")) {
    if (row.size() != 4) row_fail(path, row.back(), "expected 3 columns");
    SolarSample s;
    s.node = static_cast<NodeId>(row_number(path, row, 0));
    s.frame = static_cast<int>(row_number(path, row, 1));
    s.power_mw = row_number(path, row, 2);
    if (s.node < 1) row_fail(path, row.back(), "node_id must be >= 1");
    trace.samples.push_back(s);
  }
  try {
    trace.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return trace;
}

EfficiencyTable load_efficiency_table(const std::string& path) {
  EfficiencyTable table;
  for (const auto& row : read_csv(path, "kind,key,received_mw")) {
    if (row.size() != 4) row_fail(path, row.back(), "expected 3 columns");
    const double key = row_number(path, row, 1);
    const double mw = row_number(path, row, 2);
    if (row[0] == "distance") {
      table.distance_curve.emplace_back(key, mw);
    } else if (row[0] == "orientation") {
      table.orientation_curve.emplace_back(key, mw);
    } else {
      row_fail(path, row.back(),
               "kind must be 'distance' or 'orientation', got '" + row[0] +
                   "'");
    }
  }
  auto by_key = [](const auto& a, const auto& b) { return a.first < b.first; };
  std::sort(table.distance_curve.begin(), table.distance_curve.end(), by_key);
  std::sort(table.orientation_curve.begin(), table.orientation_curve.end(),
            by_key);
  try {
    table.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return table;
}

RunRecord run_config(const RunConfig& cfg) {
  cfg.scenario.validate();
  cfg.fairness.validate();

  const DrawnWorld world =
      draw_world(cfg.scenario, cfg.energy.constants, cfg.energy.e_max);

  std::shared_ptr<const ChannelSource> channel;
  if (cfg.channel.mode == ChannelConfig::Mode::Analytic) {
    channel =
        std::make_shared<AnalyticChannel>(cfg.channel.analytic, world.geometry);
  } else {
    channel = std::make_shared<TraceChannel>(
        load_rssi_trace(cfg.channel.trace_path), PrrTable(cfg.channel.prr_table));
  }

  std::shared_ptr<const SolarSource> solar;
  switch (cfg.energy.solar.mode) {
    case SolarConfig::Mode::None:
      solar = std::make_shared<NoSolar>();
      break;
    case SolarConfig::Mode::Trace:
      solar =
          std::make_shared<TraceSolar>(load_solar_trace(cfg.energy.solar.trace_path));
      break;
    case SolarConfig::Mode::Diurnal:
      solar = std::make_shared<DiurnalSolar>(cfg.energy.solar.amplitude_mw,
                                             cfg.energy.solar.period_frames);
      break;
  }

  WptParams wpt = cfg.energy.wpt;
  if (!cfg.energy.efficiency_table_path.empty()) {
    const EfficiencyTable table =
        load_efficiency_table(cfg.energy.efficiency_table_path);
    const Efficiency eff = efficiency_from_table(
        table, cfg.energy.wpt_distance_m, cfg.energy.wpt_theta_deg);
    wpt.delta_d = eff.delta_d;
    wpt.delta_theta = eff.delta_theta;
  }
  auto harvest = std::make_shared<StandardHarvest>(
      wpt, solar, cfg.energy.solar.tau, cfg.energy.wpt_fading,
      cfg.scenario.rng_seed ^ 0x4a7211ULL);

  SimParams params;
  params.slots_per_frame = cfg.scenario.slots_per_frame;
  params.kappa = cfg.fairness.kappa;
  params.constants = cfg.energy.constants;
  params.e_max = cfg.energy.e_max;
  params.reception_mode = cfg.scenario.reception_mode;
  params.rng_seed = cfg.scenario.rng_seed;
  params.max_frames = cfg.scenario.max_frames;

  Simulation sim(params, world.nodes, channel, harvest,
                 std::shared_ptr<const Scheduler>(make_scheduler(cfg.scheduler)));
  RunRecord record = sim.run();
  record.scenario = cfg.scenario;
  return record;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
  if (name == "kappa") return SweepAxis::Kappa;
  if (name == "n") return SweepAxis::N;
  if (name == "delta_d") return SweepAxis::DeltaD;
  if (name == "delta_theta") return SweepAxis::DeltaTheta;
  throw std::invalid_argument(
      "sweep axis must be one of kappa, n, delta_d, delta_theta");
}

std::vector<RunRecord> sweep(const RunConfig& base, SweepAxis axis,
                             const std::vector<double>& values) {
  if (values.empty()) {
    throw std::invalid_argument("sweep: values must be non-empty");
  }
  std::vector<RunRecord> records;
  records.reserve(values.size());
  for (double v : values) {
    RunConfig cfg = base;
    switch (axis) {
      case SweepAxis::Kappa:
        cfg.fairness.kappa = v;
        break;
      case SweepAxis::N:
        cfg.scenario.n = static_cast<int>(v);
        break;
      case SweepAxis::DeltaD:
        cfg.energy.wpt.delta_d = v;
        break;
      case SweepAxis::DeltaTheta:
        cfg.energy.wpt.delta_theta = v;
        break;
    }
    records.push_back(run_config(cfg));
  }
  return records;
}

std::vector<CompareRow> compare(const RunConfig& base,
                                const std::vector<std::string>& schedulers,
                                const std::vector<double>& kappas) {
  std::vector<CompareRow> rows;
  for (const std::string& sched : schedulers) {
    for (double kappa : kappas) {
      RunConfig cfg = base;
      cfg.scheduler = sched;
      cfg.fairness.kappa = kappa;
      const RunRecord record = run_config(cfg);
      rows.push_back({sched, kappa, record.metrics.total_received,
                      record.metrics.fair_nodes, record.metrics.dead_nodes});
    }
  }
  return rows;
}

std::string record_to_json(const RunRecord& record, const RunConfig& cfg) {
  ordered_json j;
  j["config"] = config_json(cfg);
  j["scheduler"] = record.scheduler;
  j["kappa"] = record.kappa;
  j["frames_run"] = record.frames_run;
  j["hit_max_frames"] = record.hit_max_frames;
  j["clamp_events"] = record.clamp_events;

  ordered_json metrics;
  metrics["total_received"] = record.metrics.total_received;
  metrics["fair_nodes"] = record.metrics.fair_nodes;
  metrics["dead_nodes"] = record.metrics.dead_nodes;
  ordered_json series = ordered_json::array();
  for (const FramePoint& p : record.metrics.per_frame) {
    series.push_back({p.frame, p.gamma, p.harvested_cum, p.live_nodes,
                      p.fair_nodes, p.dead_nodes});
  }
  metrics["per_frame"] = series;
  j["metrics"] = metrics;

  ordered_json nodes = ordered_json::array();
  for (size_t k = 0; k < record.final_nodes.size(); ++k) {
    const NodeState& n = record.final_nodes[k];
    ordered_json nj;
    nj["id"] = n.id;
    nj["payload_total"] = n.payload_total;
    nj["delivered"] = n.delivered;
    nj["energy"] = n.energy;
    nj["energy_initial"] = n.energy_initial;
    nj["state"] = to_string(n.protocol_state);
    nj["arrival_frame"] = n.arrival_frame;
    if (k < record.accounting.size()) {
      const NodeAccounting& a = record.accounting[k];
      nj["slots_granted"] = a.slots_granted;
      nj["rcap_frames"] = a.rcap_frames;
      nj["harvest_total"] = a.harvest_total;
      nj["floor_events"] = a.floor_events;
      nj["cap_events"] = a.cap_events;
    }
    nodes.push_back(nj);
  }
  j["nodes"] = nodes;

  ordered_json events = ordered_json::array();
  for (const EventRecord& e : record.events) {
    events.push_back({e.frame, e.node, to_string(e.event)});
  }
  j["events"] = events;
  return j.dump(2) + "\n";
}

std::string series_to_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "frame,gamma,live_nodes,fair_nodes,dead_nodes\n";
  for (const FramePoint& p : record.metrics.per_frame) {
    out << p.frame << ',' << fmt17(p.gamma) << ',' << p.live_nodes << ','
        << p.fair_nodes << ',' << p.dead_nodes << '\n';
  }
  return out.str();
}

std::string sweep_summary_csv(const std::vector<double>& values,
                              const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "axis_value,total_received,fair_nodes,dead_nodes\n";
  for (size_t i = 0; i < records.size(); ++i) {
    out << fmt17(values[i]) << ',' << fmt17(records[i].metrics.total_received)
        << ',' << records[i].metrics.fair_nodes << ','
        << records[i].metrics.dead_nodes << '\n';
  }
  return out.str();
}

std::string compare_summary_csv(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "scheduler,kappa,total_received,fair_nodes,dead_nodes\n";
  for (const CompareRow& r : rows) {
    out << r.scheduler << ',' << fmt17(r.kappa) << ','
        << fmt17(r.total_received) << ',' << r.fair_nodes << ','
        << r.dead_nodes << '\n';
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void emit_results(const RunRecord& record, const RunConfig& cfg) {
  write_file(cfg.output.record_path, record_to_json(record, cfg));
  write_file(cfg.output.series_path, series_to_csv(record));
}

}  // namespace ehfs
