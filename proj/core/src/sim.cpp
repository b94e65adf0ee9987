#include "ehfs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ehfs {

void ScenarioConfig::validate() const {
  if (n < 1) throw std::invalid_argument("scenario: n must be >= 1");
  if (payload_bytes < 0.0) {
    throw std::invalid_argument("scenario: payload_bytes must be >= 0");
  }
  if (kind == ScenarioKind::NAP && !(arrival_rate > 0.0)) {
    throw std::invalid_argument(
        "scenario: NAP requires a positive arrival_rate");
  }
  if (max_frames < 1) {
    throw std::invalid_argument("scenario: max_frames must be >= 1");
  }
  if (slots_per_frame < 1) {
    throw std::invalid_argument("scenario: slots_per_frame must be >= 1");
  }
  if (!distances.empty() && static_cast<int>(distances.size()) != n) {
    throw std::invalid_argument(
        "scenario: explicit distances must list one value per node");
  }
  for (double d : distances) {
    if (!(d > 0.0)) {
      throw std::invalid_argument("scenario: distances must be positive");
    }
  }
  if (distances.empty() &&
      (!(distance_min > 0.0) || distance_max < distance_min)) {
    throw std::invalid_argument("scenario: bad distance range");
  }
  if (e0_sigma < 0.0) {
    throw std::invalid_argument("scenario: e0_sigma must be >= 0");
  }
}

int ScenarioConfig::payload_packets() const {
  return static_cast<int>(std::ceil(payload_bytes / 32.0));
}

const char* to_string(RunEvent e) {
  switch (e) {
    case RunEvent::Arrived: return "arrived";
    case RunEvent::BecameFair: return "fair";
    case RunEvent::EnteredNa: return "na";
    case RunEvent::ReturnedAd: return "ad";
    case RunEvent::Retired: return "retired";
    case RunEvent::Died: return "died";
  }
  return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

DrawnWorld draw_world(const ScenarioConfig& sc, const EnergyConstants& c,
                      double e_max) {
  sc.validate();
  DrawnWorld world;
  world.nodes.resize(sc.n);
  world.geometry.resize(sc.n);

  std::mt19937_64 energy_rng(splitmix64(sc.rng_seed ^ 0xe0e0e0e0ULL));
  std::mt19937_64 distance_rng(splitmix64(sc.rng_seed ^ 0xd157a4ceULL));
  std::mt19937_64 arrival_rng(splitmix64(sc.rng_seed ^ 0xa881a1ULL));

  std::normal_distribution<double> e0(sc.e0_mean, sc.e0_sigma);
  std::uniform_real_distribution<double> dist(sc.distance_min,
                                              sc.distance_max);
  const int packets = sc.payload_packets();
  double arrival_cum = 0.0;
  std::exponential_distribution<double> inter(
      sc.kind == ScenarioKind::NAP ? 1.0 / sc.arrival_rate : 1.0);

  for (int i = 0; i < sc.n; ++i) {
    NodeInit& init = world.nodes[i];
    init.id = i + 1;
    init.payload = packets;
    if (sc.e0_sigma == 0.0) {
      init.energy_initial = std::clamp(sc.e0_mean, c.e_td, e_max);
    } else {
      double e = e0(energy_rng);
      while (e < c.e_td || e > e_max) e = e0(energy_rng);
      init.energy_initial = e;
    }
    if (sc.kind == ScenarioKind::NAP) {
      arrival_cum += inter(arrival_rng);
      init.arrival_frame = 1 + static_cast<int>(std::floor(arrival_cum));
    } else {
      init.arrival_frame = 1;
    }
    world.geometry[i].distance_to_bs =
        sc.distances.empty() ? dist(distance_rng) : sc.distances[i];
  }
  return world;
}

Simulation::Simulation(SimParams params, std::vector<NodeInit> inits,
                       std::shared_ptr<const ChannelSource> channel,
                       std::shared_ptr<HarvestSource> harvest,
                       std::shared_ptr<const Scheduler> scheduler)
    : params_(params),
      channel_(std::move(channel)),
      harvest_(std::move(harvest)),
      scheduler_(std::move(scheduler)),
      reception_rng_(splitmix64(params.rng_seed ^ 0xbe44001111ULL)) {
  params_.constants.validate();
  if (params_.kappa < 0.0 || params_.kappa > 1.0) {
    throw std::invalid_argument("sim: kappa must be in [0, 1]");
  }
  nodes_.reserve(inits.size());
  for (const NodeInit& init : inits) {
    NodeState node;
    node.id = init.id;
    node.payload_total = init.payload;
    node.energy = init.energy_initial;
    node.energy_initial = init.energy_initial;
    node.arrival_frame = init.arrival_frame;
    node.protocol_state = ProtocolState::AD;
    nodes_.push_back(node);
  }
  accounting_.resize(nodes_.size());
  input_.slots = params_.slots_per_frame;
  input_.kappa = params_.kappa;
  input_.constants = params_.constants;
  input_.nodes.resize(nodes_.size());
}

bool Simulation::done() const {
  for (const NodeState& node : nodes_) {
    if (node.arrival_frame > frame_) return false;  // arrival pending
    if (node.protocol_state != ProtocolState::ND) return false;
  }
  return true;
}

bool Simulation::step_frame() {
  ++frame_;
  const int f = static_cast<int>(frame_);
  const EnergyConstants& c = params_.constants;

  std::vector<int> sent(nodes_.size(), 0);
  std::vector<bool> participated(nodes_.size(), false);

  // RCAP: every arrived AD node reports in and pays for one Hello plus
  // the HACK/SACK receptions; the cost itself is applied with the rest
  // of the frame's energy update.
  for (size_t k = 0; k < nodes_.size(); ++k) {
    NodeState& node = nodes_[k];
    const bool arrived = node.arrival_frame <= f;
    if (node.arrival_frame == f) {
      events_.push_back({f, node.id, RunEvent::Arrived});
    }
    participated[k] = arrived && node.protocol_state == ProtocolState::AD;
    node.rcap_participant = participated[k];
    if (participated[k]) ++accounting_[k].rcap_frames;
    // PRR is frozen for the frame: one channel query per arrived node.
    if (arrived && node.protocol_state != ProtocolState::ND) {
      node.prr = channel_->prr(node.id, f);
    }
  }

  // Scheduler sees energies net of this frame's RCAP cost.
  const double e_a = rcap_cost(c);
  input_.frame_index = f;
  for (size_t k = 0; k < nodes_.size(); ++k) {
    const NodeState& node = nodes_[k];
    NodeSnapshot& snap = input_.nodes[k];
    snap.id = node.id;
    snap.energy = node.energy - (participated[k] ? e_a : 0.0);
    snap.prr = node.prr;
    snap.delivered = node.delivered;
    snap.payload_total = node.payload_total;
    snap.state = node.protocol_state;
    snap.arrived = node.arrival_frame <= f;
    snap.arrival_frame = node.arrival_frame;
  }
  SchedulerResult plan = scheduler_->plan(input_);

  // Transmissions. Expected mode credits q per granted slot; Bernoulli
  // flips a coin per slot and skips a slot that cannot fit one more
  // whole packet.
  double gamma = 0.0;
  std::vector<double> before_fair(nodes_.size());
  for (size_t k = 0; k < nodes_.size(); ++k) before_fair[k] = nodes_[k].delivered;
  for (NodeId id : plan.schedule.slots) {
    if (id == kNoNode) continue;
    NodeState& node = nodes_[id - 1];
    if (params_.reception_mode == ReceptionMode::Expected) {
      ++sent[id - 1];
      node.delivered += node.prr;
      gamma += node.prr;
    } else {
      if (node.delivered + 1.0 > node.payload_total + kCountEps) continue;
      ++sent[id - 1];
      std::bernoulli_distribution coin(node.prr);
      if (coin(reception_rng_)) {
        node.delivered += 1.0;
        gamma += 1.0;
      }
    }
  }
  for (size_t k = 0; k < nodes_.size(); ++k) {
    accounting_[k].slots_granted += sent[k];
  }
  if (params_.record_schedules) schedules_.push_back(plan.schedule);

  // Harvest and energy update; ND nodes keep harvesting.
  for (size_t k = 0; k < nodes_.size(); ++k) {
    NodeState& node = nodes_[k];
    if (node.arrival_frame > f) continue;
    const double harvest = harvest_->harvest_j(node.id, f);
    accounting_[k].harvest_total += harvest;
    harvested_cum_ += harvest;
    FrameEnergyResult r = apply_frame_energy(node, participated[k], sent[k],
                                             harvest, c, params_.e_max);
    node = r.node;
    if (r.floored) {
      ++accounting_[k].floor_events;
      ++clamp_events_;
    }
    if (r.capped) {
      ++accounting_[k].cap_events;
      ++clamp_events_;
    }
  }

  // Protocol transitions, from what actually happened this frame.
  bool unfair_live = false;
  for (const NodeState& node : nodes_) {
    if (node.arrival_frame <= f && node.protocol_state != ProtocolState::ND &&
        node.energy >= c.e_td && !node.fair(params_.kappa)) {
      unfair_live = true;
      break;
    }
  }
  const bool fairness_phase = unfair_live;
  for (size_t k = 0; k < nodes_.size(); ++k) {
    NodeState& node = nodes_[k];
    if (node.arrival_frame > f) continue;
    if (node.fair(params_.kappa) && before_fair[k] <
        params_.kappa * node.payload_total - kCountEps) {
      events_.push_back({f, node.id, RunEvent::BecameFair});
    }
    if (node.protocol_state == ProtocolState::ND) continue;
    const bool done_payload =
        node.delivered >= node.payload_total - kCountEps;
    const bool no_room =
        node.prr > kCountEps &&
        node.delivered + node.prr > node.payload_total + kCountEps;
    if (done_payload || no_room) {
      node.protocol_state = ProtocolState::ND;
      events_.push_back({f, node.id, RunEvent::Retired});
      continue;
    }
    if (fairness_phase) {
      if (node.protocol_state == ProtocolState::AD &&
          node.fair(params_.kappa)) {
        node.protocol_state = ProtocolState::NA;
        events_.push_back({f, node.id, RunEvent::EnteredNa});
      }
    } else if (node.protocol_state == ProtocolState::NA) {
      node.protocol_state = ProtocolState::AD;
      events_.push_back({f, node.id, RunEvent::ReturnedAd});
    }
  }
  for (NodeState& node : nodes_) {
    if (node.arrival_frame > f) continue;
    if (node.protocol_state != ProtocolState::ND && node.energy < c.e_td) {
      node.protocol_state = ProtocolState::ND;
      events_.push_back({f, node.id, RunEvent::Died});
    }
    if (node.protocol_state != ProtocolState::AD) {
      node.rcap_participant = false;
    }
  }

  FramePoint point;
  point.frame = f;
  point.gamma = gamma;
  point.harvested_cum = harvested_cum_;
  for (const NodeState& node : nodes_) {
    if (node.arrival_frame <= f && node.energy >= c.e_td) ++point.live_nodes;
    if (node.fair(params_.kappa)) ++point.fair_nodes;
    if (node.energy < c.e_td) ++point.dead_nodes;
  }
  series_.push_back(point);

  return !done();
}

RunRecord Simulation::run() {
  bool more = !done();
  while (more && frame_ < params_.max_frames) {
    more = step_frame();
  }

  RunRecord record;
  record.scheduler = std::string(scheduler_->name());
  record.kappa = params_.kappa;
  record.frames_run = frame_;
  record.hit_max_frames = more;
  record.final_nodes = nodes_;
  record.accounting = accounting_;
  record.events = std::move(events_);
  record.clamp_events = clamp_events_;
  record.schedules = std::move(schedules_);

  RunMetrics& m = record.metrics;
  m.per_frame = std::move(series_);
  for (const FramePoint& p : m.per_frame) m.total_received += p.gamma;
  for (const NodeState& node : nodes_) {
    if (node.fair(params_.kappa)) ++m.fair_nodes;
    if (node.energy < params_.constants.e_td) ++m.dead_nodes;
  }
  return record;
}

RunRecord run_on_instance(const ExactInstance& inst,
                          std::string_view scheduler_name) {
  inst.validate();
  std::vector<NodeInit> inits(inst.n);
  std::vector<std::vector<double>> q(inst.n), harvest(inst.n);
  for (int i = 0; i < inst.n; ++i) {
    inits[i] = {i + 1, inst.nodes[i].payload, inst.nodes[i].energy_initial, 1};
    q[i] = inst.nodes[i].prr;
    harvest[i] = inst.nodes[i].harvest;
  }
  SimParams params;
  params.slots_per_frame = inst.s;
  params.kappa = inst.kappa;  // 0 disables the fairness phase
  params.constants = inst.constants;
  params.e_max = std::numeric_limits<double>::infinity();
  params.reception_mode = ReceptionMode::Expected;
  params.max_frames = inst.f_max;
  params.record_schedules = true;

  Simulation sim(params, std::move(inits),
                 std::make_shared<MatrixChannel>(std::move(q)),
                 std::make_shared<MatrixHarvest>(std::move(harvest)),
                 std::shared_ptr<const Scheduler>(
                     make_scheduler(scheduler_name)));
  return sim.run();
}

ExactAssignment assignment_from_record(const ExactInstance& inst,
                                       const RunRecord& record) {
  ExactAssignment a(inst.n, inst.s, inst.f_max);
  for (const FrameSchedule& sched : record.schedules) {
    if (sched.frame_index > inst.f_max) break;
    for (size_t j = 0; j < sched.slots.size(); ++j) {
      const NodeId id = sched.slots[j];
      if (id != kNoNode) {
        a.set_x(id, static_cast<int>(j) + 1, sched.frame_index, true);
      }
    }
  }
  derive_phi(inst, a);
  return a;
}

}  // namespace ehfs
