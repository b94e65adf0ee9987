#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "ehfs/channel.hpp"
#include "ehfs/energy.hpp"
#include "ehfs/exact.hpp"
#include "ehfs/model.hpp"
#include "ehfs/sched.hpp"

namespace ehfs {

enum class ScenarioKind { NOP, NAP };
enum class ReceptionMode { Expected, Bernoulli };

/// Run-shaping knobs. NOP puts every node in the area from frame 1;
/// NAP draws exponential inter-arrival times. Expected mode accumulates
/// q per granted slot (the canonical metric); Bernoulli flips a coin
/// per slot.
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::NOP;
  int n = 10;
  double payload_bytes = 80000.0;    // packets = ceil(bytes / 32)
  double arrival_rate = 0.0;         // NAP: mean inter-arrival, frames
  long max_frames = 1000000;
  ReceptionMode reception_mode = ReceptionMode::Expected;
  std::uint64_t rng_seed = 1;
  int slots_per_frame = 100;
  double e0_mean = 50.0;             // J, normal draw
  double e0_sigma = 5.0;             // J, truncated to [E_td, e_max]
  double distance_min = 10.0;        // m, uniform per node unless
  double distance_max = 150.0;       // explicit distances are given
  std::vector<double> distances;

  void validate() const;
  int payload_packets() const;
};

enum class RunEvent {
  Arrived,
  BecameFair,
  EnteredNa,
  ReturnedAd,
  Retired,  // payload finished or no packet fits any more
  Died      // energy fell below E_td
};

const char* to_string(RunEvent e);

struct EventRecord {
  int frame = 0;
  NodeId node = kNoNode;
  RunEvent event = RunEvent::Arrived;
};

struct NodeAccounting {
  long slots_granted = 0;   // transmission attempts
  long rcap_frames = 0;
  double harvest_total = 0.0;  // J offered (before any clamping)
  int floor_events = 0;
  int cap_events = 0;
};

struct RunRecord {
  std::string scheduler;
  ScenarioConfig scenario;
  double kappa = 0.5;
  RunMetrics metrics;
  std::vector<NodeState> final_nodes;
  std::vector<NodeAccounting> accounting;
  std::vector<EventRecord> events;
  long frames_run = 0;
  bool hit_max_frames = false;
  int clamp_events = 0;  // floor + cap events, all nodes
  std::vector<FrameSchedule> schedules;  // only when recording is on
};

struct NodeInit {
  NodeId id = kNoNode;
  int payload = 0;
  double energy_initial = 0.0;
  int arrival_frame = 1;
};

struct SimParams {
  int slots_per_frame = 100;
  double kappa = 0.5;
  EnergyConstants constants;
  double e_max = 50.0;
  ReceptionMode reception_mode = ReceptionMode::Expected;
  std::uint64_t rng_seed = 1;
  long max_frames = 1000000;
  bool record_schedules = false;
};

/// Super-frame engine: each frame charges RCAP to AD participants,
/// freezes PRRs, runs the scheduler, applies transmissions, harvests,
/// and advances protocol states. One Simulation mutates only its own
/// state.
class Simulation {
 public:
  Simulation(SimParams params, std::vector<NodeInit> nodes,
             std::shared_ptr<const ChannelSource> channel,
             std::shared_ptr<HarvestSource> harvest,
             std::shared_ptr<const Scheduler> scheduler);

  /// Advances one super frame. Returns false once the run is complete
  /// (every arrived node in ND and no arrivals pending).
  bool step_frame();

  /// Runs to completion or max_frames and packages the record.
  RunRecord run();

  const std::vector<NodeState>& nodes() const { return nodes_; }
  long frame() const { return frame_; }

 private:
  bool done() const;

  SimParams params_;
  std::shared_ptr<const ChannelSource> channel_;
  std::shared_ptr<HarvestSource> harvest_;
  std::shared_ptr<const Scheduler> scheduler_;
  std::vector<NodeState> nodes_;
  std::vector<NodeAccounting> accounting_;
  std::vector<EventRecord> events_;
  std::vector<FramePoint> series_;
  std::vector<FrameSchedule> schedules_;
  std::mt19937_64 reception_rng_;
  long frame_ = 0;
  double harvested_cum_ = 0.0;
  int clamp_events_ = 0;
  SchedulerInput input_;  // reused across frames
};

/// Draws per-node initial energy (truncated normal), distances and NAP
/// arrival frames from the scenario seed. The draws depend only on the
/// scenario, never on the scheduler, so schedulers compare on identical
/// worlds.
struct DrawnWorld {
  std::vector<NodeInit> nodes;
  std::vector<NodeGeometry> geometry;
};
DrawnWorld draw_world(const ScenarioConfig& sc, const EnergyConstants& c,
                      double e_max);

/// Runs a scheduler on an exact-solver instance: fixed q and harvest
/// tables, horizon f_max, expected-value reception, schedules recorded.
RunRecord run_on_instance(const ExactInstance& inst,
                          std::string_view scheduler_name);

/// Slot assignment of an instance run as an exact-module tensor, with
/// derived RCAP flags.
ExactAssignment assignment_from_record(const ExactInstance& inst,
                                       const RunRecord& record);

}  // namespace ehfs
