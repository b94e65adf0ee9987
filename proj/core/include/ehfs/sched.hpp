#pragma once

#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include "ehfs/model.hpp"

namespace ehfs {

/// Frame-start view of one node, energy already net of this frame's
/// RCAP cost for participants.
struct NodeSnapshot {
  NodeId id = kNoNode;
  double energy = 0.0;
  double prr = 0.0;
  double delivered = 0.0;
  int payload_total = 0;
  ProtocolState state = ProtocolState::AD;
  bool arrived = true;
  int arrival_frame = 1;
};

struct SchedulerInput {
  int frame_index = 1;
  int slots = 100;
  double kappa = 0.5;
  EnergyConstants constants;
  std::vector<NodeSnapshot> nodes;
};

/// A frame plan: the slot assignment plus the protocol state each node
/// is expected to hold at frame end under expected-value accounting.
struct SchedulerResult {
  FrameSchedule schedule;
  std::vector<std::pair<NodeId, ProtocolState>> states_after;
};

/// Priority ratio q / E. Requires energy > 0.
double eta(double prr, double energy_j);

/// Stateless frame planners; ties always break by ascending NodeId so
/// identical inputs give identical schedules.
class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual std::string_view name() const = 0;
  virtual SchedulerResult plan(const SchedulerInput& in) const = 0;
};

/// Two-phase fair scheduler. Phase one serves unfair AD nodes in
/// descending eta order until every live node holds its kappa share
/// (fair nodes rest in NA); phase two returns NA nodes to AD and drains
/// payloads in eta order. Eta is computed once per frame from the
/// snapshot energies. No slot is ever granted that would take a node's
/// projected energy below E_td, and no node is scheduled past its
/// payload.
class EhfsScheduler : public Scheduler {
 public:
  std::string_view name() const override { return "ehfs"; }
  SchedulerResult plan(const SchedulerInput& in) const override;
};

/// Batch processing: arrival order, head node holds the channel until
/// its payload completes or its energy floor is hit.
class FcfsScheduler : public Scheduler {
 public:
  std::string_view name() const override { return "fcfs"; }
  SchedulerResult plan(const SchedulerInput& in) const override;
};

/// Lowest residual energy first.
class LowEnergyScheduler : public Scheduler {
 public:
  std::string_view name() const override { return "le"; }
  SchedulerResult plan(const SchedulerInput& in) const override;
};

/// Highest PRR first.
class HighPrrScheduler : public Scheduler {
 public:
  std::string_view name() const override { return "hp"; }
  SchedulerResult plan(const SchedulerInput& in) const override;
};

/// "ehfs", "fcfs", "le" or "hp".
std::unique_ptr<Scheduler> make_scheduler(std::string_view name);

}  // namespace ehfs
