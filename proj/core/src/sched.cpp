#include "ehfs/sched.hpp"

#include <algorithm>
#include <stdexcept>

namespace ehfs {

double eta(double prr, double energy_j) {
  if (!(energy_j > 0.0)) {
    throw std::invalid_argument("eta: energy must be positive");
  }
  return prr / energy_j;
}

namespace {

// Mutable per-frame planning state for one node.
struct Work {
  const NodeSnapshot* snap = nullptr;
  double delivered = 0.0;
  double energy = 0.0;
  ProtocolState state = ProtocolState::AD;
  double priority = 0.0;  // frame-start eta, not recomputed mid-frame
};

bool is_fair(const Work& w, double kappa) {
  return w.delivered >= kappa * w.snap->payload_total - kCountEps;
}

// Another packet fits under the payload cap. PRR ~ 0 links deliver
// nothing and are skipped for the frame (trace-driven PRR may recover).
bool can_deliver(const Work& w) {
  return w.snap->prr > kCountEps &&
         w.delivered + w.snap->prr <= w.snap->payload_total + kCountEps;
}

bool can_pay(const Work& w, const EnergyConstants& c) {
  return w.energy - c.e_tx >= c.e_td;
}

bool payload_done(const Work& w) {
  return w.delivered >= w.snap->payload_total - kCountEps;
}

std::vector<Work> make_work(const SchedulerInput& in) {
  std::vector<Work> work;
  work.reserve(in.nodes.size());
  for (const NodeSnapshot& s : in.nodes) {
    Work w;
    w.snap = &s;
    w.delivered = s.delivered;
    w.energy = s.energy;
    w.state = s.state;
    w.priority = s.energy > 0.0 ? s.prr / s.energy : 0.0;
    work.push_back(w);
  }
  return work;
}

// Candidate for transmission this frame: arrived, in AD, above the
// power-down threshold.
bool candidate(const Work& w, const EnergyConstants& c) {
  return w.snap->arrived && w.state == ProtocolState::AD &&
         w.energy >= c.e_td;
}

void grant(Work& w, FrameSchedule& sched, int& next_slot,
           const EnergyConstants& c) {
  sched.slots[next_slot++] = w.snap->id;
  w.delivered += w.snap->prr;
  w.energy -= c.e_tx;
}

SchedulerResult finish(const SchedulerInput& in, FrameSchedule sched,
                       const std::vector<Work>& work) {
  SchedulerResult res;
  res.schedule = std::move(sched);
  res.states_after.reserve(work.size());
  for (const Work& w : work) {
    res.states_after.emplace_back(w.snap->id, w.state);
  }
  return res;
}

// Shared single-pass fill for the baselines: each node in `order` holds
// the channel while it can, then the next one begins. A node whose
// payload is exhausted (or cannot fit another packet) retires to ND.
SchedulerResult fill_in_order(const SchedulerInput& in,
                              std::vector<Work> work,
                              std::vector<size_t> order) {
  FrameSchedule sched;
  sched.frame_index = in.frame_index;
  sched.slots.assign(in.slots, kNoNode);
  int next_slot = 0;
  for (size_t idx : order) {
    Work& w = work[idx];
    if (!can_deliver(w)) {
      if (w.snap->prr > kCountEps || payload_done(w)) {
        w.state = ProtocolState::ND;
      }
      continue;
    }
    while (next_slot < in.slots && can_deliver(w) && can_pay(w, in.constants)) {
      grant(w, sched, next_slot, in.constants);
    }
    if (payload_done(w) || !can_deliver(w)) {
      if (w.snap->prr > kCountEps) w.state = ProtocolState::ND;
    }
    if (next_slot == in.slots) break;
  }
  return finish(in, std::move(sched), work);
}

std::vector<size_t> candidates_sorted(
    const SchedulerInput& in, const std::vector<Work>& work,
    bool (*before)(const Work&, const Work&)) {
  std::vector<size_t> order;
  for (size_t i = 0; i < work.size(); ++i) {
    if (candidate(work[i], in.constants)) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (before(work[a], work[b])) return true;
    if (before(work[b], work[a])) return false;
    return work[a].snap->id < work[b].snap->id;
  });
  return order;
}

}  // namespace

SchedulerResult EhfsScheduler::plan(const SchedulerInput& in) const {
  std::vector<Work> work = make_work(in);
  FrameSchedule sched;
  sched.frame_index = in.frame_index;
  sched.slots.assign(in.slots, kNoNode);
  int next_slot = 0;

  auto unfair_live_exists = [&]() {
    for (const Work& w : work) {
      if (w.snap->arrived && w.state != ProtocolState::ND &&
          w.energy >= in.constants.e_td && !is_fair(w, in.kappa)) {
        return true;
      }
    }
    return false;
  };

  auto by_eta = [](const Work& a, const Work& b) {
    return a.priority > b.priority;
  };

  // Phase one: serve unfair nodes only; a node reaching its kappa share
  // moves to NA, a node that exhausts its payload cap retires.
  if (unfair_live_exists()) {
    for (size_t idx : candidates_sorted(in, work, by_eta)) {
      Work& w = work[idx];
      if (is_fair(w, in.kappa)) {
        w.state = ProtocolState::NA;
        continue;
      }
      if (!can_deliver(w)) {
        if (w.snap->prr > kCountEps) w.state = ProtocolState::ND;
        continue;
      }
      while (next_slot < in.slots && !is_fair(w, in.kappa) &&
             can_deliver(w) && can_pay(w, in.constants)) {
        grant(w, sched, next_slot, in.constants);
      }
      if (is_fair(w, in.kappa)) {
        w.state = ProtocolState::NA;
      } else if (!can_deliver(w) && w.snap->prr > kCountEps) {
        w.state = ProtocolState::ND;
      }
      if (next_slot == in.slots) break;
    }
  }

  // Phase two, possibly in the same frame: once every live node holds
  // its share, NA nodes return to AD and payloads drain in eta order.
  if (!unfair_live_exists()) {
    for (Work& w : work) {
      if (w.state == ProtocolState::NA) w.state = ProtocolState::AD;
    }
    for (size_t idx : candidates_sorted(in, work, by_eta)) {
      Work& w = work[idx];
      if (!can_deliver(w)) {
        if (w.snap->prr > kCountEps || payload_done(w)) {
          w.state = ProtocolState::ND;
        }
        continue;
      }
      while (next_slot < in.slots && can_deliver(w) && can_pay(w, in.constants)) {
        grant(w, sched, next_slot, in.constants);
      }
      if (payload_done(w) || !can_deliver(w)) {
        if (w.snap->prr > kCountEps) w.state = ProtocolState::ND;
      }
      if (next_slot == in.slots) break;
    }
  }

  return finish(in, std::move(sched), work);
}

SchedulerResult FcfsScheduler::plan(const SchedulerInput& in) const {
  std::vector<Work> work = make_work(in);
  auto by_arrival = [](const Work& a, const Work& b) {
    return a.snap->arrival_frame < b.snap->arrival_frame;
  };
  std::vector<size_t> order = candidates_sorted(in, work, by_arrival);
  return fill_in_order(in, std::move(work), std::move(order));
}

SchedulerResult LowEnergyScheduler::plan(const SchedulerInput& in) const {
  std::vector<Work> work = make_work(in);
  auto by_energy = [](const Work& a, const Work& b) {
    return a.energy < b.energy;
  };
  std::vector<size_t> order = candidates_sorted(in, work, by_energy);
  return fill_in_order(in, std::move(work), std::move(order));
}

SchedulerResult HighPrrScheduler::plan(const SchedulerInput& in) const {
  std::vector<Work> work = make_work(in);
  auto by_prr = [](const Work& a, const Work& b) {
    return a.snap->prr > b.snap->prr;
  };
  std::vector<size_t> order = candidates_sorted(in, work, by_prr);
  return fill_in_order(in, std::move(work), std::move(order));
}

std::unique_ptr<Scheduler> make_scheduler(std::string_view name) {
  if (name == "ehfs") return std::make_unique<EhfsScheduler>();
  if (name == "fcfs") return std::make_unique<FcfsScheduler>();
  if (name == "le") return std::make_unique<LowEnergyScheduler>();
  if (name == "hp") return std::make_unique<HighPrrScheduler>();
  throw std::invalid_argument("unknown scheduler: " + std::string(name));
}

}  // namespace ehfs
