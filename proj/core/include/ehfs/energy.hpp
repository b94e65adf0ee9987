#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <utility>
#include <vector>

#include "ehfs/model.hpp"

namespace ehfs {

struct WptParams {
  double p_tx = 3.0;            // charger transmit power, W
  double delta_d = 0.5;         // distance efficiency, (0, 1]
  double delta_theta = 0.5;     // orientation efficiency, (0, 1]
  double channel_gain_sq = 1.0; // |h|^2, quasi-static default
  double tau = 0.0;             // seconds charged per frame

  void validate() const;
};

struct SolarSample {
  NodeId node = kNoNode;
  int frame = 0;
  double power_mw = 0.0;
};

struct SolarTrace {
  std::vector<SolarSample> samples;  // frame non-decreasing per node
  double tau = 0.0;                  // solar charging seconds per frame

  void validate() const;
};

/// Measured received power versus charger distance and receiver antenna
/// orientation. Distances start at the 0.2 m measurement floor.
struct EfficiencyTable {
  std::vector<std::pair<double, double>> distance_curve;     // (m, mW)
  std::vector<std::pair<double, double>> orientation_curve;  // (deg, mW)

  void validate() const;
};

struct Efficiency {
  double delta_d = 1.0;
  double delta_theta = 1.0;
};

/// delta_d * delta_theta * p_tx * |h|^2.
double wpt_power(const WptParams& p);

/// WPT power over p.tau plus solar power over tau_solar, in joules.
double harvested_energy(const WptParams& p, double solar_power_w,
                        double tau_solar_s);

/// Normalizes each curve by its maximum received power and interpolates
/// at (d, theta); the orientation curve wraps at 360 degrees. Queries
/// below 0.2 m are outside the measured regime and rejected.
Efficiency efficiency_from_table(const EfficiencyTable& table, double d_m,
                                 double theta_deg);

struct FrameEnergyResult {
  NodeState node;
  bool floored = false;  // consumption would have taken energy below zero
  bool capped = false;   // harvest clamped at e_max
};

/// One frame's energy update: subtract the RCAP cost if the node
/// participated and e_tx per packet sent, add the harvest, clamp to
/// [0, e_max]. Going below zero is flagged, never silent.
FrameEnergyResult apply_frame_energy(NodeState node, bool participated_rcap,
                                     int packets_sent, double harvest_j,
                                     const EnergyConstants& c, double e_max);

/// Per-node, per-frame solar power in watts.
class SolarSource {
 public:
  virtual ~SolarSource() = default;
  virtual double power_w(NodeId node, int frame) const = 0;
};

class NoSolar : public SolarSource {
 public:
  double power_w(NodeId, int) const override { return 0.0; }
};

/// Zero-order hold over a solar trace, same alignment as TraceChannel.
class TraceSolar : public SolarSource {
 public:
  explicit TraceSolar(SolarTrace trace);

  double power_w(NodeId node, int frame) const override;

 private:
  std::vector<std::vector<std::pair<int, double>>> per_node_;  // (frame, mW)
};

/// Half-sine day cycle: amplitude * max(0, sin(2 pi t / period)),
/// identical for every node. Stands in when no trace is supplied.
class DiurnalSolar : public SolarSource {
 public:
  DiurnalSolar(double amplitude_mw, long period_frames);

  double power_w(NodeId node, int frame) const override;

 private:
  double amplitude_w_;
  long period_;
};

/// Joules harvested by a node in one frame. Called once per (node, frame),
/// nodes in ascending id order; sources with internal randomness rely on
/// that order for reproducibility.
class HarvestSource {
 public:
  virtual ~HarvestSource() = default;
  virtual double harvest_j(NodeId node, int frame) = 0;
};

/// WPT plus solar. With fading enabled |h|^2 is drawn Exp(1) per
/// (node, frame) from the given seed.
class StandardHarvest : public HarvestSource {
 public:
  StandardHarvest(WptParams wpt, std::shared_ptr<const SolarSource> solar,
                  double tau_solar, bool fading, std::uint64_t seed);

  double harvest_j(NodeId node, int frame) override;

 private:
  WptParams wpt_;
  std::shared_ptr<const SolarSource> solar_;
  double tau_solar_;
  bool fading_;
  std::mt19937_64 rng_;
};

/// Fixed per-(node, frame) joules; zero beyond the horizon. Used for
/// exact-solver instances and tests.
class MatrixHarvest : public HarvestSource {
 public:
  explicit MatrixHarvest(std::vector<std::vector<double>> joules);

  double harvest_j(NodeId node, int frame) override;

 private:
  std::vector<std::vector<double>> joules_;
};

}  // namespace ehfs
