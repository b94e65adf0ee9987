#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "ehfs/model.hpp"

namespace ehfs {

/// Free-space path loss with Rayleigh block fading. K_1 and K_src are
/// derived from these, not stored.
struct AnalyticChannelParams {
  double g_tx = 1.0;        // transmitter antenna gain
  double g_rx = 1.0;        // receiver antenna gain
  double f0 = 2.4e9;        // carrier frequency, Hz
  double c = 299792458.0;   // m/s
  double k2 = 2.0;          // path-loss exponent
  double n0 = 1e-12;        // noise power, W
  double gamma0 = 10.0;     // SNR threshold for successful reception
  double p_tx = 1e-3;       // node transmit power, W

  void validate() const;
};

struct NodeGeometry {
  double distance_to_bs = 0.0;  // meters, fixed per node here
};

/// (4 pi)^2 / (g_tx * g_rx * lambda0^2), lambda0 = c / f0.
double k1(const AnalyticChannelParams& p);

/// k1 * d^k2. Requires d > 0.
double path_loss(const AnalyticChannelParams& p, double d);

/// p_tx / (k1 * n0 * d^k2).
double mean_snr(const AnalyticChannelParams& p, double d);

/// exp(-k_src * d^k2) with k_src = k1 * n0 * gamma0 / p_tx; equals one
/// minus the Rayleigh outage probability, i.e. exp(-gamma0 / mean_snr).
double prr_analytic(const AnalyticChannelParams& p, double d);

struct RssiSample {
  NodeId node = kNoNode;
  int frame = 0;
  double rssi_dbm = 0.0;
};

/// Time-ordered RSSI samples; frame indices non-decreasing per node.
struct RssiTrace {
  std::vector<RssiSample> samples;

  void validate() const;
};

/// Piecewise-linear RSSI -> PRR map. Breakpoints strictly increasing in
/// dBm, values non-decreasing in [0, 1]; queries clamp outside the table.
class PrrTable {
 public:
  explicit PrrTable(std::vector<std::pair<double, double>> points);

  double operator()(double rssi_dbm) const;
  const std::vector<std::pair<double, double>>& points() const {
    return points_;
  }

  /// Synthetic 2.4 GHz reception cliff, override via config.
  static PrrTable default_table();

 private:
  std::vector<std::pair<double, double>> points_;
};

double rssi_to_prr(double rssi_dbm, const PrrTable& table);

/// Per-node, per-frame link quality. Queried once per (node, frame);
/// PRR is frozen within a frame (block fading).
class ChannelSource {
 public:
  virtual ~ChannelSource() = default;
  virtual double prr(NodeId node, int frame) const = 0;
};

class AnalyticChannel : public ChannelSource {
 public:
  AnalyticChannel(AnalyticChannelParams params,
                  std::vector<NodeGeometry> geometry);

  double prr(NodeId node, int frame) const override;

 private:
  AnalyticChannelParams params_;
  std::vector<double> prr_;  // precomputed, distances are static
};

/// Maps each frame to the latest trace sample at or before it
/// (zero-order hold); frames before a node's first sample use that
/// first sample.
class TraceChannel : public ChannelSource {
 public:
  TraceChannel(RssiTrace trace, PrrTable table);

  double prr(NodeId node, int frame) const override;

 private:
  PrrTable table_;
  std::vector<std::vector<std::pair<int, double>>> per_node_;  // (frame, rssi)
};

/// Fixed q[node][frame] table; the last column holds beyond the horizon.
/// Used for exact-solver instances and tests.
class MatrixChannel : public ChannelSource {
 public:
  explicit MatrixChannel(std::vector<std::vector<double>> q);

  double prr(NodeId node, int frame) const override;

 private:
  std::vector<std::vector<double>> q_;
};

}  // namespace ehfs
