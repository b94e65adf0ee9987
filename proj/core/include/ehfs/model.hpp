#pragma once

#include <string>
#include <vector>

namespace ehfs {

/// 1-based node index, stable for the whole run.
using NodeId = int;
inline constexpr NodeId kNoNode = 0;

/// Tolerance for packet-count and fairness comparisons on the
/// expected-value accumulators.
inline constexpr double kCountEps = 1e-9;

/// Protocol states: AD competes in RCAP and transmits, NA rests after
/// reaching its fairness share, ND is out of the protocol for good
/// (payload finished or energy below the power-down threshold).
enum class ProtocolState { AD, NA, ND };

const char* to_string(ProtocolState s);

/// Radio energy costs and rates. Defaults are the CC2420 numbers used
/// throughout: 10-byte control packets, 32-byte data payload, 250 kbit/s,
/// 3 V supply, 35 mA tx / 15 mA rx.
struct EnergyConstants {
  double e_tx_hello = 3.0e-5;   // J per Hello sent
  double e_rx_hack = 1.0e-5;    // J per HACK received
  double e_rx_sack = 1.0e-5;    // J per SACK received
  double e_tx = 1.0e-4;         // J per data packet sent
  double e_td = 1.67e-3;        // power-down threshold, J
  double v_cc = 3.0;            // V
  double i_tx = 0.035;          // A
  double i_rx = 0.015;          // A
  double r_b = 250e3;           // bit/s

  void validate() const;  // throws std::invalid_argument
};

struct FairnessConfig {
  double kappa = 0.5;  // fraction of each node's payload, in (0, 1]

  void validate() const;
};

/// One sensor node's mutable per-run state.
struct NodeState {
  NodeId id = kNoNode;
  int payload_total = 0;        // lambda_i, packets
  double delivered = 0.0;       // alpha_i, expected packets received so far
  double energy = 0.0;          // residual energy, J
  double energy_initial = 0.0;  // E_i^0, J
  double prr = 1.0;             // q_i^f, frozen within a frame
  ProtocolState protocol_state = ProtocolState::AD;
  bool rcap_participant = false;  // phi_i^f for the current frame
  int arrival_frame = 1;          // 1 in NOP scenarios

  bool fair(double kappa) const {
    return delivered >= kappa * payload_total - kCountEps;
  }
};

/// Slot assignment for one super frame. Entry kNoNode means the slot is
/// idle; at most one node per slot.
struct FrameSchedule {
  int frame_index = 0;
  std::vector<NodeId> slots;

  int granted(NodeId id) const;
};

/// Per-frame point of the run series.
struct FramePoint {
  int frame = 0;
  double gamma = 0.0;          // packets received by the BS this frame
  double harvested_cum = 0.0;  // J harvested by all nodes since frame 1
  int live_nodes = 0;          // arrived nodes with energy >= E_td
  int fair_nodes = 0;
  int dead_nodes = 0;
};

struct RunMetrics {
  double total_received = 0.0;  // sum of per-frame gamma
  int fair_nodes = 0;
  int dead_nodes = 0;           // energy < E_td at run end
  std::vector<FramePoint> per_frame;
};

/// RCAP cost per participating node: one Hello sent, one HACK and one
/// SACK received.
double rcap_cost(const EnergyConstants& c);

/// Energy of moving `bits` through the radio at supply v_cc and current i:
/// v_cc * i * bits / r_b. Rejects non-positive r_b.
double packet_energy(double v_cc, double i, double bits, double r_b);

}  // namespace ehfs
