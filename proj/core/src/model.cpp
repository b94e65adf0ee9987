#include "ehfs/model.hpp"

#include <stdexcept>

namespace ehfs {

const char* to_string(ProtocolState s) {
  switch (s) {
    case ProtocolState::AD: return "AD";
    case ProtocolState::NA: return "NA";
    case ProtocolState::ND: return "ND";
  }
  return "?";
}

void EnergyConstants::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("EnergyConstants: ") + name +
                                  " must be positive");
    }
  };
  positive(e_tx_hello, "e_tx_hello");
  positive(e_rx_hack, "e_rx_hack");
  positive(e_rx_sack, "e_rx_sack");
  positive(e_tx, "e_tx");
  positive(e_td, "e_td");
  positive(v_cc, "v_cc");
  positive(i_tx, "i_tx");
  positive(i_rx, "i_rx");
  positive(r_b, "r_b");
}

void FairnessConfig::validate() const {
  if (!(kappa > 0.0) || kappa > 1.0) {
    throw std::invalid_argument("kappa must be in (0, 1]");
  }
}

int FrameSchedule::granted(NodeId id) const {
  int n = 0;
  for (NodeId s : slots) {
    if (s == id) ++n;
  }
  return n;
}

double rcap_cost(const EnergyConstants& c) {
  return c.e_tx_hello + c.e_rx_hack + c.e_rx_sack;
}

double packet_energy(double v_cc, double i, double bits, double r_b) {
  if (!(r_b > 0.0)) {
    throw std::invalid_argument("packet_energy: r_b must be positive");
  }
  if (v_cc < 0.0 || i < 0.0 || bits < 0.0) {
    throw std::invalid_argument("packet_energy: negative input");
  }
  return v_cc * i * bits / r_b;
}

}  // namespace ehfs
