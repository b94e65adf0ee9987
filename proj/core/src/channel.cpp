#include "ehfs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ehfs {

void AnalyticChannelParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw std::invalid_argument(std::string("channel: ") + name +
                                  " must be positive");
    }
  };
  positive(g_tx, "g_tx");
  positive(g_rx, "g_rx");
  positive(f0, "f0");
  positive(c, "c");
  positive(k2, "k2");
  positive(n0, "n0");
  positive(gamma0, "gamma0");
  positive(p_tx, "p_tx");
}

double k1(const AnalyticChannelParams& p) {
  p.validate();
  const double lambda0 = p.c / p.f0;
  const double four_pi = 4.0 * std::numbers::pi;
  return four_pi * four_pi / (p.g_tx * p.g_rx * lambda0 * lambda0);
}

static void require_distance(double d) {
  if (!(d > 0.0)) {
    throw std::invalid_argument("channel: distance must be positive");
  }
}

double path_loss(const AnalyticChannelParams& p, double d) {
  require_distance(d);
  return k1(p) * std::pow(d, p.k2);
}

double mean_snr(const AnalyticChannelParams& p, double d) {
  require_distance(d);
  return p.p_tx / (k1(p) * p.n0 * std::pow(d, p.k2));
}

double prr_analytic(const AnalyticChannelParams& p, double d) {
  require_distance(d);
  const double k_src = k1(p) * p.n0 * p.gamma0 / p.p_tx;
  return std::exp(-k_src * std::pow(d, p.k2));
}

void RssiTrace::validate() const {
  std::vector<int> last_frame;
  for (const RssiSample& s : samples) {
    if (s.node < 1) {
      throw std::invalid_argument("rssi trace: node ids are 1-based");
    }
    if (static_cast<size_t>(s.node) > last_frame.size()) {
      last_frame.resize(s.node, 0);
    }
    if (s.frame < last_frame[s.node - 1]) {
      throw std::invalid_argument(
          "rssi trace: frame indices must be non-decreasing per node");
    }
    last_frame[s.node - 1] = s.frame;
  }
}

PrrTable::PrrTable(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) {
    throw std::invalid_argument("prr table: empty");
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    const auto& [rssi, prr] = points_[i];
    if (prr < 0.0 || prr > 1.0) {
      throw std::invalid_argument("prr table: values must be in [0, 1]");
    }
    if (i > 0) {
      if (rssi <= points_[i - 1].first) {
        throw std::invalid_argument(
            "prr table: breakpoints must be strictly increasing");
      }
      if (prr < points_[i - 1].second) {
        throw std::invalid_argument("prr table: values must be non-decreasing");
      }
    }
  }
}

double PrrTable::operator()(double rssi_dbm) const {
  if (rssi_dbm <= points_.front().first) return points_.front().second;
  if (rssi_dbm >= points_.back().first) return points_.back().second;
  auto hi = std::upper_bound(
      points_.begin(), points_.end(), rssi_dbm,
      [](double v, const auto& pt) { return v < pt.first; });
  auto lo = hi - 1;
  const double t = (rssi_dbm - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

PrrTable PrrTable::default_table() {
  return PrrTable({{-92.0, 0.0}, {-90.0, 0.1}, {-87.0, 0.9}, {-85.0, 1.0}});
}

double rssi_to_prr(double rssi_dbm, const PrrTable& table) {
  return table(rssi_dbm);
}

AnalyticChannel::AnalyticChannel(AnalyticChannelParams params,
                                 std::vector<NodeGeometry> geometry)
    : params_(params) {
  params_.validate();
  prr_.reserve(geometry.size());
  for (const NodeGeometry& g : geometry) {
    prr_.push_back(prr_analytic(params_, g.distance_to_bs));
  }
}

double AnalyticChannel::prr(NodeId node, int /*frame*/) const {
  if (node < 1 || static_cast<size_t>(node) > prr_.size()) {
    throw std::out_of_range("channel: unknown node");
  }
  return prr_[node - 1];
}

TraceChannel::TraceChannel(RssiTrace trace, PrrTable table)
    : table_(std::move(table)) {
  trace.validate();
  for (const RssiSample& s : trace.samples) {
    if (static_cast<size_t>(s.node) > per_node_.size()) {
      per_node_.resize(s.node);
    }
    per_node_[s.node - 1].emplace_back(s.frame, s.rssi_dbm);
  }
}

double TraceChannel::prr(NodeId node, int frame) const {
  if (node < 1 || static_cast<size_t>(node) > per_node_.size() ||
      per_node_[node - 1].empty()) {
    throw std::out_of_range("channel: no trace samples for node");
  }
  const auto& samples = per_node_[node - 1];
  auto hi = std::upper_bound(
      samples.begin(), samples.end(), frame,
      [](int f, const auto& s) { return f < s.first; });
  const double rssi = hi == samples.begin() ? samples.front().second
                                            : (hi - 1)->second;
  return table_(rssi);
}

MatrixChannel::MatrixChannel(std::vector<std::vector<double>> q)
    : q_(std::move(q)) {
  for (const auto& row : q_) {
    if (row.empty()) {
      throw std::invalid_argument("matrix channel: empty row");
    }
    for (double v : row) {
      if (v < 0.0 || v > 1.0) {
        throw std::invalid_argument("matrix channel: prr must be in [0, 1]");
      }
    }
  }
}

double MatrixChannel::prr(NodeId node, int frame) const {
  if (node < 1 || static_cast<size_t>(node) > q_.size()) {
    throw std::out_of_range("channel: unknown node");
  }
  const auto& row = q_[node - 1];
  const size_t idx = std::min<size_t>(frame < 1 ? 0 : frame - 1,
                                      row.size() - 1);
  return row[idx];
}

}  // namespace ehfs
