#include "ehfs/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ehfs {

void WptParams::validate() const {
  if (!(delta_d > 0.0) || delta_d > 1.0 || !(delta_theta > 0.0) ||
      delta_theta > 1.0) {
    throw std::invalid_argument("wpt: efficiencies must be in (0, 1]");
  }
  if (p_tx < 0.0 || tau < 0.0 || channel_gain_sq < 0.0) {
    throw std::invalid_argument("wpt: power, gain and time must be >= 0");
  }
}

void SolarTrace::validate() const {
  std::vector<int> last_frame;
  for (const SolarSample& s : samples) {
    if (s.node < 1) {
      throw std::invalid_argument("solar trace: node ids are 1-based");
    }
    if (s.power_mw < 0.0) {
      throw std::invalid_argument("solar trace: power must be non-negative");
    }
    if (static_cast<size_t>(s.node) > last_frame.size()) {
      last_frame.resize(s.node, 0);
    }
    if (s.frame < last_frame[s.node - 1]) {
      throw std::invalid_argument(
          "solar trace: frame indices must be non-decreasing per node");
    }
    last_frame[s.node - 1] = s.frame;
  }
  if (tau < 0.0) {
    throw std::invalid_argument("solar trace: tau must be non-negative");
  }
}

void EfficiencyTable::validate() const {
  auto check_curve = [](const std::vector<std::pair<double, double>>& curve,
                        const char* name, double key_min, double key_max) {
    if (curve.empty()) {
      throw std::invalid_argument(std::string("efficiency table: ") + name +
                                  " curve is empty");
    }
    double prev = -1e300;
    for (const auto& [key, mw] : curve) {
      if (key < key_min || key >= key_max) {
        throw std::invalid_argument(std::string("efficiency table: ") + name +
                                    " key out of range");
      }
      if (key <= prev) {
        throw std::invalid_argument(std::string("efficiency table: ") + name +
                                    " keys must be strictly increasing");
      }
      if (!(mw > 0.0)) {
        throw std::invalid_argument(std::string("efficiency table: ") + name +
                                    " received power must be positive");
      }
      prev = key;
    }
  };
  check_curve(distance_curve, "distance", 0.2, 1e300);
  check_curve(orientation_curve, "orientation", 0.0, 360.0);
}

double wpt_power(const WptParams& p) {
  p.validate();
  return p.delta_d * p.delta_theta * p.p_tx * p.channel_gain_sq;
}

double harvested_energy(const WptParams& p, double solar_power_w,
                        double tau_solar_s) {
  if (solar_power_w < 0.0 || tau_solar_s < 0.0) {
    throw std::invalid_argument("harvested_energy: negative solar input");
  }
  return wpt_power(p) * p.tau + solar_power_w * tau_solar_s;
}

namespace {

double interp_clamped(const std::vector<std::pair<double, double>>& curve,
                      double key) {
  if (key <= curve.front().first) return curve.front().second;
  if (key >= curve.back().first) return curve.back().second;
  auto hi = std::upper_bound(curve.begin(), curve.end(), key,
                             [](double v, const auto& pt) { return v < pt.first; });
  auto lo = hi - 1;
  const double t = (key - lo->first) / (hi->first - lo->first);
  return lo->second + t * (hi->second - lo->second);
}

double curve_max(const std::vector<std::pair<double, double>>& curve) {
  double m = 0.0;
  for (const auto& [k, v] : curve) m = std::max(m, v);
  return m;
}

}  // namespace

Efficiency efficiency_from_table(const EfficiencyTable& table, double d_m,
                                 double theta_deg) {
  table.validate();
  if (d_m < 0.2) {
    throw std::invalid_argument(
        "efficiency table: distances below 0.2 m are outside the measured "
        "regime");
  }
  const double dmax = curve_max(table.distance_curve);
  const double omax = curve_max(table.orientation_curve);

  Efficiency eff;
  eff.delta_d =
      std::clamp(interp_clamped(table.distance_curve, d_m) / dmax, 0.0, 1.0);

  // Orientation wraps: interpolate between the last point and the first
  // point shifted by 360 degrees.
  double theta = std::fmod(theta_deg, 360.0);
  if (theta < 0.0) theta += 360.0;
  const auto& oc = table.orientation_curve;
  double mw;
  if (theta < oc.front().first || theta > oc.back().first) {
    const double lo_key = oc.back().first;
    const double hi_key = oc.front().first + 360.0;
    const double q = theta < oc.front().first ? theta + 360.0 : theta;
    const double t = (q - lo_key) / (hi_key - lo_key);
    mw = oc.back().second + t * (oc.front().second - oc.back().second);
  } else {
    mw = interp_clamped(oc, theta);
  }
  eff.delta_theta = std::clamp(mw / omax, 0.0, 1.0);
  return eff;
}

FrameEnergyResult apply_frame_energy(NodeState node, bool participated_rcap,
                                     int packets_sent, double harvest_j,
                                     const EnergyConstants& c, double e_max) {
  FrameEnergyResult r;
  double e = node.energy;
  if (participated_rcap) e -= rcap_cost(c);
  e -= packets_sent * c.e_tx;
  e += harvest_j;
  if (e < 0.0) {
    e = 0.0;
    r.floored = true;
  }
  if (e > e_max) {
    e = e_max;
    r.capped = true;
  }
  node.energy = e;
  node.rcap_participant = participated_rcap;
  r.node = node;
  return r;
}

TraceSolar::TraceSolar(SolarTrace trace) {
  trace.validate();
  for (const SolarSample& s : trace.samples) {
    if (static_cast<size_t>(s.node) > per_node_.size()) {
      per_node_.resize(s.node);
    }
    per_node_[s.node - 1].emplace_back(s.frame, s.power_mw);
  }
}

double TraceSolar::power_w(NodeId node, int frame) const {
  if (node < 1 || static_cast<size_t>(node) > per_node_.size() ||
      per_node_[node - 1].empty()) {
    return 0.0;  // nodes absent from the trace harvest no solar
  }
  const auto& samples = per_node_[node - 1];
  auto hi = std::upper_bound(samples.begin(), samples.end(), frame,
                             [](int f, const auto& s) { return f < s.first; });
  const double mw =
      hi == samples.begin() ? samples.front().second : (hi - 1)->second;
  return mw * 1e-3;
}

DiurnalSolar::DiurnalSolar(double amplitude_mw, long period_frames)
    : amplitude_w_(amplitude_mw * 1e-3), period_(period_frames) {
  if (amplitude_mw < 0.0 || period_frames < 1) {
    throw std::invalid_argument("diurnal solar: bad amplitude or period");
  }
}

double DiurnalSolar::power_w(NodeId, int frame) const {
  const long t = (frame - 1) % period_;
  const double s =
      std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / period_);
  return amplitude_w_ * std::max(0.0, s);
}

StandardHarvest::StandardHarvest(WptParams wpt,
                                 std::shared_ptr<const SolarSource> solar,
                                 double tau_solar, bool fading,
                                 std::uint64_t seed)
    : wpt_(wpt),
      solar_(std::move(solar)),
      tau_solar_(tau_solar),
      fading_(fading),
      rng_(seed) {
  wpt_.validate();
  if (tau_solar_ < 0.0) {
    throw std::invalid_argument("harvest: tau_solar must be non-negative");
  }
}

double StandardHarvest::harvest_j(NodeId node, int frame) {
  WptParams p = wpt_;
  if (fading_) {
    std::exponential_distribution<double> exp1(1.0);
    p.channel_gain_sq = wpt_.channel_gain_sq * exp1(rng_);
  }
  const double solar_w = solar_ ? solar_->power_w(node, frame) : 0.0;
  return harvested_energy(p, solar_w, tau_solar_);
}

MatrixHarvest::MatrixHarvest(std::vector<std::vector<double>> joules)
    : joules_(std::move(joules)) {}

double MatrixHarvest::harvest_j(NodeId node, int frame) {
  if (node < 1 || static_cast<size_t>(node) > joules_.size()) return 0.0;
  const auto& row = joules_[node - 1];
  if (frame < 1 || static_cast<size_t>(frame) > row.size()) return 0.0;
  return row[frame - 1];
}

}  // namespace ehfs
