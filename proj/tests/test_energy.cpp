#include "doctest.h"
#include "ehfs/energy.hpp"

#include <random>
#include <stdexcept>

using namespace ehfs;

TEST_CASE("wpt power is the product of the four factors") {
  WptParams p;
  p.delta_d = 0.5;
  p.delta_theta = 0.5;
  p.p_tx = 3.0;
  p.channel_gain_sq = 1.0;
  CHECK(wpt_power(p) == doctest::Approx(0.75).epsilon(1e-12));

  p.channel_gain_sq = 0.0;
  CHECK(wpt_power(p) == 0.0);

  p.delta_d = 1.0;
  p.delta_theta = 1.0;
  p.channel_gain_sq = 1.0;
  p.p_tx = 7.25;
  CHECK(wpt_power(p) == doctest::Approx(7.25).epsilon(1e-12));

  p.delta_d = 0.0;
  CHECK_THROWS_AS(wpt_power(p), std::invalid_argument);
  p.delta_d = 1.5;
  CHECK_THROWS_AS(wpt_power(p), std::invalid_argument);
}

TEST_CASE("harvested energy sums wpt and solar contributions") {
  WptParams p;
  p.delta_d = 0.5;
  p.delta_theta = 0.5;
  p.p_tx = 3.0;
  p.channel_gain_sq = 1.0;
  p.tau = 10.0;
  CHECK(harvested_energy(p, 0.0, 0.0) == doctest::Approx(7.5).epsilon(1e-12));

  p.tau = 0.0;
  CHECK(harvested_energy(p, 5e-3, 100.0) ==
        doctest::Approx(0.5).epsilon(1e-12));

  CHECK(harvested_energy(p, 5e-3, 0.0) == 0.0);

  // Linearity in each duration and in solar power.
  p.tau = 3.0;
  const double base = harvested_energy(p, 2e-3, 50.0);
  WptParams twice = p;
  twice.tau = 6.0;
  CHECK(harvested_energy(twice, 2e-3, 100.0) ==
        doctest::Approx(2.0 * base).epsilon(1e-12));
  CHECK(harvested_energy(p, 4e-3, 50.0) - harvested_energy(p, 0.0, 50.0) ==
        doctest::Approx(2.0 * (base - harvested_energy(p, 0.0, 50.0)))
            .epsilon(1e-9));
}

TEST_CASE("efficiency table normalizes and interpolates") {
  EfficiencyTable t;
  t.distance_curve = {{0.2, 8.0}, {0.55, 4.0}, {1.0, 1.0}};
  t.orientation_curve = {{0.0, 6.0}, {90.0, 1.5}, {180.0, 5.0},
                         {270.0, 1.5}, {315.0, 5.5}};

  // At the distance-curve maximum the factor is exactly 1.
  const Efficiency at_max = efficiency_from_table(t, 0.2, 0.0);
  CHECK(at_max.delta_d == doctest::Approx(1.0));
  CHECK(at_max.delta_theta == doctest::Approx(1.0));

  // Orthogonal antennas (90 and 270 degrees) harvest the least.
  const Efficiency ortho = efficiency_from_table(t, 0.55, 90.0);
  CHECK(ortho.delta_theta == doctest::Approx(1.5 / 6.0));
  for (double theta : {0.0, 45.0, 135.0, 180.0, 315.0}) {
    CHECK(efficiency_from_table(t, 0.55, theta).delta_theta >=
          ortho.delta_theta);
  }

  // Linear midpoint between two curve points.
  const Efficiency mid = efficiency_from_table(t, 0.775, 45.0);
  CHECK(mid.delta_d == doctest::Approx((4.0 + 1.0) / 2.0 / 8.0));
  CHECK(mid.delta_theta == doctest::Approx((6.0 + 1.5) / 2.0 / 6.0));

  // Orientation wraps around 360.
  const Efficiency wrapped = efficiency_from_table(t, 0.55, 337.5);
  CHECK(wrapped.delta_theta == doctest::Approx((5.5 + 6.0) / 2.0 / 6.0));

  CHECK_THROWS_AS(efficiency_from_table(t, 0.1, 0.0), std::invalid_argument);

  EfficiencyTable bad;
  bad.distance_curve = {{0.1, 5.0}};  // below the measured floor
  bad.orientation_curve = {{0.0, 5.0}};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("frame energy update") {
  EnergyConstants c;
  c.e_tx_hello = 0.03e-3;
  c.e_rx_hack = 0.01e-3;
  c.e_rx_sack = 0.01e-3;
  c.e_tx = 0.1e-3;

  NodeState n;
  n.energy = 1.0;

  // RCAP plus 100 packets, no harvest: 1 - 0.05 mJ - 10 mJ.
  FrameEnergyResult r = apply_frame_energy(n, true, 100, 0.0, c, 50.0);
  CHECK(r.node.energy == doctest::Approx(0.98995).epsilon(1e-12));
  CHECK_FALSE(r.floored);
  CHECK_FALSE(r.capped);

  // No-op when nothing happened.
  r = apply_frame_energy(n, false, 0, 0.0, c, 50.0);
  CHECK(r.node.energy == 1.0);

  // Harvest clamps at e_max.
  r = apply_frame_energy(n, false, 0, 100.0, c, 50.0);
  CHECK(r.node.energy == 50.0);
  CHECK(r.capped);

  // Spending past zero floors at zero with the flag set.
  n.energy = 0.5e-3;
  r = apply_frame_energy(n, true, 50, 0.0, c, 50.0);
  CHECK(r.node.energy == 0.0);
  CHECK(r.floored);
}

TEST_CASE("energy is non-increasing without harvesting") {
  EnergyConstants c;
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> packets(0, 20);
  std::bernoulli_distribution rcap(0.5);
  NodeState n;
  n.energy = 2.0;
  double prev = n.energy;
  for (int f = 0; f < 200; ++f) {
    const FrameEnergyResult r =
        apply_frame_energy(n, rcap(rng), packets(rng), 0.0, c, 50.0);
    n = r.node;
    CHECK(n.energy <= prev);
    CHECK(n.energy >= 0.0);
    prev = n.energy;
  }
}

TEST_CASE("solar sources") {
  SolarTrace trace;
  trace.samples = {{1, 1, 10.0}, {1, 10, 2.0}};
  const TraceSolar solar{trace};
  CHECK(solar.power_w(1, 1) == doctest::Approx(10e-3));
  CHECK(solar.power_w(1, 9) == doctest::Approx(10e-3));   // held
  CHECK(solar.power_w(1, 10) == doctest::Approx(2e-3));
  CHECK(solar.power_w(2, 1) == 0.0);  // absent from the trace

  const DiurnalSolar diurnal(8.0, 100);
  CHECK(diurnal.power_w(1, 1) == 0.0);  // frame 1 is phase zero
  CHECK(diurnal.power_w(1, 26) == doctest::Approx(8e-3));  // quarter period
  CHECK(diurnal.power_w(1, 76) == 0.0);  // night half clamps to zero
  CHECK(diurnal.power_w(3, 26) == diurnal.power_w(1, 26));
}

TEST_CASE("standard harvest composes wpt and solar") {
  WptParams wpt;
  wpt.p_tx = 3.0;
  wpt.delta_d = 0.5;
  wpt.delta_theta = 0.5;
  wpt.tau = 2.0;
  StandardHarvest h(wpt, std::make_shared<NoSolar>(), 0.0, false, 1);
  CHECK(h.harvest_j(1, 1) == doctest::Approx(1.5).epsilon(1e-12));

  // Fading draws are reproducible per seed and have roughly unit mean.
  StandardHarvest f1(wpt, std::make_shared<NoSolar>(), 0.0, true, 42);
  StandardHarvest f2(wpt, std::make_shared<NoSolar>(), 0.0, true, 42);
  double sum = 0.0;
  for (int i = 0; i < 4000; ++i) {
    const double a = f1.harvest_j(1, i + 1);
    CHECK(a == f2.harvest_j(1, i + 1));
    sum += a;
  }
  CHECK(sum / 4000.0 == doctest::Approx(1.5).epsilon(0.05));
}

TEST_CASE("matrix harvest indexes by node and frame") {
  MatrixHarvest m({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(m.harvest_j(1, 1) == 1.0);
  CHECK(m.harvest_j(2, 2) == 4.0);
  CHECK(m.harvest_j(2, 3) == 0.0);  // beyond the horizon
  CHECK(m.harvest_j(9, 1) == 0.0);
}
