#include "doctest.h"
#include "ehfs/channel.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace ehfs;

namespace {

AnalyticChannelParams base_params() {
  AnalyticChannelParams p;
  p.g_tx = 1.0;
  p.g_rx = 1.0;
  p.f0 = 2.4e9;
  p.k2 = 2.0;
  p.n0 = 1e-12;
  p.gamma0 = 10.0;
  p.p_tx = 1e-3;
  return p;
}

}  // namespace

TEST_CASE("k1 at 2.4 GHz with unity gains") {
  AnalyticChannelParams p = base_params();
  // lambda0 = 0.12491 m, k1 = (4 pi)^2 / lambda0^2 = 10120.47.
  CHECK(k1(p) == doctest::Approx(10120.472884315344).epsilon(1e-12));

  // Identity case: gains and wavelength chosen so the denominator is
  // (4 pi)^2.
  AnalyticChannelParams ident = p;
  const double four_pi = 4.0 * std::acos(-1.0);
  ident.g_tx = four_pi;
  ident.g_rx = four_pi;
  ident.f0 = ident.c;  // lambda0 = 1
  CHECK(k1(ident) == doctest::Approx(1.0).epsilon(1e-12));

  // Doubling the carrier frequency quarters the wavelength squared,
  // so k1 quadruples.
  AnalyticChannelParams doubled = p;
  doubled.f0 = 2.0 * p.f0;
  CHECK(k1(doubled) == doctest::Approx(4.0 * k1(p)).epsilon(1e-12));

  AnalyticChannelParams zero_gain = p;
  zero_gain.g_tx = 0.0;
  CHECK_THROWS_AS(k1(zero_gain), std::invalid_argument);
}

TEST_CASE("path loss is k1 * d^k2") {
  AnalyticChannelParams p = base_params();
  CHECK(path_loss(p, 1.0) == doctest::Approx(k1(p)).epsilon(1e-12));
  CHECK(path_loss(p, 10.0) ==
        doctest::Approx(1012047.2884315344).epsilon(1e-12));
  CHECK(path_loss(p, 20.0) ==
        doctest::Approx(4.0 * path_loss(p, 10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss(p, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(path_loss(p, -3.0), std::invalid_argument);
}

TEST_CASE("mean snr") {
  AnalyticChannelParams p = base_params();
  // Identity: p_tx = k1 * n0 at unit distance.
  AnalyticChannelParams ident = p;
  ident.p_tx = k1(p) * p.n0;
  CHECK(mean_snr(ident, 1.0) == doctest::Approx(1.0).epsilon(1e-12));

  // Direct evaluation chained from the path-loss value above:
  // 1e-3 / (1e-12 * 1.012047e6) = 988.096.
  CHECK(mean_snr(p, 10.0) ==
        doctest::Approx(988.096121031849).epsilon(1e-12));

  AnalyticChannelParams half = p;
  half.p_tx = 0.5 * p.p_tx;
  CHECK(mean_snr(half, 10.0) ==
        doctest::Approx(0.5 * mean_snr(p, 10.0)).epsilon(1e-12));
}

TEST_CASE("analytic prr") {
  AnalyticChannelParams p = base_params();

  // d -> 0+ gives PRR -> 1.
  CHECK(prr_analytic(p, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));

  // Analytic inversion: k_src * d^k2 = ln 2 gives exactly one half.
  const double k_src = k1(p) * p.n0 * p.gamma0 / p.p_tx;
  const double d_half = std::sqrt(std::log(2.0) / k_src);
  CHECK(prr_analytic(p, d_half) == doctest::Approx(0.5).epsilon(1e-12));

  // Identity with the outage form, over randomized parameters.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    AnalyticChannelParams q = base_params();
    q.g_tx = 0.5 + 4.0 * u(rng);
    q.g_rx = 0.5 + 4.0 * u(rng);
    q.f0 = 4e8 + 5e9 * u(rng);
    q.k2 = 2.0 + 2.0 * u(rng);
    q.n0 = std::pow(10.0, -14.0 + 4.0 * u(rng));
    q.gamma0 = 1.0 + 30.0 * u(rng);
    q.p_tx = std::pow(10.0, -4.0 + 2.0 * u(rng));
    const double d = 1.0 + 200.0 * u(rng);
    const double direct = prr_analytic(q, d);
    const double via_snr = std::exp(-q.gamma0 / mean_snr(q, d));
    CHECK(direct == doctest::Approx(via_snr).epsilon(1e-12));
  }
}

TEST_CASE("analytic prr monotonicity") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    AnalyticChannelParams p = base_params();
    p.gamma0 = 1.0 + 20.0 * u(rng);
    p.p_tx = 1e-4 + 1e-2 * u(rng);
    const double d1 = 1.0 + 100.0 * u(rng);
    const double d2 = d1 + 1.0 + 100.0 * u(rng);
    CHECK(prr_analytic(p, d1) > prr_analytic(p, d2));

    AnalyticChannelParams harder = p;
    harder.gamma0 = p.gamma0 * (1.1 + u(rng));
    CHECK(prr_analytic(harder, d1) < prr_analytic(p, d1));

    AnalyticChannelParams stronger = p;
    stronger.p_tx = p.p_tx * (1.1 + u(rng));
    CHECK(prr_analytic(stronger, d1) > prr_analytic(p, d1));
  }
}

TEST_CASE("rssi table interpolation and clamping") {
  const PrrTable table = PrrTable::default_table();
  CHECK(rssi_to_prr(-100.0, table) == 0.0);   // below the floor
  CHECK(rssi_to_prr(-92.0, table) == 0.0);    // breakpoint exactly
  CHECK(rssi_to_prr(-90.0, table) == doctest::Approx(0.1));
  CHECK(rssi_to_prr(-88.5, table) == doctest::Approx(0.5));  // midpoint
  CHECK(rssi_to_prr(-85.0, table) == 1.0);
  CHECK(rssi_to_prr(-40.0, table) == 1.0);    // above the ceiling

  CHECK_THROWS_AS(PrrTable({}), std::invalid_argument);
  CHECK_THROWS_AS(PrrTable({{-90.0, 0.5}, {-92.0, 0.6}}),
                  std::invalid_argument);  // keys not increasing
  CHECK_THROWS_AS(PrrTable({{-92.0, 0.8}, {-90.0, 0.2}}),
                  std::invalid_argument);  // values decreasing
  CHECK_THROWS_AS(PrrTable({{-92.0, 1.2}}), std::invalid_argument);
}

TEST_CASE("rssi table is monotone for random valid tables") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::pair<double, double>> pts;
    double rssi = -100.0, prr = 0.0;
    const int k = 2 + static_cast<int>(u(rng) * 5);
    for (int i = 0; i < k; ++i) {
      rssi += 0.5 + 5.0 * u(rng);
      prr = std::min(1.0, prr + u(rng) * 0.5);
      pts.emplace_back(rssi, prr);
    }
    const PrrTable table(pts);
    double prev = -1.0;
    for (double q = -105.0; q < -60.0; q += 0.37) {
      const double v = table(q);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("trace channel holds the last sample per node") {
  RssiTrace trace;
  trace.samples = {{1, 1, -95.0}, {1, 5, -86.0}, {2, 2, -88.5}};
  const TraceChannel ch(trace, PrrTable::default_table());
  CHECK(ch.prr(1, 1) == 0.0);                       // sample at frame 1
  CHECK(ch.prr(1, 4) == 0.0);                       // held from frame 1
  CHECK(ch.prr(1, 5) == doctest::Approx(0.95));     // -86 interpolated
  CHECK(ch.prr(1, 100) == doctest::Approx(0.95));   // held forever
  CHECK(ch.prr(2, 1) == doctest::Approx(0.5));      // before first: first
  CHECK(ch.prr(2, 3) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ch.prr(3, 1), std::out_of_range);
}

TEST_CASE("trace validation rejects out-of-order frames") {
  RssiTrace trace;
  trace.samples = {{1, 5, -90.0}, {1, 3, -90.0}};
  CHECK_THROWS_AS(trace.validate(), std::invalid_argument);
}

TEST_CASE("analytic channel is constant per node") {
  AnalyticChannelParams p = base_params();
  const AnalyticChannel ch(p, {{10.0}, {50.0}});
  CHECK(ch.prr(1, 1) == doctest::Approx(prr_analytic(p, 10.0)));
  CHECK(ch.prr(1, 99) == ch.prr(1, 1));
  CHECK(ch.prr(2, 1) == doctest::Approx(prr_analytic(p, 50.0)));
  CHECK(ch.prr(1, 1) > ch.prr(2, 1));
}
