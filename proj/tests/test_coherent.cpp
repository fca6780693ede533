#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "optdisc/coherent.hpp"
#include "optdisc/oracle.hpp"

using namespace optdisc;

TEST_CASE("normal_cdf basics") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.281552) == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(std::abs(normal_cdf(1.281552) - normal_cdf_quadrature(1.281552)) <=
        1e-12);
  std::mt19937 rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = 16.0 * (2.0 * testhelp::uniform01(rng) - 1.0);
    CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) <= 1e-14);
  }
  // strictly increasing
  for (int i = 0; i < 200; ++i) {
    double a = 8.0 * (2.0 * testhelp::uniform01(rng) - 1.0);
    double b = 8.0 * (2.0 * testhelp::uniform01(rng) - 1.0);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    CHECK(normal_cdf(a) < normal_cdf(b));
  }
  CHECK_THROWS_AS(normal_cdf(std::nan("")), domain_error);
}

TEST_CASE("normal_quantile inverts normal_cdf") {
  CHECK(normal_quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(normal_quantile(0.9) ==
        doctest::Approx(1.2815515655446004).epsilon(1e-10));
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    const double p = 0.001 + 0.998 * testhelp::uniform01(rng);
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) <= 1e-12);
  }
  CHECK_THROWS_AS(normal_quantile(0.0), domain_error);
  CHECK_THROWS_AS(normal_quantile(1.0), domain_error);
}

TEST_CASE("coherent_error closed form") {
  const DeviceSpec full({kPi, -kPi});
  CHECK(coherent_error(0.0, full) == doctest::Approx(0.5));
  // a = 2 sqrt(eta) at delta* = pi; eta chosen so a is the 90% quantile
  const double a = 1.2815515655446004;
  const double eta = (a / 2.0) * (a / 2.0);
  CHECK(coherent_error(eta, full) == doctest::Approx(0.1).epsilon(1e-10));

  const DeviceSpec quarter({kPi / 4, -kPi / 4});
  CHECK(coherent_error(2.8037085013495413, quarter) ==
        doctest::Approx(0.1).epsilon(1e-9));

  // strictly decreasing in eta
  double last = coherent_error(0.0, quarter);
  for (double e = 0.25; e <= 5.0; e += 0.25) {
    const double now = coherent_error(e, quarter);
    CHECK(now < last);
    last = now;
  }
  CHECK_THROWS_AS(coherent_error(-1.0, quarter), domain_error);
  CHECK_THROWS_AS(coherent_error(1.0, DeviceSpec({0.0, 0.0})),
                  devices_identical_error);
}

TEST_CASE("coherent_energy_for_error inverts the error curve") {
  const DeviceSpec quarter({kPi / 4, -kPi / 4});
  const CoherentStrategy s1 = coherent_energy_for_error(0.1, quarter);
  CHECK(s1.eta == doctest::Approx(2.8037085013495413).epsilon(1e-9));
  CHECK(s1.best_mode == 0);
  CHECK(std::abs(std::norm(s1.alpha_star) - s1.eta) <= 1e-12);
  CHECK(std::abs(coherent_error(s1.eta, quarter) - 0.1) <= 1e-10);

  const DeviceSpec twelfth({kPi / 12, -kPi / 12});
  const CoherentStrategy s2 = coherent_energy_for_error(0.1, twelfth);
  CHECK(s2.eta == doctest::Approx(24.099988881357792).epsilon(1e-9));

  // q -> 1/2 needs no photons
  CHECK(coherent_energy_for_error(0.499999, quarter).eta <= 1e-9);

  CHECK_THROWS_AS(coherent_energy_for_error(0.5, quarter), domain_error);
  CHECK_THROWS_AS(coherent_energy_for_error(0.0, quarter), domain_error);
}

TEST_CASE("bound saturation: |v0 - v1|^2 = 16 sin^2(delta*/2) eta") {
  for (const auto& phases :
       {std::vector<double>{kPi / 4, -kPi / 4},
        std::vector<double>{-1.1, 0.3, 0.7},
        std::vector<double>{kPi, -kPi}}) {
    const DeviceSpec device(phases);
    const CoherentStrategy strategy = coherent_energy_for_error(0.2, device);
    // homodyne outcome means per mode: v0_i = 2 Re(alpha_i),
    // v1_i = 2 Re(e^{i delta_i} alpha_i); only the driven mode contributes
    double dist_sq = 0.0;
    for (int i = 0; i < device.mode_count(); ++i) {
      const complexd alpha =
          i == strategy.best_mode ? strategy.alpha_star : complexd(0.0, 0.0);
      const double v0 = 2.0 * std::real(alpha);
      const double v1 =
          2.0 * std::real(std::polar(1.0, device.phases()[i]) * alpha);
      dist_sq += (v0 - v1) * (v0 - v1);
    }
    const double half = std::sin(std::abs(device.dominant_phase()) / 2.0);
    CHECK(std::abs(dist_sq - 16.0 * half * half * strategy.eta) <= 1e-10);
  }
}

TEST_CASE("concentrating the budget on the dominant mode is optimal") {
  // P_e depends only on |v0 - v1|, so any split of eta across modes maps to
  // an error through the same 1 - Phi(|v0 - v1|/2); grid over 2-mode splits.
  const DeviceSpec device({kPi / 3, kPi / 7});
  const double eta = 1.7;
  const double concentrated = coherent_error(eta, device);
  for (int i = 0; i <= 40; ++i) {
    const double eta0 = eta * i / 40.0;
    const double eta1 = eta - eta0;
    double dist_sq = 0.0;
    dist_sq += 16.0 * std::pow(std::sin(device.phases()[0] / 2.0), 2) * eta0;
    dist_sq += 16.0 * std::pow(std::sin(device.phases()[1] / 2.0), 2) * eta1;
    const double split_error = 1.0 - normal_cdf(std::sqrt(dist_sq) / 2.0);
    CHECK(split_error >= concentrated - 1e-12);
  }
}

TEST_CASE("coherent curve rejects q = 1/2 and decreases in eta") {
  const DeviceSpec device({kPi / 4, -kPi / 4});
  CHECK_THROWS_AS(coherent_tradeoff_curve(device, {0.5}), domain_error);
  std::vector<double> qs;
  for (double q = 0.01; q < 0.49; q += 0.02) {
    qs.push_back(q);
  }
  const auto curve = coherent_tradeoff_curve(device, qs);
  REQUIRE(curve.size() == qs.size());
  for (std::size_t i = 1; i < curve.size(); ++i) {
    CHECK(curve[i].mean_photons < curve[i - 1].mean_photons);
    CHECK(curve[i].energy == 0.5 + curve[i].mean_photons);
    CHECK(curve[i].strategy == Strategy::coherent_homodyne);
  }
}

TEST_CASE("advantage ratios against the exact optimum") {
  const DeviceSpec quarter({kPi / 4, -kPi / 4});
  const double r_quarter = advantage_ratio(quarter, 0.1);
  CHECK(r_quarter == doctest::Approx(3.9885248292701463).epsilon(1e-9));
  CHECK(r_quarter > 3.5);
  CHECK(r_quarter < 4.5);

  const DeviceSpec twelfth({kPi / 12, -kPi / 12});
  const double r_twelfth = advantage_ratio(twelfth, 0.1);
  CHECK(r_twelfth == doctest::Approx(11.428126234968415).epsilon(1e-9));
  CHECK(r_twelfth > 10.5);
  CHECK(r_twelfth < 13.0);

  // the gap widens as the demanded error shrinks
  double last = 0.0;
  for (double q : {0.3, 0.2, 0.1, 0.05}) {
    const double r = advantage_ratio(quarter, q);
    CHECK(r > last);
    last = r;
  }

  // coherent point strictly dominates the optimal one at delta=pi/4, q=0.1
  CHECK(coherent_energy_for_error(0.1, quarter).eta >
        optimal_beamsplitter_state(kPi / 4, 0.1).point.mean_photons);

  CHECK_THROWS_AS(advantage_ratio(DeviceSpec({0.3, 0.2}), 0.1), domain_error);
  CHECK_THROWS_AS(advantage_ratio(DeviceSpec({0.3}), 0.1), domain_error);
  // [pi, -pi] wraps to [pi, pi] but is still beamsplitter-form mod 2 pi
  CHECK_NOTHROW(advantage_ratio(DeviceSpec({kPi, -kPi}), 0.1));
}
