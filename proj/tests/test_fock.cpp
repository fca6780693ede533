#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "optdisc/fock.hpp"

using namespace optdisc;

TEST_CASE("phase wrapping lands in (-pi, pi]") {
  CHECK(wrap_phase(0.0) == 0.0);
  CHECK(wrap_phase(kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_phase(2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(wrap_phase(-0.3) == doctest::Approx(-0.3));
  CHECK_THROWS_AS(wrap_phase(std::nan("")), domain_error);
}

TEST_CASE("DeviceSpec canonicalizes and validates") {
  DeviceSpec device({kPi / 4, -kPi / 4});
  CHECK(device.mode_count() == 2);
  CHECK(device.dominant_mode() == 0);  // tie resolves to the lowest index
  CHECK(device.dominant_phase() == doctest::Approx(kPi / 4));
  CHECK_THROWS_AS(DeviceSpec({}), domain_error);

  DeviceSpec wrapped({kPi, -kPi});
  CHECK(wrapped.phases()[0] == doctest::Approx(kPi));
  CHECK(wrapped.phases()[1] == doctest::Approx(kPi));

  DeviceSpec mixed({0.2, -1.4, 0.6});
  CHECK(mixed.dominant_mode() == 1);
  CHECK(mixed.dominant_phase() == doctest::Approx(-1.4));
}

TEST_CASE("FockIndex totals and ordering") {
  FockIndex a{2, 1};
  CHECK(a.total() == 3);
  CHECK(a.mode_count() == 2);
  CHECK(FockIndex{0, 1} < FockIndex{1, 0});
  CHECK_THROWS_AS(FockIndex({-1, 0}), domain_error);
  CHECK_THROWS_AS(FockIndex(std::vector<int>{}), domain_error);
}

TEST_CASE("TruncatedState norm policy") {
  TruncatedState::amplitude_map amps;
  amps.emplace(FockIndex{0, 0}, complexd(1.0 + 5e-10, 0.0));
  TruncatedState repaired(2, std::move(amps));  // inside the repair window
  CHECK(repaired.squared_norm() == doctest::Approx(1.0).epsilon(1e-14));

  TruncatedState::amplitude_map bad;
  bad.emplace(FockIndex{0, 0}, complexd(1.1, 0.0));
  CHECK_THROWS_AS(TruncatedState(2, std::move(bad)), domain_error);

  TruncatedState::amplitude_map raw;
  raw.emplace(FockIndex{0, 0}, complexd(3.0, 0.0));
  raw.emplace(FockIndex{1, 0}, complexd(0.0, 4.0));
  TruncatedState normalized = TruncatedState::normalized(3, std::move(raw));
  CHECK(normalized.squared_norm() == doctest::Approx(1.0).epsilon(1e-14));

  TruncatedState::amplitude_map overflow;
  overflow.emplace(FockIndex{3, 0}, complexd(1.0, 0.0));
  CHECK_THROWS_AS(TruncatedState(2, std::move(overflow)), domain_error);

  TruncatedState::amplitude_map mismatched;
  mismatched.emplace(FockIndex{0, 0}, complexd(1.0, 0.0));
  mismatched.emplace(FockIndex{0, 0, 0}, complexd(0.0, 0.0));
  // zero amplitudes drop before the mode-count check, so this one is fine
  CHECK_NOTHROW(TruncatedState(2, std::move(mismatched)));
}

TEST_CASE("expect_unitary on pinned states") {
  DeviceSpec device({kPi / 2, -kPi / 2});
  const TruncatedState vacuum = TruncatedState::vacuum(2, 4);
  CHECK(expect_unitary(vacuum, device).real() == doctest::Approx(1.0));
  CHECK(expect_unitary(vacuum, device).imag() == doctest::Approx(0.0));

  // (|2,0> + |0,2>)/sqrt(2) under phases [pi/2, -pi/2]: both branches pick
  // up e^{+-i pi} = -1.
  TruncatedState::amplitude_map amps;
  const double r = 1.0 / std::sqrt(2.0);
  amps.emplace(FockIndex{2, 0}, complexd(r, 0.0));
  amps.emplace(FockIndex{0, 2}, complexd(r, 0.0));
  TruncatedState noon2(2, std::move(amps));
  CHECK(expect_unitary(noon2, device).real() == doctest::Approx(-1.0));

  DeviceSpec quarter({kPi / 4, -kPi / 4});
  TruncatedState::amplitude_map mixed;
  const double w = 0.23431457505076195;  // (1-K)/(1-cos(3 pi/4)) at K = 0.6
  mixed.emplace(FockIndex{0, 0}, complexd(std::sqrt(1.0 - w), 0.0));
  mixed.emplace(FockIndex{3, 0}, complexd(std::sqrt(w / 2.0), 0.0));
  mixed.emplace(FockIndex{0, 3}, complexd(std::sqrt(w / 2.0), 0.0));
  TruncatedState state(3, std::move(mixed));
  const complexd u = expect_unitary(state, quarter);
  CHECK(u.real() ==
        doctest::Approx((1.0 - w) + w * std::cos(3.0 * kPi / 4)).epsilon(1e-14));
  CHECK(u.real() == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(u.imag() == doctest::Approx(0.0).epsilon(1e-15));

  CHECK_THROWS_AS(expect_unitary(state, DeviceSpec({0.1})), dimension_error);
}

TEST_CASE("mean_photons") {
  CHECK(mean_photons(TruncatedState::vacuum(2, 3)) == 0.0);

  TruncatedState::amplitude_map amps;
  const double r = 1.0 / std::sqrt(2.0);
  amps.emplace(FockIndex{5, 0}, complexd(r, 0.0));
  amps.emplace(FockIndex{0, 5}, complexd(r, 0.0));
  CHECK(mean_photons(TruncatedState(5, std::move(amps))) ==
        doctest::Approx(5.0).epsilon(1e-14));

  TruncatedState::amplitude_map mixed;
  const double w = 0.23431457505076195;
  mixed.emplace(FockIndex{0, 0}, complexd(std::sqrt(1.0 - w), 0.0));
  mixed.emplace(FockIndex{3, 0}, complexd(std::sqrt(w / 2.0), 0.0));
  mixed.emplace(FockIndex{0, 3}, complexd(std::sqrt(w / 2.0), 0.0));
  CHECK(mean_photons(TruncatedState(3, std::move(mixed))) ==
        doctest::Approx(3.0 * w).epsilon(1e-13));
}

TEST_CASE("error_probability and its inverse") {
  CHECK(error_probability(0.0) == 0.0);
  CHECK(error_probability(1.0) == 0.5);
  CHECK(error_probability(0.6) == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(error_probability(1.0 + 5e-13) == 0.5);  // clamped
  CHECK_THROWS_AS(error_probability(1.1), domain_error);
  CHECK_THROWS_AS(error_probability(-0.2), domain_error);

  CHECK(overlap_for_error(0.5) == doctest::Approx(1.0));
  CHECK(overlap_for_error(0.0) == 0.0);
  CHECK(overlap_for_error(0.1) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(overlap_for_error(0.6), domain_error);
  CHECK_THROWS_AS(overlap_for_error(-0.01), domain_error);

  // Inverse pair. The margin from 1/2 keeps the K -> q sensitivity finite;
  // at q = 1/2 exactly the round trip is exact.
  std::mt19937 rng(123);
  for (int i = 0; i < 2000; ++i) {
    const double q = testhelp::uniform01(rng) * (0.5 - 1e-3);
    CHECK(std::abs(error_probability(overlap_for_error(q)) - q) <= 1e-12);
  }
  CHECK(error_probability(overlap_for_error(0.5)) == 0.5);

  // Monotone non-decreasing.
  std::mt19937 rng2(321);
  for (int i = 0; i < 1000; ++i) {
    double a = testhelp::uniform01(rng2);
    double b = testhelp::uniform01(rng2);
    if (a > b) std::swap(a, b);
    CHECK(error_probability(a) <= error_probability(b));
  }
}

TEST_CASE("evolve applies per-index phases and conserves photons") {
  DeviceSpec device({0.7, -0.7});
  const TruncatedState vacuum = TruncatedState::vacuum(2, 4);
  const TruncatedState still = evolve(vacuum, device);
  CHECK(still.amplitudes().at(FockIndex{0, 0}).real() == doctest::Approx(1.0));

  TruncatedState::amplitude_map amps;
  amps.emplace(FockIndex{1, 0}, complexd(1.0, 0.0));
  const TruncatedState one = TruncatedState(1, std::move(amps));
  const TruncatedState rotated = evolve(one, device);
  const complexd a = rotated.amplitudes().at(FockIndex{1, 0});
  CHECK(a.real() == doctest::Approx(std::cos(0.7)));
  CHECK(a.imag() == doctest::Approx(std::sin(0.7)));

  CHECK_THROWS_AS(evolve(one, DeviceSpec({0.1, 0.2, 0.3})), dimension_error);

  std::mt19937 rng(7);
  for (int i = 0; i < 300; ++i) {
    const TruncatedState state = testhelp::random_dense_state(rng, 2, 4);
    const DeviceSpec random_device({kPi * (2.0 * testhelp::uniform01(rng) - 1.0),
                                    kPi * (2.0 * testhelp::uniform01(rng) - 1.0)});
    const TruncatedState out = evolve(state, random_device);
    CHECK(std::abs(mean_photons(out) - mean_photons(state)) <= 1e-12);
    CHECK(std::abs(out.squared_norm() - 1.0) <= 1e-12);
    CHECK(std::abs(expect_unitary(state, random_device)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("expectations depend only on the squared moduli") {
  std::mt19937 rng(99);
  DeviceSpec device({1.1, -0.4});
  for (int i = 0; i < 100; ++i) {
    const TruncatedState state = testhelp::random_dense_state(rng, 2, 3);
    TruncatedState::amplitude_map scrambled;
    for (const auto& [index, amp] : state.amplitudes()) {
      const double phase = 2.0 * kPi * testhelp::uniform01(rng);
      scrambled.emplace(index, std::polar(std::abs(amp), phase));
    }
    const TruncatedState twin(state.cutoff(), std::move(scrambled));
    const complexd u1 = expect_unitary(state, device);
    const complexd u2 = expect_unitary(twin, device);
    CHECK(std::abs(u1 - u2) <= 1e-12);
    CHECK(std::abs(mean_photons(state) - mean_photons(twin)) <= 1e-12);
  }
}

TEST_CASE("TradeoffPoint carries the energy offset") {
  TradeoffPoint point(0.1, 0.7, Strategy::analytic_beamsplitter, "noon(n=3;a2=0.2)");
  CHECK(point.energy == 0.5 + point.mean_photons);
  CHECK(to_string(point.strategy) == "analytic-beamsplitter");
  CHECK_THROWS_AS(TradeoffPoint(0.7, 0.0, Strategy::oracle, ""), domain_error);
  CHECK_THROWS_AS(TradeoffPoint(0.1, -1.0, Strategy::oracle, ""), domain_error);
}
