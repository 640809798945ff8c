#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rofdist/rng.hpp"
#include "rofdist/signal.hpp"

using namespace rofdist;

TEST_CASE("pilot generation: determinism and unit modulus") {
  const PilotSequence a = generate_pilot(256, 42);
  const PilotSequence b = generate_pilot(256, 42);
  CHECK(a.symbols == b.symbols);

  const PilotSequence c = generate_pilot(256, 43);
  CHECK(a.symbols != c.symbols);

  for (const cplx& s : a.symbols) CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(generate_pilot(1, 0), std::invalid_argument);
}

TEST_CASE("pilot generation: symbols are uniform over the constellation") {
  // multinomial check: counts over many draws stay within 4 sigma of N/4
  int counts[4] = {0, 0, 0, 0};
  int total = 0;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const PilotSequence pilot = generate_pilot(1024, seed);
    for (const cplx& s : pilot.symbols) {
      const int idx = (s.real() > 0 ? 0 : 2) + (s.imag() > 0 ? 0 : 1);
      ++counts[idx];
      ++total;
    }
  }
  const double expected = total / 4.0;
  const double sigma = std::sqrt(total * 0.25 * 0.75);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(counts[i] - expected) < 4.0 * sigma);
}

TEST_CASE("front end: identity and pure gain") {
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 64);
  const PilotSequence pilot = generate_pilot(64, 7);

  const Frame plain = apply_front_end(pilot, WirelessFrontEnd{{1.0, 0.0}, 0.0}, grid);
  CHECK(plain.freq == pilot.symbols);

  const Frame scaled = apply_front_end(pilot, WirelessFrontEnd{{0.0, 2.0}, 0.0}, grid);
  for (int k = 0; k < 64; ++k)
    CHECK(std::abs(scaled.freq[k] - cplx{0.0, 2.0} * pilot.symbols[k]) < 1e-15);

  CHECK_THROWS_AS(apply_front_end(pilot, WirelessFrontEnd{{0.0, 0.0}, 0.0}, grid),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_front_end(generate_pilot(32, 7), WirelessFrontEnd{}, grid),
                  std::invalid_argument);
}

TEST_CASE("front end: one-sample delay circularly shifts the time view") {
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 64);
  const PilotSequence pilot = generate_pilot(64, 11);
  const double ts = grid.sample_interval_s();

  const cvec ref = to_time(apply_front_end(pilot, WirelessFrontEnd{{1.0, 0.0}, 0.0}, grid));
  const cvec delayed = to_time(apply_front_end(pilot, WirelessFrontEnd{{1.0, 0.0}, ts}, grid));
  for (int n = 0; n < 64; ++n) {
    const cplx expected = ref[(n + 64 - 1) % 64];
    CHECK(std::abs(delayed[n] - expected) < 1e-12);
  }
}

TEST_CASE("transforms: round trip, impulse pair, Parseval") {
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 128);
  Rng rng(5);

  cvec x(128);
  for (auto& v : x) v = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  const Frame frame{grid, x};
  const Frame back = to_freq(to_time(frame), grid);
  for (int k = 0; k < 128; ++k) CHECK(std::abs(back.freq[k] - x[k]) < 1e-12);

  // all-ones spectrum -> discrete impulse at n = 0
  const cvec impulse = to_time(Frame{grid, cvec(128, cplx{1.0, 0.0})});
  CHECK(std::abs(impulse[0] - cplx{1.0, 0.0}) < 1e-12);
  for (int n = 1; n < 128; ++n) CHECK(std::abs(impulse[n]) < 1e-12);

  double freq_energy = 0.0, time_energy = 0.0;
  for (const cplx& v : x) freq_energy += std::norm(v);
  for (const cplx& v : to_time(frame)) time_energy += std::norm(v);
  CHECK(freq_energy / (128.0 * time_energy) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(to_freq(cvec(64), grid), std::invalid_argument);
}

TEST_CASE("front end is linear in the gain") {
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 32);
  const PilotSequence pilot = generate_pilot(32, 3);
  const cplx a{0.7, -0.4};
  const cplx c{-1.3, 0.2};
  const Frame one = apply_front_end(pilot, WirelessFrontEnd{a, 2e-9}, grid);
  const Frame two = apply_front_end(pilot, WirelessFrontEnd{c * a, 2e-9}, grid);
  for (int k = 0; k < 32; ++k) CHECK(std::abs(two.freq[k] - c * one.freq[k]) < 1e-14);
}

TEST_CASE("delays compose additively") {
  const FrequencyGrid grid = FrequencyGrid::make(140e9, 1e9, 32);
  const PilotSequence pilot = generate_pilot(32, 3);
  const double tau1 = 1.7e-9, tau2 = 3.1e-9;

  const Frame combined = apply_front_end(pilot, WirelessFrontEnd{{1.0, 0.0}, tau1 + tau2}, grid);
  Frame staged = apply_front_end(pilot, WirelessFrontEnd{{1.0, 0.0}, tau1}, grid);
  for (int k = 0; k < 32; ++k) {
    const double phi = -2.0 * pi * grid.freq_hz(k) * tau2;
    staged.freq[k] *= cplx{std::cos(phi), std::sin(phi)};
  }
  for (int k = 0; k < 32; ++k) CHECK(std::abs(combined.freq[k] - staged.freq[k]) < 1e-12);
}
