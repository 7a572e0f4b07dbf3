#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "phaseamb/rng.hpp"
#include "phaseamb/signal.hpp"

using namespace phaseamb;

namespace {

Signal random_signal(Rng& rng, int max_len = 9) {
  const int n = rng.uniform_int(1, max_len);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) {
    do {
      x = rng.uniform(-3.0, 3.0);
    } while (std::abs(x) < 0.05);
  }
  return Signal(std::move(v), rng.uniform_int(-5, 5));
}

}  // namespace

TEST_CASE("autocorrelation of short signals") {
  const auto a1 = autocorrelation(Signal({1.0, 1.0}));
  REQUIRE(a1.coeffs() == std::vector<double>{2.0, 1.0});

  const auto a2 = autocorrelation(Signal({2.0, 1.0}));
  REQUIRE(a2.coeffs() == std::vector<double>{5.0, 2.0});

  const auto a3 = autocorrelation(Signal({3.0}));
  REQUIRE(a3.coeffs() == std::vector<double>{9.0});
}

TEST_CASE("autocorrelation is independent of the offset") {
  const Signal x({1.5, -0.5, 2.0}, 0);
  const Signal y({1.5, -0.5, 2.0}, -7);
  REQUIRE(autocorrelation(x).coeffs() == autocorrelation(y).coeffs());
}

TEST_CASE("fourier intensity at pinned frequencies") {
  const Signal ones({1.0, 1.0});
  REQUIRE(fourier_intensity(ones, 0.0) == Catch::Approx(4.0));
  REQUIRE(fourier_intensity(ones, std::numbers::pi) ==
          Catch::Approx(0.0).margin(1e-12));

  // Direct complex evaluation: |2 - i|^2 at omega = pi/2.
  const Signal x({2.0, 1.0});
  const std::complex<double> direct =
      2.0 + 1.0 * std::exp(std::complex<double>(0.0, -std::numbers::pi / 2));
  REQUIRE(fourier_intensity(x, std::numbers::pi / 2) ==
          Catch::Approx(std::norm(direct)));
  REQUIRE(std::norm(direct) == Catch::Approx(5.0));
}

TEST_CASE("intensity matches the autocorrelation spectrum everywhere") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const Signal x = random_signal(rng);
    const auto a = autocorrelation(x);
    const double limit = 1e-9 * (1.0 + a.evaluate(0.0));
    for (int k = 0; k < 512; ++k) {
      const double w = 2.0 * std::numbers::pi * k / 512;
      REQUIRE(std::abs(fourier_intensity(x, w) - a.evaluate(w)) <= limit);
    }
  }
}

TEST_CASE("shift and reflect") {
  const Signal x({1.0, 2.0, 3.0}, 0);

  const Signal s = shift(x, 5);
  REQUIRE(s.offset() == 5);
  REQUIRE(s.values() == x.values());

  const Signal r = reflect(x);
  REQUIRE(r.offset() == -2);
  REQUIRE(r.values() == std::vector<double>{3.0, 2.0, 1.0});

  // Double reflection is the identity.
  REQUIRE(reflect(r) == x);
}

TEST_CASE("autocorrelation invariant under shift and reflect") {
  Rng rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const Signal x = random_signal(rng);
    const auto a = autocorrelation(x);
    REQUIRE(autocorrelation(shift(x, rng.uniform_int(-9, 9))).coeffs() ==
            a.coeffs());
    const auto ar = autocorrelation(reflect(x));
    for (int n = 0; n < a.support_length(); ++n)
      REQUIRE(ar[n] == Catch::Approx(a[n]).margin(1e-9 * a[0]));
  }
}

TEST_CASE("energy and endpoint structure") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const Signal x = random_signal(rng);
    const auto a = autocorrelation(x);
    REQUIRE(a[0] > 0.0);
    REQUIRE(a[x.support_length() - 1] ==
            Catch::Approx(x.values().front() * x.values().back()));
    REQUIRE(a[x.support_length() - 1] != 0.0);
  }
}

TEST_CASE("canonicalize picks the lexicographically smaller orientation") {
  REQUIRE(canonicalize(Signal({3.0, 2.0, 1.0}, 4)).values() ==
          std::vector<double>{1.0, 2.0, 3.0});
  REQUIRE(canonicalize(Signal({3.0, 2.0, 1.0}, 4)).offset() == 0);

  const Signal palindrome({1.0, 2.0, 1.0}, -3);
  REQUIRE(canonicalize(palindrome).values() ==
          std::vector<double>{1.0, 2.0, 1.0});
  REQUIRE(canonicalize(palindrome).offset() == 0);
}

TEST_CASE("canonicalize is constant on trivial-ambiguity orbits") {
  Rng rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    const Signal x = random_signal(rng);
    const Signal canon = canonicalize(x);
    REQUIRE(canonicalize(canon) == canon);
    REQUIRE(canonicalize(shift(reflect(x), rng.uniform_int(-6, 6))) == canon);
    REQUIRE(canonicalize(shift(x, rng.uniform_int(-6, 6))) == canon);
  }
}

TEST_CASE("construction trims negligible endpoints") {
  const Signal x({1e-15, 2.0, 1.0, -3e-16, 1e-16}, 10);
  REQUIRE(x.values() == std::vector<double>{2.0, 1.0});
  REQUIRE(x.offset() == 11);

  REQUIRE_THROWS_AS(Signal({0.0, 0.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(Signal({}), std::invalid_argument);
  REQUIRE_THROWS_AS(Signal({1.0, std::nan("")}), std::invalid_argument);
}

TEST_CASE("autocorrelation validation") {
  REQUIRE_THROWS_AS(Autocorrelation({-1.0, 0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(Autocorrelation({1.0, 0.0}), std::invalid_argument);
  // Spectrum 1 + 2.4 cos(w) dips well below zero.
  REQUIRE_THROWS_AS(Autocorrelation({1.0, 1.2}), std::invalid_argument);
  // A genuine autocorrelation passes.
  REQUIRE_NOTHROW(Autocorrelation(autocorrelation(Signal({2.0, 1.0}))));
}
