#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "phaseamb/enumerate.hpp"
#include "phaseamb/rng.hpp"

using namespace phaseamb;
using Complex = std::complex<double>;

namespace {

bool zero_multisets_close(std::vector<Complex> a, std::vector<Complex> b,
                          double tol) {
  if (a.size() != b.size()) return false;
  auto less = [](const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol * (1.0 + std::abs(b[k]))) return false;
  return true;
}

std::vector<Complex> reflect_zeros(const std::vector<Complex>& zs) {
  std::vector<Complex> out;
  for (const auto& z : zs) out.push_back(1.0 / std::conj(z));
  return out;
}

// A class's zero set is determined up to reflecting the whole set.
bool class_has_zero_set(const SolutionClass& sc,
                        const std::vector<Complex>& target) {
  return zero_multisets_close(sc.chosen_zeros, target, 1e-6) ||
         zero_multisets_close(sc.chosen_zeros, reflect_zeros(target), 1e-6);
}

const std::vector<Complex> kLambda{
    {-1.5, 0.0}, {-1.0, 1.0}, {-1.0, -1.0}, {0.75, 1.0}, {0.75, -1.0}};

}  // namespace

TEST_CASE("reconstruct from a single zero") {
  // sqrt(2 * 1/2) * (e^{-iw} + 2) expands to (2, 1).
  const Signal a = reconstruct_from_zeros({{-2.0, 0.0}}, 2.0);
  REQUIRE(a.values().size() == 2);
  REQUIRE(a.values()[0] == Catch::Approx(2.0));
  REQUIRE(a.values()[1] == Catch::Approx(1.0));

  // sqrt(2 * 2) * (e^{-iw} + 1/2) expands to (1, 2).
  const Signal b = reconstruct_from_zeros({{-0.5, 0.0}}, 2.0);
  REQUIRE(b.values()[0] == Catch::Approx(1.0));
  REQUIRE(b.values()[1] == Catch::Approx(2.0));
}

TEST_CASE("reconstruct keeps the reference zero set non-negative") {
  const Signal x = reconstruct_from_zeros(kLambda, 1.0);
  REQUIRE(x.support_length() == 6);
  REQUIRE(x.min_component() >= 0.0);
}

TEST_CASE("reconstruct rejects bad input") {
  REQUIRE_THROWS_AS(reconstruct_from_zeros({{1.0, 0.5}}, 1.0),
                    RealnessViolation);
  REQUIRE_THROWS_AS(reconstruct_from_zeros({{0.0, 0.0}}, 1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(reconstruct_from_zeros({{-2.0, 0.0}}, 0.0),
                    std::invalid_argument);
}

TEST_CASE("reconstruction magnitude matches the requested a[N-1]") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> zeros;
    int remaining = rng.uniform_int(1, 6);
    while (remaining > 0) {
      if (remaining >= 2 && rng.coin()) {
        Complex p(rng.uniform(-2.0, 2.0), rng.uniform(0.2, 2.0));
        zeros.push_back(p);
        zeros.push_back(std::conj(p));
        remaining -= 2;
      } else {
        double r;
        do {
          r = rng.uniform(-2.0, 2.0);
        } while (std::abs(r) < 0.2);
        zeros.emplace_back(r, 0.0);
        --remaining;
      }
    }
    const double target = rng.uniform(0.3, 3.0);
    const Signal x = reconstruct_from_zeros(zeros, target);
    const auto a = autocorrelation(x);
    REQUIRE(std::abs(a.last()) == Catch::Approx(target).epsilon(1e-9));
    // The signal's own zeros recover the multiset used to build it.
    REQUIRE(zero_multisets_close(zeros_of_signal(x), zeros, 1e-6));
  }
}

TEST_CASE("verify_solution") {
  const Signal x({1.0, 3.0, 0.5, 2.0});
  const auto a = autocorrelation(x);
  REQUIRE(verify_solution(x, a));
  REQUIRE(verify_solution(reflect(x), a));
  REQUIRE(verify_solution(shift(x, 4), a));

  std::vector<double> bad = x.values();
  bad[1] *= 1.1;
  REQUIRE_FALSE(verify_solution(Signal(bad), a));
}

TEST_CASE("two-sample instance has only trivial ambiguities") {
  const auto report = enumerate_solutions(autocorrelation(Signal({2.0, 1.0})));
  REQUIRE(report.total_classes == 1);
  REQUIRE(report.nonnegative_classes == 1);
  REQUIRE(report.upper_bound == 1);
  REQUIRE(report.flippable_units == 1);
  REQUIRE(report.solutions[0].signal.values() ==
          std::vector<double>{1.0, 2.0});
}

TEST_CASE("single-sample instance") {
  const auto report = enumerate_solutions(Autocorrelation({4.0}));
  REQUIRE(report.total_classes == 1);
  REQUIRE(report.upper_bound == 1);
  REQUIRE(report.solutions[0].signal.values() == std::vector<double>{2.0});
}

TEST_CASE("reference instance: four classes, three non-negative") {
  const Signal x = reconstruct_from_zeros(kLambda, 1.0);
  const auto report = enumerate_solutions(autocorrelation(x));

  REQUIRE(report.total_classes == 4);
  REQUIRE(report.nonnegative_classes == 3);
  REQUIRE(report.flippable_units == 3);
  REQUIRE(report.upper_bound == 16);

  const std::vector<Complex> m1{
      {-2.0 / 3.0, 0.0}, {-1.0, 1.0}, {-1.0, -1.0}, {0.75, 1.0}, {0.75, -1.0}};
  const std::vector<Complex> m2{
      {-1.5, 0.0}, {-0.5, 0.5}, {-0.5, -0.5}, {0.75, 1.0}, {0.75, -1.0}};
  const std::vector<Complex> m3{
      {-2.0 / 3.0, 0.0}, {-0.5, 0.5}, {-0.5, -0.5}, {0.75, 1.0}, {0.75, -1.0}};

  int found_lambda = 0, found_m1 = 0, found_m2 = 0, found_m3 = 0;
  for (const auto& sc : report.solutions) {
    if (class_has_zero_set(sc, kLambda)) {
      ++found_lambda;
      REQUIRE(sc.nonnegative);
    } else if (class_has_zero_set(sc, m1)) {
      ++found_m1;
      REQUIRE(sc.nonnegative);
    } else if (class_has_zero_set(sc, m2)) {
      ++found_m2;
      REQUIRE_FALSE(sc.nonnegative);
    } else if (class_has_zero_set(sc, m3)) {
      ++found_m3;
      REQUIRE(sc.nonnegative);
    }
  }
  REQUIRE(found_lambda == 1);
  REQUIRE(found_m1 == 1);
  REQUIRE(found_m2 == 1);
  REQUIRE(found_m3 == 1);
}

TEST_CASE("all-real distinct zeros left of -1 reach the upper bound") {
  const std::vector<Complex> zeros{
      {-1.2, 0.0}, {-1.7, 0.0}, {-2.4, 0.0}, {-3.3, 0.0}};
  const Signal x = reconstruct_from_zeros(zeros, 1.0);
  const auto report = enumerate_solutions(autocorrelation(x));
  REQUIRE(report.total_classes == 8);
  REQUIRE(report.nonnegative_classes == 8);
  REQUIRE(static_cast<std::uint64_t>(report.total_classes) ==
          report.upper_bound);
}

TEST_CASE("every class shares the input intensity") {
  Rng rng(67);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<Complex> zeros;
    int remaining = rng.uniform_int(1, 6);
    while (remaining > 0) {
      if (remaining >= 2 && rng.coin()) {
        Complex p(rng.uniform(-2.0, 2.0), rng.uniform(0.2, 2.0));
        if (std::abs(std::abs(p) - 1.0) < 0.1) continue;
        zeros.push_back(p);
        zeros.push_back(std::conj(p));
        remaining -= 2;
      } else {
        double r = rng.uniform(-2.5, 2.5);
        if (std::abs(r) < 0.2 || std::abs(std::abs(r) - 1.0) < 0.1) continue;
        zeros.emplace_back(r, 0.0);
        --remaining;
      }
    }
    const Signal x = reconstruct_from_zeros(zeros, 1.0);
    const auto a = autocorrelation(x);
    const auto report = enumerate_solutions(a);
    REQUIRE(report.total_classes >= 1);
    for (const auto& sc : report.solutions) {
      REQUIRE(verify_solution(sc.signal, a));
      REQUIRE(canonicalize(sc.signal) == sc.signal);
      // Non-negative classes cannot carry positive real zeros.
      if (sc.nonnegative)
        for (const auto& z : sc.chosen_zeros)
          if (z.imag() == 0.0) REQUIRE(z.real() <= 1e-9);
    }
  }
}

TEST_CASE("class count is 2^{m-1} for distinct off-circle zeros") {
  Rng rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    std::vector<Complex> zeros;
    int real_units = 0, quad_units = 0;
    int remaining = rng.uniform_int(1, 6);
    while (remaining > 0) {
      if (remaining >= 2 && rng.coin()) {
        Complex p(rng.uniform(-2.0, 2.0), rng.uniform(0.25, 2.0));
        if (std::abs(std::abs(p) - 1.0) < 0.12) continue;
        bool clash = false;
        for (const auto& z : zeros)
          if (std::abs(z - p) < 0.1 || std::abs(z - 1.0 / std::conj(p)) < 0.1)
            clash = true;
        if (clash) continue;
        zeros.push_back(p);
        zeros.push_back(std::conj(p));
        ++quad_units;
        remaining -= 2;
      } else {
        double r = rng.uniform(-2.5, 2.5);
        if (std::abs(r) < 0.2 || std::abs(std::abs(r) - 1.0) < 0.12) continue;
        Complex rc(r, 0.0);
        bool clash = false;
        for (const auto& z : zeros)
          if (std::abs(z - rc) < 0.1 || std::abs(z - 1.0 / r) < 0.1)
            clash = true;
        if (clash) continue;
        zeros.push_back(rc);
        ++real_units;
        --remaining;
      }
    }
    const Signal x = reconstruct_from_zeros(zeros, 1.0);
    const auto report = enumerate_solutions(autocorrelation(x));
    const int m = real_units + quad_units;
    REQUIRE(report.flippable_units == m);
    REQUIRE(report.total_classes == (1 << (m - 1)));
    REQUIRE(static_cast<std::uint64_t>(report.total_classes) <=
            report.upper_bound);
  }
}

TEST_CASE("flipping every unit reproduces the same class") {
  Rng rng(73);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Complex> zeros;
    int remaining = rng.uniform_int(1, 5);
    while (remaining > 0) {
      if (remaining >= 2 && rng.coin()) {
        Complex p(rng.uniform(-2.0, 2.0), rng.uniform(0.3, 2.0));
        if (std::abs(std::abs(p) - 1.0) < 0.1) continue;
        zeros.push_back(p);
        zeros.push_back(std::conj(p));
        remaining -= 2;
      } else {
        double r = rng.uniform(-2.5, 2.5);
        if (std::abs(r) < 0.2 || std::abs(std::abs(r) - 1.0) < 0.1) continue;
        zeros.emplace_back(r, 0.0);
        --remaining;
      }
    }
    const Signal direct = canonicalize(reconstruct_from_zeros(zeros, 1.5));
    const Signal flipped =
        canonicalize(reconstruct_from_zeros(reflect_zeros(zeros), 1.5));
    REQUIRE(direct.support_length() == flipped.support_length());
    for (int k = 0; k < direct.support_length(); ++k)
      REQUIRE(direct.values()[k] ==
              Catch::Approx(flipped.values()[k]).margin(1e-8 * direct.max_abs()));
  }
}

TEST_CASE("sign-ambiguous solution is flagged") {
  const Signal x({1.0, 0.0, -1.0});
  const auto report = enumerate_solutions(autocorrelation(x));
  REQUIRE(report.total_classes == 1);
  REQUIRE(report.nonnegative_classes == 0);
  REQUIRE(report.solutions[0].sign_ambiguous);
  bool warned = false;
  for (const auto& w : report.warnings)
    if (w.find("component sum is zero") != std::string::npos) warned = true;
  REQUIRE(warned);
}

TEST_CASE("small integer instances agree with exhaustive grid search") {
  // Every grid signal whose autocorrelation matches must appear among the
  // enumerated non-negative classes, and the grid-valued enumerated classes
  // must all be found by the search.
  const std::vector<std::vector<double>> instances{
      {2.0, 5.0, 2.0}, {1.0, 4.0, 2.0}, {2.0, 3.0, 1.0}, {1.0, 2.0, 3.0, 4.0}};
  for (const auto& values : instances) {
    const Signal x(values);
    const auto a = autocorrelation(x);
    const int n = x.support_length();

    // Exhaustive search over the integer grid {1..5}^n.
    std::set<std::vector<double>> brute;
    std::vector<int> idx(static_cast<std::size_t>(n), 1);
    while (true) {
      std::vector<double> candidate(idx.begin(), idx.end());
      const Signal y(candidate);
      bool match = true;
      const auto ay = autocorrelation(y);
      if (ay.support_length() != n) {
        match = false;
      } else {
        for (int k = 0; k < n; ++k)
          if (std::abs(ay[k] - a[k]) > 1e-9) match = false;
      }
      if (match) brute.insert(canonicalize(y).values());
      int d = 0;
      while (d < n && ++idx[static_cast<std::size_t>(d)] > 5) {
        idx[static_cast<std::size_t>(d)] = 1;
        ++d;
      }
      if (d == n) break;
    }

    const auto report = enumerate_solutions(a);
    std::set<std::vector<double>> grid_classes;
    for (const auto& sc : report.solutions) {
      if (!sc.nonnegative) continue;
      std::vector<double> snapped;
      bool on_grid = true;
      for (double v : sc.signal.values()) {
        const double r = std::round(v);
        if (std::abs(v - r) > 1e-6 || r < 1.0 || r > 5.0) on_grid = false;
        snapped.push_back(r);
      }
      // Snapped integers re-canonicalize exactly; the floating canonical
      // orientation of a near-palindromic class is noise-sensitive.
      if (on_grid) grid_classes.insert(canonicalize(Signal(snapped)).values());
    }
    REQUIRE(brute == grid_classes);
    REQUIRE(!brute.empty());
  }
}
