#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaseamb/detail/parallel.hpp"
#include "phaseamb/enumerate.hpp"
#include "phaseamb/errors.hpp"
#include "phaseamb/nonneg.hpp"
#include "phaseamb/rng.hpp"
#include "phaseamb/roots.hpp"
#include "phaseamb/signal.hpp"
#include "phaseamb/tolerances.hpp"

namespace phaseamb {

enum class GenMode { MaxAmbiguous, Unique };

struct GenSpec {
  int support_length = 4;
  GenMode mode = GenMode::MaxAmbiguous;
  std::uint64_t seed = 0;
  // Window for random real parts of generated zeros; must lie left of -1.
  double zero_re_min = -4.0;
  double zero_re_max = -1.1;
};

// Fixed zeros grouped as units: reals plus conjugate pair representatives
// with positive imaginary part.
struct FixedZeroSet {
  std::vector<double> reals;
  std::vector<std::complex<double>> pairs;

  int unit_count() const noexcept {
    return static_cast<int>(reals.size() + pairs.size());
  }
  int zero_count() const noexcept {
    return static_cast<int>(reals.size() + 2 * pairs.size());
  }
  std::vector<std::complex<double>> multiset() const {
    std::vector<std::complex<double>> out;
    out.reserve(static_cast<std::size_t>(zero_count()));
    for (double r : reals) out.emplace_back(r, 0.0);
    for (const auto& p : pairs) {
      out.push_back(p);
      out.push_back(std::conj(p));
    }
    return out;
  }
};

// sigma_1 / 2 of the fixed set under every unit flip pattern; index 0 is the
// identity pattern. Flipping a real r replaces it by 1/r, flipping a pair p
// replaces (p, conj p) by their reflections.
inline std::vector<double> flip_pattern_bounds(const FixedZeroSet& fixed) {
  const int u = fixed.unit_count();
  if (u > 30)
    throw std::invalid_argument("flip_pattern_bounds: too many fixed units");
  std::vector<double> bounds;
  bounds.reserve(std::size_t{1} << u);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << u); ++mask) {
    double re_sum = 0.0;
    std::size_t bit = 0;
    for (const double r : fixed.reals) {
      const bool flip = ((mask >> bit++) & 1ull) != 0;
      re_sum += flip ? 1.0 / r : r;
    }
    for (const auto& p : fixed.pairs) {
      const bool flip = ((mask >> bit++) & 1ull) != 0;
      re_sum += 2.0 * (flip ? p.real() / std::norm(p) : p.real());
    }
    bounds.push_back(-0.5 * re_sum);
  }
  return bounds;
}

// Open band (lower, upper) for the real part of the free conjugate pair:
// upper is the half-plane bound of the unflipped fixed set, lower the largest
// bound over all other flip patterns. With every fixed zero left of -1 the
// band is nonempty.
struct UniqueBand {
  double lower = 0.0;
  double upper = 0.0;
};

inline UniqueBand unique_band(const FixedZeroSet& fixed) {
  const auto bounds = flip_pattern_bounds(fixed);
  UniqueBand band;
  band.upper = bounds.front();
  band.lower = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < bounds.size(); ++k)
    band.lower = std::max(band.lower, bounds[k]);
  return band;
}

// A generated uniquely-solvable instance together with the data it was built
// from, which the harness uses for direct checks.
struct UniqueInstance {
  Signal signal;
  FixedZeroSet fixed;
  std::complex<double> free_pair;  // representative with positive imaginary part
  UniqueBand band;
};

namespace detail {

inline void validate_window(const GenSpec& spec) {
  if (!(spec.zero_re_min < spec.zero_re_max))
    throw std::invalid_argument("generator: empty zero window");
  if (!(spec.zero_re_max < -1.0))
    throw std::invalid_argument(
        "generator: zero window must lie strictly left of -1");
}

}  // namespace detail

// Signal with N-1 distinct real zeros drawn in the window (pairwise
// separation at least 5% of the window width) and a[N-1] = 1. All zeros are
// real and left of -1, so the instance has exactly 2^{N-2} solution classes
// and every one of them is non-negative.
inline Signal gen_max_ambiguous(const GenSpec& spec, const Tolerances& tol = {}) {
  if (spec.support_length < 2)
    throw std::invalid_argument("gen_max_ambiguous: support length must be >= 2");
  detail::validate_window(spec);
  const int count = spec.support_length - 1;
  const double width = spec.zero_re_max - spec.zero_re_min;
  const double separation = 0.05 * width;
  if (static_cast<double>(count - 1) * separation >= width)
    throw std::invalid_argument(
        "gen_max_ambiguous: window cannot hold " + std::to_string(count) +
        " zeros at the required separation");

  Rng rng(spec.seed, 0);
  std::vector<double> zeros(static_cast<std::size_t>(count));
  for (int attempt = 0; attempt < 100000; ++attempt) {
    for (auto& z : zeros) z = rng.uniform(spec.zero_re_min, spec.zero_re_max);
    std::sort(zeros.begin(), zeros.end());
    bool ok = true;
    for (std::size_t k = 1; k < zeros.size(); ++k)
      if (zeros[k] - zeros[k - 1] < separation) ok = false;
    if (ok) break;
    if (attempt == 99999)
      throw GenerationFailure("gen_max_ambiguous: separation rejection loop "
                              "did not terminate");
  }
  std::vector<std::complex<double>> b(zeros.begin(), zeros.end());
  return reconstruct_from_zeros(b, 1.0, tol);
}

// Signal whose phase retrieval problem has exactly one non-negative solution
// class. Draws N-3 fixed zeros (reals and/or conjugate pairs) left of -1,
// places the free conjugate pair with real part in the open band between the
// flip-pattern bounds and strictly outside the excluded discs, and verifies
// by full enumeration. Retries up to 256 times before failing loudly.
inline UniqueInstance gen_unique_instance(const GenSpec& spec,
                                          const Tolerances& tol = {}) {
  if (spec.support_length < 4)
    throw std::invalid_argument("gen_unique: support length must be >= 4");
  detail::validate_window(spec);
  const int fixed_zeros = spec.support_length - 3;
  const double width = spec.zero_re_max - spec.zero_re_min;

  Rng rng(spec.seed, 0);
  std::string diagnostics;
  for (int attempt = 0; attempt < 256; ++attempt) {
    FixedZeroSet fixed;
    int remaining = fixed_zeros;
    while (remaining > 0) {
      if (remaining >= 2 && rng.coin()) {
        fixed.pairs.emplace_back(
            rng.uniform(spec.zero_re_min, spec.zero_re_max),
            rng.uniform(0.1, 2.0));
        remaining -= 2;
      } else {
        fixed.reals.push_back(rng.uniform(spec.zero_re_min, spec.zero_re_max));
        remaining -= 1;
      }
    }
    // Distinctness of the fixed units.
    {
      std::vector<std::complex<double>> reps;
      for (double r : fixed.reals) reps.emplace_back(r, 0.0);
      for (const auto& p : fixed.pairs) reps.push_back(p);
      bool distinct = true;
      for (std::size_t i = 0; i < reps.size() && distinct; ++i)
        for (std::size_t j = i + 1; j < reps.size(); ++j)
          if (std::abs(reps[i] - reps[j]) < 0.05 * width) {
            distinct = false;
            break;
          }
      if (!distinct) continue;
    }

    const auto fixed_multiset = fixed.multiset();
    const UniqueBand band = unique_band(fixed);
    if (!(band.lower < band.upper)) {
      diagnostics = "band (" + std::to_string(band.lower) + ", " +
                    std::to_string(band.upper) + ") is empty";
      continue;
    }
    const FeasibleRegion region = feasible_region(fixed_multiset, tol);

    for (int inner = 0; inner < 64; ++inner) {
      // Keep a tenth of the band on each side so the strict inequalities
      // survive the root displacement of nearby signals.
      const double margin = 0.1 * (band.upper - band.lower);
      const double re =
          rng.uniform(band.lower + margin, band.upper - margin);
      // Disc clearance demanded of the free pair; scaled so perturbed
      // instances keep their verdicts.
      const auto cleared_radius = [](const Disc& d) {
        return d.radius + 0.02 * (1.0 + d.radius);
      };
      // The smallest imaginary part that clears every disc at this re.
      double im_floor = 0.0;
      for (const auto& d : region.discs) {
        const double dx = re - d.center;
        const double r = cleared_radius(d);
        if (std::abs(dx) < r)
          im_floor = std::max(im_floor, std::sqrt(r * r - dx * dx));
      }
      // Sample within the documented [0.1, 3] window when it is feasible,
      // escalate above the disc geometry when it is not.
      const double lo = std::max(0.1, 1.05 * im_floor);
      const double hi = std::max(3.0, 2.0 * lo);
      const double im = rng.log_uniform(lo, hi);
      const std::complex<double> beta(re, im);
      const double mod = std::abs(beta);
      if (mod > 0.95 && mod < 1.05) continue;  // keep off the unit circle
      bool outside_discs = true;
      for (const auto& d : region.discs) {
        const double dx = re - d.center;
        if (std::sqrt(dx * dx + im * im) <= cleared_radius(d))
          outside_discs = false;
      }
      if (!outside_discs) continue;
      bool distinct = true;
      for (const auto& z : fixed_multiset)
        if (std::abs(z - beta) < 1e-3) distinct = false;
      if (!distinct) continue;

      auto all_zeros = fixed_multiset;
      all_zeros.push_back(beta);
      all_zeros.push_back(std::conj(beta));
      try {
        Signal x = reconstruct_from_zeros(all_zeros, 1.0, tol);
        const auto report = enumerate_solutions(autocorrelation(x, tol), tol);
        if (report.nonnegative_classes == 1)
          return UniqueInstance{std::move(x), std::move(fixed), beta, band};
        diagnostics = "candidate at (" + std::to_string(re) + ", " +
                      std::to_string(im) + ") produced " +
                      std::to_string(report.nonnegative_classes) +
                      " non-negative classes";
      } catch (const Error& e) {
        diagnostics = e.what();
      }
    }
  }
  throw GenerationFailure(
      "gen_unique: retry cap of 256 exhausted for N=" +
      std::to_string(spec.support_length) + ", seed=" +
      std::to_string(spec.seed) +
      (diagnostics.empty() ? "" : ("; last failure: " + diagnostics)));
}

inline Signal gen_unique(const GenSpec& spec, const Tolerances& tol = {}) {
  return gen_unique_instance(spec, tol).signal;
}

struct PerturbTrial {
  int trial = 0;
  bool ok = false;
  double max_root_displacement = 0.0;
  int total_classes = 0;
  int nonnegative_classes = 0;
  std::string error;
};

struct PerturbStudy {
  double delta = 0.0;
  std::uint64_t seed = 0;
  int base_total_classes = 0;
  int base_nonnegative_classes = 0;
  bool scale_invariance_ok = false;
  double scale_displacement = 0.0;
  std::vector<PerturbTrial> trials;
};

// Greedy globally-nearest assignment between two zero multisets of equal
// size; returns the largest matched distance.
inline double matched_max_displacement(std::vector<std::complex<double>> a,
                                       std::vector<std::complex<double>> b) {
  if (a.size() != b.size())
    return std::numeric_limits<double>::infinity();
  const std::size_t n = a.size();
  std::vector<bool> ua(n, false), ub(n, false);
  double max_d = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (ua[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (ub[j]) continue;
        const double d = std::abs(a[i] - b[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    ua[bi] = true;
    ub[bj] = true;
    max_d = std::max(max_d, best);
  }
  return max_d;
}

// Adds i.i.d. uniform noise in [-delta, delta] to every component, trial by
// trial, and records how far the zeros move (nearest assignment against the
// base zeros) and how the class counts respond. Per-trial failures are
// recorded without aborting the study. Stream k+1 drives trial k, so two
// studies with the same seed use identical noise directions regardless of
// delta. Also checks that scaling the base signal by a random positive
// constant leaves the matched zeros unchanged within tol.pair.
inline PerturbStudy perturb_study(const Signal& base, double delta, int trials,
                                  std::uint64_t seed,
                                  const Tolerances& tol = {}) {
  if (delta < 0.0 || !std::isfinite(delta))
    throw std::invalid_argument("perturb_study: delta must be >= 0");
  if (trials < 0)
    throw std::invalid_argument("perturb_study: trials must be >= 0");
  if (base.support_length() < 2)
    throw std::invalid_argument("perturb_study: support length must be >= 2");
  const double endpoint = std::min(std::abs(base.values().front()),
                                   std::abs(base.values().back()));
  if (delta >= endpoint)
    throw std::invalid_argument(
        "perturb_study: delta must stay below the smallest endpoint "
        "magnitude " +
        std::to_string(endpoint));

  PerturbStudy study;
  study.delta = delta;
  study.seed = seed;

  const auto base_zeros = zeros_of_signal(base, tol);
  {
    const auto report = enumerate_solutions(autocorrelation(base, tol), tol);
    study.base_total_classes = report.total_classes;
    study.base_nonnegative_classes = report.nonnegative_classes;
  }
  {
    Rng rng(seed, 0);
    const double c = rng.log_uniform(0.25, 4.0);
    std::vector<double> scaled = base.values();
    for (auto& v : scaled) v *= c;
    const auto scaled_zeros =
        zeros_of_signal(Signal(std::move(scaled), base.offset()), tol);
    study.scale_displacement = matched_max_displacement(base_zeros, scaled_zeros);
    double peak = 0.0;
    for (const auto& z : base_zeros) peak = std::max(peak, std::abs(z));
    study.scale_invariance_ok =
        study.scale_displacement <= tol.pair * (1.0 + peak);
  }

  study.trials.resize(static_cast<std::size_t>(trials));
  detail::parallel_for(static_cast<std::size_t>(trials), [&](std::size_t t) {
    PerturbTrial& out = study.trials[t];
    out.trial = static_cast<int>(t);
    Rng rng(seed, t + 1);
    std::vector<double> perturbed = base.values();
    for (auto& v : perturbed) v += delta * rng.uniform(-1.0, 1.0);
    try {
      const Signal px(std::move(perturbed), base.offset(), tol.trim);
      const auto zeros = zeros_of_signal(px, tol);
      out.max_root_displacement = matched_max_displacement(base_zeros, zeros);
      const auto report = enumerate_solutions(autocorrelation(px, tol), tol);
      out.total_classes = report.total_classes;
      out.nonnegative_classes = report.nonnegative_classes;
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  });
  return study;
}

}  // namespace phaseamb
