#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaseamb/detail/parallel.hpp"
#include "phaseamb/errors.hpp"
#include "phaseamb/roots.hpp"
#include "phaseamb/signal.hpp"
#include "phaseamb/tolerances.hpp"

namespace phaseamb {

// One non-trivial solution class: the canonical signal, the zero multiset it
// was built from, and its non-negativity verdict.
struct SolutionClass {
  Signal signal;
  std::vector<std::complex<double>> chosen_zeros;
  std::uint64_t flip_mask = 0;
  bool nonnegative = false;
  double min_component = 0.0;
  bool sign_ambiguous = false;  // component sum is zero; -signal is equally valid
};

struct AmbiguityReport {
  int total_classes = 0;
  int nonnegative_classes = 0;
  std::uint64_t upper_bound = 1;  // 2^{N-2} for N >= 2, else 1
  int flippable_units = 0;
  std::vector<SolutionClass> solutions;
  std::vector<std::string> warnings;
};

// Signal with Fourier transform
//   sqrt(|a_last| * prod |beta_j|^{-1}) * prod (e^{-iw} - beta_j),
// offset 0. The zero multiset must be conjugate-closed (checked through the
// imaginary residue) and free of zeros at the origin. Of the two global
// signs, the representative with component sum >= 0 is returned; when the sum
// vanishes within noise, *sign_ambiguous is set and the sign left as built.
inline Signal reconstruct_from_zeros(
    const std::vector<std::complex<double>>& zeros, double a_last,
    const Tolerances& tol = {}, bool* sign_ambiguous = nullptr) {
  if (a_last == 0.0 || !std::isfinite(a_last))
    throw std::invalid_argument(
        "reconstruct_from_zeros: a[N-1] must be nonzero and finite");
  std::vector<std::complex<double>> c{std::complex<double>(1.0, 0.0)};
  c.reserve(zeros.size() + 1);
  double modulus_product = 1.0;
  for (const auto& z : zeros) {
    if (z == std::complex<double>(0.0, 0.0))
      throw std::invalid_argument("reconstruct_from_zeros: zero at the origin");
    modulus_product *= std::abs(z);
    c.push_back(c.back());
    for (std::size_t k = c.size() - 2; k >= 1; --k) c[k] = c[k - 1] - z * c[k];
    c[0] = -z * c[0];
  }
  const double scale = std::sqrt(std::abs(a_last) / modulus_product);

  double peak = 0.0;
  double imag_peak = 0.0;
  for (const auto& q : c) {
    peak = std::max(peak, std::abs(q));
    imag_peak = std::max(imag_peak, std::abs(q.imag()));
  }
  if (imag_peak > tol.real * peak)
    throw RealnessViolation(
        "reconstruct_from_zeros: imaginary residue " +
        std::to_string(imag_peak / peak) + " exceeds tol-real=" +
        std::to_string(tol.real) + "; zero multiset is not conjugate-closed");

  std::vector<double> values(c.size());
  double sum = 0.0;
  double abs_sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    values[k] = scale * c[k].real();
    sum += values[k];
    abs_sum += std::abs(values[k]);
  }
  const bool ambiguous = std::abs(sum) <= tol.real * abs_sum;
  if (!ambiguous && sum < 0.0)
    for (auto& v : values) v = -v;
  if (sign_ambiguous) *sign_ambiguous = ambiguous;
  return Signal(std::move(values), 0, tol.trim);
}

// true iff autocorrelation(x) matches a elementwise within tol.eval relative
// to the energy a[0].
inline bool verify_solution(const Signal& x, const Autocorrelation& a,
                            const Tolerances& tol = {}) {
  const Autocorrelation ax = autocorrelation(x, tol);
  if (ax.support_length() != a.support_length()) return false;
  const double scale = std::max(a[0], ax[0]);
  for (int n = 0; n < a.support_length(); ++n)
    if (std::abs(ax[n] - a[n]) > tol.eval * scale) return false;
  return true;
}

namespace detail {

inline bool values_close(const std::vector<double>& a,
                         const std::vector<double>& b, double rel) {
  if (a.size() != b.size()) return false;
  double peak = 0.0;
  for (double v : a) peak = std::max(peak, std::abs(v));
  for (double v : b) peak = std::max(peak, std::abs(v));
  const double limit = rel * peak;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > limit) return false;
  return true;
}

inline bool same_class(const std::vector<double>& a,
                       const std::vector<double>& b, double rel) {
  if (values_close(a, b, rel)) return true;
  std::vector<double> r(b.rbegin(), b.rend());
  return values_close(a, r, rel);
}

inline void sort_zeros(std::vector<std::complex<double>>& zeros) {
  std::sort(zeros.begin(), zeros.end(), complex_less);
}

}  // namespace detail

// Enumerates every real finite-support solution of |X|^2 = a_hat modulo time
// shift and reflection. Iterates over all flip masks of the flippable units,
// reconstructs each candidate, canonicalizes, and merges classes whose
// canonical values agree within tol.dedup. Solutions are sorted
// lexicographically by canonical values, so the output is deterministic.
inline AmbiguityReport enumerate_solutions(const Autocorrelation& a,
                                           const Tolerances& tol = {}) {
  AmbiguityReport report;
  const int n_sup = a.support_length();
  if (n_sup >= 2)
    report.upper_bound = (n_sup - 2 >= 63)
                             ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << (n_sup - 2));

  if (n_sup == 1) {
    Signal x(std::vector<double>{std::sqrt(a[0])}, 0, tol.trim);
    SolutionClass sc{x, {}, 0, true, x.values().front(), false};
    report.solutions.push_back(std::move(sc));
    report.total_classes = 1;
    report.nonnegative_classes = 1;
    return report;
  }

  const AssociatedPolynomial poly(a);
  const auto roots = find_roots(poly, tol);
  const auto units = pair_roots(roots, tol);

  int zero_total = 0;
  for (const auto& u : units) zero_total += u.zero_count();
  if (zero_total != n_sup - 1)
    throw PairingFailure(
        "enumerate_solutions: grouped zeros (" + std::to_string(zero_total) +
        ") do not cover the expected N-1 = " + std::to_string(n_sup - 1));

  std::vector<std::size_t> flippable;
  for (std::size_t i = 0; i < units.size(); ++i)
    if (units[i].flippable()) flippable.push_back(i);
  const int m = static_cast<int>(flippable.size());
  report.flippable_units = m;
  if (m > 26)
    throw Error("enumerate_solutions: " + std::to_string(m) +
                " flippable units exceed the exhaustive enumeration budget");

  for (const auto& u : units) {
    if (u.kind == FlipKind::UnitCircle) {
      const auto g = u.pairs.front().gamma;
      report.warnings.push_back(
          "unit-circle zero snapped to (" + std::to_string(g.real()) + ", " +
          std::to_string(g.imag()) + ") within a window of " +
          std::to_string(u.circle_snap_window) + "; it admits no flip choice");
    }
  }

  struct Candidate {
    std::optional<Signal> canonical;
    std::vector<std::complex<double>> zeros;
    bool sign_ambiguous = false;
  };

  const std::uint64_t mask_count = std::uint64_t{1} << m;
  std::vector<Candidate> candidates(mask_count);
  detail::parallel_for(mask_count, [&](std::size_t mask) {
    std::vector<std::complex<double>> chosen;
    chosen.reserve(static_cast<std::size_t>(n_sup - 1));
    for (std::size_t i = 0, bit = 0; i < units.size(); ++i) {
      bool flipped = false;
      if (units[i].flippable()) {
        flipped = ((mask >> bit) & 1ull) != 0;
        ++bit;
      }
      units[i].append_zeros(flipped, chosen);
    }
    bool ambiguous = false;
    const Signal built =
        reconstruct_from_zeros(chosen, a.last(), tol, &ambiguous);
    Signal canon = canonicalize(built);
    std::vector<std::complex<double>> zeros = chosen;
    if (canon.values() != built.values()) {
      // The canonical representative is the reflection; reflect the zeros too.
      for (auto& z : zeros) z = 1.0 / std::conj(z);
    }
    detail::sort_zeros(zeros);
    candidates[mask] =
        Candidate{std::move(canon), std::move(zeros), ambiguous};
  });

  std::vector<std::size_t> reps;
  for (std::uint64_t mask = 0; mask < mask_count; ++mask) {
    bool merged = false;
    for (const std::size_t rep : reps) {
      if (detail::same_class(candidates[mask].canonical->values(),
                             candidates[rep].canonical->values(), tol.dedup)) {
        merged = true;
        break;
      }
    }
    if (!merged) reps.push_back(mask);
  }

  for (const std::size_t rep : reps) {
    Candidate& c = candidates[rep];
    const Signal& s = *c.canonical;
    SolutionClass sc{s, std::move(c.zeros), rep, false, s.min_component(),
                     c.sign_ambiguous};
    sc.nonnegative = sc.min_component >= -tol.nonneg * s.max_abs();
    report.solutions.push_back(std::move(sc));
  }
  std::sort(report.solutions.begin(), report.solutions.end(),
            [](const SolutionClass& a_, const SolutionClass& b_) {
              return std::lexicographical_compare(
                  a_.signal.values().begin(), a_.signal.values().end(),
                  b_.signal.values().begin(), b_.signal.values().end());
            });

  report.total_classes = static_cast<int>(report.solutions.size());
  for (std::size_t i = 0; i < report.solutions.size(); ++i) {
    if (report.solutions[i].nonnegative) ++report.nonnegative_classes;
    if (report.solutions[i].sign_ambiguous)
      report.warnings.push_back(
          "solution " + std::to_string(i) +
          ": component sum is zero; the negated signal is an equally valid "
          "representative");
  }
  return report;
}

}  // namespace phaseamb
