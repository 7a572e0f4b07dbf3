#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaseamb/errors.hpp"
#include "phaseamb/tolerances.hpp"

namespace phaseamb {

// sigma[n] = (-1)^n S_n over a fixed zero multiset, i.e. the coefficients of
// the monic expansion prod_j (z - beta_j) read off in falling powers.
// sigma[0] = 1; indices outside the stored range evaluate to 0.
struct SymmetricSeq {
  std::vector<double> sigma;

  double at(int n) const noexcept {
    if (n < 0 || n >= static_cast<int>(sigma.size())) return 0.0;
    return sigma[static_cast<std::size_t>(n)];
  }
  int count() const noexcept { return static_cast<int>(sigma.size()); }
};

// Incremental convolution of the linear factors (z - beta_j). The input must
// be conjugate-closed; an imaginary residue above tol.real raises
// RealnessViolation.
inline SymmetricSeq elementary_symmetric(
    const std::vector<std::complex<double>>& zeros,
    const Tolerances& tol = {}) {
  // p is kept in ascending powers (p[k] ~ z^k); sigma[n] is the coefficient
  // of z^{K-n}.
  std::vector<std::complex<double>> p{std::complex<double>(1.0, 0.0)};
  for (const auto& z : zeros) {
    p.push_back(p.back());
    for (std::size_t k = p.size() - 2; k >= 1; --k) p[k] = p[k - 1] - z * p[k];
    p[0] = -z * p[0];
  }
  const std::size_t k_count = p.size();
  double peak = 0.0;
  double imag_peak = 0.0;
  for (const auto& q : p) {
    peak = std::max(peak, std::abs(q));
    imag_peak = std::max(imag_peak, std::abs(q.imag()));
  }
  if (imag_peak > tol.real * std::max(1.0, peak))
    throw RealnessViolation(
        "elementary_symmetric: imaginary residue " + std::to_string(imag_peak) +
        " exceeds tol-real=" + std::to_string(tol.real) +
        "; the zero multiset is not conjugate-closed");
  SymmetricSeq s;
  s.sigma.resize(k_count);
  for (std::size_t n = 0; n < k_count; ++n)
    s.sigma[n] = p[k_count - 1 - n].real();
  return s;
}

// The full inequality system for appending the conjugate pair
// (beta, conj(beta)) to the fixed zeros: with N - 1 = |fixed| + 2,
//   sigma_{n-2} |beta|^2 - 2 sigma_{n-1} Re(beta) + sigma_n >= 0
// for every n = 0..N-1, vacuous indices included. Each left-hand side gets a
// slack of -tol.nonneg relative to its own magnitude.
inline bool last_pair_nonneg(const std::vector<std::complex<double>>& fixed,
                             std::complex<double> beta,
                             const Tolerances& tol = {}) {
  const SymmetricSeq s = elementary_symmetric(fixed, tol);
  const int n_sup = static_cast<int>(fixed.size()) + 3;
  const double mod2 = std::norm(beta);
  const double re = beta.real();
  for (int n = 0; n <= n_sup - 1; ++n) {
    const double lhs = s.at(n - 2) * mod2 - 2.0 * s.at(n - 1) * re + s.at(n);
    const double scale = 1.0 + std::abs(s.at(n - 2)) * mod2 +
                         2.0 * std::abs(s.at(n - 1) * re) + std::abs(s.at(n));
    if (lhs < -tol.nonneg * scale) return false;
  }
  return true;
}

// Supplementary verdict for the reflected representative 1/conj(beta) of the
// same pair.
inline bool last_pair_nonneg_reflected(
    const std::vector<std::complex<double>>& fixed, std::complex<double> beta,
    const Tolerances& tol = {}) {
  if (beta == std::complex<double>(0.0, 0.0))
    throw std::invalid_argument("last_pair_nonneg_reflected: beta is zero");
  return last_pair_nonneg(fixed, 1.0 / std::conj(beta), tol);
}

struct Disc {
  double center = 0.0;  // on the real axis
  double radius = 0.0;
};

// Half plane Re(beta) <= halfplane_re_max minus finitely many open discs.
// Valid when every fixed zero has a strictly negative real part.
struct FeasibleRegion {
  double halfplane_re_max = 0.0;
  std::vector<Disc> discs;

  // Membership uses squared distances; the boundary is included.
  bool contains(std::complex<double> beta) const noexcept {
    if (beta.real() > halfplane_re_max) return false;
    for (const auto& d : discs) {
      const double dx = beta.real() - d.center;
      const double dy = beta.imag();
      if (dx * dx + dy * dy < d.radius * d.radius) return false;
    }
    return true;
  }
};

// Geometry of the inequality system under the hypothesis Re(beta_j) < 0 for
// every fixed zero: the bound sigma_1 / 2 plus, for n = 2..N-2, the excluded
// disc with centre sigma_{n-1}/sigma_{n-2} and radius
// sqrt(sigma_{n-1}^2 - sigma_n sigma_{n-2}) / sigma_{n-2} whenever the
// radicand is non-negative.
inline FeasibleRegion feasible_region(
    const std::vector<std::complex<double>>& fixed, const Tolerances& tol = {}) {
  for (const auto& z : fixed) {
    if (z.real() >= 0.0)
      throw HypothesisViolation(
          "feasible_region: fixed zero (" + std::to_string(z.real()) + ", " +
          std::to_string(z.imag()) + ") has non-negative real part");
  }
  const SymmetricSeq s = elementary_symmetric(fixed, tol);
  const int n_sup = static_cast<int>(fixed.size()) + 3;
  FeasibleRegion region;
  region.halfplane_re_max = s.at(1) / 2.0;
  for (int n = 2; n <= n_sup - 2; ++n) {
    const double denom = s.at(n - 2);
    const double radicand = s.at(n - 1) * s.at(n - 1) - s.at(n) * denom;
    if (radicand >= 0.0)
      region.discs.push_back(
          Disc{s.at(n - 1) / denom, std::sqrt(radicand) / denom});
  }
  return region;
}

// Sufficient condition: when every zero lies in the open left half plane,
// every real solution sharing the Fourier intensity is non-negative.
inline bool left_halfplane_sufficient(
    const std::vector<std::complex<double>>& zeros) noexcept {
  for (const auto& z : zeros)
    if (z.real() >= 0.0) return false;
  return true;
}

}  // namespace phaseamb
