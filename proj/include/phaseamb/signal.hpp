#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phaseamb/tolerances.hpp"

namespace phaseamb {

// Finitely supported real sequence x[offset + k] = values[k]. Construction
// trims leading/trailing entries with |value| <= trim_tol * max|values| so the
// support endpoints are always nonzero and the support length N is well
// defined.
class Signal {
 public:
  explicit Signal(std::vector<double> values, int offset = 0,
                  double trim_tol = Tolerances{}.trim)
      : offset_(offset) {
    if (values.empty())
      throw std::invalid_argument("signal: value sequence is empty");
    double peak = 0.0;
    for (double v : values) {
      if (!std::isfinite(v))
        throw std::invalid_argument("signal: component is not finite");
      peak = std::max(peak, std::abs(v));
    }
    if (peak == 0.0)
      throw std::invalid_argument("signal: all components are zero");
    std::size_t lo = 0;
    std::size_t hi = values.size();
    while (lo < hi && std::abs(values[lo]) <= trim_tol * peak) ++lo;
    while (hi > lo && std::abs(values[hi - 1]) <= trim_tol * peak) --hi;
    offset_ += static_cast<int>(lo);
    values_.assign(values.begin() + static_cast<std::ptrdiff_t>(lo),
                   values.begin() + static_cast<std::ptrdiff_t>(hi));
  }

  int offset() const noexcept { return offset_; }
  int support_length() const noexcept {
    return static_cast<int>(values_.size());
  }
  const std::vector<double>& values() const noexcept { return values_; }

  // x[n] at an absolute index n; zero outside the support.
  double operator[](int n) const noexcept {
    const int k = n - offset_;
    if (k < 0 || k >= support_length()) return 0.0;
    return values_[static_cast<std::size_t>(k)];
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double min_component() const noexcept {
    double m = values_.front();
    for (double v : values_) m = std::min(m, v);
    return m;
  }

  double sum() const noexcept {
    double s = 0.0;
    for (double v : values_) s += v;
    return s;
  }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  int offset_ = 0;
  std::vector<double> values_;
};

// Symmetric autocorrelation sequence; coeffs stores a[0..N-1], the negative
// lags follow from a[-n] = a[n]. The evaluated spectrum
//   a_hat(w) = a[0] + 2 * sum_{n>=1} a[n] cos(n w)
// must be non-negative up to tol.eval at the validity samples, a[0] > 0 and
// a[N-1] != 0.
class Autocorrelation {
 public:
  static constexpr int kValiditySamples = 512;

  explicit Autocorrelation(std::vector<double> coeffs,
                           const Tolerances& tol = {})
      : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty())
      throw std::invalid_argument("autocorrelation: coefficients are empty");
    for (double c : coeffs_) {
      if (!std::isfinite(c))
        throw std::invalid_argument(
            "autocorrelation: coefficient is not finite");
    }
    if (coeffs_.front() <= 0.0)
      throw std::invalid_argument("autocorrelation: a[0] must be positive");
    if (coeffs_.back() == 0.0)
      throw std::invalid_argument("autocorrelation: a[N-1] must be nonzero");
    double l1 = std::abs(coeffs_[0]);
    for (std::size_t n = 1; n < coeffs_.size(); ++n)
      l1 += 2.0 * std::abs(coeffs_[n]);
    for (int k = 0; k < kValiditySamples; ++k) {
      const double w = 2.0 * std::numbers::pi * k / kValiditySamples;
      if (evaluate(w) < -tol.eval * l1)
        throw std::invalid_argument(
            "autocorrelation: spectrum drops below -tol-eval at omega=" +
            std::to_string(w));
    }
  }

  int support_length() const noexcept {
    return static_cast<int>(coeffs_.size());
  }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  // a[n] for any lag, using the symmetry a[-n] = a[n]; zero outside.
  double operator[](int n) const noexcept {
    const int k = n < 0 ? -n : n;
    if (k >= support_length()) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
  }

  double last() const noexcept { return coeffs_.back(); }

  double evaluate(double omega) const noexcept {
    double s = coeffs_[0];
    for (std::size_t n = 1; n < coeffs_.size(); ++n)
      s += 2.0 * coeffs_[n] * std::cos(omega * static_cast<double>(n));
    return s;
  }

  friend bool operator==(const Autocorrelation&, const Autocorrelation&) =
      default;

 private:
  std::vector<double> coeffs_;
};

// a[n] = sum_k x[k] x[k+n] for n = 0..N-1; independent of the offset.
inline Autocorrelation autocorrelation(const Signal& x,
                                       const Tolerances& tol = {}) {
  const auto& v = x.values();
  const int n_sup = x.support_length();
  std::vector<double> a(static_cast<std::size_t>(n_sup), 0.0);
  for (int n = 0; n < n_sup; ++n) {
    double s = 0.0;
    for (int k = 0; k + n < n_sup; ++k) s += v[k] * v[k + n];
    a[static_cast<std::size_t>(n)] = s;
  }
  return Autocorrelation(std::move(a), tol);
}

// |sum_n x[n] e^{-i w n}|^2; agrees with the autocorrelation spectrum.
inline double fourier_intensity(const Signal& x, double omega) noexcept {
  std::complex<double> s{0.0, 0.0};
  const auto& v = x.values();
  for (int k = 0; k < x.support_length(); ++k) {
    const double phase = -omega * static_cast<double>(x.offset() + k);
    s += v[static_cast<std::size_t>(k)] *
         std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return std::norm(s);
}

inline Signal shift(const Signal& x, int n0) {
  return Signal(x.values(), x.offset() + n0);
}

inline Signal reflect(const Signal& x) {
  std::vector<double> v(x.values().rbegin(), x.values().rend());
  return Signal(std::move(v), -(x.offset() + x.support_length() - 1));
}

// Quotient representative modulo shift and reflection: offset 0, and the
// lexicographically smaller of the value sequence and its reversal. The sign
// is never altered.
inline Signal canonicalize(const Signal& x) {
  std::vector<double> v = x.values();
  std::vector<double> r(v.rbegin(), v.rend());
  if (std::lexicographical_compare(r.begin(), r.end(), v.begin(), v.end()))
    v = std::move(r);
  return Signal(std::move(v), 0);
}

}  // namespace phaseamb
