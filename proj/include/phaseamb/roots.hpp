#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "phaseamb/errors.hpp"
#include "phaseamb/signal.hpp"
#include "phaseamb/tolerances.hpp"

namespace phaseamb {

// P(z) = sum_{n=0}^{2N-2} a[n-N+1] z^n. Palindromic with nonzero leading
// coefficient a[N-1]; satisfies a_hat(w) = e^{i w (N-1)} P(e^{-i w}).
class AssociatedPolynomial {
 public:
  explicit AssociatedPolynomial(const Autocorrelation& a) {
    const int n_sup = a.support_length();
    coeffs_.resize(static_cast<std::size_t>(2 * n_sup - 1));
    for (int n = 0; n < 2 * n_sup - 1; ++n)
      coeffs_[static_cast<std::size_t>(n)] = a[n - (n_sup - 1)];
  }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<double>& coeffs() const noexcept { return coeffs_; }

  std::complex<double> evaluate(std::complex<double> z) const noexcept {
    std::complex<double> p{0.0, 0.0};
    for (std::size_t k = coeffs_.size(); k-- > 0;) p = p * z + coeffs_[k];
    return p;
  }

 private:
  std::vector<double> coeffs_;
};

namespace detail {

// Parlett-Reinsch style balancing with the diagonal included; for companion
// matrices the diagonal is almost entirely zero so the difference is
// immaterial. Scaling by powers of two keeps eigenvalues exact.
inline void balance_matrix(Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  const double gamma = 0.9;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < n; ++i) {
      const double row_norm = m.row(i).lpNorm<1>();
      const double col_norm = m.col(i).lpNorm<1>();
      if (row_norm == 0.0 || col_norm == 0.0) continue;
      int exponent = 0;
      std::frexp(row_norm / col_norm, &exponent);
      exponent /= 2;
      if (exponent != 0) {
        const double scaled_col = std::ldexp(col_norm, exponent);
        const double scaled_row = std::ldexp(row_norm, -exponent);
        if (scaled_col + scaled_row < gamma * (col_norm + row_norm)) {
          changed = true;
          m.row(i) *= std::ldexp(1.0, -exponent);
          m.col(i) *= std::ldexp(1.0, exponent);
        }
      }
    }
  }
}

inline std::complex<double> horner(const std::vector<double>& coeffs,
                                   std::complex<double> z,
                                   std::complex<double>* derivative) {
  std::complex<double> p{0.0, 0.0};
  std::complex<double> d{0.0, 0.0};
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    d = d * z + p;
    p = p * z + coeffs[k];
  }
  if (derivative) *derivative = d;
  return p;
}

// Newton iteration against the original coefficients; keeps the iterate with
// the smallest residual and refuses steps that jump away from the current
// neighbourhood (multiple roots make the raw step unreliable).
inline void newton_polish(const std::vector<double>& coeffs,
                          std::complex<double>& z, int steps) {
  std::complex<double> best = z;
  double best_resid = std::abs(horner(coeffs, z, nullptr));
  for (int s = 0; s < steps; ++s) {
    std::complex<double> d;
    const std::complex<double> p = horner(coeffs, z, &d);
    const double pd = std::abs(d);
    if (pd == 0.0) break;
    const std::complex<double> step = p / d;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    if (std::abs(step) > 0.5 * (1.0 + std::abs(z))) break;
    z -= step;
    const double resid = std::abs(horner(coeffs, z, nullptr));
    if (resid < best_resid) {
      best_resid = resid;
      best = z;
    }
  }
  z = best;
}

inline bool complex_less(const std::complex<double>& a,
                         const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace detail

// All roots (with multiplicity) of sum_k coeffs[k] z^k, leading coefficient
// nonzero, degree >= 1. Balanced companion-matrix eigenvalues followed by
// Newton polishing against the original coefficients. Every returned root z
// satisfies |p(z)| <= tol.root * ||coeffs||_1 * max(1, |z|)^degree.
inline std::vector<std::complex<double>> polynomial_roots(
    const std::vector<double>& coeffs, const Tolerances& tol = {}) {
  if (coeffs.size() < 2)
    throw std::invalid_argument("polynomial_roots: degree must be at least 1");
  double l1 = 0.0;
  for (double c : coeffs) {
    if (!std::isfinite(c))
      throw std::invalid_argument(
          "polynomial_roots: coefficient is not finite");
    l1 += std::abs(c);
  }
  if (coeffs.back() == 0.0)
    throw std::invalid_argument("polynomial_roots: leading coefficient is zero");

  const int degree = static_cast<int>(coeffs.size()) - 1;
  std::vector<std::complex<double>> roots;
  roots.reserve(static_cast<std::size_t>(degree));

  if (degree == 1) {
    roots.emplace_back(-coeffs[0] / coeffs[1], 0.0);
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(degree, degree);
    for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < degree; ++i)
      companion(i, degree - 1) =
          -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
    detail::balance_matrix(companion);
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw NonConvergence(
          "polynomial_roots: companion eigenvalue iteration failed");
    const auto& ev = solver.eigenvalues();
    for (int i = 0; i < degree; ++i) roots.push_back(ev(i));
  }

  const auto residual_ok = [&](const std::complex<double>& z) {
    const double bound =
        tol.root * l1 * std::pow(std::max(1.0, std::abs(z)), degree);
    return std::abs(detail::horner(coeffs, z, nullptr)) <= bound;
  };

  // Four steps: simple roots converge immediately, and for doubled roots the
  // linear halving still pulls the eigensolver's split below the snap
  // tolerances downstream.
  for (auto& z : roots) detail::newton_polish(coeffs, z, 4);
  for (int round = 0; round < 4; ++round) {
    bool pending = false;
    for (auto& z : roots) {
      if (!residual_ok(z)) {
        pending = true;
        detail::newton_polish(coeffs, z, 8);
      }
    }
    if (!pending) break;
  }

  // Realify split doubles: a mutually conjugate pair whose shared real part
  // is itself a root within the residual bound is a doubled real root torn
  // apart by the eigensolver, not a genuine complex pair. Near a double root
  // the evaluation is pure rounding noise, so Newton cannot shrink the split
  // below roughly sqrt(eps) * scale on its own.
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double wi = 1e-5 * std::max(1.0, std::abs(roots[i]));
    if (roots[i].imag() <= 0.0 || roots[i].imag() > wi) continue;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == i || roots[j].imag() >= 0.0) continue;
      if (std::abs(roots[j] - std::conj(roots[i])) > 2.0 * wi) continue;
      const std::complex<double> real_point(
          0.5 * (roots[i].real() + roots[j].real()), 0.0);
      if (!residual_ok(real_point)) continue;
      roots[i] = real_point;
      roots[j] = real_point;
      detail::newton_polish(coeffs, roots[i], 2);
      roots[i] = std::complex<double>(roots[i].real(), 0.0);
      roots[j] = roots[i];
      break;
    }
  }

  for (const auto& z : roots) {
    if (!residual_ok(z))
      throw NonConvergence("polynomial_roots: residual of root (" +
                           std::to_string(z.real()) + ", " +
                           std::to_string(z.imag()) +
                           ") exceeds tol-root=" + std::to_string(tol.root));
  }

  std::sort(roots.begin(), roots.end(), detail::complex_less);
  return roots;
}

// The 2N-2 roots of the associated polynomial.
inline std::vector<std::complex<double>> find_roots(
    const AssociatedPolynomial& p, const Tolerances& tol = {}) {
  if (p.degree() < 1)
    throw std::invalid_argument("find_roots: polynomial degree must be >= 1");
  return polynomial_roots(p.coeffs(), tol);
}

// The N-1 zeros of sum_k values[k] z^k; the zero set is shift invariant.
inline std::vector<std::complex<double>> zeros_of_signal(
    const Signal& x, const Tolerances& tol = {}) {
  if (x.support_length() < 2)
    throw std::invalid_argument("zeros_of_signal: support length must be >= 2");
  return polynomial_roots(x.values(), tol);
}

// A root pair (gamma, 1/conj(gamma)) mirrored across the unit circle. The
// representative gamma has |gamma| >= 1; on the circle gamma == mirror.
struct ReflectionPair {
  std::complex<double> gamma;
  std::complex<double> mirror;
  bool on_unit_circle = false;
};

enum class FlipKind { RealPair, ConjugateQuad, UnitCircle };

inline const char* to_string(FlipKind k) noexcept {
  switch (k) {
    case FlipKind::RealPair: return "real-pair";
    case FlipKind::ConjugateQuad: return "conjugate-quad";
    case FlipKind::UnitCircle: return "unit-circle";
  }
  return "unknown";
}

// Atomic unit of ambiguity selection. Real pairs and circle units hold one
// ReflectionPair; conjugate quads hold the pair and its conjugate jointly so
// that flipping preserves realness of reconstructed signals. Unit-circle
// units admit no flip choice; circle_snap_window records how wide a window
// was needed to absorb the eigensolver's splitting of the doubled root.
struct FlipUnit {
  FlipKind kind = FlipKind::RealPair;
  std::vector<ReflectionPair> pairs;
  double circle_snap_window = 0.0;

  bool flippable() const noexcept { return kind != FlipKind::UnitCircle; }
  int zero_count() const noexcept {
    return kind == FlipKind::ConjugateQuad ? 2 : 1;
  }
  void append_zeros(bool flipped,
                    std::vector<std::complex<double>>& out) const {
    for (const auto& p : pairs) out.push_back(flipped ? p.mirror : p.gamma);
  }
};

namespace detail {

inline std::vector<FlipUnit> pair_roots_with_window(
    const std::vector<std::complex<double>>& roots, const Tolerances& tol,
    double window) {
  std::vector<FlipUnit> units;

  std::vector<std::complex<double>> circle;
  std::vector<std::complex<double>> outside;
  std::vector<std::complex<double>> inside;
  for (const auto& z : roots) {
    const double r = std::abs(z);
    if (std::abs(r - 1.0) <= window)
      circle.push_back(z);
    else if (r > 1.0)
      outside.push_back(z);
    else
      inside.push_back(z);
  }

  if (circle.size() % 2 != 0)
    throw PairingFailure(
        "pair_roots: odd number of roots within tol-circle=" +
        std::to_string(window) +
        " of the unit circle; a non-negative spectrum doubles them");
  if (outside.size() != inside.size())
    throw PairingFailure(
        "pair_roots: unbalanced mirror sides (" +
        std::to_string(outside.size()) + " outside vs " +
        std::to_string(inside.size()) +
        " inside the unit circle) within tol-circle=" +
        std::to_string(window));

  // Circle roots: group the splitting cloud of each multiple root into one
  // cluster. The centroid of a full cluster is first-order exact (the split
  // directions cancel), so the unit's representative keeps full accuracy.
  if (!circle.empty()) {
    const double link = std::max(8.0 * window, 1e-6);
    std::vector<int> cluster_of(circle.size(), -1);
    int cluster_count = 0;
    for (std::size_t i = 0; i < circle.size(); ++i) {
      if (cluster_of[i] >= 0) continue;
      // BFS over the proximity graph.
      std::vector<std::size_t> stack{i};
      cluster_of[i] = cluster_count;
      while (!stack.empty()) {
        const std::size_t cur = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < circle.size(); ++j) {
          if (cluster_of[j] >= 0) continue;
          if (std::abs(circle[cur] - circle[j]) <= link) {
            cluster_of[j] = cluster_count;
            stack.push_back(j);
          }
        }
      }
      ++cluster_count;
    }
    for (int c = 0; c < cluster_count; ++c) {
      std::complex<double> centroid{0.0, 0.0};
      int size = 0;
      for (std::size_t i = 0; i < circle.size(); ++i) {
        if (cluster_of[i] == c) {
          centroid += circle[i];
          ++size;
        }
      }
      if (size % 2 != 0)
        throw PairingFailure(
            "pair_roots: a unit-circle root cluster has odd multiplicity " +
            std::to_string(size) + " within tol-circle=" +
            std::to_string(window));
      centroid /= static_cast<double>(size);
      const double mag = std::abs(centroid);
      if (std::abs(mag - 1.0) > 2.0 * window)
        throw PairingFailure(
            "pair_roots: unit-circle cluster centroid drifted off the circle "
            "beyond tol-circle=" +
            std::to_string(window));
      std::complex<double> g = centroid / mag;
      if (std::abs(g.imag()) <= tol.real)
        g = std::complex<double>(g.real() < 0.0 ? -1.0 : 1.0, 0.0);
      for (int k = 0; k < size / 2; ++k) {
        FlipUnit unit{FlipKind::UnitCircle, {ReflectionPair{g, g, true}}, 0.0};
        unit.circle_snap_window = window;
        units.push_back(std::move(unit));
      }
    }
  }

  // Complex circle units must be conjugate-closed; symmetrize them exactly.
  {
    const double conj_tol = std::max(tol.pair, 2.0 * window);
    std::vector<std::size_t> plus, minus;
    for (std::size_t i = 0; i < units.size(); ++i) {
      const auto g = units[i].pairs.front().gamma;
      if (g.imag() > 0.0)
        plus.push_back(i);
      else if (g.imag() < 0.0)
        minus.push_back(i);
    }
    std::vector<bool> used(minus.size(), false);
    for (const std::size_t ip : plus) {
      const auto g = units[ip].pairs.front().gamma;
      std::size_t best = minus.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < minus.size(); ++k) {
        if (used[k]) continue;
        const double d = std::abs(units[minus[k]].pairs.front().gamma -
                                  std::conj(g));
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (best == minus.size() || best_d > conj_tol)
        throw PairingFailure(
            "pair_roots: unit-circle zeros are not conjugate-closed within "
            "tol-pair=" +
            std::to_string(tol.pair));
      used[best] = true;
      units[minus[best]].pairs.front() =
          ReflectionPair{std::conj(g), std::conj(g), true};
    }
    for (std::size_t k = 0; k < minus.size(); ++k) {
      if (!used[k])
        throw PairingFailure(
            "pair_roots: unit-circle zeros are not conjugate-closed within "
            "tol-pair=" +
            std::to_string(tol.pair));
    }
  }

  // Off-circle roots: match every outside root to the inside root nearest to
  // its reflection 1/conj(gamma).
  std::vector<ReflectionPair> matched;
  {
    std::vector<bool> used(inside.size(), false);
    for (const auto& g : outside) {
      const std::complex<double> target = 1.0 / std::conj(g);
      std::size_t best = inside.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < inside.size(); ++j) {
        if (used[j]) continue;
        const double d = std::abs(inside[j] - target);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best == inside.size() ||
          best_d > tol.pair * std::max(1.0, std::abs(target)))
        throw PairingFailure(
            "pair_roots: no mirror for root (" + std::to_string(g.real()) +
            ", " + std::to_string(g.imag()) +
            ") within tol-pair=" + std::to_string(tol.pair));
      used[best] = true;
      matched.push_back(ReflectionPair{g, inside[best], false});
    }
  }

  // Real pairs stand alone; complex pairs join their conjugates into quads.
  std::vector<ReflectionPair> plus_pairs, minus_pairs;
  for (const auto& p : matched) {
    if (p.gamma.imag() == 0.0 && p.mirror.imag() == 0.0) {
      units.push_back(FlipUnit{FlipKind::RealPair, {p}});
    } else if (p.gamma.imag() > 0.0) {
      plus_pairs.push_back(p);
    } else {
      minus_pairs.push_back(p);
    }
  }
  {
    std::vector<bool> used(minus_pairs.size(), false);
    for (const auto& p : plus_pairs) {
      std::size_t best = minus_pairs.size();
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < minus_pairs.size(); ++k) {
        if (used[k]) continue;
        const double d = std::abs(minus_pairs[k].gamma - std::conj(p.gamma));
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      if (best == minus_pairs.size() ||
          best_d > tol.pair * std::max(1.0, std::abs(p.gamma)))
        throw PairingFailure(
            "pair_roots: roots are not conjugate-closed within tol-pair=" +
            std::to_string(tol.pair));
      used[best] = true;
      units.push_back(FlipUnit{
          FlipKind::ConjugateQuad,
          {p, ReflectionPair{std::conj(p.gamma), std::conj(p.mirror), false}}});
    }
    for (std::size_t k = 0; k < minus_pairs.size(); ++k) {
      if (!used[k])
        throw PairingFailure(
            "pair_roots: roots are not conjugate-closed within tol-pair=" +
            std::to_string(tol.pair));
    }
  }

  std::sort(units.begin(), units.end(),
            [](const FlipUnit& a, const FlipUnit& b) {
              return complex_less(a.pairs.front().gamma,
                                  b.pairs.front().gamma);
            });

  int zero_total = 0;
  for (const auto& u : units) zero_total += u.zero_count();
  if (2 * zero_total != static_cast<int>(roots.size()))
    throw PairingFailure(
        "pair_roots: grouped zero count does not match the root count");
  return units;
}

}  // namespace detail

// Groups the 2N-2 roots of the associated polynomial into FlipUnits: real
// pairs (gamma, 1/gamma), conjugate quads, and doubled unit-circle roots
// consumed cluster by cluster. Mirrors are matched greedily by distance and
// the assignment is verified globally; any leftover raises PairingFailure.
// The circle window starts at tol.circle and widens over a fixed ladder when
// strict pairing fails: a circle root of multiplicity 2m splits by roughly
// eps^{1/2m} under the eigensolver, far beyond the nominal window for m > 1.
// Widened snaps are flagged on the units rather than silently applied.
inline std::vector<FlipUnit> pair_roots(std::vector<std::complex<double>> roots,
                                        const Tolerances& tol = {}) {
  if (roots.empty()) return {};
  if (roots.size() % 2 != 0)
    throw std::invalid_argument("pair_roots: expected an even number of roots");

  for (auto& z : roots) {
    if (std::abs(z.imag()) <= tol.real * std::max(1.0, std::abs(z)))
      z = std::complex<double>(z.real(), 0.0);
  }
  std::sort(roots.begin(), roots.end(), detail::complex_less);

  std::vector<double> windows{tol.circle, 1e-5, 3e-4, 5e-3};
  std::string last_error;
  for (const double w : windows) {
    if (w < tol.circle) continue;
    try {
      return detail::pair_roots_with_window(roots, tol, w);
    } catch (const PairingFailure& e) {
      last_error = e.what();
    }
  }
  throw PairingFailure(last_error);
}

}  // namespace phaseamb
