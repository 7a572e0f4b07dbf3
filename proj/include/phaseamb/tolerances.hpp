#pragma once

namespace phaseamb {

// Numeric tolerances shared across the library. Values are relative to the
// local magnitude of whatever they guard unless noted otherwise; defaults are
// tuned for double precision at modest support lengths (N up to a few dozen,
// polynomial degrees up to a few hundred).
struct Tolerances {
  double trim = 1e-12;    // endpoint trimming, relative to max |component|
  double eval = 1e-9;     // intensity vs. autocorrelation agreement
  double root = 1e-8;     // residual bound for polished polynomial roots
  double pair = 1e-6;     // mirror / conjugate matching of roots
  double circle = 1e-7;   // ||gamma| - 1| window snapped onto the unit circle
  double real = 1e-8;     // imaginary residue discarded as rounding noise
  double dedup = 1e-6;    // solution-class merging, relative to max component
  double nonneg = 1e-9;   // slack when testing component non-negativity
};

}  // namespace phaseamb
