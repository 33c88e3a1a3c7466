#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kalman/polycore.hpp"

namespace kalman {

/// Leading-order estimate of the hypercubical degree factor d(n*1, delta, omega*1).
struct AsymptoticEstimate {
  double log10_value = 0.0;
  std::optional<double> value;           // set when representable as a double
  std::optional<double> ratio_to_exact;  // estimate / exact, when paired
};

/// Closed-form constants at the critical point c = (1/(omega k - 1), ...).
struct CriticalConstants {
  BigRational c;
  BigRational det_hessian;  // (wk-2)^(k-1) / (wk)^(k-2)
  BigRational L0;           // (wk-1)^(k-delta-1) / ((wk)^(k-delta-2) (wk-2)^k)
  BigRational minus_ck_dk;  // (wk)^(k-2) (wk-2)^k / (wk-1)^(2k-1)
};

// Valid for k >= 3, or k = 2 with omega >= 2.
CriticalConstants critical_constants(unsigned k, unsigned omega, unsigned delta);

// log10 of
//   (wk-1)^(k-1) / ((2 pi)^((k-1)/2) (wk)^((k-2)/2) (wk-2)^((3k-1)/2))
//   * (wk/(wk-1))^delta * (wk-1)^(kn) / n^((k-1)/2 - delta)
AsymptoticEstimate asymptotic_degree(unsigned k, unsigned omega, unsigned delta, unsigned n);

// Fills ratio_to_exact; exact must be positive.
AsymptoticEstimate paired_with_exact(AsymptoticEstimate estimate, const BigInt& exact);

// log10 of a positive big integer from its leading digits and digit count.
double log10_of(const BigInt& value);

struct CriticalPointReport {
  unsigned k = 0;
  unsigned omega = 0;
  BigRational fd_at_c;             // F_D(c); must be 0
  BigRational minus_ck_dk;         // -c_k dF_D/dx_k (c), computed symbolically
  BigRational minus_ck_dk_closed;  // closed form from CriticalConstants
  bool on_variety = false;
  bool derivative_matches = false;
  bool ok() const { return on_variety && derivative_matches; }
};

// Builds F_D = H2 * prod (1 - x_i) for equal weights and checks, with exact
// rationals, that c lies on F_D = 0 and that -c_k dF_D/dx_k(c) matches the
// closed form. Requires k >= 2 and omega k >= 3.
CriticalPointReport verify_critical_point(unsigned k, unsigned omega);

struct ComparisonRow {
  unsigned n = 0;
  BigInt exact;
  AsymptoticEstimate estimate;
};

// Exact degrees by extraction at delta = (delta, 0, ..., 0) next to the estimate.
std::vector<ComparisonRow> compare_exact_asymptotic(unsigned k, unsigned omega, unsigned delta,
                                                    std::span<const unsigned> n_range);

}  // namespace kalman
