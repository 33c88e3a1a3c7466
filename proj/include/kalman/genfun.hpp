#pragma once

#include <map>
#include <span>
#include <vector>

#include "kalman/polycore.hpp"

namespace kalman {

// Ring x1..xk, y used by every generating-function polynomial.
Ring series_ring(std::size_t k);

/// numerator / denominator with denominator(0) = 1, expanded as a power
/// series by 1/D = sum_m (1 - D)^m under finite caps.
class RationalSeries {
 public:
  RationalSeries(TPoly numerator, TPoly denominator);

  const TPoly& numerator() const { return numerator_; }
  const TPoly& denominator() const { return denominator_; }

  // Every coefficient of the series within `caps`; all caps must be finite.
  TPoly expand(const Caps& caps) const;

 private:
  TPoly numerator_;
  TPoly denominator_;
};

// H(x, y) = -y x1 prod_{i>=2}(1+x_i) + prod_i (1+x_i) - sum_j omega_j x_j prod_{i!=j}(1+x_i)
TPoly build_H(std::span<const unsigned> omega);

// (k+1)x(k+1) integer matrix whose rows hold the coefficients of
// that_1 + h, ..., that_k + h in (t_1..t_k, h), bordered by the row (1,0,...,0).
std::vector<std::vector<long>> bordered_matrix(std::span<const unsigned> omega);

// I - diag(x, y) A over series_ring(k).
PolyMatrix kalman_matrix(std::span<const unsigned> omega);

// det(I - diag(x, y) A); equals build_H.
TPoly build_H_via_determinant(std::span<const unsigned> omega);

// (-1)^k x1 prod_{i>=2}(1+x_i)
TPoly claim_det_first_minor(std::size_t k);
// prod (1+x_i) - sum_j omega_j x_j prod_{i!=j}(1+x_i)
TPoly claim_det_second_minor(std::span<const unsigned> omega);

// H = -H1 y + H2.
struct HSplit {
  TPoly h1;
  TPoly h2;
};
HSplit split_H(const TPoly& h);
// For equal weights: H1 = x1 sum_{i<k} e_i(x without x1), H2 = sum_i (1 - omega i) e_i(x).
HSplit symmetric_H_split(std::size_t k, unsigned omega);

// Coefficients of x^n y^delta in prod_i x_i/(1-x_i) / H for n_i <= x_caps[i],
// delta <= y_cap. Keys are (n_1..n_k, delta); zero coefficients are absent.
using SeriesCoefficients = std::map<ExponentVec, BigInt>;
SeriesCoefficients expand_series(std::span<const unsigned> omega,
                                 std::span<const unsigned> x_caps, unsigned y_cap);

// Checks the MacMahon master theorem for integer matrix A up to `cap`:
// [z^p] prod_i (a_i1 z_1 + ... + a_im z_m)^p_i == [w^p] 1/det(I - diag(w) A)
// for every p <= cap componentwise. Size at most 4.
bool macmahon_check(const std::vector<std::vector<long>>& a, std::span<const unsigned> cap);

}  // namespace kalman
