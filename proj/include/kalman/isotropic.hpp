#pragma once

#include <array>
#include <span>

#include "kalman/degrees.hpp"
#include "kalman/polycore.hpp"

namespace kalman {

struct IsotropicResult {
  BigInt degree;
  BigInt components;       // 2^|{j : n_j = 2}|
  unsigned ambient_dim = 0;  // N = sum n_i - 2k
};

// Degree of the dual of the Segre-Veronese image of a product of quadrics,
// i.e. the totally isotropic Kalman hypersurface:
//   2^k sum_{j=0}^N (-1)^j (N+1-j)! sum_{|a|=j, a_l <= n_l-2}
//     prod_l omega_l^(n_l-2-a_l) / (n_l-2-a_l)!
//     * prod_l sum_{b=0}^{a_l} C(n_l, b) (-2)^(a_l-b)
// Evaluated with exact rationals; a non-integral total raises InternalError.
IsotropicResult isotropic_degree(const TensorFormat& fmt);

// 2 sum_{j=0}^{n-2} (j+1) (omega-1)^j.
BigInt isotropic_degree_symmetric(unsigned n, unsigned omega);

// (k-1)(n-1)
unsigned symmetric_tuple_codim(unsigned n, unsigned k);

// (k-t)(n-1) for a partition of k into t parts.
unsigned partition_tuple_codim(unsigned n, unsigned k, unsigned t);
// Same, with the partition given explicitly (parts >= 1 summing to k).
unsigned partition_tuple_codim(unsigned n, std::span<const unsigned> partition);

// Known codimensions and degrees of the normalized symmetric Kalman varieties
// of n x n matrices. Reference data only: no formula for the degree is known.
struct SymmetricKalmanReference {
  unsigned n;
  unsigned codim;
  unsigned degree;
};
inline constexpr std::array<SymmetricKalmanReference, 5> kSymmetricMatrixKalmanTable{{
    {2, 1, 1},
    {3, 2, 7},
    {4, 3, 24},
    {5, 4, 86},
    {6, 5, 314},
}};

}  // namespace kalman
