#include "kalman/isotropic.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "kalman/errors.hpp"

namespace kalman {

namespace {

BigInt factorial(unsigned n) {
  BigInt f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

BigInt binomial(unsigned n, unsigned r) {
  if (r > n) return 0;
  BigInt b = 1;
  for (unsigned i = 1; i <= r; ++i) b = b * (n - r + i) / i;
  return b;
}

BigInt ipow(const BigInt& base, unsigned e) {
  BigInt r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

IsotropicResult isotropic_degree(const TensorFormat& fmt) {
  const std::size_t k = fmt.k();
  unsigned twos = 0;
  for (std::size_t l = 0; l < k; ++l) {
    if (fmt.n()[l] < 2)
      throw ValidationError("isotropic degree requires n_" + std::to_string(l + 1) +
                            " >= 2 (got " + std::to_string(fmt.n()[l]) + ")");
    if (fmt.n()[l] == 2) ++twos;
  }
  const unsigned ambient = std::accumulate(fmt.n().begin(), fmt.n().end(), 0u) -
                           2 * static_cast<unsigned>(k);

  // Per-factor tables indexed by a_l in [0, n_l - 2].
  std::vector<std::vector<BigRational>> weight(k);
  std::vector<std::vector<BigInt>> beta_sum(k);
  for (std::size_t l = 0; l < k; ++l) {
    const unsigned top = fmt.n()[l] - 2;
    for (unsigned a = 0; a <= top; ++a) {
      weight[l].emplace_back(ipow(fmt.omega()[l], top - a), factorial(top - a));
      BigInt s = 0;
      for (unsigned b = 0; b <= a; ++b) s += binomial(fmt.n()[l], b) * ipow(BigInt(-2), a - b);
      beta_sum[l].push_back(s);
    }
  }

  BigRational total = 0;
  for (unsigned j = 0; j <= ambient; ++j) {
    // Bounded compositions of j with alpha_l <= n_l - 2.
    BigRational inner = 0;
    std::function<void(std::size_t, unsigned, const BigRational&)> walk =
        [&](std::size_t l, unsigned left, const BigRational& partial) {
          if (l + 1 == k) {
            if (left > fmt.n()[l] - 2) return;
            inner += partial * weight[l][left] * beta_sum[l][left];
            return;
          }
          const unsigned top = std::min(left, fmt.n()[l] - 2);
          for (unsigned a = 0; a <= top; ++a)
            walk(l + 1, left - a, partial * weight[l][a] * beta_sum[l][a]);
        };
    walk(0, j, BigRational(1));
    const BigRational term = inner * factorial(ambient + 1 - j);
    if (j % 2 == 0)
      total += term;
    else
      total -= term;
  }
  total *= ipow(BigInt(2), static_cast<unsigned>(k));

  if (denominator(total) != 1)
    throw InternalError("isotropic degree for n = " + format_list(fmt.n()) +
                        ", omega = " + format_list(fmt.omega()) + " is not integral: " +
                        total.str());

  IsotropicResult result;
  result.degree = numerator(total);
  result.components = ipow(BigInt(2), twos);
  result.ambient_dim = ambient;
  return result;
}

BigInt isotropic_degree_symmetric(unsigned n, unsigned omega) {
  if (n < 2) throw ValidationError("n must be >= 2 (got " + std::to_string(n) + ")");
  if (omega < 1) throw ValidationError("omega must be >= 1");
  BigInt sum = 0;
  BigInt power = 1;
  for (unsigned j = 0; j + 2 <= n; ++j) {
    if (j > 0) power *= omega - 1;
    sum += power * (j + 1);
  }
  return 2 * sum;
}

unsigned symmetric_tuple_codim(unsigned n, unsigned k) {
  if (n < 2) throw ValidationError("n must be >= 2 (got " + std::to_string(n) + ")");
  if (k < 1) throw ValidationError("k must be >= 1");
  return (k - 1) * (n - 1);
}

unsigned partition_tuple_codim(unsigned n, unsigned k, unsigned t) {
  if (n < 2) throw ValidationError("n must be >= 2 (got " + std::to_string(n) + ")");
  if (t < 1 || t > k)
    throw ValidationError("number of parts t = " + std::to_string(t) + " must lie in [1, " +
                          std::to_string(k) + "]");
  return (k - t) * (n - 1);
}

unsigned partition_tuple_codim(unsigned n, std::span<const unsigned> partition) {
  unsigned k = 0;
  for (auto p : partition) {
    if (p < 1) throw ValidationError("partition parts must be >= 1");
    k += p;
  }
  return partition_tuple_codim(n, k, static_cast<unsigned>(partition.size()));
}

}  // namespace kalman
