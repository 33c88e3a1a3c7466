#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kalman/polycore.hpp"

namespace kalman {

/// Format of the partially symmetric tensor space: k factors, dimensions
/// n_i >= 1 and symmetric powers omega_i >= 1.
class TensorFormat {
 public:
  TensorFormat(std::vector<unsigned> n, std::vector<unsigned> omega);

  // n * (1,...,1) with omega * (1,...,1).
  static TensorFormat hypercubical(std::size_t k, unsigned n, unsigned omega);

  std::size_t k() const { return n_.size(); }
  const std::vector<unsigned>& n() const { return n_; }
  const std::vector<unsigned>& omega() const { return omega_; }

  // Copy with factor i's dimension replaced.
  TensorFormat with_dimension(std::size_t i, unsigned n) const;

  friend bool operator==(const TensorFormat&, const TensorFormat&) = default;

 private:
  std::vector<unsigned> n_;
  std::vector<unsigned> omega_;
};

/// Codimensions delta_i of the constraint varieties in each factor.
class CodimVec {
 public:
  explicit CodimVec(std::vector<unsigned> delta);

  // (delta, 0, ..., 0) of length k.
  static CodimVec leading(std::size_t k, unsigned delta);

  std::size_t size() const { return delta_.size(); }
  unsigned operator[](std::size_t i) const { return delta_[i]; }
  const std::vector<unsigned>& values() const { return delta_; }
  unsigned total() const;

  // Throws ValidationError unless size() == fmt.k() and delta_i <= n_i - 1.
  void validate_against(const TensorFormat& fmt) const;

  friend bool operator==(const CodimVec&, const CodimVec&) = default;

 private:
  std::vector<unsigned> delta_;
};

// Coefficient of h^delta * prod t_i^(n_i - delta_i - 1) in
//   prod_i sum_{j < n_i} (that_i + h)^(n_i - 1 - j) * t_i^j,
//   that_i = (sum_j omega_j t_j) - t_i.
BigInt extract_degree(const TensorFormat& fmt, const CodimVec& delta);

// extract_degree(fmt, delta) * prod deg_z.
BigInt kalman_degree(const TensorFormat& fmt, const CodimVec& delta,
                     std::span<const unsigned> deg_z);

// sum_{j=0}^{n-delta-1} C(delta+j, j) (omega-1)^j, with (omega-1)^0 = 1.
BigInt symmetric_degree(unsigned n, unsigned delta, unsigned omega);

// Degree factor of the binary format n = (2,...,2); delta_i in {0,1}.
// Evaluated by extraction.
BigInt binary_degree(const CodimVec& delta, std::span<const unsigned> omega);

struct StabilizationReport {
  std::size_t factor = 0;
  unsigned threshold = 0;       // smallest n_i at which stabilization applies
  std::vector<BigInt> values;   // extract_degree at n_i, n_i + 1, ..., n_i + probes
  BigInt stable_value;
  bool stable = false;
};

// Evaluates extract_degree as n_i grows past the stabilization threshold
// n_i - 1 >= sum_{j != i}(n_j - 1) + delta_i. Requires omega_i = 1.
// `factor` is zero-based.
StabilizationReport check_stabilization(const TensorFormat& fmt, const CodimVec& delta,
                                        std::size_t factor, unsigned probes);

std::string format_list(std::span<const unsigned> v);

}  // namespace kalman
