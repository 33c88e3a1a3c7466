#include "kalman/degrees.hpp"

#include <numeric>
#include <sstream>

#include "kalman/errors.hpp"

namespace kalman {

std::string format_list(std::span<const unsigned> v) {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ')';
  return os.str();
}

TensorFormat::TensorFormat(std::vector<unsigned> n, std::vector<unsigned> omega)
    : n_(std::move(n)), omega_(std::move(omega)) {
  if (n_.empty()) throw ValidationError("tensor format needs k >= 1 factors");
  if (n_.size() != omega_.size())
    throw ValidationError("n and omega must have the same length (got " +
                          std::to_string(n_.size()) + " and " + std::to_string(omega_.size()) +
                          ")");
  for (std::size_t i = 0; i < n_.size(); ++i) {
    if (n_[i] < 1) throw ValidationError("n_" + std::to_string(i + 1) + " must be >= 1");
    if (omega_[i] < 1) throw ValidationError("omega_" + std::to_string(i + 1) + " must be >= 1");
  }
}

TensorFormat TensorFormat::hypercubical(std::size_t k, unsigned n, unsigned omega) {
  return TensorFormat(std::vector<unsigned>(k, n), std::vector<unsigned>(k, omega));
}

TensorFormat TensorFormat::with_dimension(std::size_t i, unsigned n) const {
  auto dims = n_;
  dims.at(i) = n;
  return TensorFormat(std::move(dims), omega_);
}

CodimVec::CodimVec(std::vector<unsigned> delta) : delta_(std::move(delta)) {}

CodimVec CodimVec::leading(std::size_t k, unsigned delta) {
  std::vector<unsigned> d(k, 0);
  if (k > 0) d[0] = delta;
  return CodimVec(std::move(d));
}

unsigned CodimVec::total() const { return std::accumulate(delta_.begin(), delta_.end(), 0u); }

void CodimVec::validate_against(const TensorFormat& fmt) const {
  if (delta_.size() != fmt.k())
    throw ValidationError("delta has length " + std::to_string(delta_.size()) + " but k = " +
                          std::to_string(fmt.k()));
  for (std::size_t i = 0; i < delta_.size(); ++i)
    if (delta_[i] > fmt.n()[i] - 1)
      throw ValidationError("delta_" + std::to_string(i + 1) + " = " + std::to_string(delta_[i]) +
                            " exceeds n_" + std::to_string(i + 1) + " - 1 = " +
                            std::to_string(fmt.n()[i] - 1));
}

namespace {

Ring extraction_ring(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) names.push_back("t" + std::to_string(i));
  names.push_back("h");
  return Ring(std::move(names));
}

// sum_{j < n_i} (that_i + h)^(n_i - 1 - j) t_i^j under caps.
TPoly geometric_factor(const Ring& ring, const TensorFormat& fmt, std::size_t i,
                       const Caps& caps) {
  const std::size_t k = fmt.k();
  TPoly linear(ring);
  for (std::size_t j = 0; j < k; ++j) {
    const unsigned c = fmt.omega()[j] - (j == i ? 1u : 0u);
    if (c != 0) linear += TPoly::variable(ring, j) * BigInt(c);
  }
  linear += TPoly::variable(ring, k);

  const unsigned n = fmt.n()[i];
  std::vector<TPoly> powers;
  powers.reserve(n);
  powers.push_back(TPoly::constant(ring, 1));
  for (unsigned m = 1; m < n; ++m) powers.push_back(poly_mul(powers.back(), linear, caps));

  TPoly factor(ring, caps);
  for (unsigned j = 0; j < n && j <= caps[i]; ++j) {
    ExponentVec e(ring.size());
    e[i] = j;
    factor += poly_mul(powers[n - 1 - j], TPoly::monomial(ring, std::move(e)), caps);
  }
  return factor;
}

}  // namespace

BigInt extract_degree(const TensorFormat& fmt, const CodimVec& delta) {
  delta.validate_against(fmt);
  const std::size_t k = fmt.k();
  const Ring ring = extraction_ring(k);

  ExponentVec target(k + 1);
  std::vector<std::uint32_t> cap_values(k + 1);
  for (std::size_t i = 0; i < k; ++i) {
    target[i] = fmt.n()[i] - delta[i] - 1;
    cap_values[i] = target[i];
  }
  target[k] = delta.total();
  cap_values[k] = delta.total();
  const Caps caps(std::move(cap_values));

  TPoly acc = geometric_factor(ring, fmt, 0, caps);
  if (k == 1) return coefficient_of(acc, target);
  for (std::size_t i = 1; i + 1 < k; ++i) acc = poly_mul(acc, geometric_factor(ring, fmt, i, caps), caps);
  return coefficient_of_product(acc, geometric_factor(ring, fmt, k - 1, caps), target);
}

BigInt kalman_degree(const TensorFormat& fmt, const CodimVec& delta,
                     std::span<const unsigned> deg_z) {
  if (deg_z.size() != fmt.k())
    throw ValidationError("deg-z has length " + std::to_string(deg_z.size()) + " but k = " +
                          std::to_string(fmt.k()));
  BigInt product = 1;
  for (std::size_t i = 0; i < deg_z.size(); ++i) {
    if (deg_z[i] < 1)
      throw ValidationError("deg(Z_" + std::to_string(i + 1) + ") must be >= 1");
    product *= deg_z[i];
  }
  return extract_degree(fmt, delta) * product;
}

BigInt symmetric_degree(unsigned n, unsigned delta, unsigned omega) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (omega < 1) throw ValidationError("omega must be >= 1");
  if (delta > n - 1)
    throw ValidationError("delta = " + std::to_string(delta) + " exceeds n - 1 = " +
                          std::to_string(n - 1));
  BigInt sum = 0;
  BigInt binom = 1;  // C(delta + j, j)
  BigInt power = 1;  // (omega - 1)^j
  for (unsigned j = 0; j + delta + 1 <= n; ++j) {
    if (j > 0) {
      binom = binom * (delta + j) / j;
      power *= omega - 1;
    }
    sum += binom * power;
  }
  return sum;
}

BigInt binary_degree(const CodimVec& delta, std::span<const unsigned> omega) {
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (delta[i] > 1)
      throw ValidationError("binary format requires delta_i in {0,1}; delta_" +
                            std::to_string(i + 1) + " = " + std::to_string(delta[i]));
  const TensorFormat fmt(std::vector<unsigned>(omega.size(), 2u),
                         std::vector<unsigned>(omega.begin(), omega.end()));
  return extract_degree(fmt, delta);
}

StabilizationReport check_stabilization(const TensorFormat& fmt, const CodimVec& delta,
                                        std::size_t factor, unsigned probes) {
  delta.validate_against(fmt);
  if (factor >= fmt.k())
    throw ValidationError("factor index " + std::to_string(factor) + " out of range for k = " +
                          std::to_string(fmt.k()));
  if (fmt.omega()[factor] != 1)
    throw ValidationError("stabilization requires omega_" + std::to_string(factor + 1) +
                          " = 1 (got " + std::to_string(fmt.omega()[factor]) + ")");
  unsigned others = 0;
  for (std::size_t j = 0; j < fmt.k(); ++j)
    if (j != factor) others += fmt.n()[j] - 1;
  const unsigned threshold = others + delta[factor] + 1;
  if (fmt.n()[factor] < threshold)
    throw ValidationError("n_" + std::to_string(factor + 1) + " = " +
                          std::to_string(fmt.n()[factor]) +
                          " is below the stabilization threshold " + std::to_string(threshold));

  StabilizationReport report;
  report.factor = factor;
  report.threshold = threshold;
  for (unsigned p = 0; p <= probes; ++p)
    report.values.push_back(
        extract_degree(fmt.with_dimension(factor, fmt.n()[factor] + p), delta));
  report.stable_value = report.values.front();
  report.stable = true;
  for (const auto& v : report.values)
    if (v != report.stable_value) report.stable = false;
  return report;
}

}  // namespace kalman
