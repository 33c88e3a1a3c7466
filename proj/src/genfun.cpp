#include "kalman/genfun.hpp"

#include <string>

#include "kalman/errors.hpp"

namespace kalman {

Ring series_ring(std::size_t k) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= k; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("y");
  return Ring(std::move(names));
}

RationalSeries::RationalSeries(TPoly numerator, TPoly denominator)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)) {
  if (!(numerator_.ring() == denominator_.ring()))
    throw ValidationError("numerator and denominator belong to different rings");
  if (denominator_.constant_term() != 1)
    throw ValidationError("series denominator must have constant term 1, got " +
                          denominator_.constant_term().str());
}

TPoly RationalSeries::expand(const Caps& caps) const {
  const Ring& ring = denominator_.ring();
  if (caps.size() != ring.size()) throw ValidationError("caps length does not match ring");
  if (!caps.all_bounded()) throw ValidationError("series expansion needs finite caps");

  // 1 - D has no constant term, so each power raises the minimum total
  // degree and the loop ends once every term exceeds the caps.
  const TPoly one = TPoly::constant(ring, 1).truncated(caps);
  const TPoly step = (one - denominator_).truncated(caps);
  TPoly inverse = one;
  TPoly power = one;
  while (true) {
    power = poly_mul(power, step, caps);
    if (power.is_zero()) break;
    inverse += power;
  }
  return poly_mul(numerator_, inverse, caps);
}

namespace {

std::size_t checked_k(std::span<const unsigned> omega) {
  if (omega.empty()) throw ValidationError("omega must have at least one entry");
  for (std::size_t i = 0; i < omega.size(); ++i)
    if (omega[i] < 1) throw ValidationError("omega_" + std::to_string(i + 1) + " must be >= 1");
  return omega.size();
}

// prod_{i in [0,k), i != skip} (1 + x_i)
TPoly one_plus_product(const Ring& ring, std::size_t k, std::size_t skip) {
  TPoly p = TPoly::constant(ring, 1);
  for (std::size_t i = 0; i < k; ++i)
    if (i != skip) p *= TPoly::constant(ring, 1) + TPoly::variable(ring, i);
  return p;
}

}  // namespace

TPoly claim_det_second_minor(std::span<const unsigned> omega) {
  const std::size_t k = checked_k(omega);
  const Ring ring = series_ring(k);
  TPoly h = one_plus_product(ring, k, k);
  for (std::size_t j = 0; j < k; ++j)
    h -= TPoly::variable(ring, j) * one_plus_product(ring, k, j) * BigInt(omega[j]);
  return h;
}

TPoly claim_det_first_minor(std::size_t k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  const Ring ring = series_ring(k);
  TPoly p = TPoly::variable(ring, 0) * one_plus_product(ring, k, 0);
  return k % 2 == 0 ? p : -p;
}

TPoly build_H(std::span<const unsigned> omega) {
  const std::size_t k = checked_k(omega);
  const Ring ring = series_ring(k);
  const TPoly y = TPoly::variable(ring, k);
  return claim_det_second_minor(omega) - y * TPoly::variable(ring, 0) * one_plus_product(ring, k, 0);
}

std::vector<std::vector<long>> bordered_matrix(std::span<const unsigned> omega) {
  const std::size_t k = checked_k(omega);
  std::vector<std::vector<long>> a(k + 1, std::vector<long>(k + 1, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) a[i][j] = static_cast<long>(omega[j]) - (i == j ? 1 : 0);
    a[i][k] = 1;
  }
  a[k][0] = 1;
  return a;
}

namespace {

PolyMatrix identity_minus_diag_times(const Ring& ring, const std::vector<std::vector<long>>& a) {
  const std::size_t m = a.size();
  PolyMatrix out(ring, m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      TPoly entry = TPoly::variable(ring, i) * BigInt(-a[i][j]);
      if (i == j) entry += TPoly::constant(ring, 1);
      out.set(i, j, std::move(entry));
    }
  return out;
}

}  // namespace

PolyMatrix kalman_matrix(std::span<const unsigned> omega) {
  return identity_minus_diag_times(series_ring(omega.size()), bordered_matrix(omega));
}

TPoly build_H_via_determinant(std::span<const unsigned> omega) { return det(kalman_matrix(omega)); }

HSplit split_H(const TPoly& h) {
  const std::size_t y = h.ring().size() - 1;
  if (h.degree_in(y) > 1) throw ValidationError("H must be affine in y");
  return HSplit{-h.coefficient_in(y, 1), h.coefficient_in(y, 0)};
}

HSplit symmetric_H_split(std::size_t k, unsigned omega) {
  if (k < 1) throw ValidationError("k must be >= 1");
  if (omega < 1) throw ValidationError("omega must be >= 1");
  const Ring ring = series_ring(k);
  std::vector<std::size_t> all(k), rest;
  for (std::size_t i = 0; i < k; ++i) {
    all[i] = i;
    if (i > 0) rest.push_back(i);
  }
  TPoly sum_rest(ring);
  for (std::size_t i = 0; i < k; ++i) sum_rest += elementary_symmetric(ring, rest, i);
  TPoly h2(ring);
  for (std::size_t i = 0; i <= k; ++i)
    h2 += elementary_symmetric(ring, all, i) * (BigInt(1) - BigInt(omega) * i);
  return HSplit{TPoly::variable(ring, 0) * sum_rest, h2};
}

SeriesCoefficients expand_series(std::span<const unsigned> omega,
                                 std::span<const unsigned> x_caps, unsigned y_cap) {
  const std::size_t k = checked_k(omega);
  if (x_caps.size() != k)
    throw ValidationError("caps has length " + std::to_string(x_caps.size()) + " but k = " +
                          std::to_string(k));
  const Ring ring = series_ring(k);
  std::vector<std::uint32_t> cap_values(x_caps.begin(), x_caps.end());
  cap_values.push_back(y_cap);
  const Caps caps(std::move(cap_values));

  TPoly series = RationalSeries(TPoly::constant(ring, 1), build_H(omega)).expand(caps);
  // times prod_i (x_i + x_i^2 + ... + x_i^cap_i)
  for (std::size_t i = 0; i < k; ++i) {
    TPoly geometric(ring, caps);
    for (unsigned m = 1; m <= x_caps[i]; ++m) {
      ExponentVec e(k + 1);
      e[i] = m;
      geometric += TPoly::monomial(ring, std::move(e));
    }
    series = poly_mul(series, geometric, caps);
  }
  return SeriesCoefficients(series.terms().begin(), series.terms().end());
}

bool macmahon_check(const std::vector<std::vector<long>>& a, std::span<const unsigned> cap) {
  const std::size_t m = a.size();
  for (const auto& row : a)
    if (row.size() != m) throw ValidationError("MacMahon check needs a square matrix");
  if (m == 0 || m > 4) throw ValidationError("MacMahon check supports sizes 1 to 4");
  if (cap.size() != m) throw ValidationError("cap length does not match matrix size");

  std::vector<std::string> znames, wnames;
  for (std::size_t i = 1; i <= m; ++i) {
    znames.push_back("z" + std::to_string(i));
    wnames.push_back("w" + std::to_string(i));
  }
  const Ring zring(std::move(znames));
  const Ring wring(std::move(wnames));
  const Caps caps(std::vector<std::uint32_t>(cap.begin(), cap.end()));

  const TPoly series =
      RationalSeries(TPoly::constant(wring, 1), det(identity_minus_diag_times(wring, a)))
          .expand(caps);

  std::vector<TPoly> forms;
  for (std::size_t i = 0; i < m; ++i) {
    TPoly form(zring);
    for (std::size_t j = 0; j < m; ++j) form += TPoly::variable(zring, j) * BigInt(a[i][j]);
    forms.push_back(std::move(form));
  }

  ExponentVec p(m);
  while (true) {
    const Caps pcaps(std::vector<std::uint32_t>(p.begin(), p.end()));
    TPoly product = TPoly::constant(zring, 1);
    for (std::size_t i = 0; i < m; ++i)
      product = poly_mul(product, poly_pow(forms[i], p[i], pcaps), pcaps);
    if (product.coefficient(p) != series.coefficient(p)) return false;

    std::size_t i = 0;
    while (i < m && p[i] == cap[i]) p[i++] = 0;
    if (i == m) break;
    ++p[i];
  }
  return true;
}

}  // namespace kalman
