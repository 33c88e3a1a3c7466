#include "kalman/asympt.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kalman/degrees.hpp"
#include "kalman/errors.hpp"
#include "kalman/genfun.hpp"

namespace kalman {

namespace {

void check_regime(unsigned k, unsigned omega) {
  if (omega < 1) throw ValidationError("omega must be >= 1");
  if (k >= 3) return;
  if (k == 2 && omega >= 2) return;
  throw ValidationError("asymptotics need k >= 3, or k = 2 with omega >= 2 (got k = " +
                        std::to_string(k) + ", omega = " + std::to_string(omega) + ")");
}

BigRational rpow(const BigRational& base, long e) {
  BigRational r = 1;
  const BigRational b = e >= 0 ? base : BigRational(1) / base;
  for (long i = 0; i < std::labs(e); ++i) r *= b;
  return r;
}

}  // namespace

CriticalConstants critical_constants(unsigned k, unsigned omega, unsigned delta) {
  check_regime(k, omega);
  const BigRational wk = BigInt(omega) * k;
  const long kk = static_cast<long>(k);
  const long dd = static_cast<long>(delta);
  CriticalConstants c;
  c.c = BigRational(1) / (wk - 1);
  c.det_hessian = rpow(wk - 2, kk - 1) / rpow(wk, kk - 2);
  c.L0 = rpow(wk - 1, kk - dd - 1) / (rpow(wk, kk - dd - 2) * rpow(wk - 2, kk));
  c.minus_ck_dk = rpow(wk, kk - 2) * rpow(wk - 2, kk) / rpow(wk - 1, 2 * kk - 1);
  return c;
}

AsymptoticEstimate asymptotic_degree(unsigned k, unsigned omega, unsigned delta, unsigned n) {
  check_regime(k, omega);
  if (n < 1) throw ValidationError("n must be >= 1");
  const double wk = static_cast<double>(omega) * k;
  const double kd = k;
  const double log_constant = (kd - 1) * std::log(wk - 1) -
                              (kd - 1) / 2 * std::log(2 * std::numbers::pi) -
                              (kd - 2) / 2 * std::log(wk) - (3 * kd - 1) / 2 * std::log(wk - 2);
  const double ln = log_constant + delta * std::log(wk / (wk - 1)) +
                    kd * n * std::log(wk - 1) - ((kd - 1) / 2 - delta) * std::log(double(n));
  AsymptoticEstimate est;
  est.log10_value = ln / std::numbers::ln10;
  if (est.log10_value < 300) est.value = std::pow(10.0, est.log10_value);
  return est;
}

double log10_of(const BigInt& value) {
  if (value <= 0) throw ValidationError("log10 of a non-positive integer");
  const std::string digits = value.str();
  constexpr std::size_t kLead = 17;
  if (digits.size() <= kLead) return std::log10(std::stod(digits));
  const double lead = std::stod(digits.substr(0, kLead));
  return std::log10(lead) + static_cast<double>(digits.size() - kLead);
}

AsymptoticEstimate paired_with_exact(AsymptoticEstimate estimate, const BigInt& exact) {
  estimate.ratio_to_exact = std::pow(10.0, estimate.log10_value - log10_of(exact));
  return estimate;
}

CriticalPointReport verify_critical_point(unsigned k, unsigned omega) {
  if (k < 2) throw ValidationError("critical point check needs k >= 2");
  if (omega * k < 3)
    throw ValidationError("critical point check needs omega k >= 3 (got " +
                          std::to_string(omega * k) + ")");
  const Ring ring = series_ring(k);
  TPoly fd = symmetric_H_split(k, omega).h2;
  for (std::size_t i = 0; i < k; ++i)
    fd *= TPoly::constant(ring, 1) - TPoly::variable(ring, i);

  const BigRational c = BigRational(1) / (BigInt(omega) * k - 1);
  std::vector<BigRational> point(k + 1, c);
  point[k] = 0;

  CriticalPointReport report;
  report.k = k;
  report.omega = omega;
  report.fd_at_c = fd.evaluate(point);
  report.minus_ck_dk = -c * fd.derivative(k - 1).evaluate(point);

  const BigRational wk = BigInt(omega) * k;
  report.minus_ck_dk_closed = rpow(wk, long(k) - 2) * rpow(wk - 2, k) / rpow(wk - 1, 2 * long(k) - 1);
  report.on_variety = report.fd_at_c == 0;
  report.derivative_matches = report.minus_ck_dk == report.minus_ck_dk_closed;
  return report;
}

std::vector<ComparisonRow> compare_exact_asymptotic(unsigned k, unsigned omega, unsigned delta,
                                                    std::span<const unsigned> n_range) {
  check_regime(k, omega);
  std::vector<ComparisonRow> rows;
  for (unsigned n : n_range) {
    ComparisonRow row;
    row.n = n;
    row.exact = extract_degree(TensorFormat::hypercubical(k, n, omega), CodimVec::leading(k, delta));
    row.estimate = paired_with_exact(asymptotic_degree(k, omega, delta, n), row.exact);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kalman
