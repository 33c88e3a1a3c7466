#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace kalman {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

/// Exponents of a monomial, one entry per ring variable.
/// Ordered lexicographically; this is the canonical term order.
class ExponentVec {
 public:
  using value_type = std::uint32_t;

  ExponentVec() = default;
  explicit ExponentVec(std::size_t nvars) : e_(nvars, 0) {}
  ExponentVec(std::initializer_list<value_type> e) : e_(e) {}
  explicit ExponentVec(std::vector<value_type> e) : e_(std::move(e)) {}

  std::size_t size() const { return e_.size(); }
  value_type operator[](std::size_t i) const { return e_[i]; }
  value_type& operator[](std::size_t i) { return e_[i]; }
  auto begin() const { return e_.begin(); }
  auto end() const { return e_.end(); }
  const std::vector<value_type>& values() const { return e_; }

  std::uint64_t total_degree() const;
  bool is_zero() const;

  friend bool operator==(const ExponentVec&, const ExponentVec&) = default;
  friend auto operator<=>(const ExponentVec& a, const ExponentVec& b) { return a.e_ <=> b.e_; }

 private:
  std::vector<value_type> e_;
};

/// Ordered list of variable names. Copies share storage; two rings are
/// equal when their name lists are equal.
class Ring {
 public:
  explicit Ring(std::vector<std::string> names);

  std::size_t size() const { return names_->size(); }
  const std::string& name(std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const { return *names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  friend bool operator==(const Ring& a, const Ring& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Per-variable upper bounds on exponents. kUnbounded means no cap.
class Caps {
 public:
  static constexpr std::uint32_t kUnbounded = std::numeric_limits<std::uint32_t>::max();

  Caps() = default;
  explicit Caps(std::vector<std::uint32_t> c) : c_(std::move(c)) {}

  static Caps none(std::size_t nvars) { return Caps(std::vector<std::uint32_t>(nvars, kUnbounded)); }

  std::size_t size() const { return c_.size(); }
  std::uint32_t operator[](std::size_t i) const { return c_[i]; }
  std::uint32_t& operator[](std::size_t i) { return c_[i]; }

  bool bounded(std::size_t i) const { return c_[i] != kUnbounded; }
  bool any_bounded() const;
  bool all_bounded() const;
  bool admits(const ExponentVec& e) const;
  Caps meet(const Caps& other) const;

  friend bool operator==(const Caps&, const Caps&) = default;

 private:
  std::vector<std::uint32_t> c_;
};

/// Sparse multivariate polynomial with exact integer coefficients.
/// No stored coefficient is zero, and every stored exponent respects caps().
class TPoly {
 public:
  using TermMap = std::map<ExponentVec, BigInt>;

  explicit TPoly(Ring ring);
  TPoly(Ring ring, Caps caps);
  TPoly(Ring ring, Caps caps, TermMap terms);

  static TPoly constant(const Ring& ring, const BigInt& c);
  static TPoly variable(const Ring& ring, std::size_t index);
  static TPoly variable(const Ring& ring, std::string_view name);
  static TPoly monomial(const Ring& ring, ExponentVec e, const BigInt& c = 1);

  const Ring& ring() const { return ring_; }
  const Caps& caps() const { return caps_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  BigInt coefficient(const ExponentVec& e) const;
  BigInt constant_term() const;
  std::uint64_t total_degree() const;
  std::uint32_t degree_in(std::size_t var) const;

  // Same polynomial with terms outside `caps` discarded.
  TPoly truncated(const Caps& caps) const;
  // Part of the polynomial of exact degree `power` in `var`, with that
  // variable's exponent set to zero.
  TPoly coefficient_in(std::size_t var, std::uint32_t power) const;
  TPoly derivative(std::size_t var) const;
  BigRational evaluate(std::span<const BigRational> point) const;

  TPoly operator-() const;
  TPoly& operator+=(const TPoly& o);
  TPoly& operator-=(const TPoly& o);
  TPoly& operator*=(const TPoly& o);
  TPoly& operator*=(const BigInt& s);

  friend TPoly operator+(TPoly a, const TPoly& b) { return a += b; }
  friend TPoly operator-(TPoly a, const TPoly& b) { return a -= b; }
  friend TPoly operator*(TPoly a, const TPoly& b) { return a *= b; }
  friend TPoly operator*(TPoly a, const BigInt& s) { return a *= s; }
  friend TPoly operator*(const BigInt& s, TPoly a) { return a *= s; }

  // Equality of rings and term maps; caps are not compared.
  friend bool operator==(const TPoly& a, const TPoly& b) {
    return a.ring_ == b.ring_ && a.terms_ == b.terms_;
  }

 private:
  friend TPoly poly_mul(const TPoly& a, const TPoly& b, const Caps& caps);

  void add_scaled(const TPoly& o, int sign);
  void check_same_ring(const TPoly& o) const;

  Ring ring_;
  Caps caps_;
  TermMap terms_;
};

// Exact product of a and b; monomials exceeding `caps` in any variable are
// dropped. Multiplication is multidegree graded, so every coefficient within
// the caps equals the untruncated product's.
TPoly poly_mul(const TPoly& a, const TPoly& b, const Caps& caps);

// a^e under caps.
TPoly poly_pow(const TPoly& a, unsigned e, const Caps& caps);

BigInt coefficient_of(const TPoly& p, const ExponentVec& m);

// Coefficient of m in a*b without forming the product.
BigInt coefficient_of_product(const TPoly& a, const TPoly& b, const ExponentVec& m);

/// e_i over the variables at indices `vars`; e_0 = 1.
TPoly elementary_symmetric(const Ring& ring, std::span<const std::size_t> vars, std::size_t i);

// Deterministic text form: terms in ascending lexicographic exponent order,
// explicit " + " / " - " separators, decimal coefficients, e.g.
// "1 - x1*x2 - x1*y - x1*x2*y". The zero polynomial prints as "0".
std::string to_string(const TPoly& p);

// Inverse of to_string over the given ring.
TPoly parse_poly(const Ring& ring, std::string_view text);

class PolyMatrix {
 public:
  PolyMatrix(const Ring& ring, std::size_t rows, std::size_t cols);
  static PolyMatrix identity(const Ring& ring, std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const Ring& ring() const { return ring_; }

  const TPoly& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, TPoly value);

  // Matrix with row r and column c removed.
  PolyMatrix minor(std::size_t r, std::size_t c) const;

 private:
  Ring ring_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<TPoly> entries_;
};

// Exact determinant by Laplace expansion along rows, memoised on the set of
// remaining columns. Supports dimensions up to 20.
TPoly det(const PolyMatrix& m);

}  // namespace kalman
