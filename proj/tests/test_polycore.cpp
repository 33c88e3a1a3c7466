#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "kalman/errors.hpp"
#include "kalman/genfun.hpp"
#include "kalman/polycore.hpp"

using namespace kalman;

namespace {

const Ring kT({"t1", "t2", "h"});

TPoly random_poly(const Ring& ring, std::mt19937& rng, unsigned max_exp, int terms) {
  std::uniform_int_distribution<unsigned> ex(0, max_exp);
  std::uniform_int_distribution<int> co(-5, 5);
  TPoly p(ring);
  for (int t = 0; t < terms; ++t) {
    ExponentVec e(ring.size());
    for (std::size_t v = 0; v < ring.size(); ++v) e[v] = ex(rng);
    p += TPoly::monomial(ring, e, co(rng));
  }
  return p;
}

}  // namespace

TEST_CASE("capped binomial") {
  const Ring r({"t1"});
  const TPoly a = TPoly::constant(r, 1) + TPoly::variable(r, 0);
  const TPoly p = poly_mul(a, a, Caps({1}));
  CHECK(p == parse_poly(r, "1 + 2*t1"));
}

TEST_CASE("square of a linear form") {
  const TPoly l = TPoly::variable(kT, "t1") + TPoly::variable(kT, "t2") + TPoly::variable(kT, "h");
  const TPoly sq = l * l;
  CHECK(sq == parse_poly(kT, "t1^2 + 2*t1*t2 + 2*t1*h + t2^2 + 2*t2*h + h^2"));
  CHECK(coefficient_of(sq, ExponentVec{1, 1, 0}) == 2);
  CHECK(coefficient_of_product(l, l, ExponentVec{1, 1, 0}) == 2);
  CHECK(coefficient_of(sq, ExponentVec{0, 0, 0}) == sq.constant_term());
  CHECK(coefficient_of(sq, ExponentVec{3, 0, 0}) == 0);
}

TEST_CASE("two geometric factors at n = (2,2)") {
  const TPoly t1 = TPoly::variable(kT, 0), t2 = TPoly::variable(kT, 1), h = TPoly::variable(kT, 2);
  const TPoly f1 = (t2 + h) + t1;
  const TPoly f2 = (t1 + h) + t2;
  CHECK(f1 * f2 == (t1 + t2 + h) * (t1 + t2 + h));
}

TEST_CASE("elementary symmetric") {
  const Ring r({"x1", "x2", "x3"});
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(elementary_symmetric(r, all, 0) == TPoly::constant(r, 1));
  CHECK(elementary_symmetric(r, all, 2) == parse_poly(r, "x1*x2 + x1*x3 + x2*x3"));
  const std::vector<std::size_t> two{0, 1};
  CHECK_THROWS_AS(elementary_symmetric(r, two, 3), ValidationError);
}

TEST_CASE("determinants") {
  const Ring r({"x1", "x2", "y"});
  CHECK(det(PolyMatrix::identity(r, 3)) == TPoly::constant(r, 1));
  const std::vector<unsigned> w{1, 1};
  CHECK(det(kalman_matrix(w)) == parse_poly(r, "1 - x1*y - x1*x2 - x1*x2*y"));
  CHECK_THROWS_AS(det(PolyMatrix(r, 2, 3)), ValidationError);
}

TEST_CASE("determinant is linear in a row") {
  std::mt19937 rng(7);
  const Ring r({"a", "b"});
  for (int trial = 0; trial < 10; ++trial) {
    PolyMatrix m(r, 3, 3);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) m.set(i, j, random_poly(r, rng, 2, 2));
    const TPoly s = random_poly(r, rng, 1, 2);
    PolyMatrix scaled = m;
    for (std::size_t j = 0; j < 3; ++j) scaled.set(1, j, m.at(1, j) * s);
    CHECK(det(scaled) == det(m) * s);
  }
}

TEST_CASE("ring laws") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const TPoly a = random_poly(kT, rng, 3, 4);
    const TPoly b = random_poly(kT, rng, 3, 4);
    const TPoly c = random_poly(kT, rng, 3, 4);
    CHECK(a * b == b * a);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a - a == TPoly(kT));
  }
}

TEST_CASE("truncation commutes with capped multiplication") {
  std::mt19937 rng(13);
  std::uniform_int_distribution<std::uint32_t> cap(0, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const TPoly a = random_poly(kT, rng, 4, 6);
    const TPoly b = random_poly(kT, rng, 4, 6);
    const Caps caps({cap(rng), cap(rng), cap(rng)});
    CHECK(poly_mul(a, b, caps) == (a * b).truncated(caps));
    CHECK(poly_mul(a.truncated(caps), b.truncated(caps), caps) == poly_mul(a, b, caps));
  }
}

TEST_CASE("print and parse round trip") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const TPoly a = random_poly(kT, rng, 3, 5);
    CHECK(parse_poly(kT, to_string(a)) == a);
  }
  CHECK(to_string(TPoly(kT)) == "0");
  CHECK(to_string(parse_poly(kT, "-t1 + 3*h^2")) == "3*h^2 - t1");
  CHECK_THROWS_AS(parse_poly(kT, "t1 + z"), ValidationError);
}

TEST_CASE("derivative and evaluation") {
  const TPoly p = parse_poly(kT, "t1^3*t2 - 2*h + 5");
  CHECK(p.derivative(0) == parse_poly(kT, "3*t1^2*t2"));
  const std::vector<BigRational> pt{BigRational(1, 2), BigRational(2), BigRational(1, 3)};
  CHECK(p.evaluate(pt) == BigRational(1, 4) - BigRational(2, 3) + 5);
}

TEST_CASE("large sparse product stays exact") {
  const Ring r({"a", "b", "c", "d"});
  TPoly s(r);
  for (std::size_t v = 0; v < 4; ++v) s += TPoly::variable(r, v);
  const TPoly p = poly_pow(s, 12, Caps::none(4));
  CHECK(coefficient_of(p, ExponentVec{3, 3, 3, 3}) == BigInt(369600));
  CHECK(coefficient_of(poly_pow(s, 40, Caps::none(4)), ExponentVec{10, 10, 10, 10}) ==
        BigInt("4705360871073570227520"));
}
