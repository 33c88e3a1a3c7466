#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "kalman/asympt.hpp"
#include "kalman/errors.hpp"

using namespace kalman;

TEST_CASE("constants for three and four factors") {
  const double pi = std::numbers::pi;
  for (unsigned n : {3u, 7u, 20u}) {
    const double want3 = std::log10(2 / (std::sqrt(3.0) * pi)) + n * std::log10(8.0) - std::log10(n);
    CHECK(asymptotic_degree(3, 1, 0, n).log10_value == doctest::Approx(want3).epsilon(1e-12));
    const double want4 = std::log10(27 / (512 * pi * std::sqrt(pi))) + n * std::log10(81.0) -
                         1.5 * std::log10(n);
    CHECK(asymptotic_degree(4, 1, 0, n).log10_value == doctest::Approx(want4).epsilon(1e-12));
    // (3/2)^delta n^(delta - 1) for k = 3
    const double want3d2 = want3 + 2 * std::log10(1.5) + 2 * std::log10(n);
    CHECK(asymptotic_degree(3, 1, 2, n).log10_value == doctest::Approx(want3d2).epsilon(1e-12));
  }
}

TEST_CASE("regime") {
  CHECK_THROWS_AS(asymptotic_degree(2, 1, 0, 5), ValidationError);
  CHECK_THROWS_AS(asymptotic_degree(1, 4, 0, 5), ValidationError);
  CHECK_NOTHROW(asymptotic_degree(2, 2, 0, 5));
  CHECK_THROWS_AS(critical_constants(2, 1, 0), ValidationError);
}

TEST_CASE("huge n stays finite in log space") {
  const auto e = asymptotic_degree(5, 3, 1, 100000);
  CHECK(std::isfinite(e.log10_value));
  CHECK_FALSE(e.value.has_value());
  CHECK(asymptotic_degree(3, 1, 0, 10).value.has_value());
}

TEST_CASE("critical constants") {
  auto c = critical_constants(3, 1, 0);
  CHECK(c.c == BigRational(1, 2));
  CHECK(c.L0 == BigRational(4, 3));
  CHECK(c.det_hessian == BigRational(1, 3));
  c = critical_constants(2, 2, 0);
  CHECK(c.minus_ck_dk == BigRational(4, 27));
  for (unsigned k = 2; k <= 5; ++k)
    for (unsigned w = 1; w <= 3; ++w)
      for (unsigned d = 0; d <= 3; ++d) {
        if (k == 2 && w == 1) continue;
        c = critical_constants(k, w, d);
        CHECK(c.c > 0);
        CHECK(c.det_hessian > 0);
        CHECK(c.L0 > 0);
        CHECK(c.minus_ck_dk > 0);
      }
}

TEST_CASE("critical point") {
  for (unsigned k = 2; k <= 5; ++k)
    for (unsigned w = 1; w <= 3; ++w) {
      if (w * k < 3) continue;
      CAPTURE(k);
      CAPTURE(w);
      const auto r = verify_critical_point(k, w);
      CHECK(r.on_variety);
      CHECK(r.fd_at_c == 0);
      // The symbolic derivative carries an extra factor omega against the
      // closed form, so the two agree only at omega = 1.
      CHECK(r.minus_ck_dk == r.minus_ck_dk_closed * w);
      CHECK(r.derivative_matches == (w == 1));
    }
  CHECK_THROWS_AS(verify_critical_point(1, 3), ValidationError);
  CHECK_THROWS_AS(verify_critical_point(2, 1), ValidationError);
}

TEST_CASE("estimate grows with n") {
  for (unsigned k = 3; k <= 5; ++k)
    for (unsigned n = 1; n < 40; ++n)
      CHECK(asymptotic_degree(k, 1, 0, n + 1).log10_value > asymptotic_degree(k, 1, 0, n).log10_value);
}

TEST_CASE("ratio to exact drifts toward one") {
  std::vector<unsigned> ns;
  for (unsigned n = 2; n <= 12; ++n) ns.push_back(n);
  const auto rows = compare_exact_asymptotic(3, 1, 0, ns);
  REQUIRE(rows.size() == ns.size());
  CHECK(rows.back().exact == 1679454816);
  for (std::size_t i = 4; i + 1 < rows.size(); ++i)
    CHECK(std::abs(*rows[i + 1].estimate.ratio_to_exact - 1) <
          std::abs(*rows[i].estimate.ratio_to_exact - 1));
  CHECK(*rows.back().estimate.ratio_to_exact == doctest::Approx(1.2533).epsilon(1e-3));
  CHECK(compare_exact_asymptotic(3, 1, 0, std::vector<unsigned>{}).empty());
  CHECK(compare_exact_asymptotic(2, 2, 0, std::vector<unsigned>{1, 2, 3, 4, 5}).size() == 5);
}

TEST_CASE("log10 of big integers") {
  CHECK(log10_of(BigInt(1000)) == doctest::Approx(3.0));
  BigInt big = 1;
  for (int i = 0; i < 400; ++i) big *= 10;
  CHECK(log10_of(big * 3) == doctest::Approx(400 + std::log10(3.0)));
  CHECK_THROWS_AS(log10_of(BigInt(0)), ValidationError);
}
