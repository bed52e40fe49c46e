#include "doctest.h"

#include "plp/numkernel.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

using namespace plp;

namespace {

// Independent check of round-to-nearest: no neighbouring binary64 is closer
// to x than d, and ties land on an even significand.
bool is_nearest(const Rat& x, double d) {
  if (std::isinf(d)) return true;
  const Rat err = abs(x - Rat::from_double(d));
  for (double toward : {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}) {
    const double nb = std::nextafter(d, toward);
    if (std::isinf(nb)) continue;
    const Rat nerr = abs(x - Rat::from_double(nb));
    if (nerr < err) return false;
    if (nerr == err) {
      std::uint64_t bits;
      std::memcpy(&bits, &d, sizeof bits);
      if (bits & 1U) return false;
    }
  }
  return true;
}

Rat pow2(int e) {
  mpz_class one = 1;
  if (e >= 0) return Rat(mpz_class(one << static_cast<mp_bitcnt_t>(e)), mpz_class(1));
  return Rat(mpz_class(1), mpz_class(one << static_cast<mp_bitcnt_t>(-e)));
}

}  // namespace

TEST_CASE("rationals are canonical") {
  const Rat half(2, 4);
  CHECK(half.num() == 1);
  CHECK(half.den() == 2);
  const Rat neg(1, -2);
  CHECK(neg.num() == -1);
  CHECK(neg.den() == 2);
  const Rat zero(0, -7);
  CHECK(zero.num() == 0);
  CHECK(zero.den() == 1);
  CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
  CHECK((Rat(1, 3) * Rat(3, 5)).den() == 5);
  CHECK_THROWS(Rat(1, 0));
  CHECK_THROWS(Rat(1) / Rat(0));
}

TEST_CASE("rational text syntax") {
  CHECK(Rat::parse("3") == Rat(3));
  CHECK(Rat::parse("-3/6") == Rat(-1, 2));
  CHECK(Rat::parse("12345678901234567890/2").str() == "6172839450617283945");
  CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("+1"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("1/-2"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(Rat::parse(""), std::invalid_argument);
  CHECK(Rat(-7, 3).str() == "-7/3");
}

TEST_CASE("to_float") {
  CHECK(to_float(Rat(1, 2)) == 0.5);
  CHECK(to_float(Rat(0)) == 0.0);
  CHECK(to_float(Rat(1, 3)) == 1.0 / 3.0);
  CHECK(is_nearest(Rat(1, 3), to_float(Rat(1, 3))));
  CHECK(to_float(Rat(-5, 4)) == -1.25);

  SUBCASE("ties go to even") {
    const Rat two53 = pow2(53);
    CHECK(to_float(two53 + Rat(1)) == 9007199254740992.0);
    CHECK(to_float(two53 + Rat(3)) == 9007199254740996.0);
    CHECK(to_float(two53 + Rat(3) + Rat(1, 1000)) == 9007199254740996.0);
    CHECK(to_float(two53 + Rat(1) + Rat(1, 1000)) == 9007199254740994.0);
  }
  SUBCASE("range limits") {
    CHECK(std::isinf(to_float(pow2(1100))));
    CHECK(to_float(-pow2(1100)) < 0);
    CHECK(to_float(pow2(-1074)) == std::numeric_limits<double>::denorm_min());
    CHECK(to_float(Rat(3) * pow2(-1076)) == std::numeric_limits<double>::denorm_min());
    CHECK(to_float(pow2(-1075)) == 0.0);
    CHECK(to_float(Rat(3) * pow2(-1075)) == 2 * std::numeric_limits<double>::denorm_min());
    CHECK(to_float(pow2(-1022)) == std::numeric_limits<double>::min());
  }
  SUBCASE("random fractions round to nearest") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
      const long num = static_cast<long>(rng() % 2000000001ULL) - 1000000000L;
      const long den = static_cast<long>(rng() % 1000000000ULL) + 1;
      Rat x = Rat(num, den) * pow2(static_cast<int>(rng() % 200) - 100);
      CHECK(is_nearest(x, to_float(x)));
    }
  }
}

TEST_CASE("gauss_solve") {
  RatMat id = RatMat::Identity(2, 2);
  CHECK(gauss_solve(id, rat_vec({6, 6})) == rat_vec({6, 6}));

  RatMat m(2, 2);
  m << 3, -1, -1, 3;
  CHECK(gauss_solve(m, rat_vec({6, 6})) == rat_vec({3, 3}));

  RatMat singular(2, 2);
  singular << 1, 2, 2, 4;
  CHECK_THROWS_AS(gauss_solve(singular, rat_vec({1, 1})), SingularMatrix);

  SUBCASE("round trip on random nonsingular systems") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coef(-9, 9);
    int solved = 0;
    for (int trial = 0; trial < 50; ++trial) {
      RatMat M(5, 5);
      RatVec x0(5);
      for (int i = 0; i < 5; ++i) {
        x0(i) = Rat(coef(rng), 1 + std::abs(coef(rng)));
        for (int j = 0; j < 5; ++j) M(i, j) = coef(rng);
      }
      if (independent_rows(M).size() != 5) continue;
      CHECK(gauss_solve(M, RatVec(M * x0)) == x0);
      ++solved;
    }
    CHECK(solved > 40);
  }
}

TEST_CASE("independent_rows") {
  RatMat m(4, 3);
  m << 1, 0, 1,
       2, 0, 2,
       0, 1, 0,
       1, 1, 1;
  CHECK(independent_rows(m) == std::vector<int>{0, 2});
  CHECK(independent_rows(RatMat::Zero(2, 2)).empty());
  CHECK(independent_rows(RatMat::Identity(3, 3)).size() == 3);
}
