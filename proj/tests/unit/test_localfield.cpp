#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "lfrm/error.hpp"
#include "lfrm/localfield.hpp"

using namespace lfrm;

namespace {

const FieldParams Q3 = FieldParams::make(Family::PAdic, 3, 12);
const FieldParams Q5 = FieldParams::make(Family::PAdic, 5, 10);
const FieldParams Q7 = FieldParams::make(Family::PAdic, 7, 8);
const FieldParams L3 = FieldParams::make(Family::Laurent, 3, 12);
const FieldParams L5 = FieldParams::make(Family::Laurent, 5, 10);

// ---- independent oracle: exact rationals for Q_p ----

Rational to_rational(const FieldElement& x) {
  Rational r = 0;
  const BigInt p = x.params().p;
  for (int i = 0; i < x.relative_precision(); ++i) {
    const std::int64_t e = x.valuation() + i;
    const BigInt pe = boost::multiprecision::pow(p, static_cast<unsigned>(std::abs(e)));
    r += e >= 0 ? Rational(x.digits()[i] * pe) : Rational(BigInt(x.digits()[i]), pe);
  }
  return r;
}

// p-adic valuation of a rational; large sentinel for 0.
std::int64_t pval(Rational r, std::uint32_t p) {
  if (r == 0) return 1 << 20;
  BigInt n = numerator(r), d = denominator(r);
  std::int64_t v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

// ---- independent oracle: truncated Laurent series over F_p ----

struct Series {
  std::int64_t lo;
  std::vector<int> c;  // coefficients of t^{lo}, t^{lo+1}, ...
};

Series to_series(const FieldElement& x) {
  Series s{x.valuation(), {}};
  for (auto d : x.digits()) s.c.push_back(d);
  return s;
}

int coeff(const Series& s, std::int64_t e) {
  if (e < s.lo || e >= s.lo + static_cast<std::int64_t>(s.c.size())) return 0;
  return s.c[static_cast<std::size_t>(e - s.lo)];
}

FieldElement random_element(std::mt19937_64& g, const FieldParams& f, int vmin, int vmax) {
  std::uniform_int_distribution<int> vd(vmin, vmax);
  std::uniform_int_distribution<int> dd(0, static_cast<int>(f.p) - 1);
  std::vector<std::uint8_t> digits(f.precision);
  for (auto& d : digits) d = static_cast<std::uint8_t>(dd(g));
  digits[0] = static_cast<std::uint8_t>(1 + dd(g) % (f.p - 1));
  return FieldElement::from_digits(f, vd(g), digits);
}

// Checks that `got` is a sound truncation of an exact value `want` (Q_p).
void check_sound(const FieldElement& got, const Rational& want) {
  const auto p = got.params().p;
  if (got.is_zero()) {
    CHECK(want == 0);
    return;
  }
  CHECK(pval(want - to_rational(got), p) >= got.absolute_precision());
  CHECK(pval(want, p) == got.valuation());
}

}  // namespace

TEST_CASE("field params and spec strings") {
  CHECK(Q3.q == 3);
  CHECK(Q3.nonsquare_digit == 2);
  CHECK(Q5.nonsquare_digit == 2);
  CHECK(Q7.nonsquare_digit == 3);
  CHECK(Q3.s_chi == 1);
  CHECK(Q5.s_chi == 1);
  const auto f = FieldParams::parse("laurent:p=5,prec=9");
  CHECK(f.family == Family::Laurent);
  CHECK(f.p == 5);
  CHECK(f.precision == 9);
  CHECK(FieldParams::parse(f.spec()) == f);
  CHECK_THROWS_AS(FieldParams::parse("padic:p=4,prec=3"), Error);
  CHECK_THROWS_AS(FieldParams::parse("padic:p=3"), Error);
  CHECK_THROWS_AS(FieldParams::parse("real:p=3,prec=4"), Error);
  CHECK_THROWS_AS(FieldParams::parse("padic:p=3,prec=0"), Error);
  CHECK_THROWS_AS(FieldParams::parse("padic:p=3,prec=x"), Error);
}

TEST_CASE("worked arithmetic examples") {
  const auto a = FieldElement::from_int(Q3, 1);
  const auto b = FieldElement::from_int(Q3, 2);
  const auto s = a + b;
  CHECK(s.valuation() == 1);
  CHECK(s.digits()[0] == 1);
  for (int i = 1; i < s.relative_precision(); ++i) CHECK(s.digits()[i] == 0);

  const auto m = FieldElement::uniformizer_power(Q3, -2) * FieldElement::uniformizer_power(Q3, 3);
  CHECK(m == FieldElement::uniformizer_power(Q3, 1));

  const auto half = b.inverse();
  CHECK(half.valuation() == 0);
  CHECK(half.digits()[0] == 2);
  for (int i = 1; i < Q3.precision; ++i) CHECK(half.digits()[i] == 1);
  CHECK(b * half == FieldElement::one(Q3));

  CHECK_THROWS_AS(FieldElement::zero(Q3).inverse(), Error);
  CHECK_THROWS_AS(FieldElement::one(Q3) - FieldElement::one(Q3), Error);
  std::int64_t cap = 0;
  const auto z = FieldElement::sub(FieldElement::one(Q3), FieldElement::one(Q3),
                                   Cancellation::Flush, &cap);
  CHECK(z.is_zero());
  CHECK(cap == Q3.precision);
  CHECK_THROWS_AS(FieldElement::one(Q3) + FieldElement::one(Q5), Error);
}

TEST_CASE("ord and abs") {
  auto oa = ord_abs(FieldElement::zero(Q3));
  CHECK(!oa.ord.has_value());
  CHECK(oa.abs == 0);
  oa = ord_abs(FieldElement::uniformizer_power(Q3, -2) * FieldElement::from_int(Q3, 2));
  CHECK(*oa.ord == -2);
  CHECK(oa.abs == 9);
  oa = ord_abs(FieldElement::from_int(Q5, 5));
  CHECK(*oa.ord == 1);
  CHECK(oa.abs == Rational(1, 5));
}

TEST_CASE("residue reduce and lift") {
  CHECK(reduce(FieldElement::uniformizer_power(Q3, 1)).value == 0);
  const auto x = FieldElement::one(Q3) + FieldElement::uniformizer_power(Q3, 1) *
                                            FieldElement::from_int(Q3, 2);
  CHECK(reduce(x).value == 1);
  const auto l = lift(Q5, {2, 5});
  CHECK(l.valuation() == 0);
  CHECK(l == FieldElement::from_int(Q5, 2));
  for (std::uint32_t c = 0; c < 5; ++c) CHECK(reduce(lift(Q5, {c, 5})).value == c);
  CHECK_THROWS_AS(reduce(FieldElement::uniformizer_power(Q3, -1)), Error);
}

TEST_CASE("p-adic arithmetic agrees with exact rationals") {
  std::mt19937_64 g(11);
  for (const auto& f : {Q3, Q5, Q7}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto a = random_element(g, f, -4, 4);
      const auto b = random_element(g, f, -4, 4);
      const Rational ra = to_rational(a), rb = to_rational(b);
      CHECK((a * b).valuation() == a.valuation() + b.valuation());
      check_sound(a * b, ra * rb);
      check_sound(a.inverse(), 1 / ra);
      CHECK(a.inverse().valuation() == -a.valuation());
      std::int64_t cap = 0;
      const auto s = FieldElement::add(a, b, Cancellation::Flush, &cap);
      if (!s.is_zero()) {
        check_sound(s, ra + rb);
        CHECK(s.valuation() >= std::min(a.valuation(), b.valuation()));
        if (a.valuation() != b.valuation()) {
          CHECK(s.valuation() == std::min(a.valuation(), b.valuation()));
        }
      } else {
        CHECK(pval(ra + rb, f.p) >= cap);
      }
      const auto d = FieldElement::sub(a, b, Cancellation::Flush);
      if (!d.is_zero()) check_sound(d, ra - rb);
      check_sound(-a, -ra);
    }
  }
}

TEST_CASE("Laurent arithmetic agrees with series convolution") {
  std::mt19937_64 g(12);
  for (const auto& f : {L3, L5}) {
    const int p = static_cast<int>(f.p);
    for (int trial = 0; trial < 500; ++trial) {
      const auto a = random_element(g, f, -3, 3);
      const auto b = random_element(g, f, -3, 3);
      const Series sa = to_series(a), sb = to_series(b);
      const auto m = a * b;
      CHECK(m.valuation() == a.valuation() + b.valuation());
      for (int k = 0; k < m.relative_precision(); ++k) {
        const std::int64_t e = m.valuation() + k;
        int want = 0;
        for (std::int64_t i = sa.lo; i <= e - sb.lo; ++i) want += coeff(sa, i) * coeff(sb, e - i);
        CHECK(m.digit_at(e) == want % p);
      }
      const auto s = FieldElement::add(a, b, Cancellation::Flush);
      for (std::int64_t e = std::min(a.valuation(), b.valuation());
           e < std::min(a.absolute_precision(), b.absolute_precision()); ++e) {
        CHECK(s.digit_at(e) == (coeff(sa, e) + coeff(sb, e)) % p);
      }
      CHECK(a * a.inverse() == FieldElement::one(f));
      // characteristic p: p * x = 0 exactly
      CHECK(FieldElement::from_int(f, p).is_zero());
    }
  }
}

TEST_CASE("units times inverse is one") {
  std::mt19937_64 g(13);
  for (const auto& f : {Q3, Q5, L3}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto u = random_element(g, f, 0, 0);
      CHECK(u * u.inverse() == FieldElement::one(f));
    }
  }
}

TEST_CASE("precision tracking through cancellation") {
  const auto a = FieldElement::from_int(Q3, 1 + 9);   // 1 + 3^2
  const auto b = FieldElement::from_int(Q3, 1);
  const auto d = a - b;
  CHECK(d.valuation() == 2);
  CHECK(d.relative_precision() == Q3.precision - 2);
  CHECK(d.absolute_precision() == Q3.precision);
  CHECK(equal_to_precision(d, FieldElement::from_int(Q3, 9)));
  CHECK(!equal_to_precision(d, FieldElement::from_int(Q3, 9), Q3.precision + 1));
  CHECK(!(d == FieldElement::from_int(Q3, 9)));  // representation differs in known digits
}

TEST_CASE("hensel square roots") {
  CHECK(*hensel_sqrt(FieldElement::one(Q3)) == FieldElement::one(Q3));
  const auto r4 = *hensel_sqrt(FieldElement::from_int(Q3, 4));
  CHECK(r4.digits()[0] == 1);  // canonical: leading digit <= (p-1)/2, i.e. -2
  CHECK(r4 == -FieldElement::from_int(Q3, 2));
  const auto seven = FieldElement::from_int(Q3, 7);
  const auto r7 = *hensel_sqrt(seven);
  CHECK(r7 * r7 == seven);
  CHECK(!hensel_sqrt(FieldElement::from_int(Q3, 2)).has_value());
  CHECK(!hensel_sqrt(FieldElement::from_int(Q3, 3)).has_value());
  CHECK_THROWS_AS(hensel_sqrt(FieldElement::one(FieldParams::make(Family::PAdic, 2, 8))), Error);

  std::mt19937_64 g(14);
  for (const auto& f : {Q3, Q5, Q7, L3, L5}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto beta = random_element(g, f, -3, 3);
      const auto sq = beta * beta;
      const auto r = hensel_sqrt(sq);
      REQUIRE(r.has_value());
      CHECK(r->valuation() == beta.valuation());
      CHECK((equal_to_precision(*r, beta) || equal_to_precision(*r, -beta)));
      CHECK(*r * *r == sq);

      const auto x = random_element(g, f, -3, 3);
      const bool square = x.valuation() % 2 == 0 && legendre(reduce(x.unit_part())) == 1;
      CHECK(hensel_sqrt(x).has_value() == square);

      // squareness of a unit depends only on its residue
      const auto unit = random_element(g, f, 0, 0);
      const auto bumped = unit + random_element(g, f, 1, 3);
      CHECK(hensel_sqrt(unit).has_value() == hensel_sqrt(bumped).has_value());
      CHECK(hensel_sqrt(unit).has_value() == (legendre(reduce(unit)) == 1));
    }
  }
}

TEST_CASE("square classes") {
  const auto z = square_class(FieldElement::zero(Q3));
  CHECK(z.rep.is_zero());
  CHECK(z.witness == FieldElement::one(Q3));

  const auto a = FieldElement::from_int(Q3, 4).shifted(-2);
  const auto sa = square_class(a);
  CHECK(sa.rep == FieldElement::uniformizer_power(Q3, -2));
  CHECK(!sa.epsilon);
  CHECK(sa.witness * sa.witness == FieldElement::from_int(Q3, 4));

  const auto b = FieldElement::from_int(Q3, 2).shifted(1);
  const auto sb = square_class(b);
  CHECK(sb.epsilon);
  CHECK(sb.rep == FieldElement::from_int(Q3, 6));
  CHECK(sb.witness == FieldElement::one(Q3));

  std::mt19937_64 g(15);
  for (const auto& f : {Q3, Q5, Q7, L3, L5}) {
    for (int trial = 0; trial < 500; ++trial) {
      const auto x = random_element(g, f, -4, 4);
      const auto sc = square_class(x);
      CHECK(sc.witness * sc.witness * sc.rep == x);
      CHECK(sc.witness.is_unit());
      CHECK(sc.rep.valuation() == x.valuation());
      const auto again = square_class(sc.rep);
      CHECK(again.rep == sc.rep);
      CHECK(again.witness == FieldElement::one(f));
    }
  }
}

TEST_CASE("nonsquare unit") {
  CHECK(nonsquare_unit(Q3) == FieldElement::from_int(Q3, 2));
  CHECK(nonsquare_unit(Q5) == FieldElement::from_int(Q5, 2));
  CHECK(nonsquare_unit(Q7) == FieldElement::from_int(Q7, 3));
  CHECK(legendre(reduce(nonsquare_unit(Q7))) == -1);
  CHECK_THROWS_AS(nonsquare_unit(FieldParams::make(Family::PAdic, 2, 4)), Error);
}
