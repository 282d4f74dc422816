#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <random>

#include "lfrm/error.hpp"
#include "lfrm/matalg.hpp"

using namespace lfrm;

namespace {

const FieldParams Q3 = FieldParams::make(Family::PAdic, 3, 12);
const FieldParams Q5 = FieldParams::make(Family::PAdic, 5, 10);
const FieldParams L3 = FieldParams::make(Family::Laurent, 3, 12);

FieldElement pw(const FieldParams& f, int k) { return FieldElement::uniformizer_power(f, k); }
FieldElement num(const FieldParams& f, int v) { return FieldElement::from_int(f, v); }

FieldElement random_element(std::mt19937_64& g, const FieldParams& f, int vmin, int vmax) {
  std::uniform_int_distribution<int> vd(vmin, vmax);
  std::uniform_int_distribution<int> dd(0, static_cast<int>(f.p) - 1);
  std::vector<std::uint8_t> digits(f.precision);
  for (auto& d : digits) d = static_cast<std::uint8_t>(dd(g));
  digits[0] = static_cast<std::uint8_t>(1 + dd(g) % (f.p - 1));
  return FieldElement::from_digits(f, vd(g), digits);
}

MatF random_matrix(std::mt19937_64& g, const FieldParams& f, int n, bool symmetric) {
  MatF m(f, n, n);
  std::uniform_int_distribution<int> zero(0, 7);
  for (int i = 0; i < n; ++i) {
    for (int j = symmetric ? i : 0; j < n; ++j) {
      m(i, j) = zero(g) == 0 ? FieldElement::zero(f) : random_element(g, f, -3, 3);
      if (symmetric) m(j, i) = m(i, j);
    }
  }
  return m;
}

// Random element of GL(n, O_F): integral entries, invertible residue matrix.
MatF random_gl(std::mt19937_64& g, const FieldParams& f, int n) {
  for (;;) {
    MatF m(f, n, n);
    std::uniform_int_distribution<int> dd(0, static_cast<int>(f.p) - 1);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        std::vector<std::uint8_t> digits(f.precision);
        for (auto& d : digits) d = static_cast<std::uint8_t>(dd(g));
        m(i, j) = FieldElement::from_digits(f, 0, digits);
      }
    }
    if (is_gl(m)) return m;
  }
}

// Low-rank matrix: a product of n x r and r x n blocks.
MatF random_low_rank(std::mt19937_64& g, const FieldParams& f, int n, int r) {
  MatF x(f, n, r), y(f, r, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < r; ++j) {
      x(i, j) = random_element(g, f, -1, 1);
      y(j, i) = random_element(g, f, -1, 1);
    }
  }
  return x * y;
}

// Determinant by cofactor expansion, used as an independent oracle.
FieldElement cofactor_det(const MatF& m, std::vector<int> rows, std::vector<int> cols) {
  const FieldParams& f = m.params();
  if (rows.size() == 1) return m(rows[0], cols[0]);
  FieldElement acc = FieldElement::zero(f);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    std::vector<int> sub_cols = cols;
    sub_cols.erase(sub_cols.begin() + static_cast<long>(c));
    FieldElement term = m(rows[0], cols[c]) * cofactor_det(m, sub_rows, sub_cols);
    if (c % 2 == 1) term = -term;
    acc = FieldElement::add(acc, term, Cancellation::Flush);
  }
  return acc;
}

// -(k_1 + ... + k_j) = min valuation of j x j minors (determinantal divisors).
std::vector<std::int64_t> divisor_oracle(const MatF& m) {
  const int n = m.rows();
  std::vector<std::int64_t> out;
  for (int j = 1; j <= n; ++j) {
    std::int64_t best = kInfiniteValuation;
    std::vector<int> rsel, csel;
    std::function<void(int, std::vector<int>&, std::vector<std::vector<int>>&)> choose =
        [&](int start, std::vector<int>& cur, std::vector<std::vector<int>>& all) {
          if (static_cast<int>(cur.size()) == j) {
            all.push_back(cur);
            return;
          }
          for (int s = start; s < n; ++s) {
            cur.push_back(s);
            choose(s + 1, cur, all);
            cur.pop_back();
          }
        };
    std::vector<std::vector<int>> subsets;
    std::vector<int> cur;
    choose(0, cur, subsets);
    for (const auto& r : subsets) {
      for (const auto& c : subsets) {
        const auto d = cofactor_det(m, r, c);
        if (!d.is_zero()) best = std::min(best, d.valuation());
      }
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace

TEST_CASE("basic matrix operations") {
  const MatF e11 = [] {
    MatF m(Q3, 2, 2);
    m(0, 0) = FieldElement::one(Q3);
    return m;
  }();
  MatF x(Q3, 2, 2);
  x(0, 0) = num(Q3, 7);
  x(0, 1) = num(Q3, 2);
  CHECK(trace(e11 * x) == num(Q3, 7));
  CHECK(is_gl(MatF::identity(Q3, 3)));
  const std::vector<FieldElement> d{pw(Q3, 1), FieldElement::one(Q3)};
  CHECK(!is_gl(MatF::diagonal(Q3, d)));
  CHECK(det(MatF::diagonal(Q3, d)) == pw(Q3, 1));
  CHECK_THROWS_AS(MatF(Q3, 2, 3) * MatF(Q3, 2, 3), Error);
  CHECK_THROWS_AS(trace(MatF(Q3, 2, 3)), Error);

  std::mt19937_64 g(31);
  for (int t = 0; t < 50; ++t) {
    const MatF a = random_matrix(g, Q3, 3, false);
    const auto dd = det(a);
    const auto oracle = cofactor_det(a, {0, 1, 2}, {0, 1, 2});
    CHECK(equal_to_precision(dd, oracle));
    CHECK((a.transpose().transpose() == a));
  }
}

TEST_CASE("SNF worked examples") {
  {
    const std::vector<FieldElement> d{pw(Q3, -1), FieldElement::one(Q3)};
    CHECK(singular_numbers(MatF::diagonal(Q3, d)) == std::vector<std::int64_t>{1, 0});
  }
  CHECK(singular_numbers(MatF(Q3, 3, 3)) ==
        std::vector<std::int64_t>(3, kMinusInfinity));
  {
    MatF m(Q3, 2, 2);
    m(0, 1) = pw(Q3, 1);
    m(1, 0) = pw(Q3, -1);
    const auto r = smith_normal_form(m);
    CHECK(r.sing == std::vector<std::int64_t>{1, -1});
    CHECK(recomposes(r, m));
    CHECK(is_gl(r.a));
    CHECK(is_gl(r.b));
  }
  CHECK(singular_numbers(MatF::identity(Q3, 3)) == std::vector<std::int64_t>{0, 0, 0});
  {
    const std::vector<FieldElement> d{pw(Q3, -2), pw(Q3, 1), FieldElement::zero(Q3)};
    const MatF m = MatF::diagonal(Q3, d);
    CHECK(singular_numbers(m) == std::vector<std::int64_t>{2, -1, kMinusInfinity});
    std::mt19937_64 g(32);
    for (int t = 0; t < 20; ++t) {
      const MatF pushed = random_gl(g, Q3, 3) * m * random_gl(g, Q3, 3);
      CHECK(singular_numbers(pushed) == std::vector<std::int64_t>{2, -1, kMinusInfinity});
    }
  }
}

TEST_CASE("SNF recomposition, invariance and determinantal divisors") {
  std::mt19937_64 g(33);
  for (const auto& f : {Q3, Q5, L3}) {
    for (int t = 0; t < 200; ++t) {
      const int n = 1 + t % 5;
      const MatF m = t % 7 == 3 ? random_low_rank(g, f, n, std::max(1, n - 2))
                                : random_matrix(g, f, n, false);
      const auto r = smith_normal_form(m);
      CHECK(recomposes(r, m));
      CHECK(is_gl(r.a));
      CHECK(is_gl(r.b));
      CHECK(std::is_sorted(r.sing.rbegin(), r.sing.rend()));
      if (t % 4 == 0) {
        const auto pushed = random_gl(g, f, n) * m * random_gl(g, f, n);
        CHECK(same_singular_numbers(singular_numbers(pushed), r.sing, resolution_level(m)));
      }
      if (n <= 4 && t % 7 != 3) {
        const auto dv = divisor_oracle(m);
        std::int64_t partial = 0;
        for (int j = 0; j < n; ++j) {
          if (r.sing[j] == kMinusInfinity) {
            CHECK(dv[j] == kInfiniteValuation);
            break;
          }
          partial += r.sing[j];
          CHECK(dv[j] == -partial);
        }
      }
    }
  }
}

TEST_CASE("resolution-aware comparison") {
  const std::vector<std::int64_t> a{3, 1, -9}, b{3, 1, kMinusInfinity}, c{3, 0, kMinusInfinity};
  CHECK(same_singular_numbers(a, b, 9));
  CHECK(!same_singular_numbers(a, b, 10));
  CHECK(!same_singular_numbers(a, c, 9));
  const std::vector<ClassKey> x{{-3, false}, {9, true}}, y{{-3, false}, {kInfiniteValuation, false}};
  CHECK(same_classes(x, y, 9));
  CHECK(!same_classes(x, y, 10));
}

TEST_CASE("recomposition check detects corruption") {
  std::mt19937_64 g(34);
  const MatF m = random_matrix(g, Q3, 3, false);
  auto r = smith_normal_form(m);
  REQUIRE(recomposes(r, m));
  r.a(0, 0) = FieldElement::add(r.a(0, 0), pw(Q3, 2), Cancellation::Flush);
  CHECK(!recomposes(r, m));
}

TEST_CASE("symmetric diagonalization worked examples") {
  {
    const std::vector<FieldElement> d{num(Q3, 4), FieldElement::one(Q3)};
    const MatF a = MatF::diagonal(Q3, d);
    const auto r = sym_diagonalize(a);
    CHECK(r.diag[0] == FieldElement::one(Q3));
    CHECK(r.diag[1] == FieldElement::one(Q3));
    CHECK(recomposes(r, a));
    // the witness squares back to 4 (the root itself is +-2)
    CHECK(r.g(0, 0) * r.g(0, 0) == num(Q3, 4));
    CHECK((r.g(0, 0) == num(Q3, 2) || r.g(0, 0) == num(Q3, -2)));
    CHECK(r.g(1, 1) == FieldElement::one(Q3));
  }
  {
    MatF a(Q3, 2, 2);
    a(0, 1) = FieldElement::one(Q3);
    a(1, 0) = FieldElement::one(Q3);
    const auto r = sym_diagonalize(a);
    std::vector<ClassKey> keys = r.classes;
    std::sort(keys.begin(), keys.end());
    CHECK(keys == std::vector<ClassKey>{{0, false}, {0, true}});
    CHECK(recomposes(r, a));
    CHECK(is_gl(r.g));
  }
  {
    const auto r = sym_diagonalize(MatF(Q3, 3, 3));
    for (const auto& x : r.diag) CHECK(x.is_zero());
    CHECK((r.g == MatF::identity(Q3, 3)));
  }
  {
    const auto e = nonsquare_unit(Q3).shifted(-1);
    const std::vector<FieldElement> d{e, e, pw(Q3, 2)};
    const MatF a = MatF::diagonal(Q3, d);
    const auto r = sym_diagonalize(a);
    CHECK(r.classes == std::vector<ClassKey>{{-1, false}, {-1, false}, {2, false}});
    CHECK(recomposes(r, a));
    CHECK(is_gl(r.g));
  }
  MatF ns(Q3, 2, 2);
  ns(0, 1) = FieldElement::one(Q3);
  CHECK_THROWS_AS(sym_diagonalize(ns), Error);
  CHECK_THROWS_AS(sym_diagonalize(MatF::identity(FieldParams::make(Family::PAdic, 2, 6), 2)),
                  Error);
}

TEST_CASE("symmetric recomposition and congruence invariance") {
  std::mt19937_64 g(35);
  for (const auto& f : {Q3, Q5, L3}) {
    for (int t = 0; t < 200; ++t) {
      const int n = 1 + t % 5;
      MatF m = random_matrix(g, f, n, true);
      if (t % 6 == 5) {  // all diagonal entries smaller than some off-diagonal one
        for (int i = 0; i < n; ++i) m(i, i) = m(i, i).is_zero() ? m(i, i) : m(i, i).shifted(4);
      }
      const auto r = sym_diagonalize(m);
      CHECK(recomposes(r, m));
      CHECK(is_gl(r.g));
      CHECK(std::is_sorted(r.classes.begin(), r.classes.end()));
      for (std::size_t i = 0; i < r.diag.size(); ++i) {
        const auto& x = r.diag[i];
        if (x.is_zero()) continue;
        CHECK(x.relative_precision() == f.precision);
        CHECK((x.digits()[0] == 1 || x.digits()[0] == f.nonsquare_digit));
        for (int k = 1; k < x.relative_precision(); ++k) CHECK(x.digits()[k] == 0);
      }
      if (t % 3 == 0) {
        const MatF h = random_gl(g, f, n);
        const auto r2 = sym_diagonalize(congruence(h, m));
        CHECK(same_classes(r2.classes, r.classes, resolution_level(m)));
      }
    }
  }
}
