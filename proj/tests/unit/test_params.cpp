#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "lfrm/error.hpp"
#include "lfrm/params.hpp"

using namespace lfrm;

namespace {

const FieldParams Q3 = FieldParams::make(Family::PAdic, 3, 12);
const FieldParams Q5 = FieldParams::make(Family::PAdic, 5, 10);
const FieldParams L3 = FieldParams::make(Family::Laurent, 3, 12);

bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-9) {
  return std::abs(a - b) < tol;
}

std::optional<std::int64_t> neginf() { return std::nullopt; }

DeltaParam random_delta(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 4), entry(-3, 5), kd(-4, 2), coin(0, 1);
  std::optional<std::int64_t> tail;
  if (coin(rng)) tail = kd(rng);
  std::vector<std::int64_t> head;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    const std::int64_t x = entry(rng);
    if (!tail || x > *tail) head.push_back(x);
  }
  std::sort(head.begin(), head.end(), std::greater<>());
  return DeltaParam::make(head, tail);
}

OmegaParam random_omega(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(0, 4), entry(-3, 5), kd(-4, 2), coin(0, 1);
  std::optional<std::int64_t> k;
  if (coin(rng)) k = kd(rng);
  std::vector<std::int64_t> kk, kkp;
  for (int i = len(rng); i > 0; --i) kk.push_back(entry(rng));
  for (int i = len(rng); i > 0; --i) kkp.push_back(entry(rng));
  std::sort(kk.begin(), kk.end(), std::greater<>());
  std::sort(kkp.begin(), kkp.end(), std::greater<>());
  return canonicalize_omega(k, kk, kkp);
}

// E chi(varpi^-l M_11): Theta factors per head entry, ball average for the tail.
std::complex<double> mu_oracle(const DeltaParam& p, std::int64_t ell, const FieldParams& f) {
  std::complex<double> acc = 1.0;
  for (auto kj : p.head) {
    acc *= theta_closed(FieldElement::uniformizer_power(f, -(kj + ell)), ThetaKind::Theta)
               .to_complex(f.q);
  }
  if (p.tail) acc *= ball_fourier_average(FieldElement::uniformizer_power(f, -ell), -*p.tail);
  return acc;
}

std::complex<double> nu_oracle(const OmegaParam& p, const FieldElement& x) {
  const FieldParams& f = x.params();
  const FieldElement eps = nonsquare_unit(f);
  std::complex<double> acc = 1.0;
  if (x.is_zero()) return acc;
  for (auto kn : p.kk) {
    acc *= theta_closed(x.shifted(-kn), ThetaKind::LittleTheta).to_complex(f.q);
  }
  for (auto kn : p.kkp) {
    acc *= theta_closed((eps * x).shifted(-kn), ThetaKind::LittleTheta).to_complex(f.q);
  }
  if (p.k) acc *= ball_fourier_average(x, -*p.k);
  return acc;
}

}  // namespace

TEST_CASE("validate") {
  CHECK(validate(DeltaParam{{3, 1, 1}, neginf()}).ok);
  const auto bad = validate(DeltaParam{{1, 3}, neginf()});
  CHECK_FALSE(bad.ok);
  CHECK(bad.message.find("non-increasing") != std::string::npos);
  CHECK_FALSE(validate(DeltaParam{{2, -1}, 0}).ok);
  CHECK(validate(DeltaParam{{2, 1}, 0}).ok);

  const auto w = validate(OmegaParam{0, {2, 2}, {2, 2}});
  CHECK_FALSE(w.ok);
  CHECK(w.message.find("strictly decreasing") != std::string::npos);
  CHECK_FALSE(validate(OmegaParam{0, {2, 0}, {}}).ok);
  CHECK(validate(OmegaParam{neginf(), {-7, -7}, {3, -5}}).ok);
}

TEST_CASE("make absorbs entries equal to the constant tail") {
  const auto p = DeltaParam::make({3, 0, 0}, 0);
  CHECK(p.head == std::vector<std::int64_t>{3});
  CHECK(p.tail == 0);
  CHECK(DeltaParam::make({3, 0, 0}, neginf()).head.size() == 3);
}

TEST_CASE("char_mu examples") {
  const DeltaParam a{{2}, neginf()};
  CHECK(char_mu(a, 0) == CharValue::make(Unit::PlusOne, 4));
  CHECK(close(char_mu(a, 0).to_complex(3), 1.0 / 9));
  CHECK(char_mu(a, -2) == CharValue::one());
  const DeltaParam c{{}, 0};
  CHECK(char_mu(c, 1).is_zero());
  CHECK(char_mu(c, 0) == CharValue::one());

  const std::vector<std::int64_t> ells{0, -2, 1};
  const auto vals = char_mu(a, ells);
  REQUIRE(vals.size() == 3);
  CHECK(vals[2] == CharValue::make(Unit::PlusOne, 6));
  CHECK(char_mu_diag(a, ells) == CharValue::make(Unit::PlusOne, 10));

  CHECK_THROWS_AS(char_mu(DeltaParam{{1, 3}, neginf()}, 0), Error);
}

TEST_CASE("char_mu matches the Theta-product oracle") {
  std::mt19937_64 rng(11);
  for (const auto* f : {&Q3, &L3, &Q5}) {
    for (int t = 0; t < 200; ++t) {
      const auto p = random_delta(rng);
      for (std::int64_t ell = -4; ell <= 4; ++ell) {
        INFO(to_string(p) << " ell=" << ell);
        CHECK(close(char_mu(p, ell).to_complex(f->q), mu_oracle(p, ell, *f)));
      }
    }
  }
}

TEST_CASE("char_nu examples") {
  for (const auto* f : {&Q3, &Q5, &L3}) {
    const auto omega = FieldElement::uniformizer_power(*f, -1);
    // single theta factor at level one
    const OmegaParam h0{neginf(), {0}, {}};
    const CharValue expect = theta_of(1, 1, *f);
    CHECK(char_nu(h0, omega) == expect);
    CHECK(close(expect.to_complex(f->q), theta_bruteforce(omega, ThetaKind::LittleTheta)));
    CHECK(expect.half_exp == 1);

    const OmegaParam hk{0, {}, {}};
    CHECK(char_nu(hk, FieldElement::from_int(*f, 7)) == CharValue::one());
    CHECK(char_nu(hk, FieldElement::zero(*f)) == CharValue::one());
    CHECK(char_nu(hk, omega).is_zero());

    // two equal factors: the square of the level-one value, unit rho^2
    const OmegaParam h2{neginf(), {1, 1}, {}};
    for (std::int64_t u : {1, 2}) {
      const auto x = FieldElement::from_int(*f, u);
      const CharValue v = char_nu(h2, x);
      const auto bf = theta_bruteforce(x.shifted(-1), ThetaKind::LittleTheta);
      CHECK(close(v.to_complex(f->q), bf * bf));
      CHECK(v.half_exp == 2);
      const Unit rho2 = rho_for(f->q) == Rho::I ? Unit::MinusOne : Unit::PlusOne;
      CHECK(v.unit == rho2);
    }
  }
  CHECK_THROWS_AS(char_nu(OmegaParam{neginf(), {}, {}},
                          FieldElement::one(FieldParams::make(Family::PAdic, 2, 8))),
                  Error);
}

TEST_CASE("char_nu matches the theta-product oracle on the probe grid") {
  std::mt19937_64 rng(12);
  for (const auto* f : {&Q3, &L3, &Q5}) {
    const auto grid = omega_probe_grid(*f);
    CHECK(grid.size() == 22);
    for (int t = 0; t < 100; ++t) {
      const auto p = random_omega(rng);
      REQUIRE(validate(p).ok);
      for (const auto& x : grid) {
        INFO(to_string(p) << " x=" << x.to_string());
        CHECK(close(char_nu(p, x).to_complex(f->q), nu_oracle(p, x)));
      }
    }
  }
}

TEST_CASE("oplus on Delta") {
  const DeltaParam a{{6, 2, 2}, -3};
  const DeltaParam b{{4, 3, 0, -1}, neginf()};
  const auto c = oplus(a, b);
  CHECK(c.head == std::vector<std::int64_t>{6, 4, 3, 2, 2, 0, -1});
  CHECK(c.tail == -3);
  const DeltaParam id{{}, neginf()};
  CHECK(oplus(a, id) == a);
  CHECK(oplus(b, id) == b);
  // entries below the larger tail disappear
  CHECK(oplus(DeltaParam{{1}, 0}, DeltaParam{{3, -1, -2}, neginf()}) == DeltaParam{{3, 1}, 0});

  std::mt19937_64 rng(13);
  for (int t = 0; t < 500; ++t) {
    const auto x = random_delta(rng), y = random_delta(rng), z = random_delta(rng);
    const auto xy = oplus(x, y);
    CHECK(validate(xy).ok);
    CHECK(xy == oplus(y, x));
    CHECK(oplus(xy, z) == oplus(x, oplus(y, z)));
    for (std::int64_t ell = -4; ell <= 4; ++ell) {
      CHECK(char_mu(xy, ell) == char_mu(x, ell) * char_mu(y, ell));
    }
  }
}

TEST_CASE("oplus on Omega") {
  std::mt19937_64 rng(14);
  for (const auto* f : {&Q3, &Q5}) {
    const auto grid = omega_probe_grid(*f);
    for (int t = 0; t < 200; ++t) {
      const auto x = random_omega(rng), y = random_omega(rng), z = random_omega(rng);
      const auto xy = oplus(x, y);
      CHECK(validate(xy).ok);
      CHECK(xy == oplus(y, x));
      CHECK(oplus(xy, z) == oplus(x, oplus(y, z)));
      for (const auto& g : grid) CHECK(char_nu(xy, g) == char_nu(x, g) * char_nu(y, g));
    }
  }
  // two single eps-Wishart factors combine into a plain pair
  const OmegaParam e{neginf(), {}, {1}};
  CHECK(oplus(e, e) == OmegaParam{neginf(), {1, 1}, {}});
}

TEST_CASE("canonicalize_omega") {
  CHECK(canonicalize_omega(neginf(), {}, {1, 1}) == OmegaParam{neginf(), {1, 1}, {}});
  CHECK(canonicalize_omega(0, {2, 0, -1}, {}) == OmegaParam{0, {2}, {}});
  CHECK(canonicalize_omega(neginf(), {3}, {2, 2, 2, 1}) == OmegaParam{neginf(), {3, 2, 2}, {2, 1}});
  const OmegaParam c{-1, {4, 0}, {3, 0}};
  CHECK(canonicalize_omega(c.k, c.kk, c.kkp) == c);

  std::uniform_int_distribution<int> len(0, 5), entry(-4, 5), kd(-4, 2), coin(0, 1);
  std::mt19937_64 rng(15);
  for (const auto* f : {&Q3, &L3, &Q5}) {
    const auto grid = omega_probe_grid(*f);
    for (int t = 0; t < 200; ++t) {
      std::optional<std::int64_t> k;
      if (coin(rng)) k = kd(rng);
      std::vector<std::int64_t> kk, kkp;
      for (int i = len(rng); i > 0; --i) kk.push_back(entry(rng));
      for (int i = len(rng); i > 0; --i) kkp.push_back(entry(rng));
      std::sort(kk.begin(), kk.end(), std::greater<>());
      std::sort(kkp.begin(), kkp.end(), std::greater<>());
      const auto c1 = canonicalize_omega(k, kk, kkp);
      CHECK(validate(c1).ok);
      CHECK(canonicalize_omega(c1.k, c1.kk, c1.kkp) == c1);
      for (const auto& x : grid) CHECK(char_nu_raw(k, kk, kkp, x) == char_nu(c1, x));
    }
  }
}

TEST_CASE("distinguishing_argument examples") {
  const auto check = [](const DeltaParam& a, const DeltaParam& b, std::int64_t ell, CharValue va,
                        CharValue vb) {
    CHECK(distinguishing_argument(a, b) == ell);
    CHECK(distinguishing_argument(b, a) == ell);
    CHECK(char_mu(a, ell) == va);
    CHECK(char_mu(b, ell) == vb);
  };
  check({{1}, neginf()}, {{0}, neginf()}, 0, CharValue::make(Unit::PlusOne, 2), CharValue::one());
  check({{2, 2}, neginf()}, {{2}, neginf()}, -1, CharValue::make(Unit::PlusOne, 4),
        CharValue::make(Unit::PlusOne, 2));
  check({{}, 0}, {{}, neginf()}, 1, CharValue::zero(), CharValue::one());
  CHECK_THROWS_AS(distinguishing_argument({{2}, 0}, {{2, 0}, 0}), Error);
  try {
    distinguishing_argument({{2}, neginf()}, {{2}, neginf()});
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::EqualParams);
  }
}

TEST_CASE("distinguishing_argument separates random pairs") {
  std::mt19937_64 rng(16);
  int tested = 0;
  while (tested < 500) {
    const auto a = random_delta(rng), b = random_delta(rng);
    if (a == b) continue;
    ++tested;
    const auto ell = distinguishing_argument(a, b);
    INFO(to_string(a) << " vs " << to_string(b));
    CHECK(char_mu(a, ell) != char_mu(b, ell));
  }
}

TEST_CASE("Omega values separate random unequal parameters on the probe grid") {
  std::mt19937_64 rng(17);
  for (const auto* f : {&Q3, &Q5, &L3}) {
    const auto grid = omega_probe_grid(*f);
    int tested = 0;
    while (tested < 200) {
      const auto a = random_omega(rng), b = random_omega(rng);
      if (a == b) continue;
      ++tested;
      const bool separated = std::any_of(grid.begin(), grid.end(), [&](const FieldElement& x) {
        return char_nu(a, x) != char_nu(b, x);
      });
      INFO(to_string(a) << " vs " << to_string(b));
      CHECK(separated);
    }
  }
}

TEST_CASE("truncate_rule") {
  const auto p = truncate_rule([](int j) { return -j; }, 5);
  CHECK(p.head == std::vector<std::int64_t>{-1, -2, -3, -4, -5});
  CHECK_FALSE(p.tail.has_value());
  // for fixed ell only entries above -ell matter, so deep enough truncations agree
  const auto deeper = truncate_rule([](int j) { return -j; }, 12);
  for (std::int64_t ell = -2; ell <= 5; ++ell) CHECK(char_mu(p, ell) == char_mu(deeper, ell));
  CHECK_THROWS_AS(truncate_rule([](int j) { return j; }, 3), Error);
}
