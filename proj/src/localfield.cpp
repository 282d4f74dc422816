#include "lfrm/localfield.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "localfield";

using Acc = std::array<std::int64_t, kMaxPrecision>;
using Digits = std::array<std::uint8_t, kMaxPrecision>;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Brings acc[0..len) into digit range. p-adic carries move upward and the
// carry out of the window is dropped; Laurent coefficients just reduce mod p.
void normalize(std::int64_t* acc, int len, std::uint32_t p, Family family) {
  const auto pp = static_cast<std::int64_t>(p);
  if (family == Family::Laurent) {
    for (int k = 0; k < len; ++k) {
      acc[k] %= pp;
      if (acc[k] < 0) acc[k] += pp;
    }
    return;
  }
  for (int k = 0; k < len; ++k) {
    const std::int64_t c = floor_div(acc[k], pp);
    acc[k] -= c * pp;
    if (k + 1 < len) acc[k + 1] += c;
  }
}

void mul_trunc(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, int r,
               std::uint32_t p, Family family) {
  Acc acc{};
  for (int i = 0; i < r; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; i + j < r; ++j) acc[i + j] += std::int64_t{a[i]} * b[j];
  }
  normalize(acc.data(), r, p, family);
  for (int k = 0; k < r; ++k) out[k] = static_cast<std::uint8_t>(acc[k]);
}

// Long division of 1 by a unit series a (a[0] != 0), r digits.
void inv_trunc(const std::uint8_t* a, std::uint8_t* out, int r, std::uint32_t p, Family family) {
  Acc rem{};
  rem[0] = 1;
  const std::uint32_t inv0 = residue::inv_mod(a[0], p);
  for (int i = 0; i < r; ++i) {
    const auto y = static_cast<std::int64_t>(std::uint64_t(rem[i]) * inv0 % p);
    out[i] = static_cast<std::uint8_t>(y);
    if (y == 0) continue;
    for (int j = i; j < r; ++j) rem[j] -= y * a[j - i];
    normalize(rem.data() + i, r - i, p, family);
  }
}

void add_trunc(const std::uint8_t* a, const std::uint8_t* b, std::uint8_t* out, int r,
               std::uint32_t p, Family family) {
  Acc acc{};
  for (int k = 0; k < r; ++k) acc[k] = std::int64_t{a[k]} + b[k];
  normalize(acc.data(), r, p, family);
  for (int k = 0; k < r; ++k) out[k] = static_cast<std::uint8_t>(acc[k]);
}

void require_same_field(const FieldElement& a, const FieldElement& b) {
  if (!(a.params() == b.params())) {
    raise(Errc::FieldMismatch, kModule, "operands belong to different fields");
  }
}

BigInt big_pow(std::uint32_t base, std::int64_t e) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(e));
}

}  // namespace

// ---- FieldParams --------------------------------------------------------------

FieldParams FieldParams::make(Family family, std::uint32_t p, int precision) {
  if (!residue::is_prime(p) || p > 255) {
    raise(Errc::InvalidParam, kModule, "p must be a prime below 256, got " + std::to_string(p));
  }
  if (precision < 1 || precision > kMaxPrecision) {
    raise(Errc::InvalidParam, kModule,
          "precision must lie in [1, " + std::to_string(kMaxPrecision) + "]");
  }
  FieldParams f;
  f.family = family;
  f.p = p;
  f.q = p;
  f.precision = precision;
  if (p == 2) {
    f.nonsquare_digit = 0;
    f.s_chi = 0;
  } else {
    f.nonsquare_digit = smallest_nonsquare(p);
    f.s_chi = gauss_sum(ResidueElement{1, p}).sign;
  }
  return f;
}

FieldParams FieldParams::parse(std::string_view spec) {
  const auto bad = [&](const std::string& why) -> FieldParams {
    raise(Errc::ParseError, kModule,
          "bad field spec '" + std::string(spec) + "': " + why +
              " (expected padic:p=<p>,prec=<N> or laurent:p=<p>,prec=<N>)");
  };
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) return bad("missing ':'");
  const std::string_view fam = spec.substr(0, colon);
  Family family;
  if (fam == "padic") {
    family = Family::PAdic;
  } else if (fam == "laurent") {
    family = Family::Laurent;
  } else {
    return bad("unknown family '" + std::string(fam) + "'");
  }

  std::optional<long> p, prec;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) return bad("item '" + std::string(item) + "' lacks '='");
    const std::string_view key = item.substr(0, eq);
    const std::string_view val = item.substr(eq + 1);
    long parsed = 0;
    const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), parsed);
    if (ec != std::errc{} || ptr != val.data() + val.size()) {
      return bad("value of '" + std::string(key) + "' is not an integer");
    }
    if (key == "p") {
      p = parsed;
    } else if (key == "prec" || key == "precision") {
      prec = parsed;
    } else {
      return bad("unknown key '" + std::string(key) + "'");
    }
  }
  if (!p || !prec) return bad("both p and prec are required");
  if (*p < 2 || *p > 255) return bad("p out of range");
  try {
    return make(family, static_cast<std::uint32_t>(*p), static_cast<int>(*prec));
  } catch (const Error& e) {
    return bad(e.what());
  }
}

std::string FieldParams::spec() const {
  return std::string(family == Family::PAdic ? "padic" : "laurent") + ":p=" + std::to_string(p) +
         ",prec=" + std::to_string(precision);
}

void FieldParams::require_non_dyadic(std::string_view module) const {
  if (dyadic()) raise(Errc::DyadicField, module, "this operation needs p odd");
}

// ---- FieldElement -------------------------------------------------------------

FieldElement FieldElement::zero(const FieldParams& f) { return FieldElement(f); }

FieldElement FieldElement::one(const FieldParams& f) { return uniformizer_power(f, 0); }

FieldElement FieldElement::uniformizer_power(const FieldParams& f, std::int64_t k) {
  FieldElement x(f);
  x.val_ = k;
  x.rel_ = f.precision;
  x.digits_[0] = 1;
  return x;
}

FieldElement FieldElement::from_int(const FieldParams& f, std::int64_t n) {
  FieldElement x(f);
  const auto pp = static_cast<std::int64_t>(f.p);
  if (f.family == Family::Laurent) {
    std::int64_t r = n % pp;
    if (r < 0) r += pp;
    if (r == 0) return x;
    x.val_ = 0;
    x.rel_ = f.precision;
    x.digits_[0] = static_cast<std::uint8_t>(r);
    return x;
  }
  if (n == 0) return x;
  std::int64_t v = 0;
  while (n % pp == 0) {
    n /= pp;
    ++v;
  }
  x.val_ = v;
  x.rel_ = f.precision;
  for (int i = 0; i < f.precision; ++i) {
    const std::int64_t q = floor_div(n, pp);
    x.digits_[i] = static_cast<std::uint8_t>(n - q * pp);
    n = q;
  }
  return x;
}

FieldElement FieldElement::from_rational(const FieldParams& f, std::int64_t num,
                                         std::int64_t den) {
  if (den == 0) raise(Errc::DivisionByZero, kModule, "zero denominator");
  return from_int(f, num) / from_int(f, den);
}

FieldElement FieldElement::from_digits(const FieldParams& f, std::int64_t valuation,
                                       std::span<const std::uint8_t> digits) {
  FieldElement x(f);
  std::size_t start = 0;
  while (start < digits.size() && digits[start] == 0) ++start;
  if (start == digits.size()) return x;
  for (const std::uint8_t d : digits) {
    if (d >= f.p) raise(Errc::InvalidParam, kModule, "digit out of range for p");
  }
  x.val_ = valuation + static_cast<std::int64_t>(start);
  x.rel_ = f.precision;
  const std::size_t take = std::min<std::size_t>(digits.size() - start, f.precision);
  for (std::size_t i = 0; i < take; ++i) x.digits_[i] = digits[start + i];
  return x;
}

std::int64_t FieldElement::absolute_precision() const {
  return is_zero() ? kInfiniteValuation : val_ + rel_;
}

std::uint8_t FieldElement::digit_at(std::int64_t power) const {
  if (is_zero() || power < val_ || power >= val_ + rel_) return 0;
  return digits_[static_cast<std::size_t>(power - val_)];
}

FieldElement FieldElement::shifted(std::int64_t k) const {
  FieldElement x = *this;
  if (!x.is_zero()) x.val_ += k;
  return x;
}

FieldElement FieldElement::truncated(int known) const {
  FieldElement x = *this;
  if (is_zero()) return x;
  if (known < 1) raise(Errc::PrecisionExhausted, kModule, "cannot keep fewer than one digit");
  x.rel_ = std::min(rel_, known);
  for (int i = x.rel_; i < kMaxPrecision; ++i) x.digits_[i] = 0;
  return x;
}

FieldElement FieldElement::unit_part() const { return is_zero() ? *this : shifted(-val_); }

FieldElement FieldElement::operator-() const {
  FieldElement x = *this;
  if (is_zero()) return x;
  const std::uint32_t p = params_.p;
  if (params_.family == Family::Laurent) {
    for (int i = 0; i < rel_; ++i) x.digits_[i] = static_cast<std::uint8_t>((p - digits_[i]) % p);
  } else {
    x.digits_[0] = static_cast<std::uint8_t>(p - digits_[0]);
    for (int i = 1; i < rel_; ++i) x.digits_[i] = static_cast<std::uint8_t>(p - 1 - digits_[i]);
  }
  return x;
}

FieldElement FieldElement::add(const FieldElement& a, const FieldElement& b, Cancellation policy,
                               std::int64_t* guaranteed) {
  require_same_field(a, b);
  if (a.is_zero() || b.is_zero()) {
    if (guaranteed) *guaranteed = std::min(a.absolute_precision(), b.absolute_precision());
    return a.is_zero() ? b : a;
  }
  const std::int64_t lo = std::min(a.val_, b.val_);
  const std::int64_t cap = std::min(a.absolute_precision(), b.absolute_precision());
  if (guaranteed) *guaranteed = cap;
  const int width = static_cast<int>(cap - lo);  // 1 <= width <= N

  Acc acc{};
  for (int k = 0; k < width; ++k) acc[k] = std::int64_t{a.digit_at(lo + k)} + b.digit_at(lo + k);
  normalize(acc.data(), width, a.params_.p, a.params_.family);

  int t = 0;
  while (t < width && acc[t] == 0) ++t;
  FieldElement out(a.params_);
  if (t == width) {
    if (policy == Cancellation::Throw) {
      raise(Errc::PrecisionExhausted, kModule,
            "all known digits cancelled (result is 0 mod varpi^" + std::to_string(cap) + ")");
    }
    return out;
  }
  out.val_ = lo + t;
  out.rel_ = width - t;
  for (int k = t; k < width; ++k) out.digits_[k - t] = static_cast<std::uint8_t>(acc[k]);
  return out;
}

FieldElement FieldElement::sub(const FieldElement& a, const FieldElement& b, Cancellation policy,
                               std::int64_t* guaranteed) {
  return add(a, -b, policy, guaranteed);
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  return FieldElement::add(a, b, Cancellation::Throw);
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) {
  return FieldElement::add(a, -b, Cancellation::Throw);
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_same_field(a, b);
  if (a.is_zero()) return a;
  if (b.is_zero()) return b;
  FieldElement out(a.params_);
  out.val_ = a.val_ + b.val_;
  out.rel_ = std::min(a.rel_, b.rel_);
  mul_trunc(a.digits_.data(), b.digits_.data(), out.digits_.data(), out.rel_, a.params_.p,
            a.params_.family);
  return out;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) raise(Errc::DivisionByZero, kModule, "inverse of zero");
  FieldElement out(params_);
  out.val_ = -val_;
  out.rel_ = rel_;
  inv_trunc(digits_.data(), out.digits_.data(), rel_, params_.p, params_.family);
  return out;
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

bool operator==(const FieldElement& a, const FieldElement& b) {
  if (!(a.params_ == b.params_) || a.rel_ != b.rel_) return false;
  if (a.is_zero()) return true;
  return a.val_ == b.val_ &&
         std::equal(a.digits_.begin(), a.digits_.begin() + a.rel_, b.digits_.begin());
}

std::string FieldElement::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  os << params_.p << "^" << val_ << "*[";
  for (int i = 0; i < rel_; ++i) os << (i ? " " : "") << int(digits_[i]);
  os << "]";
  return os.str();
}

// ---- free functions -------------------------------------------------------------

bool equal_to_precision(const FieldElement& a, const FieldElement& b,
                        std::optional<std::int64_t> min_power) {
  require_same_field(a, b);
  const std::int64_t m = std::min(a.absolute_precision(), b.absolute_precision());
  if (min_power && m < *min_power) return false;
  if (a.is_zero() && b.is_zero()) return true;
  if (a.is_zero() || b.is_zero()) return false;
  if (a.valuation() != b.valuation()) return false;
  for (std::int64_t t = a.valuation(); t < m; ++t) {
    if (a.digit_at(t) != b.digit_at(t)) return false;
  }
  return true;
}

OrdAbs ord_abs(const FieldElement& a) {
  if (a.is_zero()) return {std::nullopt, Rational(0)};
  const std::int64_t v = a.valuation();
  const std::uint32_t q = a.params().q;
  Rational abs = v >= 0 ? Rational(BigInt(1), big_pow(q, v)) : Rational(big_pow(q, -v));
  return {v, abs};
}

ResidueElement reduce(const FieldElement& x) {
  const std::uint32_t p = x.params().p;
  if (x.is_zero()) return {0, p};
  if (x.valuation() < 0) raise(Errc::NotIntegral, kModule, "reduce needs an element of O_F");
  return {x.digit_at(0), p};
}

FieldElement lift(const FieldParams& f, ResidueElement r) {
  if (r.modulus != f.p) raise(Errc::FieldMismatch, kModule, "residue modulus differs from p");
  return FieldElement::from_int(f, r.value);
}

std::optional<FieldElement> hensel_sqrt(const FieldElement& a) {
  const FieldParams& f = a.params();
  f.require_non_dyadic(kModule);
  if (a.is_zero()) return a;
  if (a.valuation() % 2 != 0) return std::nullopt;
  const auto u = a.digits();
  const auto root0 = residue_sqrt(u[0], f.p);
  if (!root0) return std::nullopt;

  const int r = a.relative_precision();
  Digits beta{}, inv_beta{}, tmp{}, two{}, half{};
  beta[0] = static_cast<std::uint8_t>(*root0);
  two[0] = 2;
  inv_trunc(two.data(), half.data(), r, f.p, f.family);
  // Newton step beta <- (beta + u / beta) / 2 doubles the correct digits.
  for (int c = 1; c < r;) {
    const int c2 = std::min(2 * c, r);
    inv_trunc(beta.data(), inv_beta.data(), c2, f.p, f.family);
    mul_trunc(u.data(), inv_beta.data(), tmp.data(), c2, f.p, f.family);
    add_trunc(beta.data(), tmp.data(), tmp.data(), c2, f.p, f.family);
    mul_trunc(tmp.data(), half.data(), beta.data(), c2, f.p, f.family);
    c = c2;
  }
  return FieldElement::from_digits(f, a.valuation() / 2, std::span(beta.data(), r))
      .truncated(r);
}

SquareClass square_class(const FieldElement& a) {
  const FieldParams& f = a.params();
  f.require_non_dyadic(kModule);
  if (a.is_zero()) return {a, FieldElement::one(f), false};
  const std::int64_t v = a.valuation();
  const FieldElement u = a.unit_part();
  if (legendre(reduce(u)) == 1) {
    return {FieldElement::uniformizer_power(f, v), *hensel_sqrt(u), false};
  }
  const FieldElement eps = nonsquare_unit(f);
  return {eps.shifted(v), *hensel_sqrt(u / eps), true};
}

FieldElement nonsquare_unit(const FieldParams& f) {
  f.require_non_dyadic(kModule);
  return FieldElement::from_int(f, f.nonsquare_digit);
}

}  // namespace lfrm
