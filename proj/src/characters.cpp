#include "lfrm/characters.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "characters";

double pow_double(std::uint32_t q, std::int64_t e) {
  return std::pow(static_cast<double>(q), static_cast<double>(e));
}

std::uint64_t pow_u64(std::uint32_t p, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

// Digits of z in O_F / varpi^len, indexed by `code` in base p.
FieldElement residue_class_rep(const FieldParams& f, std::uint64_t code, int len) {
  std::vector<std::uint8_t> digits(static_cast<std::size_t>(len));
  for (int i = 0; i < len; ++i) {
    digits[i] = static_cast<std::uint8_t>(code % f.p);
    code /= f.p;
  }
  return FieldElement::from_digits(f, 0, digits);
}

// Phase numerator using only digits at varpi^-depth .. varpi^-1.
std::uint64_t truncated_phase(const FieldElement& x, int depth) {
  const FieldParams& f = x.params();
  if (x.is_zero() || x.valuation() >= 0) return 0;
  if (x.absolute_precision() < 0) {
    raise(Errc::InsufficientPrecision, kModule,
          "negative-power digits of the argument are not all known (" + x.to_string() + ")");
  }
  if (f.family == Family::Laurent) return std::uint64_t{x.digit_at(-1)} * pow_u64(f.p, depth - 1);
  std::uint64_t c = 0;
  for (int e = -1; e >= -depth; --e) c = c * f.p + x.digit_at(e);
  return c;
}

}  // namespace

// ---- CharValue --------------------------------------------------------------------

CharValue CharValue::make(Unit u, int half_exp) {
  if (u == Unit::Zero) return zero();
  if (half_exp < 0) raise(Errc::InvalidParam, kModule, "half exponent must be non-negative");
  return {u, half_exp};
}

std::complex<double> CharValue::to_complex(std::uint32_t q) const {
  if (is_zero()) return 0.0;
  const double mag = std::pow(static_cast<double>(q), -0.5 * half_exp);
  switch (unit) {
    case Unit::PlusOne: return {mag, 0.0};
    case Unit::PlusI: return {0.0, mag};
    case Unit::MinusOne: return {-mag, 0.0};
    case Unit::MinusI: return {0.0, -mag};
    case Unit::Zero: break;
  }
  return 0.0;
}

Rational CharValue::norm_squared(std::uint32_t q) const {
  if (is_zero()) return 0;
  return Rational(BigInt(1), boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(half_exp)));
}

std::string CharValue::unit_string() const {
  switch (unit) {
    case Unit::PlusOne: return "+1";
    case Unit::PlusI: return "+i";
    case Unit::MinusOne: return "-1";
    case Unit::MinusI: return "-i";
    case Unit::Zero: return "0";
  }
  return "0";
}

Unit CharValue::parse_unit(std::string_view s) {
  if (s == "+1" || s == "1") return Unit::PlusOne;
  if (s == "-1") return Unit::MinusOne;
  if (s == "+i" || s == "i") return Unit::PlusI;
  if (s == "-i") return Unit::MinusI;
  if (s == "0") return Unit::Zero;
  raise(Errc::ParseError, kModule, "unknown unit '" + std::string(s) + "'");
}

CharValue CharValue::operator-() const {
  if (is_zero()) return *this;
  return {static_cast<Unit>((static_cast<int>(unit) + 2) % 4), half_exp};
}

CharValue operator*(CharValue a, CharValue b) {
  if (a.is_zero() || b.is_zero()) return CharValue::zero();
  return {static_cast<Unit>((static_cast<int>(a.unit) + static_cast<int>(b.unit)) % 4),
          a.half_exp + b.half_exp};
}

CharValue charvalue_product(std::span<const CharValue> values) {
  CharValue acc = CharValue::one();
  for (const auto& v : values) acc *= v;
  return acc;
}

CharValue pow(CharValue v, int e) {
  CharValue acc = CharValue::one();
  for (int i = 0; i < e; ++i) acc *= v;
  return acc;
}

// ---- chi --------------------------------------------------------------------------

std::complex<double> unit_phase(std::uint64_t num, std::uint64_t den) {
  const long double frac = static_cast<long double>(num % den) / static_cast<long double>(den);
  const double angle = static_cast<double>(2.0L * std::numbers::pi_v<long double> * frac);
  return {std::cos(angle), std::sin(angle)};
}

int max_phase_depth(std::uint32_t p) {
  int d = 0;
  long double v = 1;
  while (v * p < 4.6e18L) {
    v *= p;
    ++d;
  }
  return d;
}

std::uint64_t chi_phase(const FieldElement& x, int depth) {
  const FieldParams& f = x.params();
  if (depth < 1 || depth > max_phase_depth(f.p)) {
    raise(Errc::InvalidParam, kModule, "phase depth out of range");
  }
  if (f.family == Family::PAdic && !x.is_zero() && x.valuation() < -depth) {
    raise(Errc::InsufficientPrecision, kModule, "argument valuation below the phase depth");
  }
  return truncated_phase(x, depth);
}

std::complex<double> chi(const FieldElement& x) {
  if (x.is_zero() || x.valuation() >= 0) return 1.0;
  const FieldParams& f = x.params();
  if (f.family == Family::Laurent) {
    if (x.absolute_precision() < 0) truncated_phase(x, 1);  // reports the error
    return unit_phase(x.digit_at(-1), f.p);
  }
  // Digits below varpi^-depth shift the phase by less than p^-depth.
  const int depth = static_cast<int>(std::min<std::int64_t>(-x.valuation(), max_phase_depth(f.p)));
  return unit_phase(truncated_phase(x, depth), pow_u64(f.p, depth));
}

// ---- Theta / theta ------------------------------------------------------------------

CharValue big_theta_of(std::int64_t ell) {
  if (ell < 1) return CharValue::one();
  return {Unit::PlusOne, static_cast<int>(2 * ell)};
}

CharValue theta_of(std::int64_t ell, int legendre_of_unit, const FieldParams& f) {
  f.require_non_dyadic(kModule);
  if (ell < 1) return CharValue::one();
  if (ell % 2 == 0) return {Unit::PlusOne, static_cast<int>(ell)};
  CharValue v{rho_for(f.q) == Rho::One ? Unit::PlusOne : Unit::PlusI, static_cast<int>(ell)};
  return f.s_chi * legendre_of_unit < 0 ? -v : v;
}

CharValue theta_closed(const FieldElement& x, ThetaKind kind) {
  const FieldParams& f = x.params();
  if (kind == ThetaKind::LittleTheta) f.require_non_dyadic(kModule);
  if (x.is_zero()) return CharValue::one();
  const std::int64_t ell = -x.valuation();
  if (kind == ThetaKind::Theta) return big_theta_of(ell);
  if (ell < 1) return CharValue::one();
  return theta_of(ell, legendre({x.digits()[0], f.p}), f);
}

std::complex<double> theta_bruteforce(const FieldElement& x, ThetaKind kind) {
  const FieldParams& f = x.params();
  if (kind == ThetaKind::LittleTheta) f.require_non_dyadic(kModule);
  if (x.is_zero() || x.valuation() >= 0) return 1.0;
  const int ell = static_cast<int>(-x.valuation());
  const double count = pow_double(f.q, kind == ThetaKind::Theta ? 2 * ell : ell);
  if (count > kBruteForceBudget) {
    raise(Errc::TooLarge, kModule, "brute-force theta exceeds the summation budget");
  }
  const std::uint64_t classes = pow_u64(f.q, ell);
  std::vector<FieldElement> reps;
  reps.reserve(classes);
  for (std::uint64_t c = 0; c < classes; ++c) reps.push_back(residue_class_rep(f, c, ell));

  std::complex<double> sum = 0.0;
  if (kind == ThetaKind::LittleTheta) {
    for (const auto& z : reps) sum += chi(z * z * x);
  } else {
    for (const auto& z1 : reps) {
      const FieldElement w = z1 * x;
      for (const auto& z2 : reps) sum += chi(z2 * w);
    }
  }
  return sum / count;
}

int compute_s_chi(const FieldParams& f) {
  f.require_non_dyadic(kModule);
  const auto v = theta_bruteforce(FieldElement::uniformizer_power(f, -1), ThetaKind::LittleTheta);
  const double along = rho_for(f.q) == Rho::One ? v.real() : v.imag();
  return along >= 0 ? 1 : -1;
}

std::complex<double> ball_fourier_average(const FieldElement& y, std::int64_t l) {
  const FieldParams& f = y.params();
  if (y.is_zero()) return 1.0;
  const std::int64_t m = -(l + y.valuation());
  if (m <= 0) return 1.0;
  if (pow_double(f.q, m) > kBruteForceBudget) {
    raise(Errc::TooLarge, kModule, "ball average exceeds the summation budget");
  }
  const std::uint64_t classes = pow_u64(f.q, static_cast<int>(m));
  const FieldElement scaled = y.shifted(l);
  std::complex<double> sum = 0.0;
  for (std::uint64_t c = 0; c < classes; ++c) {
    sum += chi(residue_class_rep(f, c, static_cast<int>(m)) * scaled);
  }
  return sum / static_cast<double>(classes);
}

}  // namespace lfrm
