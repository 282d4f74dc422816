#pragma once

// The fixed additive character chi of F, the kernels Theta(x) = E chi(z1 z2 x)
// and theta(x) = E chi(z^2 x) over Haar-uniform z in O_F, and exact values of
// the form unit * q^(-m/2).

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "lfrm/localfield.hpp"

namespace lfrm {

// Powers of i, plus zero.
enum class Unit : std::uint8_t { PlusOne = 0, PlusI = 1, MinusOne = 2, MinusI = 3, Zero = 4 };

struct CharValue {
  Unit unit = Unit::PlusOne;
  int half_exp = 0;  // value = unit * q^(-half_exp/2); always 0 for Zero

  static CharValue zero() { return {Unit::Zero, 0}; }
  static CharValue one() { return {Unit::PlusOne, 0}; }
  static CharValue make(Unit u, int half_exp);

  bool is_zero() const { return unit == Unit::Zero; }
  std::complex<double> to_complex(std::uint32_t q) const;
  // |value|^2 = q^(-half_exp), exactly.
  Rational norm_squared(std::uint32_t q) const;

  std::string unit_string() const;  // "+1", "-1", "+i", "-i", "0"
  static Unit parse_unit(std::string_view s);

  CharValue operator-() const;
  friend CharValue operator*(CharValue a, CharValue b);
  CharValue& operator*=(CharValue b) { return *this = *this * b; }
  friend bool operator==(const CharValue&, const CharValue&) = default;
};

CharValue charvalue_product(std::span<const CharValue> values);
CharValue pow(CharValue v, int e);

// exp(2 pi i num / den).
std::complex<double> unit_phase(std::uint64_t num, std::uint64_t den);

// Largest L with p^L < 2^62, the depth for exact integer phases.
int max_phase_depth(std::uint32_t p);

// For x with ord(x) >= -depth, the integer c in [0, p^depth) with
// chi(x) = exp(2 pi i c / p^depth). Throws InsufficientPrecision when a
// needed negative-power digit of x is not known.
std::uint64_t chi_phase(const FieldElement& x, int depth);

std::complex<double> chi(const FieldElement& x);

enum class ThetaKind { Theta, LittleTheta };

// Closed forms: Theta(x) = q^(-l*1{l>=1}); theta by the parity of l = -ord(x).
CharValue theta_closed(const FieldElement& x, ThetaKind kind);
// theta(varpi^-l * u) for a unit with the given Legendre symbol of its residue.
CharValue theta_of(std::int64_t ell, int legendre_of_unit, const FieldParams& f);
CharValue big_theta_of(std::int64_t ell);

// Finite average of chi(z^2 x) (resp. chi(z1 z2 x)) over O_F / varpi^l.
std::complex<double> theta_bruteforce(const FieldElement& x, ThetaKind kind);

inline constexpr double kBruteForceBudget = 2e7;

// Sign s_chi computed from the brute-force theta(varpi^-1).
int compute_s_chi(const FieldParams& f);

// Average of chi(x y) over x in varpi^l O_F, evaluated as a finite sum.
std::complex<double> ball_fourier_average(const FieldElement& y, std::int64_t l);

}  // namespace lfrm
