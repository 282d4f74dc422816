#pragma once

// Truncated-precision elements of Q_p and F_p((t)).
//
// An element is stored as  varpi^v * (d_0 + d_1 varpi + ... + d_{r-1} varpi^{r-1})
// with d_0 != 0 and digits in {0, ..., p-1}.  The r stored digits are exactly the
// digits that are known, so the element is determined modulo varpi^{v+r}
// (its absolute precision).  r never exceeds the field precision N.
//
// Arithmetic is sound with respect to that bookkeeping: a result never claims a
// digit that its inputs do not determine.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lfrm/residue.hpp"

namespace lfrm {

enum class Family : std::uint8_t { PAdic, Laurent };

inline constexpr int kMaxPrecision = 32;
inline constexpr std::int64_t kInfiniteValuation = std::numeric_limits<std::int64_t>::max();

struct FieldParams {
  Family family = Family::PAdic;
  std::uint32_t p = 3;
  std::uint32_t q = 3;
  int precision = 12;
  // Lift of the smallest nonsquare residue (epsilon); 0 for p = 2.
  std::uint32_t nonsquare_digit = 2;
  // Sign s_chi of theta(varpi^-1) for the fixed character; 0 for p = 2.
  int s_chi = 1;

  // Validates p (prime, < 256) and 1 <= precision <= kMaxPrecision, then fills
  // in q, nonsquare_digit and s_chi.
  static FieldParams make(Family family, std::uint32_t p, int precision);

  // `padic:p=<p>,prec=<N>` or `laurent:p=<p>,prec=<N>`.
  static FieldParams parse(std::string_view spec);
  std::string spec() const;

  bool dyadic() const { return p == 2; }
  void require_non_dyadic(std::string_view module) const;

  friend bool operator==(const FieldParams&, const FieldParams&) = default;
};

// Policy for Add/Sub when every known digit cancels.
enum class Cancellation {
  Throw,  // raise PrecisionExhausted
  Flush,  // return the exact zero, report the guaranteed valuation
};

class FieldElement {
 public:
  static FieldElement zero(const FieldParams& f);
  static FieldElement one(const FieldParams& f);
  static FieldElement from_int(const FieldParams& f, std::int64_t n);
  static FieldElement from_rational(const FieldParams& f, std::int64_t num, std::int64_t den);
  // varpi^k with all N digits known.
  static FieldElement uniformizer_power(const FieldParams& f, std::int64_t k);
  // The exact value sum_i digits[i] varpi^{valuation+i}: leading zero digits
  // are skipped, the next N digits are kept (missing ones are 0) and all N are
  // known. All-zero input gives zero.
  static FieldElement from_digits(const FieldParams& f, std::int64_t valuation,
                                  std::span<const std::uint8_t> digits);

  const FieldParams& params() const { return params_; }
  bool is_zero() const { return rel_ == 0; }
  std::int64_t valuation() const { return val_; }
  int relative_precision() const { return rel_; }
  std::int64_t absolute_precision() const;
  std::span<const std::uint8_t> digits() const { return {digits_.data(), std::size_t(rel_)}; }
  // Digit at the given power of varpi (0 below the valuation or beyond the window).
  std::uint8_t digit_at(std::int64_t power) const;

  bool is_integral() const { return is_zero() || val_ >= 0; }
  bool is_unit() const { return !is_zero() && val_ == 0; }

  FieldElement unit_part() const;
  FieldElement shifted(std::int64_t k) const;  // times varpi^k, exact
  // Forgets all but the first `known` digits.
  FieldElement truncated(int known) const;
  FieldElement inverse() const;

  FieldElement operator-() const;
  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement& operator+=(const FieldElement& b) { return *this = *this + b; }
  FieldElement& operator*=(const FieldElement& b) { return *this = *this * b; }

  // Add/Sub with an explicit cancellation policy. `guaranteed` receives the
  // absolute precision min(abs(a), abs(b)) of the inputs.
  static FieldElement add(const FieldElement& a, const FieldElement& b, Cancellation policy,
                          std::int64_t* guaranteed = nullptr);
  static FieldElement sub(const FieldElement& a, const FieldElement& b, Cancellation policy,
                          std::int64_t* guaranteed = nullptr);

  // Representation equality (same valuation, digits and known-digit count).
  friend bool operator==(const FieldElement& a, const FieldElement& b);

  std::string to_string() const;

 private:
  explicit FieldElement(const FieldParams& f) : params_(f) {}

  FieldParams params_;
  std::int64_t val_ = kInfiniteValuation;
  int rel_ = 0;
  std::array<std::uint8_t, kMaxPrecision> digits_{};
};

// a and b agree modulo varpi^m where m is the smaller of their absolute
// precisions; with `min_power`, additionally require m >= min_power.
bool equal_to_precision(const FieldElement& a, const FieldElement& b,
                        std::optional<std::int64_t> min_power = std::nullopt);

struct OrdAbs {
  std::optional<std::int64_t> ord;  // nullopt for +infinity
  Rational abs;                     // q^{-ord}, 0 for the zero element
};

OrdAbs ord_abs(const FieldElement& a);

// x mod varpi O_F for x in O_F.
ResidueElement reduce(const FieldElement& x);
// Canonical representative in C_q = {0, ..., p-1}.
FieldElement lift(const FieldParams& f, ResidueElement r);

// Square root by Newton lifting from the residue field. The returned root has
// leading digit <= (p-1)/2. nullopt iff the input is a nonsquare.
std::optional<FieldElement> hensel_sqrt(const FieldElement& a);

struct SquareClass {
  FieldElement rep;      // varpi^{ord}, eps * varpi^{ord}, or 0
  FieldElement witness;  // unit g with g^2 * rep = a
  bool epsilon = false;  // rep carries the nonsquare unit
};

SquareClass square_class(const FieldElement& a);

FieldElement nonsquare_unit(const FieldParams& f);

}  // namespace lfrm
