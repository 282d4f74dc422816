#pragma once

// Arithmetic in the prime field F_p, its characters, quadratic Gauss sums and
// the exact matrix counts over F_q.

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lfrm {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace residue {

bool is_prime(std::uint32_t n);
std::uint32_t pow_mod(std::uint32_t base, std::uint64_t exp, std::uint32_t p);
std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p);

}  // namespace residue

struct ResidueElement {
  std::uint32_t value = 0;
  std::uint32_t modulus = 2;

  // Reduces `v` into [0, p).
  static ResidueElement make(std::int64_t v, std::uint32_t p);

  friend bool operator==(const ResidueElement&, const ResidueElement&) = default;
  ResidueElement operator+(const ResidueElement& o) const;
  ResidueElement operator-(const ResidueElement& o) const;
  ResidueElement operator*(const ResidueElement& o) const;
  ResidueElement inverse() const;
};

enum class Rho { One, I };

// rho_q = 1 when q = 1 (mod 4), i when q = 3 (mod 4).
Rho rho_for(std::uint32_t q);

struct GaussSumResult {
  std::complex<double> complex_value;
  int sign = 1;     // complex_value = sign * rho * sqrt(q)
  Rho rho = Rho::One;
  std::uint32_t q = 0;

  std::complex<double> symbolic_value() const;
};

// +1 for nonzero squares, -1 for nonsquares, 0 at zero (Euler's criterion).
int legendre(ResidueElement a);

// tau_a(x) = exp(2 pi i a x / p).
std::complex<double> additive_character(ResidueElement a, ResidueElement x);

// Quadratic Gauss sum sum_{x in F_p} tau_a(x^2) by direct summation together
// with its exact form sign * rho_q * sqrt(q).
GaussSumResult gauss_sum(ResidueElement a);

// Smallest residue with Legendre symbol -1 (p odd).
std::uint32_t smallest_nonsquare(std::uint32_t p);

// Canonical square root of a nonzero square residue: the root <= (p-1)/2.
std::optional<std::uint32_t> residue_sqrt(std::uint32_t a, std::uint32_t p);

struct Counting {
  BigInt gl_count;     // #GL(n, F_q)
  BigInt s_count;      // #{r x n matrices over F_q of rank r}
  Rational gl_volume;  // Haar volume of GL(n, O_F) inside Mat(n, O_F)
};

Counting counting(int n, int r, std::uint32_t q);

// Rank over F_p of a row-major rows x cols matrix of residues.
int rank_mod_p(std::span<const std::uint32_t> entries, int rows, int cols, std::uint32_t p);

// Streams every invertible n x n matrix over F_q exactly once, in
// lexicographic order of the row-major entry string.
class GlEnumerator {
 public:
  static constexpr double kMaxCandidates = 1e8;

  GlEnumerator(int n, std::uint32_t q);

  // Advances to the next invertible matrix; false when exhausted.
  bool next();
  std::span<const std::uint32_t> current() const { return current_; }
  int dim() const { return n_; }

 private:
  int n_;
  std::uint32_t q_;
  bool started_ = false;
  bool done_ = false;
  std::vector<std::uint32_t> current_;
};

}  // namespace lfrm
