#include "lfrm/residue.hpp"

#include <cmath>
#include <numbers>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {
constexpr std::string_view kModule = "residue";
}

namespace residue {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; static_cast<std::uint64_t>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::uint32_t pow_mod(std::uint32_t base, std::uint64_t exp, std::uint32_t p) {
  std::uint64_t result = 1 % p;
  std::uint64_t b = base % p;
  while (exp > 0) {
    if (exp & 1U) result = result * b % p;
    b = b * b % p;
    exp >>= 1U;
  }
  return static_cast<std::uint32_t>(result);
}

std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) raise(Errc::DivisionByZero, kModule, "zero has no inverse mod p");
  return pow_mod(a, p - 2, p);
}

}  // namespace residue

ResidueElement ResidueElement::make(std::int64_t v, std::uint32_t p) {
  if (!residue::is_prime(p)) raise(Errc::InvalidParam, kModule, "modulus must be prime");
  std::int64_t r = v % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  return {static_cast<std::uint32_t>(r), p};
}

ResidueElement ResidueElement::operator+(const ResidueElement& o) const {
  return {static_cast<std::uint32_t>((std::uint64_t{value} + o.value) % modulus), modulus};
}

ResidueElement ResidueElement::operator-(const ResidueElement& o) const {
  return {static_cast<std::uint32_t>((std::uint64_t{value} + modulus - o.value) % modulus),
          modulus};
}

ResidueElement ResidueElement::operator*(const ResidueElement& o) const {
  return {static_cast<std::uint32_t>(std::uint64_t{value} * o.value % modulus), modulus};
}

ResidueElement ResidueElement::inverse() const {
  return {residue::inv_mod(value, modulus), modulus};
}

Rho rho_for(std::uint32_t q) { return q % 4 == 1 ? Rho::One : Rho::I; }

std::complex<double> GaussSumResult::symbolic_value() const {
  const double mag = sign * std::sqrt(static_cast<double>(q));
  return rho == Rho::One ? std::complex<double>(mag, 0.0) : std::complex<double>(0.0, mag);
}

int legendre(ResidueElement a) {
  const std::uint32_t p = a.modulus;
  if (a.value % p == 0) return 0;
  if (p == 2) return 1;
  return residue::pow_mod(a.value, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::complex<double> additive_character(ResidueElement a, ResidueElement x) {
  const std::uint64_t ax = std::uint64_t{a.value} * x.value % a.modulus;
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(ax) / a.modulus;
  return std::polar(1.0, angle);
}

GaussSumResult gauss_sum(ResidueElement a) {
  const std::uint32_t p = a.modulus;
  if (p == 2) raise(Errc::DyadicField, kModule, "Gauss sums need an odd residue characteristic");
  if (a.value == 0) raise(Errc::InvalidParam, kModule, "gauss_sum requires a != 0");

  std::complex<double> sum = 0.0;
  for (std::uint32_t x = 0; x < p; ++x) {
    const ResidueElement xe{x, p};
    sum += additive_character(a, xe * xe);
  }

  GaussSumResult out;
  out.complex_value = sum;
  out.q = p;
  out.rho = rho_for(p);
  const double along = out.rho == Rho::One ? sum.real() : sum.imag();
  out.sign = along >= 0.0 ? 1 : -1;
  return out;
}

std::uint32_t smallest_nonsquare(std::uint32_t p) {
  if (p == 2) raise(Errc::DyadicField, kModule, "F_2 has no nonsquare units");
  for (std::uint32_t a = 2; a < p; ++a) {
    if (legendre({a, p}) == -1) return a;
  }
  raise(Errc::InvalidParam, kModule, "no nonsquare found");
}

std::optional<std::uint32_t> residue_sqrt(std::uint32_t a, std::uint32_t p) {
  a %= p;
  if (a == 0) return 0U;
  for (std::uint32_t b = 1; b <= p / 2; ++b) {
    if (std::uint64_t{b} * b % p == a) return b;
  }
  return std::nullopt;
}

Counting counting(int n, int r, std::uint32_t q) {
  if (n < 1 || r < 1 || r > n) raise(Errc::InvalidParam, kModule, "counting needs 1 <= r <= n");
  const BigInt qn = boost::multiprecision::pow(BigInt(q), n);
  Counting c;
  c.gl_count = 1;
  c.s_count = 1;
  for (int j = 0; j < n; ++j) {
    const BigInt term = qn - boost::multiprecision::pow(BigInt(q), j);
    c.gl_count *= term;
    if (j < r) c.s_count *= term;
  }
  c.gl_volume = 1;
  for (int j = 1; j <= n; ++j) {
    const BigInt qj = boost::multiprecision::pow(BigInt(q), j);
    c.gl_volume *= Rational(qj - 1, qj);
  }
  return c;
}

int rank_mod_p(std::span<const std::uint32_t> entries, int rows, int cols, std::uint32_t p) {
  std::vector<std::uint32_t> m(entries.begin(), entries.end());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int i = rank; i < rows; ++i) {
      if (m[i * cols + col] % p != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int j = 0; j < cols; ++j) std::swap(m[pivot * cols + j], m[rank * cols + j]);
    }
    const std::uint64_t inv = residue::inv_mod(m[rank * cols + col], p);
    for (int i = rank + 1; i < rows; ++i) {
      const std::uint64_t f = m[i * cols + col] * inv % p;
      if (f == 0) continue;
      for (int j = col; j < cols; ++j) {
        m[i * cols + j] = static_cast<std::uint32_t>(
            (m[i * cols + j] + (p - f) * m[rank * cols + j]) % p);
      }
    }
    ++rank;
  }
  return rank;
}

GlEnumerator::GlEnumerator(int n, std::uint32_t q) : n_(n), q_(q) {
  if (n < 1) raise(Errc::InvalidParam, kModule, "enumerate_gl needs n >= 1");
  if (std::pow(static_cast<double>(q), static_cast<double>(n) * n) > kMaxCandidates) {
    raise(Errc::TooLarge, kModule, "q^(n^2) exceeds the enumeration guard");
  }
  current_.assign(static_cast<std::size_t>(n) * n, 0);
}

bool GlEnumerator::next() {
  while (!done_) {
    if (!started_) {
      started_ = true;
    } else {
      // Odometer increment over the row-major entry string, last entry fastest.
      std::size_t i = current_.size();
      while (i > 0) {
        --i;
        if (++current_[i] < q_) break;
        current_[i] = 0;
        if (i == 0) {
          done_ = true;
          return false;
        }
      }
    }
    if (rank_mod_p(current_, n_, n_, q_) == n_) return true;
  }
  return false;
}

}  // namespace lfrm
