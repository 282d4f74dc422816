#pragma once

// Seeded randomness: a counter-based stream keyed by a derivation path, Haar
// samples of O_F and GL(n, O_F), corners of the random matrices attached to
// Delta and Omega parameters, and orbital pushforwards.

#include <cstdint>
#include <string_view>

#include "lfrm/matalg.hpp"
#include "lfrm/params.hpp"

namespace lfrm {

// A draw is a pure function of (seed, path, counter). Streams are cheap values;
// derive() extends the path, so disjoint paths never share draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed) {}

  RandomStream derive(std::uint64_t component) const;
  RandomStream derive(std::string_view label) const;

  std::uint64_t next_u64();
  // Uniform on [0, n), n >= 1, without modulo bias.
  std::uint64_t uniform_below(std::uint64_t n);
  // Uniform on [0, 1) with 53 random bits.
  double uniform_real();

  std::uint64_t seed() const { return seed_; }

 private:
  RandomStream(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo)
      : seed_(seed), hi_(hi), lo_(lo) {}

  std::uint64_t seed_;
  std::uint64_t hi_ = 0;
  std::uint64_t lo_ = 0;
  std::uint64_t counter_ = 0;
};

// Haar-uniform element of O_F carrying N significant digits: leading zero
// digits are drawn until a nonzero one appears, then N - 1 more.
FieldElement uniform_integer(const FieldParams& f, RandomStream& rng);
// Haar-uniform element of O_F with the given residue.
FieldElement uniform_integer_with_residue(const FieldParams& f, std::uint32_t residue,
                                          RandomStream& rng);

// T + V with T uniform on GL(n, C_q) by rejection and V uniform on
// Mat(n, varpi O_F). `attempts` receives the number of residue matrices drawn.
MatF haar_gl(const FieldParams& f, int n, RandomStream& rng, int* attempts = nullptr);

// Uniform n x n matrix over O_F (symmetric: upper triangle drawn, mirrored).
MatF uniform_matrix(const FieldParams& f, int rows, int cols, RandomStream& rng);
MatF uniform_symmetric(const FieldParams& f, int n, RandomStream& rng);

// Top-left n x n corner of the random matrix attached to a Delta parameter:
// one rank-one term varpi^-k_m X Y^t per head entry plus varpi^-k Z for a
// constant tail.
MatF sample_mu_corner(const FieldParams& f, const DeltaParam& p, int n, RandomStream& rng);
// Symmetric corner: sum varpi^-k_m X X^t + eps sum varpi^-k'_m Y Y^t + varpi^-k H.
MatF sample_nu_corner(const FieldParams& f, const OmegaParam& p, int n, RandomStream& rng);

enum class PushKind { TwoSided, Congruence };

// TwoSided: g1 X g2 for independent Haar g1, g2. Congruence: g X g^t.
MatF orbital_push(const MatF& X, PushKind kind, RandomStream& rng);

// Parameter generators over the test window: entries in [-3, 5], head length
// at most 4, k in {-inf} u [-4, 2].
DeltaParam random_delta(RandomStream& rng);
OmegaParam random_omega(RandomStream& rng);

}  // namespace lfrm
