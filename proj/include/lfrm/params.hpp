#pragma once

// Finite descriptions of the parameter spaces for the two-sided invariant
// measures (Delta) and the congruence-invariant symmetric measures (Omega),
// with their closed-form characteristic functions and semigroup operations.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfrm/characters.hpp"

namespace lfrm {

// k_1 >= k_2 >= ... : a finite head followed by k, k, k, ... (Constant) or by
// -infinity forever (tail = nullopt).
struct DeltaParam {
  std::vector<std::int64_t> head;
  std::optional<std::int64_t> tail;

  // Drops trailing head entries equal to the constant tail. Does not sort.
  static DeltaParam make(std::vector<std::int64_t> head, std::optional<std::int64_t> tail);

  // j-th term of the sequence (0-based); nullopt is -infinity.
  std::optional<std::int64_t> term(std::size_t j) const;

  friend bool operator==(const DeltaParam&, const DeltaParam&) = default;
};

// (k, kk, kkp): kk non-increasing, kkp strictly decreasing, all entries > k.
// k = nullopt is -infinity.
struct OmegaParam {
  std::optional<std::int64_t> k;
  std::vector<std::int64_t> kk;
  std::vector<std::int64_t> kkp;

  friend bool operator==(const OmegaParam&, const OmegaParam&) = default;
};

struct Validation {
  bool ok = true;
  std::string message;  // first violated clause when !ok
};

Validation validate(const DeltaParam& p);
Validation validate(const OmegaParam& p);

// Characteristic function of mu at varpi^-ell e_11.
CharValue char_mu(const DeltaParam& p, std::int64_t ell);
std::vector<CharValue> char_mu(const DeltaParam& p, std::span<const std::int64_t> ells);
// At diag(varpi^-ell_1, ..., varpi^-ell_r): the product over components.
CharValue char_mu_diag(const DeltaParam& p, std::span<const std::int64_t> ells);

// Characteristic function of nu at x e_11.
CharValue char_nu(const OmegaParam& p, const FieldElement& x);
std::vector<CharValue> char_nu(const OmegaParam& p, std::span<const FieldElement> xs);
CharValue char_nu_diag(const OmegaParam& p, std::span<const FieldElement> xs);
// The same product formula applied to arbitrary (possibly non-canonical) lists.
CharValue char_nu_raw(std::optional<std::int64_t> k, std::span<const std::int64_t> kk,
                      std::span<const std::int64_t> kkp, const FieldElement& x);

DeltaParam oplus(const DeltaParam& a, const DeltaParam& b);
OmegaParam oplus(const OmegaParam& a, const OmegaParam& b);

// Drops entries <= k and moves each pair of equal kkp entries into kk.
OmegaParam canonicalize_omega(std::optional<std::int64_t> k, std::vector<std::int64_t> kk_raw,
                              std::vector<std::int64_t> kkp_raw);

// ell with char_mu(a, ell) != char_mu(b, ell): 1 - k_j0 at the first index j0
// where the sequences differ, k_j0 taken from the larger side.
std::int64_t distinguishing_argument(const DeltaParam& a, const DeltaParam& b);

// {u varpi^-ell : ell in [-4, 6], u in {1, eps}}.
std::vector<FieldElement> omega_probe_grid(const FieldParams& f);

// Head k_1..k_depth of a rule j -> k_j (j >= 1), followed by -infinity.
DeltaParam truncate_rule(const std::function<std::int64_t(int)>& rule, int depth);

std::string to_string(const DeltaParam& p);
std::string to_string(const OmegaParam& p);

}  // namespace lfrm
