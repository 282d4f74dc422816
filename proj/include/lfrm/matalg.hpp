#pragma once

// Dense matrices over F, Smith normal form over O_F and congruence
// diagonalization of symmetric matrices.

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "lfrm/localfield.hpp"

namespace lfrm {

class MatF {
 public:
  MatF(const FieldParams& f, int rows, int cols);  // zero matrix

  static MatF identity(const FieldParams& f, int n);
  static MatF diagonal(const FieldParams& f, std::span<const FieldElement> d);
  static MatF from_entries(const FieldParams& f, int rows, int cols,
                           std::vector<FieldElement> entries);

  const FieldParams& params() const { return f_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  FieldElement& operator()(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  const FieldElement& operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * cols_ + j];
  }
  std::span<const FieldElement> entries() const { return e_; }

  MatF transpose() const;
  void swap_rows(int i, int j);
  void swap_cols(int i, int j);

  friend MatF operator*(const MatF& a, const MatF& b);
  friend MatF operator+(const MatF& a, const MatF& b);
  friend bool operator==(const MatF& a, const MatF& b);

 private:
  FieldParams f_;
  int rows_;
  int cols_;
  std::vector<FieldElement> e_;
};

// g * X * g^t for symmetric X, computed on the upper triangle and mirrored so
// the result is exactly symmetric.
MatF congruence(const MatF& g, const MatF& X);

FieldElement trace(const MatF& a);
FieldElement det(const MatF& a);
// Entries in O_F and the reduction mod varpi invertible (|det| = 1).
bool is_gl(const MatF& a);
bool is_symmetric(const MatF& a);

// Minimum entry valuation; kInfiniteValuation for the zero matrix.
std::int64_t min_valuation(const MatF& a);

// Entrywise agreement: every difference cancels to exact zero with guaranteed
// valuation >= min_power (all known digits equal).
bool equal_to_precision(const MatF& a, const MatF& b, std::int64_t min_power);

// Singular numbers use this value for -infinity.
inline constexpr std::int64_t kMinusInfinity = std::numeric_limits<std::int64_t>::min();

// Cancellations in the decompositions count as zero only when the guaranteed
// valuation is at least min_valuation(A) + precision - kZeroSlack.
inline constexpr int kZeroSlack = 2;

struct SNFResult {
  MatF a;
  std::vector<std::int64_t> sing;  // non-increasing, kMinusInfinity for zero diagonal entries
  MatF b;
};

SNFResult smith_normal_form(const MatF& A);
std::vector<std::int64_t> singular_numbers(const MatF& A);
MatF singular_diagonal(const FieldParams& f, std::span<const std::int64_t> sing);
// Valuations below this level are determined by the known digits of every
// GL(n, O_F) x GL(n, O_F) push of A: min_valuation(A) + precision - kZeroSlack.
std::int64_t resolution_level(const MatF& A);
// Equal at every entry that lies below `level` on either side; entries at or
// beyond it (including -infinity) carry no information and are skipped.
bool same_singular_numbers(std::span<const std::int64_t> s1, std::span<const std::int64_t> s2,
                           std::int64_t level);
// a * diag(varpi^-k) * b recomposes A at the zero threshold.
bool recomposes(const SNFResult& r, const MatF& A);

// Key of a square class in T: (ord, carries epsilon); ord = kInfiniteValuation for 0.
struct ClassKey {
  std::int64_t ord;
  bool epsilon;
  friend auto operator<=>(const ClassKey&, const ClassKey&) = default;
};

ClassKey class_key(const FieldElement& rep);

struct SymDiagResult {
  MatF g;
  // Representatives in T sorted by |.| descending, 1-classes before eps-classes,
  // with at most one eps-class per valuation.
  std::vector<FieldElement> diag;
  std::vector<ClassKey> classes;
};

SymDiagResult sym_diagonalize(const MatF& A);
// Class lists agree on every class with ord below `level`.
bool same_classes(std::span<const ClassKey> c1, std::span<const ClassKey> c2, std::int64_t level);
bool recomposes(const SymDiagResult& r, const MatF& A);

}  // namespace lfrm
