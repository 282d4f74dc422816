#include "lfrm/matalg.hpp"

#include <algorithm>
#include <numeric>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "matalg";

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
  if (a == kInfiniteValuation || b == kInfiniteValuation) return kInfiniteValuation;
  return a + b;
}

// The level at which a cancelled entry is accepted as zero.
std::int64_t zero_threshold(const MatF& A) {
  return sat_add(min_valuation(A), A.params().precision - kZeroSlack);
}

// x - y, where full cancellation must be guaranteed down to `threshold`.
FieldElement sub_guarded(const FieldElement& x, const FieldElement& y, std::int64_t threshold) {
  std::int64_t cap = 0;
  FieldElement d = FieldElement::sub(x, y, Cancellation::Flush, &cap);
  if (d.is_zero() && !(x.is_zero() && y.is_zero()) && cap < threshold) {
    raise(Errc::PrecisionExhausted, kModule,
          "entry cancelled to 0 mod varpi^" + std::to_string(cap) +
              ", below the zero threshold varpi^" + std::to_string(threshold));
  }
  return d;
}

FieldElement add_flush(const FieldElement& x, const FieldElement& y) {
  return FieldElement::add(x, y, Cancellation::Flush);
}

// Product together with the absolute precision of every entry: the minimum
// over the summands, which survives even when the sum cancels.
struct CappedProduct {
  MatF value;
  std::vector<std::int64_t> cap;
};

CappedProduct mul_capped(const MatF& a, const MatF& b) {
  CappedProduct out{MatF(a.params(), a.rows(), b.cols()), {}};
  out.cap.assign(static_cast<std::size_t>(a.rows()) * b.cols(), kInfiniteValuation);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      FieldElement acc = FieldElement::zero(a.params());
      std::int64_t cap = kInfiniteValuation;
      for (int k = 0; k < a.cols(); ++k) {
        const FieldElement t = a(i, k) * b(k, j);
        if (t.is_zero()) {
          // an exact zero factor keeps the term exact; otherwise record the window
          continue;
        }
        cap = std::min(cap, t.absolute_precision());
        acc = add_flush(acc, t);
      }
      out.value(i, j) = acc;
      out.cap[static_cast<std::size_t>(i) * b.cols() + j] = cap;
    }
  }
  return out;
}

// x and y agree in every digit below varpi^m.
bool agree_below(const FieldElement& x, const FieldElement& y, std::int64_t m) {
  if (x.is_zero() && y.is_zero()) return true;
  std::int64_t lo = std::min(x.is_zero() ? kInfiniteValuation : x.valuation(),
                             y.is_zero() ? kInfiniteValuation : y.valuation());
  for (std::int64_t t = lo; t < m; ++t) {
    if (x.digit_at(t) != y.digit_at(t)) return false;
  }
  return true;
}

// Units a, b with a^2 + b^2 = e, for a unit e (p odd).
std::pair<FieldElement, FieldElement> sum_of_two_squares(const FieldElement& e) {
  const FieldParams& f = e.params();
  for (std::uint32_t b0 = 0; b0 < f.p; ++b0) {
    const FieldElement b = FieldElement::from_int(f, b0);
    const FieldElement rest = FieldElement::sub(e, b * b, Cancellation::Flush);
    if (rest.is_zero() || rest.valuation() != 0) continue;
    if (auto a = hensel_sqrt(rest)) return {*a, b};
  }
  raise(Errc::InvalidParam, kModule, "no representation as a sum of two squares");
}

bool recomposes_capped(const CappedProduct& r, const MatF& A) {
  const std::int64_t threshold = zero_threshold(A);
  for (int i = 0; i < A.rows(); ++i) {
    for (int j = 0; j < A.cols(); ++j) {
      const std::int64_t m =
          std::min(r.cap[static_cast<std::size_t>(i) * A.cols() + j], A(i, j).absolute_precision());
      if (m < threshold) return false;
      if (m == kInfiniteValuation) {
        if (!(r.value(i, j) == A(i, j))) return false;
        continue;
      }
      if (!agree_below(r.value(i, j), A(i, j), m)) return false;
    }
  }
  return true;
}

}  // namespace

// ---- MatF ------------------------------------------------------------------------

MatF::MatF(const FieldParams& f, int rows, int cols) : f_(f), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) raise(Errc::DimensionMismatch, kModule, "negative dimension");
  e_.assign(static_cast<std::size_t>(rows) * cols, FieldElement::zero(f));
}

MatF MatF::identity(const FieldParams& f, int n) {
  MatF m(f, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = FieldElement::one(f);
  return m;
}

MatF MatF::diagonal(const FieldParams& f, std::span<const FieldElement> d) {
  const int n = static_cast<int>(d.size());
  MatF m(f, n, n);
  for (int i = 0; i < n; ++i) m(i, i) = d[i];
  return m;
}

MatF MatF::from_entries(const FieldParams& f, int rows, int cols,
                        std::vector<FieldElement> entries) {
  if (entries.size() != static_cast<std::size_t>(rows) * cols) {
    raise(Errc::DimensionMismatch, kModule, "entry count does not match rows * cols");
  }
  for (const auto& x : entries) {
    if (!(x.params() == f)) raise(Errc::FieldMismatch, kModule, "entry from another field");
  }
  MatF m(f, rows, cols);
  m.e_ = std::move(entries);
  return m;
}

MatF MatF::transpose() const {
  MatF t(f_, cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

void MatF::swap_rows(int i, int j) {
  if (i == j) return;
  for (int k = 0; k < cols_; ++k) std::swap((*this)(i, k), (*this)(j, k));
}

void MatF::swap_cols(int i, int j) {
  if (i == j) return;
  for (int k = 0; k < rows_; ++k) std::swap((*this)(k, i), (*this)(k, j));
}

MatF operator*(const MatF& a, const MatF& b) {
  if (a.cols_ != b.rows_) raise(Errc::DimensionMismatch, kModule, "inner dimensions differ");
  if (!(a.f_ == b.f_)) raise(Errc::FieldMismatch, kModule, "matrices over different fields");
  return mul_capped(a, b).value;
}

MatF operator+(const MatF& a, const MatF& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    raise(Errc::DimensionMismatch, kModule, "shapes differ");
  }
  MatF out(a.f_, a.rows_, a.cols_);
  for (std::size_t k = 0; k < a.e_.size(); ++k) out.e_[k] = add_flush(a.e_[k], b.e_[k]);
  return out;
}

bool operator==(const MatF& a, const MatF& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.f_ == b.f_ && a.e_ == b.e_;
}

MatF congruence(const MatF& g, const MatF& X) {
  if (!X.square() || g.cols() != X.rows()) {
    raise(Errc::DimensionMismatch, kModule, "congruence needs g (m x n) and square X (n x n)");
  }
  const MatF gx = g * X;
  const int m = g.rows();
  MatF out(g.params(), m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      FieldElement acc = FieldElement::zero(g.params());
      for (int k = 0; k < g.cols(); ++k) acc = add_flush(acc, gx(i, k) * g(j, k));
      out(i, j) = acc;
      out(j, i) = acc;
    }
  }
  return out;
}

// ---- scalar functions ------------------------------------------------------------

FieldElement trace(const MatF& a) {
  if (!a.square()) raise(Errc::DimensionMismatch, kModule, "trace of a non-square matrix");
  FieldElement acc = FieldElement::zero(a.params());
  for (int i = 0; i < a.rows(); ++i) acc = add_flush(acc, a(i, i));
  return acc;
}

FieldElement det(const MatF& a) {
  if (!a.square()) raise(Errc::DimensionMismatch, kModule, "det of a non-square matrix");
  const int n = a.rows();
  MatF w = a;
  FieldElement acc = FieldElement::one(a.params());
  for (int t = 0; t < n; ++t) {
    int piv = -1;
    for (int i = t; i < n; ++i) {
      if (w(i, t).is_zero()) continue;
      if (piv < 0 || w(i, t).valuation() < w(piv, t).valuation()) piv = i;
    }
    if (piv < 0) return FieldElement::zero(a.params());
    if (piv != t) {
      w.swap_rows(piv, t);
      acc = -acc;
    }
    const FieldElement inv = w(t, t).inverse();
    for (int i = t + 1; i < n; ++i) {
      if (w(i, t).is_zero()) continue;
      const FieldElement m = w(i, t) * inv;
      for (int k = t + 1; k < n; ++k) {
        w(i, k) = FieldElement::sub(w(i, k), m * w(t, k), Cancellation::Flush);
      }
      w(i, t) = FieldElement::zero(a.params());
    }
    acc = acc * w(t, t);
  }
  return acc;
}

bool is_gl(const MatF& a) {
  if (!a.square()) return false;
  const int n = a.rows();
  std::vector<std::uint32_t> res(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!a(i, j).is_integral()) return false;
      res[static_cast<std::size_t>(i) * n + j] = reduce(a(i, j)).value;
    }
  }
  return rank_mod_p(res, n, n, a.params().p) == n;
}

bool is_symmetric(const MatF& a) {
  if (!a.square()) return false;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i + 1; j < a.cols(); ++j) {
      if (!(a(i, j) == a(j, i))) return false;
    }
  }
  return true;
}

std::int64_t min_valuation(const MatF& a) {
  std::int64_t v = kInfiniteValuation;
  for (const auto& x : a.entries()) {
    if (!x.is_zero()) v = std::min(v, x.valuation());
  }
  return v;
}

bool equal_to_precision(const MatF& a, const MatF& b, std::int64_t min_power) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) {
      const std::int64_t m = std::min(a(i, j).absolute_precision(), b(i, j).absolute_precision());
      if (m < min_power) return false;
      if (m == kInfiniteValuation) {
        if (!(a(i, j) == b(i, j))) return false;
      } else if (!agree_below(a(i, j), b(i, j), m)) {
        return false;
      }
    }
  }
  return true;
}

// ---- Smith normal form -----------------------------------------------------------

SNFResult smith_normal_form(const MatF& A) {
  if (!A.square()) raise(Errc::DimensionMismatch, kModule, "SNF needs a square matrix");
  const FieldParams& f = A.params();
  const int n = A.rows();
  const std::int64_t threshold = zero_threshold(A);
  // Invariant: A = a * w * b.
  MatF w = A, a = MatF::identity(f, n), b = MatF::identity(f, n);
  std::vector<std::int64_t> sing(n, kMinusInfinity);

  for (int t = 0; t < n; ++t) {
    int pi = -1, pj = -1;
    for (int i = t; i < n; ++i) {
      for (int j = t; j < n; ++j) {
        const auto& x = w(i, j);
        if (x.is_zero()) continue;
        if (pi < 0 || x.valuation() < w(pi, pj).valuation()) {
          pi = i;
          pj = j;
        }
      }
    }
    if (pi < 0) break;
    w.swap_rows(t, pi);
    a.swap_cols(t, pi);
    w.swap_cols(t, pj);
    b.swap_rows(t, pj);

    const std::int64_t v = w(t, t).valuation();
    const FieldElement u = w(t, t).unit_part();
    const FieldElement u_inv = u.inverse();
    for (int k = t; k < n; ++k) w(t, k) = w(t, k) * u_inv;
    for (int k = 0; k < n; ++k) a(k, t) = a(k, t) * u;

    const FieldElement pivot_inv = w(t, t).inverse();
    for (int i = t + 1; i < n; ++i) {
      if (w(i, t).is_zero()) continue;
      const FieldElement m = w(i, t) * pivot_inv;
      for (int k = t + 1; k < n; ++k) w(i, k) = sub_guarded(w(i, k), m * w(t, k), threshold);
      w(i, t) = FieldElement::zero(f);
      for (int k = 0; k < n; ++k) a(k, t) = add_flush(a(k, t), m * a(k, i));
    }
    for (int j = t + 1; j < n; ++j) {
      if (w(t, j).is_zero()) continue;
      const FieldElement m = w(t, j) * pivot_inv;
      w(t, j) = FieldElement::zero(f);
      for (int k = 0; k < n; ++k) b(t, k) = add_flush(b(t, k), m * b(j, k));
    }
    sing[t] = -v;
  }
  return {std::move(a), std::move(sing), std::move(b)};
}

std::vector<std::int64_t> singular_numbers(const MatF& A) { return smith_normal_form(A).sing; }

std::int64_t resolution_level(const MatF& A) { return zero_threshold(A); }

bool same_singular_numbers(std::span<const std::int64_t> s1, std::span<const std::int64_t> s2,
                           std::int64_t level) {
  if (s1.size() != s2.size()) return false;
  const auto resolved = [&](std::int64_t k) { return k != kMinusInfinity && -k < level; };
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if ((resolved(s1[i]) || resolved(s2[i])) && s1[i] != s2[i]) return false;
  }
  return true;
}

MatF singular_diagonal(const FieldParams& f, std::span<const std::int64_t> sing) {
  std::vector<FieldElement> d;
  d.reserve(sing.size());
  for (const auto k : sing) {
    d.push_back(k == kMinusInfinity ? FieldElement::zero(f) : FieldElement::uniformizer_power(f, -k));
  }
  return MatF::diagonal(f, d);
}

bool recomposes(const SNFResult& r, const MatF& A) {
  const MatF left = r.a * singular_diagonal(A.params(), r.sing);
  return recomposes_capped(mul_capped(left, r.b), A);
}

// ---- symmetric diagonalization -------------------------------------------------

ClassKey class_key(const FieldElement& rep) {
  if (rep.is_zero()) return {kInfiniteValuation, false};
  return {rep.valuation(), rep.digits()[0] != 1};
}

SymDiagResult sym_diagonalize(const MatF& A) {
  const FieldParams& f = A.params();
  f.require_non_dyadic(kModule);
  if (!A.square()) raise(Errc::DimensionMismatch, kModule, "needs a square matrix");
  if (!is_symmetric(A)) raise(Errc::NotSymmetric, kModule, "matrix is not exactly symmetric");
  const int n = A.rows();
  const std::int64_t threshold = zero_threshold(A);
  // Invariant: A = g * w * g^t, w symmetric.
  MatF w = A, g = MatF::identity(f, n);

  const auto swap_index = [&](int i, int j) {
    w.swap_rows(i, j);
    w.swap_cols(i, j);
    g.swap_cols(i, j);
  };

  for (int t = 0; t < n; ++t) {
    std::int64_t vmin = kInfiniteValuation;
    for (int i = t; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        if (!w(i, j).is_zero()) vmin = std::min(vmin, w(i, j).valuation());
      }
    }
    if (vmin == kInfiniteValuation) break;

    int diag_at = -1;
    for (int i = t; i < n && diag_at < 0; ++i) {
      if (!w(i, i).is_zero() && w(i, i).valuation() == vmin) diag_at = i;
    }
    if (diag_at < 0) {
      // No diagonal entry is maximal: congruence by I + e_{i0 j0} makes one.
      int i0 = -1, j0 = -1;
      for (int i = t; i < n && i0 < 0; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (!w(i, j).is_zero() && w(i, j).valuation() == vmin) {
            i0 = i;
            j0 = j;
            break;
          }
        }
      }
      for (int k = 0; k < n; ++k) w(i0, k) = add_flush(w(i0, k), w(j0, k));
      for (int k = 0; k < n; ++k) w(k, i0) = add_flush(w(k, i0), w(k, j0));
      for (int k = 0; k < n; ++k) w(i0, k) = w(k, i0);  // exact symmetry
      for (int k = 0; k < n; ++k) g(k, j0) = FieldElement::sub(g(k, j0), g(k, i0), Cancellation::Flush);
      diag_at = i0;
    }
    swap_index(t, diag_at);

    const FieldElement pivot_inv = w(t, t).inverse();
    for (int i = t + 1; i < n; ++i) {
      if (w(i, t).is_zero()) continue;
      const FieldElement m = w(i, t) * pivot_inv;
      for (int k = i; k < n; ++k) {
        w(i, k) = sub_guarded(w(i, k), m * w(t, k), threshold);
        w(k, i) = w(i, k);
      }
      for (int k = 0; k < n; ++k) g(k, t) = add_flush(g(k, t), m * g(k, i));
    }
    // Rows below were reduced with the old row t; clear the pivot row and column.
    for (int i = t + 1; i < n; ++i) {
      w(i, t) = FieldElement::zero(f);
      w(t, i) = FieldElement::zero(f);
    }
  }

  // Square classes: w_tt = s^2 * rep, so fold s into column t of g.
  std::vector<FieldElement> reps;
  reps.reserve(n);
  for (int t = 0; t < n; ++t) {
    const SquareClass sc = square_class(w(t, t));
    reps.push_back(sc.rep);
    for (int k = 0; k < n; ++k) g(k, t) = g(k, t) * sc.witness;
  }

  // Two eps-classes at one level become two 1-classes: with a^2 + b^2 = eps,
  // h = [[a, -b], [b, a]] has h h^t = eps I. Afterwards each level carries at
  // most one eps, so the class list is a congruence invariant.
  const auto [ca, cb] = sum_of_two_squares(nonsquare_unit(f));
  for (int s = 0; s < n; ++s) {
    if (!class_key(reps[s]).epsilon) continue;
    for (int t = s + 1; t < n; ++t) {
      if (!class_key(reps[t]).epsilon || reps[t].valuation() != reps[s].valuation()) continue;
      for (int k = 0; k < n; ++k) {
        const FieldElement gs = g(k, s), gt = g(k, t);
        g(k, s) = add_flush(ca * gs, cb * gt);
        g(k, t) = FieldElement::sub(ca * gt, cb * gs, Cancellation::Flush);
      }
      reps[s] = FieldElement::uniformizer_power(f, reps[s].valuation());
      reps[t] = FieldElement::uniformizer_power(f, reps[t].valuation());
      break;
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return class_key(reps[x]) < class_key(reps[y]); });
  MatF gs(f, n, n);
  SymDiagResult out{MatF(f, n, n), {}, {}};
  for (int c = 0; c < n; ++c) {
    for (int k = 0; k < n; ++k) gs(k, c) = g(k, order[c]);
    out.diag.push_back(reps[order[c]]);
    out.classes.push_back(class_key(reps[order[c]]));
  }
  out.g = std::move(gs);
  return out;
}

bool same_classes(std::span<const ClassKey> c1, std::span<const ClassKey> c2, std::int64_t level) {
  const auto keep = [&](std::span<const ClassKey> c) {
    std::vector<ClassKey> out;
    for (const auto& k : c) {
      if (k.ord < level) out.push_back(k);
    }
    return out;
  };
  return c1.size() == c2.size() && keep(c1) == keep(c2);
}

bool recomposes(const SymDiagResult& r, const MatF& A) {
  const MatF left = r.g * MatF::diagonal(A.params(), r.diag);
  return recomposes_capped(mul_capped(left, r.g.transpose()), A);
}

}  // namespace lfrm
