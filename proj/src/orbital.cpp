#include "lfrm/orbital.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <cmath>
#include <thread>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "orbital";

// Phase tables are precomputed up to this many residues.
constexpr std::uint64_t kPhaseTableLimit = 1u << 20;

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

// O_F / varpi^L with elements packed as sum d_k p^k, d_k in [0, p).
struct TruncRing {
  Family family;
  std::uint32_t p;
  int L;
  std::uint64_t mod;  // p^L

  TruncRing(const FieldParams& f, int levels) : family(f.family), p(f.p), L(levels), mod(ipow(f.p, levels)) {}

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    if (family == Family::PAdic) {
      const std::uint64_t s = a + b;
      return s >= mod ? s - mod : s;
    }
    std::uint64_t out = 0, scale = 1;
    for (int k = 0; k < L; ++k) {
      out += ((a % p + b % p) % p) * scale;
      a /= p;
      b /= p;
      scale *= p;
    }
    return out;
  }

  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    if (family == Family::PAdic) {
      return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % mod);
    }
    std::array<std::uint32_t, 64> da{}, db{}, dc{};
    for (int k = 0; k < L; ++k) {
      da[k] = a % p;
      db[k] = b % p;
      a /= p;
      b /= p;
    }
    for (int i = 0; i < L; ++i) {
      if (da[i] == 0) continue;
      for (int j = 0; i + j < L; ++j) dc[i + j] = (dc[i + j] + da[i] * db[j]) % p;
    }
    std::uint64_t out = 0;
    for (int k = L - 1; k >= 0; --k) out = out * p + dc[k];
    return out;
  }

  // times varpi^s; shifting the digit string is multiplication by p^s in both families
  std::uint64_t shift(std::uint64_t a, int s) const {
    if (s >= L) return 0;
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * ipow(p, s)) % mod);
  }

  // Numerator c with chi(varpi^-L y) = exp(2 pi i c / p^L).
  std::uint64_t phase(std::uint64_t y) const {
    if (family == Family::PAdic) return y;
    const std::uint64_t top = mod / p;
    return (y / top) * top;
  }

  std::uint64_t pack(const FieldElement& unit, int digits) const {
    std::uint64_t out = 0;
    for (int k = std::min(digits, L) - 1; k >= 0; --k) out = out * p + unit.digits()[k];
    return out;
  }
};

std::int64_t negative_part(const FieldElement& x) {
  return x.is_zero() ? 0 : std::max<std::int64_t>(0, -x.valuation());
}

// Coefficients c_ij = varpi^{L + v(a_i x_j)} unit(a_i x_j) mod varpi^L of the
// trace, for the (i, j) whose product is not integral.
struct TraceForm {
  int n = 0, r = 0, L = 0;
  std::vector<std::uint64_t> coef;  // r x n
  std::vector<char> active;
};

TraceForm trace_form(const FieldParams& f, std::span<const FieldElement> D,
                     std::span<const FieldElement> A, int n) {
  if (n < 1) raise(Errc::InvalidParam, kModule, "dimension must be positive");
  if (static_cast<int>(D.size()) > n || static_cast<int>(A.size()) > n) {
    raise(Errc::DimensionMismatch, kModule, "D and A must have at most n entries");
  }
  for (const auto* v : {&D, &A}) {
    for (const auto& x : *v) {
      if (!(x.params() == f)) raise(Errc::FieldMismatch, kModule, "entries from different fields");
    }
  }
  TraceForm t;
  t.n = n;
  t.r = static_cast<int>(A.size());
  std::int64_t low = 0;
  for (const auto& a : A) {
    for (const auto& x : D) {
      if (a.is_zero() || x.is_zero()) continue;
      low = std::min(low, a.valuation() + x.valuation());
    }
  }
  if (-low > std::min<std::int64_t>(f.precision, max_phase_depth(f.p))) {
    raise(Errc::PrecisionExhausted, kModule,
          "trace needs " + std::to_string(-low) + " negative digits, beyond the precision window");
  }
  t.L = static_cast<int>(-low);
  t.coef.assign(static_cast<std::size_t>(t.r) * n, 0);
  t.active.assign(static_cast<std::size_t>(t.r) * n, 0);
  if (t.L == 0) return t;
  const TruncRing ring(f, t.L);
  for (int i = 0; i < t.r; ++i) {
    for (std::size_t j = 0; j < D.size(); ++j) {
      const FieldElement& a = A[i];
      const FieldElement& x = D[j];
      if (a.is_zero() || x.is_zero()) continue;
      const std::int64_t v = a.valuation() + x.valuation();
      if (v >= 0) continue;
      const int need = static_cast<int>(-v);
      if (a.relative_precision() < need || x.relative_precision() < need) {
        raise(Errc::PrecisionExhausted, kModule, "diagonal entries carry too few digits");
      }
      const std::uint64_t u = ring.mul(ring.pack(a, need), ring.pack(x, need));
      t.coef[i * n + j] = ring.shift(u, static_cast<int>(t.L + v));
      t.active[i * n + j] = 1;
    }
  }
  return t;
}

class PhaseTable {
 public:
  explicit PhaseTable(std::uint64_t mod) : mod_(mod) {
    if (mod <= kPhaseTableLimit) {
      table_.resize(mod);
      for (std::uint64_t c = 0; c < mod; ++c) table_[c] = unit_phase(c, mod);
    }
  }
  std::complex<double> operator()(std::uint64_t c) const {
    return table_.empty() ? unit_phase(c, mod_) : table_[c];
  }

 private:
  std::uint64_t mod_;
  std::vector<std::complex<double>> table_;
};

bool full_row_rank(std::vector<std::uint32_t>& m, int rows, int cols, std::uint32_t p) {
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int i = rank; i < rows; ++i) {
      if (m[i * cols + c] != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    if (piv != rank) {
      for (int j = 0; j < cols; ++j) std::swap(m[piv * cols + j], m[rank * cols + j]);
    }
    const std::uint32_t inv = static_cast<std::uint32_t>(residue::inv_mod(m[rank * cols + c], p));
    for (int i = rank + 1; i < rows; ++i) {
      const std::uint32_t factor = (m[i * cols + c] * inv) % p;
      if (factor == 0) continue;
      for (int j = c; j < cols; ++j) {
        m[i * cols + j] = (m[i * cols + j] + (p - factor) * m[rank * cols + j]) % p;
      }
    }
    ++rank;
  }
  return rank == rows;
}

// First r rows of a Haar element of GL(n, O_F) modulo varpi^L: residues
// uniform among rank-r matrices, lifted by uniform varpi O_F entries. Lifts are
// only drawn where the trace form is active.
class BlockSampler {
 public:
  BlockSampler(const TraceForm& t, std::uint32_t p)
      : t_(t), p_(p), lift_(ipow(p, std::max(t.L - 1, 0))), res_(t.r * t.n), scratch_(t.r * t.n) {}

  void draw(RandomStream& rng, std::vector<std::uint64_t>& out) {
    do {
      for (auto& x : res_) x = static_cast<std::uint32_t>(rng.uniform_below(p_));
      scratch_ = res_;
    } while (!full_row_rank(scratch_, t_.r, t_.n, p_));
    out.resize(res_.size());
    for (std::size_t k = 0; k < res_.size(); ++k) {
      out[k] = t_.active[k] ? res_[k] + static_cast<std::uint64_t>(p_) * rng.uniform_below(lift_)
                            : res_[k];
    }
  }

 private:
  const TraceForm& t_;
  std::uint32_t p_;
  std::uint64_t lift_;
  std::vector<std::uint32_t> res_, scratch_;
};

McAccumulator run_chunk(IntegralKind kind, const TraceForm& t, const TruncRing& ring,
                        const PhaseTable& phases, RandomStream rng, std::int64_t count) {
  McAccumulator acc;
  BlockSampler left(t, ring.p), right(t, ring.p);
  std::vector<std::uint64_t> g1, g2;
  for (std::int64_t s = 0; s < count; ++s) {
    left.draw(rng, g1);
    if (kind == IntegralKind::NonSym) right.draw(rng, g2);
    std::uint64_t tr = 0;
    for (std::size_t k = 0; k < g1.size(); ++k) {
      if (!t.active[k]) continue;
      const std::uint64_t y = kind == IntegralKind::NonSym ? ring.mul(g1[k], g2[k])
                                                           : ring.mul(g1[k], g1[k]);
      tr = ring.add(tr, ring.mul(t.coef[k], y));
    }
    acc.add(phases(ring.phase(tr)));
  }
  return acc;
}

FieldElement trace_sum(const FieldElement& a, const FieldElement& b) {
  return FieldElement::add(a, b, Cancellation::Flush);
}

const FieldParams& field_of(std::span<const FieldElement> D, std::span<const FieldElement> A) {
  if (!D.empty()) return D[0].params();
  if (!A.empty()) return A[0].params();
  raise(Errc::InvalidParam, kModule, "D and A are both empty");
}

}  // namespace

std::string_view to_string(IntegralKind k) { return k == IntegralKind::NonSym ? "nonsym" : "sym"; }

IntegralKind parse_integral_kind(std::string_view s) {
  if (s == "nonsym" || s == "NonSym") return IntegralKind::NonSym;
  if (s == "sym" || s == "Sym") return IntegralKind::Sym;
  raise(Errc::ParseError, kModule, "unknown integral kind '" + std::string(s) + "'");
}

// ---- statistics -----------------------------------------------------------------------

double McEstimate::stderr_total() const { return std::hypot(stderr_re, stderr_im); }

void McAccumulator::add(std::complex<double> z) {
  ++n_;
  const double dr = z.real() - mean_re_, di = z.imag() - mean_im_;
  mean_re_ += dr / double(n_);
  mean_im_ += di / double(n_);
  m2_re_ += dr * (z.real() - mean_re_);
  m2_im_ += di * (z.imag() - mean_im_);
}

void McAccumulator::merge(const McAccumulator& o) {
  if (o.n_ == 0) return;
  if (n_ == 0) {
    *this = o;
    return;
  }
  const double na = double(n_), nb = double(o.n_), nt = na + nb;
  const double dr = o.mean_re_ - mean_re_, di = o.mean_im_ - mean_im_;
  mean_re_ += dr * nb / nt;
  mean_im_ += di * nb / nt;
  m2_re_ += o.m2_re_ + dr * dr * na * nb / nt;
  m2_im_ += o.m2_im_ + di * di * na * nb / nt;
  n_ += o.n_;
}

McEstimate McAccumulator::estimate(std::uint64_t seed) const {
  McEstimate e;
  e.mean = {mean_re_, mean_im_};
  e.n_samples = n_;
  e.seed = seed;
  if (n_ >= 2) {
    const double nn = double(n_);
    e.stderr_re = std::sqrt(std::max(m2_re_, 0.0) / (nn - 1) / nn);
    e.stderr_im = std::sqrt(std::max(m2_im_, 0.0) / (nn - 1) / nn);
  }
  return e;
}

// ---- Monte Carlo ------------------------------------------------------------------------

McEstimate mc_orbital_integral(IntegralKind kind, std::span<const FieldElement> D,
                               std::span<const FieldElement> A, int n, std::int64_t n_samples,
                               const RandomStream& rng, int workers) {
  if (n_samples < 2) raise(Errc::InvalidParam, kModule, "need at least two samples");
  const FieldParams& f = field_of(D, A);
  const TraceForm t = trace_form(f, D, A, n);
  if (t.L == 0 || t.r == 0) {
    // trace in O_F: the integrand is identically 1
    McEstimate e;
    e.mean = 1.0;
    e.n_samples = n_samples;
    e.seed = rng.seed();
    return e;
  }
  const TruncRing ring(f, t.L);
  const PhaseTable phases(ring.mod);
  const std::int64_t chunks = (n_samples + kMcChunk - 1) / kMcChunk;
  std::vector<McAccumulator> parts(static_cast<std::size_t>(chunks));
  const RandomStream base = rng.derive("orbital-mc").derive(static_cast<std::uint64_t>(kind));
  const auto work = [&](int w, int stride) {
    for (std::int64_t c = w; c < chunks; c += stride) {
      const std::int64_t count = std::min(kMcChunk, n_samples - c * kMcChunk);
      parts[c] = run_chunk(kind, t, ring, phases, base.derive(static_cast<std::uint64_t>(c)), count);
    }
  };
  workers = std::clamp<int>(workers, 1, static_cast<int>(chunks));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    for (auto& th : pool) th.join();
  }
  McAccumulator total;
  for (const auto& part : parts) total.merge(part);
  return total.estimate(rng.seed());
}

McEstimate mc_orbital_integral_reference(IntegralKind kind, std::span<const FieldElement> D,
                                         std::span<const FieldElement> A, int n,
                                         std::int64_t n_samples, const RandomStream& rng) {
  const FieldParams& f = field_of(D, A);
  (void)trace_form(f, D, A, n);  // same argument checks
  McAccumulator acc;
  const RandomStream base = rng.derive("orbital-reference");
  for (std::int64_t s = 0; s < n_samples; ++s) {
    RandomStream sg = base.derive(static_cast<std::uint64_t>(s));
    RandomStream s1 = sg.derive("g1"), s2 = sg.derive("g2");
    const MatF g1 = haar_gl(f, n, s1);
    const MatF g2 = kind == IntegralKind::NonSym ? haar_gl(f, n, s2) : g1.transpose();
    FieldElement tr = FieldElement::zero(f);
    for (std::size_t i = 0; i < A.size(); ++i) {
      FieldElement entry = FieldElement::zero(f);
      for (std::size_t j = 0; j < D.size(); ++j) {
        entry = trace_sum(entry, g1(int(i), int(j)) * D[j] * g2(int(j), int(i)));
      }
      tr = trace_sum(tr, A[i] * entry);
    }
    acc.add(chi(tr));
  }
  return acc.estimate(rng.seed());
}

// ---- closed forms and bounds ------------------------------------------------------------

CharValue product_formula(IntegralKind kind, std::span<const FieldElement> D,
                          std::span<const FieldElement> A) {
  const FieldParams& f = field_of(D, A);
  if (kind == IntegralKind::Sym) f.require_non_dyadic(kModule);
  const ThetaKind tk = kind == IntegralKind::NonSym ? ThetaKind::Theta : ThetaKind::LittleTheta;
  std::vector<CharValue> factors;
  for (const auto& a : A) {
    for (const auto& x : D) {
      if (a.is_zero() || x.is_zero()) continue;
      factors.push_back(theta_closed(a * x, tk));
    }
  }
  return charvalue_product(factors);
}

ErrorBounds error_bound(IntegralKind kind, int n, int r, std::uint32_t q) {
  if (r < 0 || n < 1 || r > n) raise(Errc::InvalidParam, kModule, "need 0 <= r <= n, n >= 1");
  const auto qpow = [&](int e) {  // q^e, e may be negative
    Rational v = 1;
    for (int k = 0; k < std::abs(e); ++k) v *= q;
    return e >= 0 ? v : Rational(1) / v;
  };
  Rational s = 1;
  for (int w = 0; w < r; ++w) s *= Rational(1) - qpow(w - n);
  const Rational gap = Rational(1) - s;
  ErrorBounds b;
  if (kind == IntegralKind::NonSym) {
    b.stated = 2 * gap * gap;
    b.uam = b.stated + 2 * r * qpow(-2 * n);
    // g1 and g2 each leave the independent-uniform model with probability 1 - s
    const Rational one_row = Rational(1) - qpow(-n);
    b.corrected = 2 * (Rational(1) - s * s);
    b.corrected_uam = b.corrected + 2 * r * (Rational(1) - one_row * one_row);
  } else {
    b.stated = 2 * gap;
    b.uam = b.stated + 2 * r * qpow(-n);
    b.corrected = b.stated;
    b.corrected_uam = b.uam;
  }
  return b;
}

int stability_level(std::span<const FieldElement> D, std::span<const FieldElement> A) {
  std::int64_t kd = 0, ka = 0;
  for (const auto& x : D) kd = std::max(kd, negative_part(x));
  for (const auto& a : A) ka = std::max(ka, negative_part(a));
  return static_cast<int>(kd + ka);
}

// ---- exact enumeration ------------------------------------------------------------------

std::complex<double> exact_orbital_integral(IntegralKind kind, std::span<const FieldElement> D,
                                            std::span<const FieldElement> A, int n, int level) {
  const FieldParams& f = field_of(D, A);
  const TraceForm t = trace_form(f, D, A, n);
  const int need = stability_level(D, A);
  if (level < need) {
    raise(Errc::LevelTooLow, kModule,
          "level " + std::to_string(level) + " is below the stability level " + std::to_string(need));
  }
  if (t.L == 0 || t.r == 0) return 1.0;

  const double gl = counting(n, n, f.q).gl_count.convert_to<double>();
  const double lifts_per = std::pow(double(f.q), double(level - 1) * n * n);
  const double elements = gl * lifts_per;
  const double work = kind == IntegralKind::NonSym ? elements * elements : elements;
  if (work > kExactBudget || elements * n * n > 5e7) {
    raise(Errc::TooLarge, kModule, "enumeration of GL(n, O/varpi^m) exceeds the budget");
  }

  const TruncRing ring(f, t.L);
  const std::uint64_t lift_count = static_cast<std::uint64_t>(lifts_per);
  const std::uint64_t lift_digits = ipow(f.p, level - 1);
  const std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<std::uint64_t> all;
  all.reserve(static_cast<std::size_t>(elements) * nn);
  GlEnumerator en(n, f.q);
  while (en.next()) {
    const auto res = en.current();
    for (std::uint64_t li = 0; li < lift_count; ++li) {
      std::uint64_t code = li;
      for (std::size_t k = 0; k < nn; ++k) {
        const std::uint64_t hi = code % lift_digits;
        code /= lift_digits;
        const unsigned __int128 v = res[k] + static_cast<unsigned __int128>(f.p) * hi;
        all.push_back(static_cast<std::uint64_t>(v % ring.mod));
      }
    }
  }
  const std::size_t count = all.size() / nn;

  std::vector<std::uint64_t> hist(ring.mod <= kPhaseTableLimit ? ring.mod : 0);
  std::complex<double> direct = 0;
  const auto record = [&](std::uint64_t tr) {
    if (!hist.empty()) {
      ++hist[ring.phase(tr)];
    } else {
      direct += unit_phase(ring.phase(tr), ring.mod);
    }
  };

  if (kind == IntegralKind::Sym) {
    for (std::size_t g = 0; g < count; ++g) {
      const std::uint64_t* m = &all[g * nn];
      std::uint64_t tr = 0;
      for (int i = 0; i < t.r; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::size_t k = static_cast<std::size_t>(i) * n + j;
          if (t.active[k]) tr = ring.add(tr, ring.mul(t.coef[k], ring.mul(m[k], m[k])));
        }
      }
      record(tr);
    }
  } else {
    // per g1 fold the coefficients into the rows; g2 enters through its columns
    std::vector<std::uint64_t> u(static_cast<std::size_t>(t.r) * n);
    for (std::size_t g = 0; g < count; ++g) {
      const std::uint64_t* m1 = &all[g * nn];
      for (int i = 0; i < t.r; ++i) {
        for (int j = 0; j < n; ++j) {
          const std::size_t k = static_cast<std::size_t>(i) * n + j;
          u[k] = t.active[k] ? ring.mul(t.coef[k], m1[k]) : 0;
        }
      }
      for (std::size_t h = 0; h < count; ++h) {
        const std::uint64_t* m2 = &all[h * nn];
        std::uint64_t tr = 0;
        for (int i = 0; i < t.r; ++i) {
          for (int j = 0; j < n; ++j) {
            const std::size_t k = static_cast<std::size_t>(i) * n + j;
            if (t.active[k]) tr = ring.add(tr, ring.mul(u[k], m2[static_cast<std::size_t>(j) * n + i]));
          }
        }
        record(tr);
      }
    }
  }

  const double total = kind == IntegralKind::NonSym ? double(count) * double(count) : double(count);
  if (hist.empty()) return direct / total;
  std::complex<double> acc = 0;
  for (std::uint64_t c = 0; c < hist.size(); ++c) {
    if (hist[c]) acc += double(hist[c]) * unit_phase(c, ring.mod);
  }
  return acc / total;
}

// ---- verification -----------------------------------------------------------------------

BoundReport verify_bound(IntegralKind kind, std::span<const FieldElement> D,
                         std::span<const FieldElement> A, int n, std::int64_t n_samples,
                         const RandomStream& rng, int workers) {
  const FieldParams& f = field_of(D, A);
  BoundReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.r = static_cast<int>(A.size());
  rep.D.assign(D.begin(), D.end());
  rep.A.assign(A.begin(), A.end());
  rep.estimate = mc_orbital_integral(kind, D, A, n, n_samples, rng, workers);
  rep.closed_form = product_formula(kind, D, A);
  rep.bounds = error_bound(kind, n, rep.r, f.q);
  rep.observed_gap = std::abs(rep.estimate.mean - rep.closed_form.to_complex(f.q));
  const double tol = 3 * rep.estimate.stderr_total();
  rep.pass = rep.observed_gap <= rep.bounds.stated.convert_to<double>() + tol;
  rep.corrected_pass = rep.observed_gap <= rep.bounds.corrected.convert_to<double>() + tol;
  return rep;
}

MultiplicativityReport verify_multiplicativity(IntegralKind kind, std::span<const FieldElement> D,
                                               std::span<const FieldElement> A, int n,
                                               std::int64_t n_samples, const RandomStream& rng,
                                               int workers) {
  const FieldParams& f = field_of(D, A);
  MultiplicativityReport rep;
  rep.kind = kind;
  rep.n = n;
  rep.r = static_cast<int>(A.size());
  rep.D.assign(D.begin(), D.end());
  rep.A.assign(A.begin(), A.end());
  rep.joint = mc_orbital_integral(kind, D, A, n, n_samples, rng.derive("joint"), workers);
  for (int i = 0; i < rep.r; ++i) {
    rep.rank_one.push_back(mc_orbital_integral(kind, D, A.subspan(i, 1), n, n_samples,
                                               rng.derive("rank-one").derive(i), workers));
  }
  rep.product = 1.0;
  for (const auto& e : rep.rank_one) rep.product *= e.mean;
  double var = 0;
  for (int i = 0; i < rep.r; ++i) {
    std::complex<double> others = 1.0;
    for (int k = 0; k < rep.r; ++k) {
      if (k != i) others *= rep.rank_one[k].mean;
    }
    const double se = rep.rank_one[i].stderr_total();
    var += std::norm(others) * se * se;
  }
  rep.product_stderr = std::sqrt(var);
  rep.stderr_total = std::hypot(rep.joint.stderr_total(), rep.product_stderr);
  rep.observed_gap = std::abs(rep.joint.mean - rep.product);
  rep.bounds = error_bound(kind, n, rep.r, f.q);
  const double tol = 3 * rep.stderr_total;
  rep.pass = rep.observed_gap <= rep.bounds.uam.convert_to<double>() + tol;
  rep.corrected_pass = rep.observed_gap <= rep.bounds.corrected_uam.convert_to<double>() + tol;
  return rep;
}

McEstimate empirical_charfun(std::span<const MatF> samples, const MatF& A, std::uint64_t seed) {
  if (!A.square()) raise(Errc::DimensionMismatch, kModule, "argument must be square");
  const int k = A.rows();
  McAccumulator acc;
  for (const auto& m : samples) {
    if (!m.square() || m.rows() < k) {
      raise(Errc::DimensionMismatch, kModule, "sample smaller than the argument");
    }
    FieldElement tr = FieldElement::zero(m.params());
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (!A(i, j).is_zero()) tr = trace_sum(tr, A(i, j) * m(j, i));
      }
    }
    acc.add(chi(tr));
  }
  return acc.estimate(seed);
}

// ---- convergence ------------------------------------------------------------------------

std::vector<FieldElement> canonical_generator(const FieldParams& f, const DeltaParam& p, int n) {
  if (const auto v = validate(p); !v.ok) raise(Errc::InvalidParam, kModule, v.message);
  std::vector<FieldElement> d;
  for (std::size_t j = 0; j < p.head.size() && static_cast<int>(d.size()) < n; ++j) {
    d.push_back(FieldElement::uniformizer_power(f, -p.head[j]));
  }
  while (static_cast<int>(d.size()) < n) {
    d.push_back(p.tail ? FieldElement::uniformizer_power(f, -*p.tail) : FieldElement::zero(f));
  }
  return d;
}

std::vector<FieldElement> canonical_generator(const FieldParams& f, const OmegaParam& p, int n) {
  f.require_non_dyadic(kModule);
  if (const auto v = validate(p); !v.ok) raise(Errc::InvalidParam, kModule, v.message);
  const FieldElement eps = nonsquare_unit(f);
  std::vector<FieldElement> d;
  for (auto k : p.kk) {
    if (static_cast<int>(d.size()) < n) d.push_back(FieldElement::uniformizer_power(f, -k));
  }
  for (auto k : p.kkp) {
    if (static_cast<int>(d.size()) < n) d.push_back(eps.shifted(-k));
  }
  while (static_cast<int>(d.size()) < n) {
    d.push_back(p.k ? FieldElement::uniformizer_power(f, -*p.k) : FieldElement::zero(f));
  }
  return d;
}

namespace {

template <class Param, class Closed>
ConvergenceTable run_convergence(IntegralKind kind, const FieldParams& f, const Param& p,
                                 std::span<const int> n_list, std::span<const FieldElement> probes,
                                 std::int64_t n_samples, const RandomStream& rng, int workers,
                                 Closed closed) {
  ConvergenceTable table;
  table.kind = kind;
  table.bounds_strictly_decreasing = true;
  bool rows_pass = true;
  std::optional<Rational> previous;
  const RandomStream base = rng.derive("convergence");
  for (int n : n_list) {
    const auto gen = canonical_generator(f, p, n);
    Rational bound = error_bound(kind, n, 1, f.q).stated;
    if (previous && !(bound < *previous)) table.bounds_strictly_decreasing = false;
    previous = bound;
    for (std::size_t k = 0; k < probes.size(); ++k) {
      ConvergenceRow row{n, probes[k], {}, closed(probes[k]), 0, bound, false};
      row.estimate = mc_orbital_integral(kind, gen, probes.subspan(k, 1), n, n_samples,
                                         base.derive(static_cast<std::uint64_t>(n)).derive(k),
                                         workers);
      row.observed_gap = std::abs(row.estimate.mean - row.closed_form.to_complex(f.q));
      row.pass = row.observed_gap <= bound.convert_to<double>() + 3 * row.estimate.stderr_total();
      rows_pass = rows_pass && row.pass;
      table.rows.push_back(std::move(row));
    }
  }
  table.pass = rows_pass && table.bounds_strictly_decreasing;
  return table;
}

}  // namespace

ConvergenceTable convergence_experiment(const FieldParams& f, const DeltaParam& p,
                                        std::span<const int> n_list, std::int64_t n_samples,
                                        const RandomStream& rng, int workers) {
  std::vector<FieldElement> probes;
  for (int ell = -2; ell <= 3; ++ell) probes.push_back(FieldElement::uniformizer_power(f, -ell));
  return run_convergence(IntegralKind::NonSym, f, p, n_list, probes, n_samples, rng, workers,
                         [&](const FieldElement& x) { return char_mu(p, -x.valuation()); });
}

ConvergenceTable convergence_experiment(const FieldParams& f, const OmegaParam& p,
                                        std::span<const int> n_list, std::int64_t n_samples,
                                        const RandomStream& rng, int workers) {
  f.require_non_dyadic(kModule);
  const FieldElement eps = nonsquare_unit(f);
  std::vector<FieldElement> probes;
  for (int ell = -2; ell <= 3; ++ell) {
    probes.push_back(FieldElement::uniformizer_power(f, -ell));
    probes.push_back(eps.shifted(-ell));
  }
  return run_convergence(IntegralKind::Sym, f, p, n_list, probes, n_samples, rng, workers,
                         [&](const FieldElement& x) { return char_nu(p, x); });
}

}  // namespace lfrm
