#include "lfrm/sampling.hpp"

#include <algorithm>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "sampling";

// Leading zeros beyond this many digits are treated as an exact zero draw
// (probability q^-256).
constexpr int kMaxLeadingZeros = 256;

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t hash_label(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
  return h;
}

// Column vector of n Haar integers.
std::vector<FieldElement> uniform_vector(const FieldParams& f, int n, RandomStream& rng) {
  std::vector<FieldElement> v;
  v.reserve(n);
  for (int i = 0; i < n; ++i) v.push_back(uniform_integer(f, rng));
  return v;
}

FieldElement sum_flush(const FieldElement& a, const FieldElement& b) {
  return FieldElement::add(a, b, Cancellation::Flush);
}

}  // namespace

// ---- RandomStream -------------------------------------------------------------------

RandomStream RandomStream::derive(std::uint64_t component) const {
  const std::uint64_t hi = mix64(hi_ ^ mix64(lo_ + 0x632be59bd9b4e019ULL));
  const std::uint64_t lo = mix64(lo_ ^ mix64(component ^ hi));
  return RandomStream(seed_, hi, lo);
}

RandomStream RandomStream::derive(std::string_view label) const {
  return derive(hash_label(label));
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t c = counter_++;
  return mix64(mix64(seed_ ^ mix64(hi_)) ^ mix64(lo_ + mix64(c)));
}

std::uint64_t RandomStream::uniform_below(std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double RandomStream::uniform_real() { return double(next_u64() >> 11) * 0x1.0p-53; }

// ---- Haar draws ---------------------------------------------------------------------

FieldElement uniform_integer(const FieldParams& f, RandomStream& rng) {
  std::array<std::uint8_t, kMaxPrecision> d{};
  int lead = 0;
  while (true) {
    d[0] = static_cast<std::uint8_t>(rng.uniform_below(f.p));
    if (d[0] != 0) break;
    if (++lead >= kMaxLeadingZeros) return FieldElement::zero(f);
  }
  for (int i = 1; i < f.precision; ++i) d[i] = static_cast<std::uint8_t>(rng.uniform_below(f.p));
  return FieldElement::from_digits(f, lead, std::span(d.data(), f.precision));
}

FieldElement uniform_integer_with_residue(const FieldParams& f, std::uint32_t residue,
                                          RandomStream& rng) {
  residue %= f.p;
  if (residue == 0) return uniform_integer(f, rng).shifted(1);
  std::array<std::uint8_t, kMaxPrecision> d{};
  d[0] = static_cast<std::uint8_t>(residue);
  for (int i = 1; i < f.precision; ++i) d[i] = static_cast<std::uint8_t>(rng.uniform_below(f.p));
  return FieldElement::from_digits(f, 0, std::span(d.data(), f.precision));
}

MatF haar_gl(const FieldParams& f, int n, RandomStream& rng, int* attempts) {
  if (n < 0) raise(Errc::InvalidParam, kModule, "negative dimension");
  std::vector<std::uint32_t> t(static_cast<std::size_t>(n) * n);
  int tries = 0;
  do {
    ++tries;
    for (auto& x : t) x = static_cast<std::uint32_t>(rng.uniform_below(f.p));
  } while (n > 0 && rank_mod_p(t, n, n, f.p) < n);
  if (attempts) *attempts = tries;
  MatF g(f, n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = uniform_integer_with_residue(f, t[i * n + j], rng);
  }
  return g;
}

MatF uniform_matrix(const FieldParams& f, int rows, int cols, RandomStream& rng) {
  MatF m(f, rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = uniform_integer(f, rng);
  }
  return m;
}

MatF uniform_symmetric(const FieldParams& f, int n, RandomStream& rng) {
  MatF m(f, n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m(j, i) = m(i, j) = uniform_integer(f, rng);
  }
  return m;
}

// ---- corners ------------------------------------------------------------------------

MatF sample_mu_corner(const FieldParams& f, const DeltaParam& p, int n, RandomStream& rng) {
  // one counter step per call, so repeated calls on a stream give fresh draws
  const RandomStream draw = rng.derive(rng.next_u64());
  if (const auto v = validate(p); !v.ok) raise(Errc::InvalidParam, kModule, v.message);
  MatF m(f, n, n);
  for (std::size_t t = 0; t < p.head.size(); ++t) {
    RandomStream s = draw.derive("rank-one").derive(t);
    RandomStream sx = s.derive("x"), sy = s.derive("y");
    const auto x = uniform_vector(f, n, sx), y = uniform_vector(f, n, sy);
    const std::int64_t shift = -p.head[t];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = sum_flush(m(i, j), (x[i] * y[j]).shifted(shift));
    }
  }
  if (p.tail) {
    RandomStream s = draw.derive("tail");
    const MatF z = uniform_matrix(f, n, n, s);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = sum_flush(m(i, j), z(i, j).shifted(-*p.tail));
    }
  }
  return m;
}

MatF sample_nu_corner(const FieldParams& f, const OmegaParam& p, int n, RandomStream& rng) {
  // one counter step per call, so repeated calls on a stream give fresh draws
  const RandomStream draw = rng.derive(rng.next_u64());
  f.require_non_dyadic(kModule);
  if (const auto v = validate(p); !v.ok) raise(Errc::InvalidParam, kModule, v.message);
  MatF m(f, n, n);
  const auto add_gram = [&](const std::vector<FieldElement>& x, std::int64_t shift,
                            const FieldElement* scale) {
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        FieldElement term = (x[i] * x[j]).shifted(shift);
        if (scale) term = term * *scale;
        m(i, j) = sum_flush(m(i, j), term);
      }
    }
  };
  for (std::size_t t = 0; t < p.kk.size(); ++t) {
    RandomStream s = draw.derive("wishart").derive(t);
    add_gram(uniform_vector(f, n, s), -p.kk[t], nullptr);
  }
  const FieldElement eps = nonsquare_unit(f);
  for (std::size_t t = 0; t < p.kkp.size(); ++t) {
    RandomStream s = draw.derive("eps-wishart").derive(t);
    add_gram(uniform_vector(f, n, s), -p.kkp[t], &eps);
  }
  if (p.k) {
    RandomStream s = draw.derive("tail");
    const MatF h = uniform_symmetric(f, n, s);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) m(i, j) = sum_flush(m(i, j), h(i, j).shifted(-*p.k));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) m(i, j) = m(j, i);
  }
  return m;
}

MatF orbital_push(const MatF& X, PushKind kind, RandomStream& rng) {
  // one counter step per call, so repeated calls on a stream give fresh draws
  const RandomStream draw = rng.derive(rng.next_u64());
  if (!X.square()) raise(Errc::DimensionMismatch, kModule, "orbital_push needs a square matrix");
  const FieldParams& f = X.params();
  const int n = X.rows();
  RandomStream s1 = draw.derive("left");
  const MatF g1 = haar_gl(f, n, s1);
  if (kind == PushKind::Congruence) {
    return is_symmetric(X) ? congruence(g1, X) : g1 * X * g1.transpose();
  }
  RandomStream s2 = draw.derive("right");
  const MatF g2 = haar_gl(f, n, s2);
  return g1 * X * g2;
}

// ---- parameter generators -------------------------------------------------------------

namespace {

std::int64_t draw_in(RandomStream& rng, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

std::optional<std::int64_t> draw_bound(RandomStream& rng) {
  if (rng.uniform_below(2) == 0) return std::nullopt;
  return draw_in(rng, -4, 2);
}

std::vector<std::int64_t> draw_list(RandomStream& rng) {
  std::vector<std::int64_t> v(static_cast<std::size_t>(rng.uniform_below(5)));
  for (auto& x : v) x = draw_in(rng, -3, 5);
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace

DeltaParam random_delta(RandomStream& rng) {
  const auto tail = draw_bound(rng);
  std::vector<std::int64_t> head;
  for (auto x : draw_list(rng)) {
    if (!tail || x > *tail) head.push_back(x);
  }
  return DeltaParam::make(std::move(head), tail);
}

OmegaParam random_omega(RandomStream& rng) {
  const auto k = draw_bound(rng);
  auto kk = draw_list(rng);
  auto kkp = draw_list(rng);
  return canonicalize_omega(k, std::move(kk), std::move(kkp));
}

}  // namespace lfrm
