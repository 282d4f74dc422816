#include "lfrm/params.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "params";

void require_valid(const Validation& v) {
  if (!v.ok) raise(Errc::InvalidParam, kModule, v.message);
}

std::string join(const std::vector<std::int64_t>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

std::string bound_string(const std::optional<std::int64_t>& k) {
  return k ? std::to_string(*k) : std::string("-inf");
}

}  // namespace

DeltaParam DeltaParam::make(std::vector<std::int64_t> head, std::optional<std::int64_t> tail) {
  if (tail) {
    while (!head.empty() && head.back() == *tail) head.pop_back();
  }
  return {std::move(head), tail};
}

std::optional<std::int64_t> DeltaParam::term(std::size_t j) const {
  return j < head.size() ? std::optional<std::int64_t>(head[j]) : tail;
}

Validation validate(const DeltaParam& p) {
  for (std::size_t i = 1; i < p.head.size(); ++i) {
    if (p.head[i] > p.head[i - 1]) {
      return {false, "head is not non-increasing at position " + std::to_string(i)};
    }
  }
  if (p.tail) {
    for (std::size_t i = 0; i < p.head.size(); ++i) {
      if (p.head[i] <= *p.tail) {
        return {false, "head entry " + std::to_string(p.head[i]) +
                           " is not above the constant tail " + std::to_string(*p.tail)};
      }
    }
  }
  return {};
}

Validation validate(const OmegaParam& p) {
  for (std::size_t i = 1; i < p.kk.size(); ++i) {
    if (p.kk[i] > p.kk[i - 1]) return {false, "kk is not non-increasing"};
  }
  for (std::size_t i = 1; i < p.kkp.size(); ++i) {
    if (p.kkp[i] >= p.kkp[i - 1]) return {false, "kkp is not strictly decreasing"};
  }
  if (p.k) {
    for (auto x : p.kk) {
      if (x <= *p.k) return {false, "kk entry " + std::to_string(x) + " is not above k"};
    }
    for (auto x : p.kkp) {
      if (x <= *p.k) return {false, "kkp entry " + std::to_string(x) + " is not above k"};
    }
  }
  return {};
}

// ---- characteristic functions ------------------------------------------------------

CharValue char_mu(const DeltaParam& p, std::int64_t ell) {
  require_valid(validate(p));
  if (p.tail && *p.tail + ell >= 1) return CharValue::zero();
  std::int64_t s = 0;
  for (auto kj : p.head) s += std::max<std::int64_t>(kj + ell, 0);
  return CharValue::make(Unit::PlusOne, static_cast<int>(2 * s));
}

std::vector<CharValue> char_mu(const DeltaParam& p, std::span<const std::int64_t> ells) {
  std::vector<CharValue> out;
  out.reserve(ells.size());
  for (auto ell : ells) out.push_back(char_mu(p, ell));
  return out;
}

CharValue char_mu_diag(const DeltaParam& p, std::span<const std::int64_t> ells) {
  CharValue acc = CharValue::one();
  for (auto ell : ells) acc *= char_mu(p, ell);
  return acc;
}

CharValue char_nu_raw(std::optional<std::int64_t> k, std::span<const std::int64_t> kk,
                      std::span<const std::int64_t> kkp, const FieldElement& x) {
  const FieldParams& f = x.params();
  f.require_non_dyadic(kModule);
  if (x.is_zero()) return CharValue::one();
  const std::int64_t v = x.valuation();
  if (k && v < *k) return CharValue::zero();
  const int leg = legendre({x.digits()[0], f.p});
  CharValue acc = CharValue::one();
  for (auto kn : kk) acc *= theta_of(kn - v, leg, f);
  for (auto kn : kkp) acc *= theta_of(kn - v, -leg, f);
  return acc;
}

CharValue char_nu(const OmegaParam& p, const FieldElement& x) {
  require_valid(validate(p));
  return char_nu_raw(p.k, p.kk, p.kkp, x);
}

std::vector<CharValue> char_nu(const OmegaParam& p, std::span<const FieldElement> xs) {
  std::vector<CharValue> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(char_nu(p, x));
  return out;
}

CharValue char_nu_diag(const OmegaParam& p, std::span<const FieldElement> xs) {
  CharValue acc = CharValue::one();
  for (const auto& x : xs) acc *= char_nu(p, x);
  return acc;
}

// ---- semigroup ----------------------------------------------------------------------

DeltaParam oplus(const DeltaParam& a, const DeltaParam& b) {
  require_valid(validate(a));
  require_valid(validate(b));
  std::optional<std::int64_t> k;
  if (a.tail || b.tail) k = std::max(a.tail.value_or(INT64_MIN), b.tail.value_or(INT64_MIN));
  std::vector<std::int64_t> head;
  for (const auto* h : {&a.head, &b.head}) {
    for (auto x : *h) {
      if (!k || x > *k) head.push_back(x);
    }
  }
  std::sort(head.begin(), head.end(), std::greater<>());
  return DeltaParam::make(std::move(head), k);
}

OmegaParam canonicalize_omega(std::optional<std::int64_t> k, std::vector<std::int64_t> kk_raw,
                              std::vector<std::int64_t> kkp_raw) {
  const auto above = [&](std::int64_t x) { return !k || x > *k; };
  std::vector<std::int64_t> kk;
  for (auto x : kk_raw) {
    if (above(x)) kk.push_back(x);
  }
  std::map<std::int64_t, int, std::greater<>> mult;
  for (auto x : kkp_raw) {
    if (above(x)) ++mult[x];
  }
  std::vector<std::int64_t> kkp;
  for (const auto& [x, c] : mult) {
    for (int i = 0; i < c / 2; ++i) {
      kk.push_back(x);
      kk.push_back(x);
    }
    if (c % 2 == 1) kkp.push_back(x);
  }
  std::sort(kk.begin(), kk.end(), std::greater<>());
  return {k, std::move(kk), std::move(kkp)};
}

OmegaParam oplus(const OmegaParam& a, const OmegaParam& b) {
  require_valid(validate(a));
  require_valid(validate(b));
  std::optional<std::int64_t> k;
  if (a.k || b.k) k = std::max(a.k.value_or(INT64_MIN), b.k.value_or(INT64_MIN));
  std::vector<std::int64_t> kk = a.kk, kkp = a.kkp;
  kk.insert(kk.end(), b.kk.begin(), b.kk.end());
  kkp.insert(kkp.end(), b.kkp.begin(), b.kkp.end());
  std::sort(kk.begin(), kk.end(), std::greater<>());
  std::sort(kkp.begin(), kkp.end(), std::greater<>());
  return canonicalize_omega(k, std::move(kk), std::move(kkp));
}

// ---- uniqueness ---------------------------------------------------------------------

std::int64_t distinguishing_argument(const DeltaParam& a, const DeltaParam& b) {
  require_valid(validate(a));
  require_valid(validate(b));
  const DeltaParam na = DeltaParam::make(a.head, a.tail), nb = DeltaParam::make(b.head, b.tail);
  const std::size_t span = std::max(na.head.size(), nb.head.size()) + 1;
  for (std::size_t j = 0; j < span; ++j) {
    const auto x = na.term(j), y = nb.term(j);
    if (x == y) continue;
    // optional ordering puts nullopt (-infinity) below every integer
    const std::int64_t larger = *std::max(x, y);
    return 1 - larger;
  }
  raise(Errc::EqualParams, kModule, "parameters describe the same point");
}

std::vector<FieldElement> omega_probe_grid(const FieldParams& f) {
  std::vector<FieldElement> grid;
  const FieldElement eps = nonsquare_unit(f);
  for (int ell = -4; ell <= 6; ++ell) {
    grid.push_back(FieldElement::uniformizer_power(f, -ell));
    grid.push_back(eps.shifted(-ell));
  }
  return grid;
}

DeltaParam truncate_rule(const std::function<std::int64_t(int)>& rule, int depth) {
  std::vector<std::int64_t> head;
  for (int j = 1; j <= depth; ++j) head.push_back(rule(j));
  DeltaParam p{std::move(head), std::nullopt};
  require_valid(validate(p));
  return p;
}

std::string to_string(const DeltaParam& p) {
  return "(" + join(p.head) + " | " + (p.tail ? "const " + std::to_string(*p.tail) : "neginf") +
         ")";
}

std::string to_string(const OmegaParam& p) {
  return "(" + bound_string(p.k) + "; (" + join(p.kk) + "); (" + join(p.kkp) + "))";
}

}  // namespace lfrm
