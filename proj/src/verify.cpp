#include "lfrm/verify.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr double kExactTol = 1e-9;

int resolve_workers(int w) {
  if (w > 0) return w;
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : static_cast<int>(h);
}

// Runs fn(i) for i in [0, count) on `workers` threads; fn writes only its own slot.
template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
  workers = std::max(1, std::min(workers, count));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto body = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

struct Tally {
  int total = 0, passed = 0;
  void add(bool ok) {
    ++total;
    passed += ok ? 1 : 0;
  }
  bool all() const { return passed == total; }
  std::string str() const { return std::to_string(passed) + "/" + std::to_string(total); }
};

FieldElement unit_times_power(const FieldParams& f, std::uint32_t unit, std::int64_t ord) {
  return FieldElement::from_int(f, unit).shifted(ord);
}

FieldElement eps(const FieldParams& f) { return nonsquare_unit(f); }

// Random entry: zero with probability 1/8, otherwise a uniform unit times varpi^v, v in [-3, 3].
FieldElement random_entry(const FieldParams& f, RandomStream& rng) {
  if (rng.uniform_below(8) == 0) return FieldElement::zero(f);
  FieldElement u = uniform_integer(f, rng);
  while (u.is_zero() || u.valuation() != 0) {
    u = uniform_integer(f, rng);
    if (!u.is_zero()) u = u.shifted(-u.valuation());
  }
  return u.shifted(static_cast<std::int64_t>(rng.uniform_below(7)) - 3);
}

MatF random_test_matrix(const FieldParams& f, int n, bool symmetric, RandomStream& rng) {
  MatF m(f, n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = symmetric ? i : 0; j < n; ++j) {
      m(i, j) = random_entry(f, rng);
      if (symmetric) m(j, i) = m(i, j);
    }
  }
  return m;
}

// ---- 1: Gauss sums ----------------------------------------------------------------------

void gauss_criterion(CriterionResult& res) {
  Tally magnitude, symbolic;
  Json rows = Json::array();
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    const GaussSumResult g1 = gauss_sum(ResidueElement::make(1, p));
    for (std::uint32_t a = 1; a < p; ++a) {
      const GaussSumResult g = gauss_sum(ResidueElement::make(a, p));
      const double mag = std::abs(std::norm(g.complex_value) - double(p));
      const int lam = legendre(ResidueElement::make(a, p));
      const bool sym = g.sign == lam * g1.sign && g.rho == g1.rho &&
                       std::abs(g.complex_value - g.symbolic_value()) <= kExactTol &&
                       std::abs(g.complex_value - double(lam) * g1.complex_value) <= kExactTol;
      magnitude.add(mag <= kExactTol);
      symbolic.add(sym);
      rows.push_back({{"p", p}, {"a", a}, {"value", to_json(g.complex_value)}, {"sign", g.sign},
                      {"rho", g.rho == Rho::One ? "1" : "i"}, {"magnitude_error", mag},
                      {"symbolic_ok", sym}});
    }
  }
  res.checks_pass = magnitude.all() && symbolic.all();
  res.summary = "magnitude " + magnitude.str() + ", symbolic " + symbolic.str();
  res.details["rows"] = rows;
}

// ---- 2: theta closed forms --------------------------------------------------------------

struct ThetaTally {
  Tally oracle, square;
  double max_error = 0;
};

void theta_checks(const FieldParams& f, ThetaTally& t, Json& rows) {
  const std::uint32_t units[2] = {1, f.nonsquare_digit};
  for (std::int64_t ord = -3; ord <= 3; ++ord) {
    for (int c = 0; c < 2; ++c) {
      const FieldElement x = unit_times_power(f, units[c], ord);
      for (ThetaKind kind : {ThetaKind::LittleTheta, ThetaKind::Theta}) {
        const CharValue closed = theta_closed(x, kind);
        const auto brute = theta_bruteforce(x, kind);
        const double err = std::abs(closed.to_complex(f.q) - brute);
        t.max_error = std::max(t.max_error, err);
        t.oracle.add(err <= kExactTol);
        rows.push_back({{"field", f.spec()}, {"ord", ord}, {"class", c ? "eps" : "1"},
                        {"kind", kind == ThetaKind::Theta ? "Theta" : "theta"},
                        {"closed", to_json(closed)}, {"bruteforce", to_json(brute)}, {"error", err}});
      }
      if (c == 0) {
        const CharValue a = theta_closed(x, ThetaKind::LittleTheta);
        const CharValue b = theta_closed(x * eps(f), ThetaKind::LittleTheta);
        t.square.add(a * a == b * b && !(a * a).is_zero());
      }
    }
  }
}

void theta_criterion(CriterionResult& res) {
  ThetaTally t;
  Json rows = Json::array();
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (Family fam : {Family::PAdic, Family::Laurent}) theta_checks(FieldParams::make(fam, p, 10), t, rows);
  }
  res.checks_pass = t.oracle.all() && t.square.all();
  std::ostringstream os;
  os << "closed vs brute force " << t.oracle.str() << " (max error " << t.max_error
     << "), theta^2 identity " << t.square.str();
  res.summary = os.str();
  res.details["rows"] = rows;
}

// ---- 3: decompositions ------------------------------------------------------------------

constexpr int kDecompMatrices = 1000;
constexpr int kPushes = 100;

struct DecompSlot {
  bool snf = false, symdiag = false, sing_invariant = false, class_invariant = false;
};

void decomposition_criterion(CriterionResult& res, const RandomStream& base, int workers) {
  const FieldParams fields[3] = {FieldParams::make(Family::PAdic, 3, 12),
                                 FieldParams::make(Family::PAdic, 5, 10),
                                 FieldParams::make(Family::Laurent, 3, 12)};
  Json per_field = Json::array();
  bool ok = true;
  std::ostringstream os;
  for (const auto& f : fields) {
    std::vector<DecompSlot> slots(kDecompMatrices);
    const RandomStream fs = base.derive(f.spec());
    parallel_for(kDecompMatrices, workers, [&](int i) {
      RandomStream s = fs.derive(static_cast<std::uint64_t>(i));
      RandomStream ms = s.derive("matrix"), ps = s.derive("push");
      const int n = 1 + static_cast<int>(ms.uniform_below(5));
      const MatF m = random_test_matrix(f, n, false, ms);
      const MatF sym = random_test_matrix(f, n, true, ms);
      DecompSlot& out = slots[static_cast<std::size_t>(i)];
      out.snf = recomposes(smith_normal_form(m), m);
      const SymDiagResult sd = sym_diagonalize(sym);
      out.symdiag = recomposes(sd, sym);
      const auto sing = singular_numbers(m);
      const auto level = resolution_level(m), sym_level = resolution_level(sym);
      out.sing_invariant = out.class_invariant = true;
      for (int k = 0; k < kPushes; ++k) {
        const MatF y = orbital_push(m, PushKind::TwoSided, ps);
        out.sing_invariant = out.sing_invariant && same_singular_numbers(sing, singular_numbers(y), level);
        const MatF z = orbital_push(sym, PushKind::Congruence, ps);
        out.class_invariant =
            out.class_invariant && same_classes(sd.classes, sym_diagonalize(z).classes, sym_level);
      }
    });
    Tally snf, sd, sing, cls;
    for (const auto& s : slots) {
      snf.add(s.snf);
      sd.add(s.symdiag);
      sing.add(s.sing_invariant);
      cls.add(s.class_invariant);
    }
    ok = ok && snf.all() && sd.all() && sing.all() && cls.all();
    per_field.push_back({{"field", f.spec()}, {"snf_recomposes", snf.str()},
                         {"symdiag_recomposes", sd.str()}, {"sing_invariant", sing.str()},
                         {"classes_invariant", cls.str()}});
    os << f.spec() << ": snf " << snf.str() << " symdiag " << sd.str() << " sing " << sing.str()
       << " classes " << cls.str() << "; ";
  }
  res.checks_pass = ok;
  res.summary = os.str();
  res.summary.resize(res.summary.size() - 2);
  res.details["matrices_per_field"] = kDecompMatrices;
  res.details["pushes_per_matrix"] = kPushes;
  res.details["fields"] = per_field;
}

// ---- 4: bounds at q = 3 -----------------------------------------------------------------

std::vector<FieldElement> valuation_diag(const FieldParams& f, const std::vector<std::int64_t>& ords) {
  std::vector<FieldElement> d;
  for (auto v : ords) d.push_back(FieldElement::uniformizer_power(f, v));
  return d;
}

std::vector<std::vector<std::int64_t>> d_patterns(int n) {
  std::vector<std::int64_t> a(n, 0), b(n, 0), c(n, 0);
  a[0] = -1;
  b[0] = -2;
  b[1] = -1;
  for (int i = 0; i < n / 2; ++i) c[i] = -1;
  return {a, b, c};
}

void bounds_criterion(CriterionResult& res, const RandomStream& base, const CriterionOptions& opt,
                      int workers) {
  const FieldParams f = FieldParams::make(Family::PAdic, 3, 12);
  Tally bound, mult, bound_corr, mult_corr;
  Json bounds = Json::array(), mults = Json::array();
  for (IntegralKind kind : {IntegralKind::NonSym, IntegralKind::Sym}) {
    for (int n : {4, 6, 8}) {
      for (int r : {1, 2}) {
        const auto A = r == 1 ? valuation_diag(f, {0}) : valuation_diag(f, {-1, 0});
        const auto patterns = d_patterns(n);
        for (std::size_t pi = 0; pi < patterns.size(); ++pi) {
          const auto D = valuation_diag(f, patterns[pi]);
          const RandomStream s = base.derive(to_string(kind)).derive(n).derive(r).derive(pi);
          const BoundReport b = verify_bound(kind, D, A, n, opt.mc_samples, s.derive("bound"), workers);
          const MultiplicativityReport m =
              verify_multiplicativity(kind, D, A, n, opt.mc_samples, s.derive("mult"), workers);
          bound.add(b.pass);
          bound_corr.add(b.corrected_pass);
          mult.add(m.pass);
          mult_corr.add(m.corrected_pass);
          bounds.push_back(to_json(b));
          mults.push_back(to_json(m));
        }
      }
    }
  }
  res.checks_pass = bound.all() && mult.all();
  res.summary = "bounds " + bound.str() + ", multiplicativity " + mult.str() +
                " (against corrected bounds: " + bound_corr.str() + ", " + mult_corr.str() + ")";
  res.details["bounds"] = bounds;
  res.details["multiplicativity"] = mults;
}

// ---- 5: exact oracle --------------------------------------------------------------------

void exact_criterion(CriterionResult& res, const RandomStream& base, const CriterionOptions& opt,
                     int workers) {
  const FieldParams f = FieldParams::make(Family::PAdic, 3, 12);
  struct Config {
    int n;
    std::vector<FieldElement> D, A;
  };
  const auto w = [&](std::uint32_t u, std::int64_t v) { return unit_times_power(f, u, v); };
  const std::vector<Config> configs = {
      {1, {w(1, -1)}, {w(1, 0)}},
      {1, {w(2, -1)}, {w(1, 0)}},
      {1, {w(1, -2)}, {w(1, 0)}},
      {1, {w(1, -1)}, {w(1, -1)}},
      {2, {w(1, -1), w(1, 0)}, {w(1, 0)}},
      {2, {w(1, -1), w(2, 0)}, {w(2, 0)}},
      {2, {w(1, -1), w(1, -1)}, {w(1, 0)}},
      {2, {w(1, -1), w(2, -1)}, {w(1, 0)}},
      {2, {w(1, -2), w(1, 0)}, {w(1, 0)}},
      {2, {w(1, -1), w(1, 0)}, {w(1, -1)}},
      {2, {w(1, -1), w(1, 0)}, {w(1, 0), w(1, 0)}},
      {2, {w(1, -1), w(1, -1)}, {w(1, 0), w(2, 0)}},
  };
  Tally vs_mc, vs_product;
  Json rows = Json::array();
  for (IntegralKind kind : {IntegralKind::NonSym, IntegralKind::Sym}) {
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      const Config& c = configs[ci];
      const int level = stability_level(c.D, c.A);
      const auto exact = exact_orbital_integral(kind, c.D, c.A, c.n, level);
      const McEstimate mc = mc_orbital_integral(kind, c.D, c.A, c.n, opt.mc_samples,
                                                base.derive(to_string(kind)).derive(ci), workers);
      const CharValue prod = product_formula(kind, c.D, c.A);
      const ErrorBounds eb = error_bound(kind, c.n, static_cast<int>(c.A.size()), f.q);
      const double mc_gap = std::abs(exact - mc.mean);
      const double prod_gap = std::abs(exact - prod.to_complex(f.q));
      const bool mc_ok = mc_gap <= 3 * mc.stderr_total() + kExactTol;
      const bool prod_ok = prod_gap <= eb.stated.convert_to<double>() + kExactTol;
      vs_mc.add(mc_ok);
      vs_product.add(prod_ok);
      Json e;
      e["kind"] = std::string(to_string(kind));
      e["n"] = c.n;
      e["r"] = c.A.size();
      Json dj = Json::array(), aj = Json::array();
      for (const auto& x : c.D) dj.push_back(x.to_string());
      for (const auto& x : c.A) aj.push_back(x.to_string());
      e["D"] = dj;
      e["A"] = aj;
      e["level"] = level;
      e["exact"] = to_json(exact);
      e["estimate"] = to_json(mc.mean);
      e["stderr"] = mc.stderr_total();
      e["closed_form"] = to_json(prod);
      e["paper_bound"] = to_string(eb.stated);
      e["corrected_bound"] = to_string(eb.corrected);
      e["mc_gap"] = mc_gap;
      e["product_gap"] = prod_gap;
      e["mc_pass"] = mc_ok;
      e["product_pass"] = prod_ok;
      e["corrected_product_pass"] = prod_gap <= eb.corrected.convert_to<double>() + kExactTol;
      e["seed"] = mc.seed;
      rows.push_back(e);
    }
  }
  res.checks_pass = vs_mc.all() && vs_product.all();
  res.summary = "exact vs MC " + vs_mc.str() + ", exact vs product formula " + vs_product.str();
  res.details["rows"] = rows;
}

// ---- 6: corner samplers -----------------------------------------------------------------

constexpr int kCornerN = 6;

struct CornerProbe {
  std::vector<FieldElement> xs;  // diagonal of A in the top-left corner
  CharValue closed;
};

// Streams chi(tr(A M)) for every probe, and the rank-one factors x1 e11 and
// x2 e11 of every two-entry probe, over samples drawn by `draw`.
template <class Draw>
std::vector<McEstimate> corner_estimates(const std::vector<CornerProbe>& probes, std::int64_t n_samples,
                                         const RandomStream& base, int workers, Draw&& draw) {
  std::vector<std::vector<FieldElement>> args;
  for (const auto& p : probes) args.push_back(p.xs);
  for (const auto& p : probes) {
    if (p.xs.size() == 2) {
      args.push_back({p.xs[0]});
      args.push_back({p.xs[1]});
    }
  }
  const int chunks = static_cast<int>((n_samples + kMcChunk - 1) / kMcChunk);
  std::vector<std::vector<McAccumulator>> acc(static_cast<std::size_t>(chunks),
                                              std::vector<McAccumulator>(args.size()));
  parallel_for(chunks, workers, [&](int c) {
    RandomStream s = base.derive(static_cast<std::uint64_t>(c));
    const std::int64_t begin = c * kMcChunk, end = std::min(n_samples, begin + kMcChunk);
    auto& mine = acc[static_cast<std::size_t>(c)];
    for (std::int64_t i = begin; i < end; ++i) {
      const MatF m = draw(s);
      for (std::size_t a = 0; a < args.size(); ++a) {
        FieldElement t = FieldElement::zero(m.params());
        for (std::size_t k = 0; k < args[a].size(); ++k) {
          const int kk = static_cast<int>(k);
          t = FieldElement::add(t, args[a][k] * m(kk, kk), Cancellation::Flush);
        }
        mine[a].add(chi(t));
      }
    }
  });
  std::vector<McEstimate> out;
  for (std::size_t a = 0; a < args.size(); ++a) {
    McAccumulator total;
    for (const auto& ch : acc) total.merge(ch[a]);
    out.push_back(total.estimate(base.seed()));
  }
  return out;
}

struct CornerOutcome {
  Tally probes, mult;
  Json rows = Json::array();
};

void check_corner(const std::string& label, const FieldParams& f, const std::vector<CornerProbe>& probes,
                  const std::vector<McEstimate>& est, std::int64_t n_samples, CornerOutcome& out) {
  const double tol = 3.0 / std::sqrt(double(n_samples));
  std::size_t factor = probes.size();
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const auto closed = probes[i].closed.to_complex(f.q);
    const auto d = est[i].mean - closed;
    const bool ok = std::abs(d.real()) <= tol && std::abs(d.imag()) <= tol;
    out.probes.add(ok);
    Json row;
    row["measure"] = label;
    Json xs = Json::array();
    for (const auto& x : probes[i].xs) xs.push_back(x.to_string());
    row["argument"] = xs;
    row["estimate"] = to_json(est[i].mean);
    row["closed_form"] = to_json(probes[i].closed);
    row["deviation"] = to_json(d);
    row["tolerance"] = tol;
    row["pass"] = ok;
    if (probes[i].xs.size() == 2) {
      const McEstimate& e1 = est[factor++];
      const McEstimate& e2 = est[factor++];
      const auto prod = e1.mean * e2.mean;
      const double prod_se = std::hypot(std::abs(e2.mean) * e1.stderr_total(), std::abs(e1.mean) * e2.stderr_total());
      const double combined = std::hypot(est[i].stderr_total(), prod_se);
      const double gap = std::abs(est[i].mean - prod);
      const bool mok = gap <= 3 * combined;
      out.mult.add(mok);
      row["factor_product"] = to_json(prod);
      row["multiplicativity_gap"] = gap;
      row["combined_stderr"] = combined;
      row["multiplicativity_pass"] = mok;
    }
    out.rows.push_back(row);
  }
}

void corner_criterion(CriterionResult& res, const RandomStream& base, const CriterionOptions& opt,
                      int workers) {
  const FieldParams f = FieldParams::parse(opt.field);
  f.require_non_dyadic("verify");
  const FieldElement e = eps(f);
  const auto x = [&](std::int64_t ell, bool use_eps) {
    const FieldElement u = use_eps ? e : FieldElement::one(f);
    return u.shifted(-ell);
  };
  const std::int64_t pairs[10][2] = {{-1, -1}, {0, -1}, {0, 0}, {1, -1}, {1, 0},
                                     {1, 1},   {2, 0},  {-2, 1}, {0, -2}, {2, 2}};
  CornerOutcome out;

  const DeltaParam delta = DeltaParam::make({2, 1}, -1);
  std::vector<CornerProbe> mu;
  for (std::int64_t ell = -2; ell <= 2; ++ell) {
    for (bool u : {false, true}) mu.push_back({{x(ell, u)}, char_mu(delta, ell)});
  }
  for (int i = 0; i < 10; ++i) {
    const std::int64_t ells[2] = {pairs[i][0], pairs[i][1]};
    mu.push_back({{x(ells[0], i % 2 == 1), x(ells[1], false)}, char_mu_diag(delta, ells)});
  }
  const auto mu_est = corner_estimates(mu, opt.mc_samples, base.derive("mu"), workers,
                                       [&](RandomStream& s) { return sample_mu_corner(f, delta, kCornerN, s); });
  check_corner("mu " + to_string(delta), f, mu, mu_est, opt.mc_samples, out);

  const OmegaParam omega{-1, {2}, {1}};
  std::vector<CornerProbe> nu;
  for (std::int64_t ell = -2; ell <= 2; ++ell) {
    for (bool u : {false, true}) nu.push_back({{x(ell, u)}, char_nu(omega, x(ell, u))});
  }
  for (int i = 0; i < 10; ++i) {
    const std::vector<FieldElement> xs{x(pairs[i][0], i % 2 == 1), x(pairs[i][1], i % 3 == 0)};
    nu.push_back({xs, char_nu_diag(omega, xs)});
  }
  const auto nu_est = corner_estimates(nu, opt.mc_samples, base.derive("nu"), workers,
                                       [&](RandomStream& s) { return sample_nu_corner(f, omega, kCornerN, s); });
  check_corner("nu " + to_string(omega), f, nu, nu_est, opt.mc_samples, out);

  res.checks_pass = out.probes.all() && out.mult.all();
  res.summary = "probes " + out.probes.str() + " within 3/sqrt(M), multiplicativity " + out.mult.str() + " within 3 sigma";
  res.details["field"] = f.spec();
  res.details["n"] = kCornerN;
  res.details["n_samples"] = opt.mc_samples;
  res.details["rows"] = out.rows;
}

// ---- 7: convergence ---------------------------------------------------------------------

void convergence_criterion(CriterionResult& res, const RandomStream& base, const CriterionOptions& opt,
                           int workers) {
  const FieldParams f = FieldParams::make(Family::PAdic, 3, 12);
  const int ns[3] = {4, 8, 16};
  const DeltaParam delta = DeltaParam::make({1}, std::nullopt);
  const OmegaParam omega{std::nullopt, {1}, {}};
  const ConvergenceTable a = convergence_experiment(f, delta, ns, opt.mc_samples, base.derive("delta"), workers);
  const ConvergenceTable b = convergence_experiment(f, omega, ns, opt.mc_samples, base.derive("omega"), workers);
  auto rows_passed = [](const ConvergenceTable& t) {
    Tally x;
    for (const auto& r : t.rows) x.add(r.pass);
    return x;
  };
  res.checks_pass = a.pass && b.pass;
  res.summary = to_string(delta) + " rows " + rows_passed(a).str() +
                (a.bounds_strictly_decreasing ? " bounds decreasing" : " bounds NOT decreasing") + "; " +
                to_string(omega) + " rows " + rows_passed(b).str() +
                (b.bounds_strictly_decreasing ? " bounds decreasing" : " bounds NOT decreasing");
  res.details["delta"] = to_json(a);
  res.details["delta"]["param"] = to_json(delta);
  res.details["omega"] = to_json(b);
  res.details["omega"]["param"] = to_json(omega);
}

// ---- 8: uniqueness ----------------------------------------------------------------------

void uniqueness_criterion(CriterionResult& res, const RandomStream& base) {
  RandomStream rng = base.derive("delta");
  Tally delta_sep;
  Json delta_fail = Json::array();
  while (delta_sep.total < 500) {
    const DeltaParam a = random_delta(rng), b = random_delta(rng);
    if (a == b) continue;
    const auto ell = distinguishing_argument(a, b);
    const bool ok = !(char_mu(a, ell) == char_mu(b, ell));
    delta_sep.add(ok);
    if (!ok) delta_fail.push_back({{"a", to_json(a)}, {"b", to_json(b)}, {"ell", ell}});
  }

  Tally omega_sep, canon_valid, canon_idem, canon_pres;
  Json omega_fail = Json::array();
  for (const auto& f : {FieldParams::make(Family::PAdic, 3, 12), FieldParams::make(Family::Laurent, 3, 12),
                        FieldParams::make(Family::PAdic, 5, 10)}) {
    RandomStream s = base.derive("omega").derive(f.spec());
    const auto grid = omega_probe_grid(f);
    int done = 0;
    while (done < 200) {
      const OmegaParam a = random_omega(s), b = random_omega(s);
      if (a == b) continue;
      ++done;
      bool sep = false;
      for (const auto& x : grid) sep = sep || !(char_nu(a, x) == char_nu(b, x));
      omega_sep.add(sep);
      if (!sep) omega_fail.push_back({{"field", f.spec()}, {"a", to_json(a)}, {"b", to_json(b)}});
    }
    for (int t = 0; t < 200; ++t) {
      std::optional<std::int64_t> k;
      if (s.uniform_below(2)) k = static_cast<std::int64_t>(s.uniform_below(7)) - 4;
      std::vector<std::int64_t> kk, kkp;
      for (auto i = s.uniform_below(6); i > 0; --i) kk.push_back(static_cast<std::int64_t>(s.uniform_below(10)) - 4);
      for (auto i = s.uniform_below(6); i > 0; --i) kkp.push_back(static_cast<std::int64_t>(s.uniform_below(10)) - 4);
      const OmegaParam c = canonicalize_omega(k, kk, kkp);
      canon_valid.add(validate(c).ok);
      canon_idem.add(canonicalize_omega(c.k, c.kk, c.kkp) == c);
      bool same = true;
      for (const auto& x : grid) same = same && char_nu_raw(k, kk, kkp, x) == char_nu(c, x);
      canon_pres.add(same);
    }
  }
  res.checks_pass = delta_sep.all() && omega_sep.all() && canon_valid.all() && canon_idem.all() && canon_pres.all();
  res.summary = "Delta pairs separated " + delta_sep.str() + ", Omega pairs separated " + omega_sep.str() +
                ", canonicalize valid " + canon_valid.str() + " idempotent " + canon_idem.str() +
                " preserving " + canon_pres.str();
  res.details["delta_failures"] = delta_fail;
  res.details["omega_failures"] = omega_fail;
}

// ---- 9: semigroup -----------------------------------------------------------------------

void semigroup_criterion(CriterionResult& res, const RandomStream& base) {
  const DeltaParam a = DeltaParam::make({6, 2, 2}, -3), b = DeltaParam::make({4, 3, 0, -1}, std::nullopt);
  const DeltaParam sum = oplus(a, b);
  const DeltaParam expected = DeltaParam::make({6, 4, 3, 2, 2, 0, -1}, -3);
  const bool example = sum == expected;
  RandomStream rng = base.derive("pairs");
  Tally mult;
  Json fails = Json::array();
  for (int t = 0; t < 200; ++t) {
    const DeltaParam x = random_delta(rng), y = random_delta(rng);
    const DeltaParam xy = oplus(x, y);
    for (std::int64_t ell = -4; ell <= 4; ++ell) {
      const bool ok = char_mu(xy, ell) == char_mu(x, ell) * char_mu(y, ell);
      mult.add(ok);
      if (!ok) fails.push_back({{"a", to_json(x)}, {"b", to_json(y)}, {"ell", ell}});
    }
  }
  res.checks_pass = example && mult.all();
  res.summary = "worked example " + std::string(example ? "reproduced" : "MISMATCH") + " " + to_string(sum) +
                ", char_mu multiplicative " + mult.str();
  res.details["example"] = {{"a", to_json(a)}, {"b", to_json(b)}, {"sum", to_json(sum)}, {"expected", to_json(expected)}};
  res.details["failures"] = fails;
}

}  // namespace

std::string criterion_name(int id) {
  static const char* names[kCriterionCount] = {
      "gauss-sum magnitude", "theta oracle equivalence", "decomposition round-trips",
      "orbital-integral bounds", "exact-oracle agreement", "measure-sampler consistency",
      "convergence of orbital measures", "uniqueness suites", "semigroup"};
  if (id < 1 || id > kCriterionCount) raise(Errc::InvalidParam, "verify", "criterion id must be in [1, 9]");
  return names[id - 1];
}

double criterion_time_limit(int id) {
  static const double limits[kCriterionCount] = {1, 10, 60, 300, 120, 180, 120, 30, 10};
  criterion_name(id);
  return limits[id - 1];
}

CriterionResult run_criterion(int id, const CriterionOptions& opt) {
  CriterionResult res;
  res.id = id;
  res.name = criterion_name(id);
  res.time_limit = criterion_time_limit(id);
  const int workers = resolve_workers(opt.workers);
  const RandomStream base = RandomStream(opt.seed).derive("criterion").derive(static_cast<std::uint64_t>(id));
  const auto t0 = std::chrono::steady_clock::now();
  switch (id) {
    case 1: gauss_criterion(res); break;
    case 2: theta_criterion(res); break;
    case 3: decomposition_criterion(res, base, workers); break;
    case 4: bounds_criterion(res, base, opt, workers); break;
    case 5: exact_criterion(res, base, opt, workers); break;
    case 6: corner_criterion(res, base, opt, workers); break;
    case 7: convergence_criterion(res, base, opt, workers); break;
    case 8: uniqueness_criterion(res, base); break;
    case 9: semigroup_criterion(res, base); break;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.pass = res.checks_pass && res.seconds < res.time_limit;
  res.details["seed"] = opt.seed;
  return res;
}

CriterionResult run_identity_aux(const CriterionOptions& opt) {
  CriterionResult res;
  res.id = 0;
  res.name = "ball-Fourier and theta identities on " + opt.field;
  res.time_limit = 10;
  const auto t0 = std::chrono::steady_clock::now();
  const FieldParams f = FieldParams::parse(opt.field);
  Tally ball;
  Json rows = Json::array();
  for (std::int64_t ord = -3; ord <= 3; ++ord) {
    for (std::int64_t l = -2; l <= 2; ++l) {
      const FieldElement y = FieldElement::uniformizer_power(f, ord);
      const auto avg = ball_fourier_average(y, l);
      const double indicator = ord + l >= 0 ? 1.0 : 0.0;
      const bool ok = std::abs(avg - indicator) <= kExactTol;
      ball.add(ok);
      rows.push_back({{"ord", ord}, {"l", l}, {"average", to_json(avg)}, {"indicator", indicator}, {"pass", ok}});
    }
  }
  ThetaTally t;
  Json theta_rows = Json::array();
  if (!f.dyadic()) theta_checks(f, t, theta_rows);
  res.checks_pass = ball.all() && t.oracle.all() && t.square.all();
  res.summary = "ball Fourier " + ball.str() + ", theta closed vs brute force " + t.oracle.str() +
                ", theta^2 identity " + t.square.str();
  res.details["ball_fourier"] = rows;
  res.details["theta"] = theta_rows;
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.pass = res.checks_pass && res.seconds < res.time_limit;
  return res;
}

Json to_json(const CriterionResult& r) {
  Json j;
  j["criterion"] = r.id;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["checks_pass"] = r.checks_pass;
  j["seconds"] = r.seconds;
  j["time_limit"] = r.time_limit;
  j["summary"] = r.summary;
  j["details"] = r.details;
  return j;
}

std::string summary_line(const CriterionResult& r) {
  std::ostringstream os;
  os.precision(3);
  os << "criterion " << r.id << " [" << r.name << "]: " << (r.pass ? "PASS" : "FAIL") << " (" << r.summary
     << ") " << std::fixed << r.seconds << " s / " << r.time_limit << " s";
  return os.str();
}

}  // namespace lfrm
