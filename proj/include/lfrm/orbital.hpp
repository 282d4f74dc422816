#pragma once

// Orbital integrals over GL(n, O_F): Monte Carlo and exact enumeration, the
// Theta/theta product formula with its error bounds, and the convergence of
// orbital measures to the limit measures of Delta/Omega parameters.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "lfrm/params.hpp"
#include "lfrm/sampling.hpp"

namespace lfrm {

// NonSym: chi(tr(g1 D g2 A)) over independent Haar g1, g2.
// Sym:    chi(tr(g D g^t A)) over Haar g.
enum class IntegralKind { NonSym, Sym };

std::string_view to_string(IntegralKind k);
IntegralKind parse_integral_kind(std::string_view s);

struct McEstimate {
  std::complex<double> mean;
  double stderr_re = 0;  // per component, sample standard deviation / sqrt(M)
  double stderr_im = 0;
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;

  // Standard error of the complex mean as a whole.
  double stderr_total() const;
};

// Streaming mean/variance of complex samples; merge() is the pairwise update,
// so any fixed merge order gives a reproducible result.
class McAccumulator {
 public:
  void add(std::complex<double> z);
  void merge(const McAccumulator& other);
  McEstimate estimate(std::uint64_t seed) const;
  std::int64_t count() const { return n_; }

 private:
  std::int64_t n_ = 0;
  double mean_re_ = 0, mean_im_ = 0;
  double m2_re_ = 0, m2_im_ = 0;
};

// Samples per independently derived chunk.
inline constexpr std::int64_t kMcChunk = 8192;

// D holds the diagonal x_1..x_d of D (d <= n, padded with zeros to n); A holds
// a_1..a_r (r <= n). Samples only the entries that enter the trace, modulo the
// power of varpi that the integrand can see. Results do not depend on
// `workers`.
McEstimate mc_orbital_integral(IntegralKind kind, std::span<const FieldElement> D,
                               std::span<const FieldElement> A, int n, std::int64_t n_samples,
                               const RandomStream& rng, int workers = 1);

// Same integral by full Haar matrices and FieldElement arithmetic (slow).
McEstimate mc_orbital_integral_reference(IntegralKind kind, std::span<const FieldElement> D,
                                         std::span<const FieldElement> A, int n,
                                         std::int64_t n_samples, const RandomStream& rng);

// prod_i prod_j Theta(a_i x_j) (NonSym) or theta(a_i x_j) (Sym).
CharValue product_formula(IntegralKind kind, std::span<const FieldElement> D,
                          std::span<const FieldElement> A);

struct ErrorBounds {
  Rational stated;          // the stated bound for the joint integral
  Rational uam;            // stated bound against the product of rank-one integrals
  Rational corrected;      // 2(1 - s^2) NonSym, 2(1 - s) Sym; s = prod_{w<r}(1 - q^{w-n})
  Rational corrected_uam;  // corrected + r times the corrected rank-one bound
};

ErrorBounds error_bound(IntegralKind kind, int n, int r, std::uint32_t q);

// Smallest level m at which the integrand is constant on cosets of
// varpi^m Mat(n, O_F): K_D + K_A, the largest negative valuations in D and A.
int stability_level(std::span<const FieldElement> D, std::span<const FieldElement> A);

// Integrand evaluations allowed by exact_orbital_integral.
inline constexpr double kExactBudget = 2e8;

// Average over all lifts of GL(n, O_F / varpi^level) (pairs of them for NonSym).
std::complex<double> exact_orbital_integral(IntegralKind kind, std::span<const FieldElement> D,
                                            std::span<const FieldElement> A, int n, int level);

struct BoundReport {
  IntegralKind kind;
  int n = 0;
  int r = 0;
  std::vector<FieldElement> D;
  std::vector<FieldElement> A;
  McEstimate estimate;
  CharValue closed_form;
  ErrorBounds bounds;
  double observed_gap = 0;  // |estimate - closed_form|
  bool pass = false;        // gap <= stated + 3 stderr_total
  bool corrected_pass = false;
};

BoundReport verify_bound(IntegralKind kind, std::span<const FieldElement> D,
                         std::span<const FieldElement> A, int n, std::int64_t n_samples,
                         const RandomStream& rng, int workers = 1);

// Joint integral against the product of the r rank-one integrals at a_i e_11.
struct MultiplicativityReport {
  IntegralKind kind;
  int n = 0;
  int r = 0;
  std::vector<FieldElement> D;
  std::vector<FieldElement> A;
  McEstimate joint;
  std::vector<McEstimate> rank_one;
  std::complex<double> product;
  double product_stderr = 0;  // first-order propagation through the product
  double observed_gap = 0;
  double stderr_total = 0;    // joint and product combined
  ErrorBounds bounds;
  bool pass = false;          // gap <= uam + 3 stderr_total
  bool corrected_pass = false;
};

MultiplicativityReport verify_multiplicativity(IntegralKind kind, std::span<const FieldElement> D,
                                               std::span<const FieldElement> A, int n,
                                               std::int64_t n_samples, const RandomStream& rng,
                                               int workers = 1);

// Mean of chi(tr(A M_i)); A (k x k, k <= dim M_i) acts on the top-left corner.
McEstimate empirical_charfun(std::span<const MatF> samples, const MatF& A,
                             std::uint64_t seed = 0);

struct ConvergenceRow {
  int n = 0;
  FieldElement argument;  // x in x e_11
  McEstimate estimate;
  CharValue closed_form;
  double observed_gap = 0;
  Rational bound;  // stated rank-one bound at this n
  bool pass = false;
};

struct ConvergenceTable {
  IntegralKind kind;
  std::vector<ConvergenceRow> rows;
  bool bounds_strictly_decreasing = false;
  bool pass = false;  // every row passes and the bounds decrease
};

// Canonical diagonal generator of size n: the parameter's finite entries as
// varpi^-k_j (eps varpi^-k'_j for kkp), padded by the tail value or zero.
std::vector<FieldElement> canonical_generator(const FieldParams& f, const DeltaParam& p, int n);
std::vector<FieldElement> canonical_generator(const FieldParams& f, const OmegaParam& p, int n);

// Probe arguments: varpi^-ell for ell in [-2, 3]; the Omega table also uses eps varpi^-ell.
ConvergenceTable convergence_experiment(const FieldParams& f, const DeltaParam& p,
                                        std::span<const int> n_list, std::int64_t n_samples,
                                        const RandomStream& rng, int workers = 1);
ConvergenceTable convergence_experiment(const FieldParams& f, const OmegaParam& p,
                                        std::span<const int> n_list, std::int64_t n_samples,
                                        const RandomStream& rng, int workers = 1);

}  // namespace lfrm
