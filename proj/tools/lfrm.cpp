// Command-line front end. Exit codes: 0 success, 1 usage or input error,
// 2 a verification ran and failed.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "lfrm/error.hpp"
#include "lfrm/verify.hpp"

using namespace lfrm;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailed = 2;
constexpr std::int64_t kMinSamples = 100;

struct Common {
  std::string field = "padic:p=3,prec=12";
  std::uint64_t seed = 1;
  std::int64_t samples = 100000;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App* sub, Common& c, bool randomized) {
  sub->add_option("--field", c.field, "padic:p=<p>,prec=<N> or laurent:p=<p>,prec=<N>")->capture_default_str();
  sub->add_option("--out", c.out, "write the report here instead of stdout");
  sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  if (randomized) {
    sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
    sub->add_option("--samples", c.samples, "Monte Carlo sample count (>= 100)")->capture_default_str();
  }
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot open --out file '" + c.out + "'");
  f << text;
}

void emit(const Common& c, const Json& j, const std::string& csv = {}) {
  if (c.format == "csv") {
    if (csv.empty()) throw UsageError("csv output is available for integral, converge and verify");
    write_text(c, csv);
  } else {
    write_text(c, j.dump(2) + "\n");
  }
}

void announce_seed(const Common& c) { std::cerr << "seed " << c.seed << '\n'; }

void require_samples(const Common& c) {
  if (c.samples < kMinSamples) throw UsageError("--samples must be at least 100");
}

std::vector<FieldElement> element_list(const FieldParams& f, const std::string& text) {
  const Json j = load_json_argument(text);
  if (!j.is_array()) throw UsageError("expected a JSON array of elements, got '" + text + "'");
  std::vector<FieldElement> out;
  for (const auto& e : j) out.push_back(element_from_json(f, e));
  return out;
}

bool is_delta_json(const Json& j) { return j.is_object() && (j.contains("head") || j.contains("tail")); }

Json field_json(const FieldParams& f) {
  Json j;
  j["spec"] = f.spec();
  j["family"] = f.family == Family::PAdic ? "padic" : "laurent";
  j["p"] = f.p;
  j["q"] = f.q;
  j["precision"] = f.precision;
  if (!f.dyadic()) {
    j["nonsquare_digit"] = f.nonsquare_digit;
    j["s_chi"] = f.s_chi;
    j["rho"] = rho_for(f.q) == Rho::One ? "1" : "i";
  }
  j["max_phase_depth"] = max_phase_depth(f.p);
  return j;
}

std::string verify_csv(const std::vector<CriterionResult>& rs) {
  std::ostringstream os;
  os << "criterion,name,pass,checks_pass,seconds,time_limit,summary\n";
  for (const auto& r : rs) {
    std::string summary = r.summary;
    for (auto& ch : summary) {
      if (ch == '"') ch = '\'';
    }
    os << r.id << ",\"" << r.name << "\"," << (r.pass ? "true" : "false") << ','
       << (r.checks_pass ? "true" : "false") << ',' << r.seconds << ',' << r.time_limit << ",\"" << summary
       << "\"\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random matrices over non-Archimedean local fields: arithmetic, sampling and verification"};
  app.require_subcommand(1);
  Common c;

  // field-info
  auto* field_info = app.add_subcommand("field-info", "show the parameters of a field");
  add_common(field_info, c, false);

  // gauss-sum
  auto* gauss = app.add_subcommand("gauss-sum", "quadratic Gauss sum over F_p");
  std::int64_t gauss_a = 1;
  std::uint32_t gauss_p = 0;
  gauss->add_option("--a", gauss_a, "residue a")->capture_default_str();
  gauss->add_option("--p", gauss_p, "prime (default: the field's p)");
  add_common(gauss, c, false);

  // theta
  auto* theta = app.add_subcommand("theta", "closed form of theta(x) or Theta(x)");
  std::string theta_x;
  std::string theta_kind = "theta";
  bool theta_brute = false;
  theta->add_option("--x", theta_x, "element, e.g. \"ord=-2,unit=1\" or JSON")->required();
  theta->add_option("--kind", theta_kind, "theta (squares) or Theta (products)")
      ->check(CLI::IsMember({"theta", "Theta"}))
      ->capture_default_str();
  theta->add_flag("--bruteforce", theta_brute, "also report the finite-sum value");
  add_common(theta, c, false);

  // snf / symdiag
  auto* snf = app.add_subcommand("snf", "Smith normal form a * diag(varpi^-k) * b");
  std::string matrix_text;
  snf->add_option("--matrix", matrix_text, "matrix JSON (inline or file)")->required();
  add_common(snf, c, false);
  auto* symdiag = app.add_subcommand("symdiag", "congruence diagonalization of a symmetric matrix");
  symdiag->add_option("--matrix", matrix_text, "matrix JSON (inline or file)")->required();
  add_common(symdiag, c, false);

  // charfun
  auto* charfun = app.add_subcommand("charfun", "characteristic function of mu (Delta) or nu (Omega)");
  std::string param_text, x_text;
  int corner_n = 0;
  charfun->add_option("--param", param_text, "Delta or Omega parameter JSON")->required();
  charfun->add_option("--x", x_text, "argument x of x e_11")->required();
  charfun->add_option("--n", corner_n, "corner size for an empirical estimate (0: closed form only)");
  add_common(charfun, c, true);

  // sample
  auto* sample = app.add_subcommand("sample", "draw matrices: mu or nu corners, or Haar GL(n, O)");
  std::string sample_what;
  int sample_n = 3, sample_count = 1;
  sample->add_option("what", sample_what, "mu | nu | haar")->required()->check(CLI::IsMember({"mu", "nu", "haar"}));
  sample->add_option("--param", param_text, "parameter JSON (mu, nu)");
  sample->add_option("--n", sample_n, "matrix size")->capture_default_str();
  sample->add_option("--count", sample_count, "number of matrices")->capture_default_str();
  add_common(sample, c, true);

  // oplus
  auto* oplus_cmd = app.add_subcommand("oplus", "semigroup sum of two parameters");
  std::string oplus_a, oplus_b;
  oplus_cmd->add_option("--a", oplus_a, "parameter JSON")->required();
  oplus_cmd->add_option("--b", oplus_b, "parameter JSON")->required();
  add_common(oplus_cmd, c, false);

  // integral
  auto* integral = app.add_subcommand("integral", "one orbital integral against the product formula");
  std::string kind_text = "nonsym", d_text, a_text;
  int integral_n = 0, exact_level = -1;
  bool multiplicativity = false;
  integral->add_option("--kind", kind_text, "nonsym | sym")->capture_default_str();
  integral->add_option("--D", d_text, "JSON array: diagonal of D")->required();
  integral->add_option("--A", a_text, "JSON array: diagonal of A")->required();
  integral->add_option("--n", integral_n, "matrix size (default: |D|)");
  integral->add_option("--exact-level", exact_level, "also enumerate exactly at this level");
  integral->add_flag("--multiplicativity", multiplicativity, "compare against rank-one integrals instead");
  add_common(integral, c, true);

  // verify
  auto* verify = app.add_subcommand("verify", "run acceptance checks");
  std::string suite;
  int workers = 0;
  verify->add_option("suite", suite, "bounds | multiplicativity | charfun | identities | all")
      ->required()
      ->check(CLI::IsMember({"bounds", "multiplicativity", "charfun", "identities", "all"}));
  verify->add_option("--workers", workers, "worker threads, 0 for all cores");
  add_common(verify, c, true);

  // converge
  auto* converge = app.add_subcommand("converge", "orbital measures of canonical generators against the limit");
  std::vector<int> n_list{4, 8, 16};
  converge->add_option("--param", param_text, "Delta or Omega parameter JSON")->required();
  converge->add_option("--n-list", n_list, "increasing sizes")->delimiter(',');
  converge->add_option("--workers", workers, "worker threads, 0 for all cores");
  add_common(converge, c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (workers <= 0) workers = std::max(1u, std::thread::hardware_concurrency());

  try {
    const FieldParams f = FieldParams::parse(c.field);

    if (*field_info) {
      emit(c, field_json(f));
    } else if (*gauss) {
      const std::uint32_t p = gauss_p ? gauss_p : f.p;
      const GaussSumResult g = gauss_sum(ResidueElement::make(gauss_a, p));
      Json j;
      j["p"] = p;
      j["a"] = ResidueElement::make(gauss_a, p).value;
      j["value"] = to_json(g.complex_value);
      j["sign"] = g.sign;
      j["rho"] = g.rho == Rho::One ? "1" : "i";
      j["abs_squared"] = std::norm(g.complex_value);
      emit(c, j);
    } else if (*theta) {
      const FieldElement x = element_from_json(f, theta_x.front() == '{' ? load_json_argument(theta_x) : Json(theta_x));
      const ThetaKind kind = theta_kind == "Theta" ? ThetaKind::Theta : ThetaKind::LittleTheta;
      const CharValue v = theta_closed(x, kind);
      if (!theta_brute) {
        write_text(c, to_json(v).dump() + "\n");
      } else {
        Json j;
        j["closed"] = to_json(v);
        j["value"] = to_json(v.to_complex(f.q));
        j["bruteforce"] = to_json(theta_bruteforce(x, kind));
        emit(c, j);
      }
    } else if (*snf) {
      emit(c, to_json(smith_normal_form(matrix_from_json(f, load_json_argument(matrix_text)))));
    } else if (*symdiag) {
      emit(c, to_json(sym_diagonalize(matrix_from_json(f, load_json_argument(matrix_text)))));
    } else if (*charfun) {
      const Json pj = load_json_argument(param_text);
      const FieldElement x = element_from_json(f, x_text.front() == '{' ? load_json_argument(x_text) : Json(x_text));
      const bool delta = is_delta_json(pj);
      const DeltaParam dp = delta ? delta_from_json(pj) : DeltaParam{};
      const OmegaParam op = delta ? OmegaParam{} : omega_from_json(pj);
      if (x.is_zero()) throw UsageError("--x must be nonzero");
      const CharValue v = delta ? char_mu(dp, -x.valuation()) : char_nu(op, x);
      Json j;
      j["measure"] = delta ? "mu" : "nu";
      j["param"] = pj;
      j["x"] = to_json(x);
      j["closed_form"] = to_json(v);
      j["value"] = to_json(v.to_complex(f.q));
      if (corner_n > 0) {
        require_samples(c);
        announce_seed(c);
        RandomStream rng = RandomStream(c.seed).derive("charfun");
        McAccumulator acc;
        for (std::int64_t i = 0; i < c.samples; ++i) {
          const MatF m = delta ? sample_mu_corner(f, dp, corner_n, rng) : sample_nu_corner(f, op, corner_n, rng);
          acc.add(chi(x * m(0, 0)));
        }
        const McEstimate e = acc.estimate(c.seed);
        j["empirical"] = to_json(e);
        j["n"] = corner_n;
        j["pass"] = std::abs(e.mean - v.to_complex(f.q)) <= 3 * e.stderr_total() + 1e-9;
      }
      emit(c, j);
    } else if (*sample) {
      announce_seed(c);
      if (sample_n < 1 || sample_count < 1) throw UsageError("--n and --count must be positive");
      RandomStream rng = RandomStream(c.seed).derive("sample").derive(sample_what);
      Json mats = Json::array();
      Json pj;
      if (sample_what != "haar") {
        if (param_text.empty()) throw UsageError("sample " + sample_what + " needs --param");
        pj = load_json_argument(param_text);
      }
      for (int i = 0; i < sample_count; ++i) {
        if (sample_what == "haar") {
          mats.push_back(to_json(haar_gl(f, sample_n, rng)));
        } else if (sample_what == "mu") {
          mats.push_back(to_json(sample_mu_corner(f, delta_from_json(pj), sample_n, rng)));
        } else {
          mats.push_back(to_json(sample_nu_corner(f, omega_from_json(pj), sample_n, rng)));
        }
      }
      Json j;
      j["kind"] = sample_what;
      j["field"] = f.spec();
      j["seed"] = c.seed;
      j["matrices"] = mats;
      emit(c, j);
    } else if (*oplus_cmd) {
      const Json a = load_json_argument(oplus_a), b = load_json_argument(oplus_b);
      if (is_delta_json(a) != is_delta_json(b)) throw UsageError("--a and --b must both be Delta or both Omega");
      emit(c, is_delta_json(a) ? to_json(oplus(delta_from_json(a), delta_from_json(b)))
                               : to_json(oplus(omega_from_json(a), omega_from_json(b))));
    } else if (*integral) {
      require_samples(c);
      announce_seed(c);
      const IntegralKind kind = parse_integral_kind(kind_text);
      const auto D = element_list(f, d_text), A = element_list(f, a_text);
      const int n = integral_n > 0 ? integral_n : static_cast<int>(D.size());
      const RandomStream rng = RandomStream(c.seed).derive("integral");
      if (multiplicativity) {
        const auto rep = verify_multiplicativity(kind, D, A, n, c.samples, rng, workers);
        emit(c, to_json(rep), multiplicativity_csv_header() + "\n" + to_csv_row(rep) + "\n");
        return rep.pass ? 0 : kExitFailed;
      }
      const auto rep = verify_bound(kind, D, A, n, c.samples, rng, workers);
      Json j = to_json(rep);
      if (exact_level >= 0) j["exact"] = to_json(exact_orbital_integral(kind, D, A, n, exact_level));
      emit(c, j, bound_csv_header() + "\n" + to_csv_row(rep) + "\n");
      return rep.pass ? 0 : kExitFailed;
    } else if (*verify) {
      require_samples(c);
      announce_seed(c);
      CriterionOptions opt;
      opt.seed = c.seed;
      opt.workers = workers;
      opt.mc_samples = c.samples;
      opt.field = c.field;
      std::vector<int> ids;
      if (suite == "bounds") ids = {4, 5};
      if (suite == "multiplicativity") ids = {4, 6};
      if (suite == "charfun") ids = {6, 7};
      if (suite == "identities") ids = {1, 2, 3, 8, 9};
      if (suite == "all") ids = {1, 2, 3, 4, 5, 6, 7, 8, 9};
      std::vector<CriterionResult> results;
      for (int id : ids) {
        results.push_back(run_criterion(id, opt));
        std::cerr << summary_line(results.back()) << '\n';
      }
      if (suite == "identities") {
        results.push_back(run_identity_aux(opt));
        std::cerr << summary_line(results.back()) << '\n';
      }
      bool all = true;
      Json list = Json::array();
      for (const auto& r : results) {
        all = all && r.pass;
        Json rj = to_json(r);
        rj.erase("seconds");  // timing stays out of the report so reruns are byte-identical
        list.push_back(rj);
      }
      Json j;
      j["suite"] = suite;
      j["seed"] = c.seed;
      j["n_samples"] = c.samples;
      j["pass"] = all;
      j["criteria"] = list;
      emit(c, j, verify_csv(results));
      return all ? 0 : kExitFailed;
    } else if (*converge) {
      require_samples(c);
      announce_seed(c);
      const Json pj = load_json_argument(param_text);
      const RandomStream rng = RandomStream(c.seed).derive("converge");
      const ConvergenceTable t = is_delta_json(pj)
                                     ? convergence_experiment(f, delta_from_json(pj), n_list, c.samples, rng, workers)
                                     : convergence_experiment(f, omega_from_json(pj), n_list, c.samples, rng, workers);
      Json j = to_json(t);
      j["param"] = pj;
      j["field"] = f.spec();
      j["seed"] = c.seed;
      emit(c, j, convergence_csv_header() + "\n" + to_csv_rows(t));
      return t.pass ? 0 : kExitFailed;
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error in " << e.module() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "bad JSON input: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
