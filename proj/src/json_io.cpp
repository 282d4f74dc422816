#include "lfrm/json_io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lfrm/error.hpp"

namespace lfrm {

namespace {

constexpr std::string_view kModule = "json";

[[noreturn]] void bad(const std::string& what) { raise(Errc::ParseError, kModule, what); }

std::int64_t to_int(std::string_view s, std::string_view what) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) bad("bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

std::vector<std::int64_t> int_list(const Json& j, std::string_view key) {
  if (!j.contains(key)) return {};
  const Json& v = j.at(std::string(key));
  if (!v.is_array()) bad(std::string(key) + " must be an array");
  std::vector<std::int64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) bad(std::string(key) + " entries must be integers");
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

std::string list_string(const std::vector<FieldElement>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i].to_string();
  return s;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

Json elements(const std::vector<FieldElement>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

}  // namespace

// ---- elements and matrices --------------------------------------------------------------

Json to_json(const FieldElement& x) {
  Json j;
  if (x.is_zero()) {
    j["ord"] = nullptr;
    j["digits"] = Json::array();
    return j;
  }
  j["ord"] = x.valuation();
  Json d = Json::array();
  for (auto v : x.digits()) d.push_back(int(v));
  j["digits"] = d;
  return j;
}

FieldElement parse_element_inline(const FieldParams& f, std::string_view s) {
  std::int64_t ord = 0, unit = 1;
  bool have_ord = false;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t comma = s.find(',', pos);
    const std::string_view item = s.substr(pos, comma == std::string_view::npos ? s.size() - pos : comma - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) bad("expected key=value in element '" + std::string(s) + "'");
    const std::string_view key = item.substr(0, eq), val = item.substr(eq + 1);
    if (key == "ord") {
      ord = to_int(val, "ord");
      have_ord = true;
    } else if (key == "unit") {
      unit = to_int(val, "unit");
    } else {
      bad("unknown element key '" + std::string(key) + "'");
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (!have_ord) bad("element needs ord=<k>");
  const FieldElement u = FieldElement::from_int(f, unit);
  if (!u.is_unit()) bad("unit=" + std::to_string(unit) + " is not a unit");
  return u.shifted(ord);
}

FieldElement element_from_json(const FieldParams& f, const Json& j) {
  if (j.is_number_integer()) return FieldElement::from_int(f, j.get<std::int64_t>());
  if (j.is_string()) return parse_element_inline(f, j.get<std::string>());
  if (!j.is_object() || !j.contains("digits")) bad("element must be {\"ord\", \"digits\"}");
  std::vector<std::uint8_t> digits;
  for (const auto& d : j.at("digits")) {
    if (!d.is_number_integer()) bad("digits must be integers");
    const auto v = d.get<std::int64_t>();
    if (v < 0 || v >= f.p) bad("digit " + std::to_string(v) + " outside [0, p)");
    digits.push_back(static_cast<std::uint8_t>(v));
  }
  if (digits.size() > static_cast<std::size_t>(kMaxPrecision)) bad("too many digits");
  const Json& ord = j.contains("ord") ? j.at("ord") : Json(nullptr);
  if (ord.is_null()) {
    for (auto d : digits) {
      if (d != 0) bad("nonzero digits with a null ord");
    }
    return FieldElement::zero(f);
  }
  if (!ord.is_number_integer()) bad("ord must be an integer or null");
  if (!digits.empty() && digits[0] == 0) bad("leading digit must be nonzero");
  return FieldElement::from_digits(f, ord.get<std::int64_t>(), digits);
}

Json to_json(const MatF& m) {
  Json j;
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  Json e = Json::array();
  for (const auto& x : m.entries()) e.push_back(to_json(x));
  j["entries"] = e;
  return j;
}

MatF matrix_from_json(const FieldParams& f, const Json& j) {
  // a bare nested array [[...], ...] is accepted too
  if (j.is_array()) {
    const int rows = static_cast<int>(j.size());
    const int cols = rows ? static_cast<int>(j[0].size()) : 0;
    std::vector<FieldElement> e;
    for (const auto& row : j) {
      if (!row.is_array() || static_cast<int>(row.size()) != cols) bad("ragged matrix rows");
      for (const auto& x : row) e.push_back(element_from_json(f, x));
    }
    return MatF::from_entries(f, rows, cols, std::move(e));
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
    bad("matrix must be {\"rows\", \"cols\", \"entries\"}");
  }
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  const Json& ent = j.at("entries");
  if (rows < 0 || cols < 0 || !ent.is_array() || ent.size() != std::size_t(rows) * cols) {
    bad("entries must hold rows * cols elements");
  }
  std::vector<FieldElement> e;
  for (const auto& x : ent) e.push_back(element_from_json(f, x));
  return MatF::from_entries(f, rows, cols, std::move(e));
}

// ---- values -----------------------------------------------------------------------------

Json to_json(const CharValue& v) {
  Json j;
  j["unit"] = v.unit_string();
  j["half_exp"] = v.half_exp;
  return j;
}

CharValue charvalue_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("unit")) bad("charvalue must be {\"unit\", \"half_exp\"}");
  const Unit u = CharValue::parse_unit(j.at("unit").get<std::string>());
  return CharValue::make(u, j.value("half_exp", 0));
}

Json to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r), den = boost::multiprecision::denominator(r);
  return den == 1 ? num.str() : num.str() + "/" + den.str();
}

Json to_json(const DeltaParam& p) {
  Json j;
  j["head"] = p.head;
  if (p.tail) {
    j["tail"] = Json{{"const", *p.tail}};
  } else {
    j["tail"] = "neginf";
  }
  return j;
}

DeltaParam delta_from_json(const Json& j) {
  if (!j.is_object()) bad("Delta parameter must be an object");
  std::optional<std::int64_t> tail;
  if (j.contains("tail")) {
    const Json& t = j.at("tail");
    if (t.is_string()) {
      if (t.get<std::string>() != "neginf") bad("tail must be \"neginf\" or {\"const\": k}");
    } else if (t.is_object() && t.contains("const") && t.at("const").is_number_integer()) {
      tail = t.at("const").get<std::int64_t>();
    } else {
      bad("tail must be \"neginf\" or {\"const\": k}");
    }
  }
  DeltaParam p = DeltaParam::make(int_list(j, "head"), tail);
  if (const auto v = validate(p); !v.ok) raise(Errc::InvalidParam, kModule, v.message);
  return p;
}

Json to_json(const OmegaParam& p) {
  Json j;
  if (p.k) {
    j["k"] = *p.k;
  } else {
    j["k"] = "neginf";
  }
  j["kk"] = p.kk;
  j["kkp"] = p.kkp;
  return j;
}

OmegaParam omega_from_json(const Json& j) {
  if (!j.is_object()) bad("Omega parameter must be an object");
  std::optional<std::int64_t> k;
  if (j.contains("k")) {
    const Json& kj = j.at("k");
    if (kj.is_number_integer()) {
      k = kj.get<std::int64_t>();
    } else if (!(kj.is_string() && kj.get<std::string>() == "neginf")) {
      bad("k must be an integer or \"neginf\"");
    }
  }
  OmegaParam p{k, int_list(j, "kk"), int_list(j, "kkp")};
  if (const auto v = validate(p); !v.ok) raise(Errc::InvalidParam, kModule, v.message);
  return p;
}

Json to_json(const SNFResult& r) {
  Json j;
  Json sing = Json::array();
  for (auto s : r.sing) {
    if (s == kMinusInfinity) {
      sing.push_back("-inf");
    } else {
      sing.push_back(s);
    }
  }
  j["sing"] = sing;
  j["a"] = to_json(r.a);
  j["b"] = to_json(r.b);
  return j;
}

Json to_json(const SymDiagResult& r) {
  Json j;
  j["diag"] = elements(r.diag);
  Json cls = Json::array();
  for (const auto& c : r.classes) {
    Json e;
    if (c.ord == kInfiniteValuation) {
      e["ord"] = nullptr;
    } else {
      e["ord"] = c.ord;
    }
    e["class"] = c.epsilon ? "eps" : "1";
    cls.push_back(e);
  }
  j["classes"] = cls;
  j["g"] = to_json(r.g);
  return j;
}

// ---- reports ----------------------------------------------------------------------------

Json to_json(const McEstimate& e) {
  Json j;
  j["mean"] = to_json(e.mean);
  j["stderr"] = Json::array({e.stderr_re, e.stderr_im});
  j["n_samples"] = e.n_samples;
  j["seed"] = e.seed;
  return j;
}

Json to_json(const BoundReport& r) {
  const std::uint32_t q = r.D.empty() ? r.A.at(0).params().q : r.D[0].params().q;
  Json j;
  j["kind"] = std::string(to_string(r.kind));
  j["n"] = r.n;
  j["r"] = r.r;
  j["D"] = elements(r.D);
  j["A"] = elements(r.A);
  j["estimate"] = to_json(r.estimate.mean);
  j["stderr"] = r.estimate.stderr_total();
  j["closed_form"] = to_json(r.closed_form);
  j["closed_form_value"] = to_json(r.closed_form.to_complex(q));
  j["observed_gap"] = r.observed_gap;
  j["paper_bound"] = to_string(r.bounds.stated);
  j["corrected_bound"] = to_string(r.bounds.corrected);
  j["pass"] = r.pass;
  j["corrected_pass"] = r.corrected_pass;
  j["n_samples"] = r.estimate.n_samples;
  j["seed"] = r.estimate.seed;
  return j;
}

Json to_json(const MultiplicativityReport& r) {
  Json j;
  j["kind"] = std::string(to_string(r.kind));
  j["n"] = r.n;
  j["r"] = r.r;
  j["D"] = elements(r.D);
  j["A"] = elements(r.A);
  j["estimate"] = to_json(r.joint.mean);
  j["stderr"] = r.stderr_total;
  Json ones = Json::array();
  for (const auto& e : r.rank_one) ones.push_back(to_json(e));
  j["rank_one"] = ones;
  j["product"] = to_json(r.product);
  j["observed_gap"] = r.observed_gap;
  j["paper_bound"] = to_string(r.bounds.uam);
  j["corrected_bound"] = to_string(r.bounds.corrected_uam);
  j["pass"] = r.pass;
  j["corrected_pass"] = r.corrected_pass;
  j["n_samples"] = r.joint.n_samples;
  j["seed"] = r.joint.seed;
  return j;
}

Json to_json(const ConvergenceTable& t) {
  Json j;
  j["kind"] = std::string(to_string(t.kind));
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json e;
    e["n"] = row.n;
    e["argument"] = to_json(row.argument);
    e["estimate"] = to_json(row.estimate.mean);
    e["stderr"] = row.estimate.stderr_total();
    e["closed_form"] = to_json(row.closed_form);
    e["observed_gap"] = row.observed_gap;
    e["paper_bound"] = to_string(row.bound);
    e["pass"] = row.pass;
    e["seed"] = row.estimate.seed;
    rows.push_back(e);
  }
  j["rows"] = rows;
  j["bounds_strictly_decreasing"] = t.bounds_strictly_decreasing;
  j["pass"] = t.pass;
  return j;
}

Json load_json_argument(std::string_view text) {
  std::string body(text);
  std::error_code ec;
  if (!body.empty() && body.front() != '{' && body.front() != '[' &&
      std::filesystem::is_regular_file(body, ec)) {
    std::ifstream in(body);
    std::stringstream ss;
    ss << in.rdbuf();
    body = ss.str();
  }
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

// ---- CSV --------------------------------------------------------------------------------

std::string bound_csv_header() {
  return "kind,n,r,D,A,estimate_re,estimate_im,stderr,closed_unit,closed_half_exp,observed_gap,"
         "paper_bound,corrected_bound,pass,corrected_pass,n_samples,seed";
}

std::string to_csv_row(const BoundReport& r) {
  std::ostringstream os;
  os << to_string(r.kind) << ',' << r.n << ',' << r.r << ",\"" << list_string(r.D) << "\",\""
     << list_string(r.A) << "\"," << fmt(r.estimate.mean.real()) << ',' << fmt(r.estimate.mean.imag())
     << ',' << fmt(r.estimate.stderr_total()) << ',' << r.closed_form.unit_string() << ','
     << r.closed_form.half_exp << ',' << fmt(r.observed_gap) << ',' << to_string(r.bounds.stated)
     << ',' << to_string(r.bounds.corrected) << ',' << (r.pass ? "true" : "false") << ','
     << (r.corrected_pass ? "true" : "false") << ',' << r.estimate.n_samples << ','
     << r.estimate.seed;
  return os.str();
}

std::string multiplicativity_csv_header() {
  return "kind,n,r,D,A,joint_re,joint_im,product_re,product_im,stderr,observed_gap,paper_bound,"
         "corrected_bound,pass,corrected_pass,n_samples,seed";
}

std::string to_csv_row(const MultiplicativityReport& r) {
  std::ostringstream os;
  os << to_string(r.kind) << ',' << r.n << ',' << r.r << ",\"" << list_string(r.D) << "\",\""
     << list_string(r.A) << "\"," << fmt(r.joint.mean.real()) << ',' << fmt(r.joint.mean.imag())
     << ',' << fmt(r.product.real()) << ',' << fmt(r.product.imag()) << ',' << fmt(r.stderr_total)
     << ',' << fmt(r.observed_gap) << ',' << to_string(r.bounds.uam) << ','
     << to_string(r.bounds.corrected_uam) << ',' << (r.pass ? "true" : "false") << ','
     << (r.corrected_pass ? "true" : "false") << ',' << r.joint.n_samples << ',' << r.joint.seed;
  return os.str();
}

std::string convergence_csv_header() {
  return "kind,n,argument,estimate_re,estimate_im,stderr,closed_unit,closed_half_exp,observed_gap,"
         "paper_bound,pass,seed";
}

std::string to_csv_rows(const ConvergenceTable& t) {
  std::ostringstream os;
  for (const auto& row : t.rows) {
    os << to_string(t.kind) << ',' << row.n << ",\"" << row.argument.to_string() << "\","
       << fmt(row.estimate.mean.real()) << ',' << fmt(row.estimate.mean.imag()) << ','
       << fmt(row.estimate.stderr_total()) << ',' << row.closed_form.unit_string() << ','
       << row.closed_form.half_exp << ',' << fmt(row.observed_gap) << ',' << to_string(row.bound)
       << ',' << (row.pass ? "true" : "false") << ',' << row.estimate.seed << '\n';
  }
  return os.str();
}

}  // namespace lfrm
