#pragma once

// JSON and CSV encodings of the library's values and reports.
//
//   element    {"ord": k, "digits": [d0, ...]}; zero is {"ord": null, "digits": []}
//   matrix     {"rows": n, "cols": m, "entries": [element, ...]} row-major
//   charvalue  {"unit": "+1"|"-1"|"+i"|"-i"|"0", "half_exp": m}
//   complex    [re, im]
//   delta      {"head": [...], "tail": "neginf" | {"const": k}}
//   omega      {"k": k | "neginf", "kk": [...], "kkp": [...]}

#include <iosfwd>
#include <string>
#include <string_view>

#include "json.hpp"
#include "lfrm/orbital.hpp"

namespace lfrm {

using Json = nlohmann::ordered_json;

Json to_json(const FieldElement& x);
// Also accepts an integer, or the inline form "ord=<k>,unit=<u>" meaning u * varpi^k.
FieldElement element_from_json(const FieldParams& f, const Json& j);
FieldElement parse_element_inline(const FieldParams& f, std::string_view s);

Json to_json(const MatF& m);
MatF matrix_from_json(const FieldParams& f, const Json& j);

Json to_json(const CharValue& v);
CharValue charvalue_from_json(const Json& j);

Json to_json(std::complex<double> z);
std::string to_string(const Rational& r);  // "p/q", or "p" for integers

Json to_json(const DeltaParam& p);
DeltaParam delta_from_json(const Json& j);
Json to_json(const OmegaParam& p);
OmegaParam omega_from_json(const Json& j);

Json to_json(const SNFResult& r);
Json to_json(const SymDiagResult& r);

Json to_json(const McEstimate& e);
Json to_json(const BoundReport& r);
Json to_json(const MultiplicativityReport& r);
Json to_json(const ConvergenceTable& t);

// Parses a JSON document given inline or, when `text` names an existing file,
// read from that file. Raises ParseError with the reader's message.
Json load_json_argument(std::string_view text);

// CSV mirrors: a header line and one row per configuration.
std::string bound_csv_header();
std::string to_csv_row(const BoundReport& r);
std::string multiplicativity_csv_header();
std::string to_csv_row(const MultiplicativityReport& r);
std::string convergence_csv_header();
std::string to_csv_rows(const ConvergenceTable& t);

}  // namespace lfrm
