#pragma once

// JSON equation files, JSON series documents (round-trippable), and CSV
// term listings.
//
// Equation file schema:
//   {
//     "variables": ["x", "q", "r"],        ordered
//     "caps":      {"x": 6, "q": 8},       per-variable exponent caps
//     "subst_vars": ["r"],
//     "e":         "r",                     expression string
//     "steps":     [{"j": [0], "f": "1"}, {"j": [1], "f": "1"}]
//   }

#include "mvfe/solver.hpp"

#include <iosfwd>
#include <string>

namespace mvfe {

// Parses an equation document; expression errors carry line/column positions
// within the offending expression string. cap_overrides replace same-named
// caps from the document before anything is parsed.
FunctionalEquation load_equation(
    const std::string& json_text,
    const std::map<std::string, std::uint32_t>& cap_overrides = {});
FunctionalEquation load_equation_file(
    const std::string& path,
    const std::map<std::string, std::uint32_t>& cap_overrides = {});

// Series as a JSON document: variables, caps, and the terms in canonical
// order with exact rational coefficients.
std::string series_to_json(const Series& s);
Series series_from_json(const std::string& json_text);

// One CSV row per term in canonical order: a column per variable exponent,
// then the exact coefficient.
void series_to_csv(const Series& s, std::ostream& out);

}  // namespace mvfe
