#include "mvfe/equation_io.hpp"

#include "mvfe/expression.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace mvfe {

namespace {

using nlohmann::json;

VarTablePtr table_from_json(const json& doc) {
    if (!doc.contains("variables") || !doc["variables"].is_array())
        throw error("equation document needs a 'variables' array");
    std::vector<std::string> names;
    for (const auto& v : doc["variables"]) {
        if (!v.is_string()) throw error("'variables' entries must be strings");
        names.push_back(v.get<std::string>());
    }
    std::map<std::string, std::uint32_t> caps;
    if (doc.contains("caps")) {
        if (!doc["caps"].is_object())
            throw error("'caps' must map variable names to integers");
        for (const auto& [name, value] : doc["caps"].items()) {
            if (!value.is_number_unsigned() || value.get<std::uint64_t>() > kMaxExponent)
                throw error("cap for '" + name +
                            "' must be an integer in [0, " +
                            std::to_string(kMaxExponent) + "]");
            caps[name] = value.get<std::uint32_t>();
        }
    }
    return make_table(std::move(names), caps);
}

}  // namespace

FunctionalEquation load_equation(
    const std::string& json_text,
    const std::map<std::string, std::uint32_t>& cap_overrides) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw error(std::string("malformed JSON: ") + e.what());
    }
    for (const auto& [name, cap] : cap_overrides) doc["caps"][name] = cap;
    VarTablePtr table = table_from_json(doc);

    if (!doc.contains("subst_vars") || !doc["subst_vars"].is_array())
        throw error("equation document needs a 'subst_vars' array");
    std::vector<std::string> subst_vars;
    for (const auto& v : doc["subst_vars"]) {
        if (!v.is_string()) throw error("'subst_vars' entries must be strings");
        subst_vars.push_back(v.get<std::string>());
    }

    if (!doc.contains("e") || !doc["e"].is_string())
        throw error("equation document needs an 'e' expression string");
    Series e = parse_expression(doc["e"].get<std::string>(), table);

    if (!doc.contains("steps") || !doc["steps"].is_array())
        throw error("equation document needs a 'steps' array");
    std::vector<StepSpec> steps;
    for (const auto& step : doc["steps"]) {
        if (!step.is_object() || !step.contains("j") || !step["j"].is_array() ||
            !step.contains("f") || !step["f"].is_string())
            throw error("each step needs a 'j' array and an 'f' expression");
        std::vector<int> j;
        for (const auto& ji : step["j"]) {
            if (!ji.is_number_integer())
                throw error("step tuple entries must be integers");
            j.push_back(ji.get<int>());
        }
        Series f = parse_expression(step["f"].get<std::string>(), table);
        steps.push_back({std::move(j), std::move(f)});
    }
    return FunctionalEquation(table, std::move(subst_vars), std::move(e),
                              std::move(steps));
}

FunctionalEquation load_equation_file(
    const std::string& path,
    const std::map<std::string, std::uint32_t>& cap_overrides) {
    std::ifstream in(path);
    if (!in) throw error("cannot open equation file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return load_equation(buffer.str(), cap_overrides);
}

std::string series_to_json(const Series& s) {
    const VarTable& t = *s.table();
    json doc;
    doc["variables"] = t.names();
    json caps = json::object();
    for (const auto& [name, cap] : t.caps()) caps[name] = cap;
    doc["caps"] = caps;
    json terms = json::array();
    for (const auto& [m, c] : s.terms()) {
        json term;
        std::vector<std::uint32_t> exps(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) exps[i] = m.exp[i];
        term["e"] = exps;
        term["c"] = to_string(c);
        terms.push_back(std::move(term));
    }
    doc["terms"] = std::move(terms);
    return doc.dump(2);
}

Series series_from_json(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw error(std::string("malformed JSON: ") + e.what());
    }
    VarTablePtr table = table_from_json(doc);
    if (!doc.contains("terms") || !doc["terms"].is_array())
        throw error("series document needs a 'terms' array");
    TermMap terms;
    for (const auto& term : doc["terms"]) {
        if (!term.is_object() || !term.contains("e") || !term["e"].is_array() ||
            !term.contains("c") || !term["c"].is_string())
            throw error("each term needs an 'e' array and a 'c' string");
        if (term["e"].size() != table->size())
            throw error("term exponent count does not match 'variables'");
        Monomial m;
        m.width = static_cast<std::uint32_t>(table->size());
        for (std::size_t i = 0; i < table->size(); ++i) {
            const auto& e = term["e"][i];
            if (!e.is_number_unsigned() ||
                e.get<std::uint64_t>() > kMaxExponent)
                throw error("term exponents must be integers in [0, " +
                            std::to_string(kMaxExponent) + "]");
            m.exp[i] = static_cast<std::uint16_t>(e.get<std::uint32_t>());
        }
        Rational c = rational_from_string(term["c"].get<std::string>());
        if (terms.contains(m)) throw error("duplicate term in series document");
        terms.emplace(m, std::move(c));
    }
    return Series::from_terms(std::move(table), std::move(terms));
}

void series_to_csv(const Series& s, std::ostream& out) {
    const VarTable& t = *s.table();
    for (std::size_t i = 0; i < t.size(); ++i) out << t.name(i) << ',';
    out << "coefficient\n";
    for (const auto& [m, c] : s.terms()) {
        for (std::uint32_t i = 0; i < m.width; ++i) out << m.exp[i] << ',';
        out << to_string(c) << '\n';
    }
}

}  // namespace mvfe
