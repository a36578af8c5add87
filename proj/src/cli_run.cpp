#include "mvfe/cli_run.hpp"

#include "mvfe/equation_io.hpp"
#include "mvfe/lmr.hpp"
#include "mvfe/polyomino.hpp"
#include "mvfe/solver.hpp"

#include <json.hpp>

#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace mvfe {

namespace {

std::uint32_t require_cap(const RunConfig& c, const std::string& name) {
    auto it = c.caps.find(name);
    if (it == c.caps.end())
        throw error("the " + c.model + " model needs --cap " + name + "=N");
    return it->second;
}

long param_or(const RunConfig& c, const std::string& name, long fallback) {
    auto it = c.params.find(name);
    return it == c.params.end() ? fallback : it->second;
}

bool is_file_model(const std::string& model) {
    return model.rfind("file:", 0) == 0;
}

FunctionalEquation coin_equation(VarTablePtr table) {
    Series one = Series::constant(table, Rational(1));
    std::vector<StepSpec> steps;
    steps.push_back({{0}, one});
    steps.push_back({{1}, one});
    return FunctionalEquation(table, {"r"}, Series::variable(table, "r"),
                              std::move(steps));
}

// The sample single-variable-shape model:
//   F(s) = x s + x (1 + q s) F(1) + x q s F(qs)
struct SampleMbm {
    Series e, f, g;
};
SampleMbm sample_mbm(VarTablePtr table) {
    Series one = Series::constant(table, Rational(1));
    Series q = Series::variable(table, "q");
    Series s = Series::variable(table, "s");
    return {s, one + q * s, q * s};
}

// Everything `verify` needs; `equations` are checked seq-sum == fixed-point.
struct BuiltModel {
    std::vector<std::pair<std::string, FunctionalEquation>> equations;
    Series solved;
};

BuiltModel build_model(const RunConfig& c) {
    SolveOptions opts{c.threads, true};
    if (c.model == "coin") {
        auto table = make_table({"x", "q", "r"}, {{"x", require_cap(c, "x")},
                                                  {"q", require_cap(c, "q")}});
        FunctionalEquation eq = coin_equation(table);
        Series solved = solve_sequence_sum(eq, opts);
        return {{{"equation", std::move(eq)}}, std::move(solved)};
    }
    if (c.model == "mbm") {
        auto table = make_table({"x", "q", "s"}, {{"x", require_cap(c, "x")},
                                                  {"q", require_cap(c, "q")}});
        SampleMbm parts = sample_mbm(table);
        FunctionalEquation eq =
            make_mbm_equation(parts.e, parts.f, parts.g, "s");
        Series solved = solve_sequence_sum(eq, opts);
        return {{{"equation", std::move(eq)}}, std::move(solved)};
    }
    if (c.model == "polyomino") {
        auto table =
            polyomino_vartable(require_cap(c, "x"), require_cap(c, "q"));
        FunctionalEquation eq = polyomino_equation(table);
        Series solved = solve_sequence_sum(eq, opts);
        return {{{"equation", std::move(eq)}}, std::move(solved)};
    }
    if (c.model == "lmr") {
        long L = param_or(c, "L", 1), R = param_or(c, "R", 1);
        if (L < 1 || R < 1) throw error("need --param L>=1 and --param R>=1");
        auto table = lmr_vartable(require_cap(c, "x"), require_cap(c, "q"));
        FunctionalEquation f0_eq =
            lmr_f0_equation(static_cast<int>(L), static_cast<int>(R), table);
        Series f0 = solve_sequence_sum(f0_eq, opts);
        FunctionalEquation f1_eq =
            lmr_f1_equation(static_cast<int>(L), static_cast<int>(R), f0);
        Series f1 = solve_sequence_sum(f1_eq, opts);
        Series g = assemble_g(f0, f1);
        return {{{"F0 equation", std::move(f0_eq)},
                 {"F1 equation", std::move(f1_eq)}},
                std::move(g)};
    }
    if (is_file_model(c.model)) {
        FunctionalEquation eq =
            load_equation_file(c.model.substr(5), c.caps);
        Series solved = solve_sequence_sum(eq, opts);
        return {{{"equation", std::move(eq)}}, std::move(solved)};
    }
    throw error("unknown model '" + c.model +
                "' (expected coin, mbm, polyomino, lmr, or file:<path>)");
}

// ---- output ---------------------------------------------------------------

std::vector<std::string> grid_other_vars(const VarTable& t,
                                         const std::string& rows_var,
                                         const std::string& cols_var) {
    std::vector<std::string> others;
    for (const auto& name : t.names())
        if (name != rows_var && name != cols_var) others.push_back(name);
    return others;
}

void emit_grid(const Series& series, const std::string& rows_var,
               const std::string& cols_var,
               const std::map<std::string, long>& specialize,
               const std::string& format, std::ostream& os) {
    const VarTable& t = *series.table();
    for (const auto& v : {rows_var, cols_var}) {
        std::size_t idx = t.index_of(v);
        if (!t.is_capped(idx))
            throw error("grid variable '" + v + "' must be capped");
    }
    if (rows_var == cols_var)
        throw error("grid needs two distinct variables");

    Series sp = series;
    std::vector<std::pair<std::string, long>> fixed;
    for (const auto& name : grid_other_vars(t, rows_var, cols_var)) {
        auto it = specialize.find(name);
        long value = it == specialize.end() ? 1 : it->second;
        fixed.emplace_back(name, value);
        sp = specialized(sp, name, value);
    }

    std::uint32_t rows = *t.cap(t.index_of(rows_var));
    std::uint32_t cols = *t.cap(t.index_of(cols_var));
    std::vector<std::vector<std::string>> cells(rows + 1);
    for (std::uint32_t i = 0; i <= rows; ++i) {
        cells[i].reserve(cols + 1);
        for (std::uint32_t j = 0; j <= cols; ++j)
            cells[i].push_back(to_string(
                sp.coefficient({{rows_var, i}, {cols_var, j}})));
    }

    if (format == "json") {
        nlohmann::json doc;
        doc["rows"] = rows_var;
        doc["cols"] = cols_var;
        nlohmann::json spec = nlohmann::json::object();
        for (const auto& [name, value] : fixed) spec[name] = value;
        doc["specialized"] = spec;
        doc["cells"] = cells;
        os << doc.dump(2) << '\n';
        return;
    }
    if (format == "csv") {
        for (std::uint32_t j = 0; j <= cols; ++j)
            os << ',' << cols_var << '^' << j;
        os << '\n';
        for (std::uint32_t i = 0; i <= rows; ++i) {
            os << rows_var << '^' << i;
            for (const auto& cell : cells[i]) os << ',' << cell;
            os << '\n';
        }
        return;
    }
    // human
    if (!fixed.empty()) {
        os << "coefficients of " << rows_var << "^i " << cols_var
           << "^j with";
        for (const auto& [name, value] : fixed)
            os << ' ' << name << '=' << value;
        os << '\n';
    }
    std::vector<std::size_t> width(cols + 1, 0);
    std::vector<std::string> col_label(cols + 1);
    for (std::uint32_t j = 0; j <= cols; ++j) {
        col_label[j] = cols_var + "^" + std::to_string(j);
        width[j] = col_label[j].size();
        for (std::uint32_t i = 0; i <= rows; ++i)
            width[j] = std::max(width[j], cells[i][j].size());
    }
    std::size_t label_width = rows_var.size() + 1 + std::to_string(rows).size();
    os << std::string(label_width, ' ');
    for (std::uint32_t j = 0; j <= cols; ++j)
        os << "  " << std::string(width[j] - col_label[j].size(), ' ')
           << col_label[j];
    os << '\n';
    for (std::uint32_t i = 0; i <= rows; ++i) {
        std::string label = rows_var + "^" + std::to_string(i);
        os << label << std::string(label_width - label.size(), ' ');
        for (std::uint32_t j = 0; j <= cols; ++j)
            os << "  " << std::string(width[j] - cells[i][j].size(), ' ')
               << cells[i][j];
        os << '\n';
    }
}

// ---- verify ---------------------------------------------------------------

struct Reporter {
    std::ostream& os;
    int checks = 0;
    int failures = 0;

    void ok(const std::string& name) {
        ++checks;
        os << "ok: " << name << '\n';
    }
    void fail(const std::string& name, const std::string& why = {}) {
        ++checks;
        ++failures;
        os << "FAIL: " << name;
        if (!why.empty()) os << ": " << why;
        os << '\n';
    }
    void skip(const std::string& name, const std::string& why) {
        os << "skip: " << name << " (" << why << ")\n";
    }
    void equal(const std::string& name, const Series& a, const Series& b) {
        if (a == b) {
            ok(name);
            return;
        }
        auto d = first_difference(a, b);
        std::string why = "no differing monomial found";
        if (d)
            why = "first difference at " + to_text(*d, *a.table()) + " (" +
                  to_string(a.coefficient(*d)) + " vs " +
                  to_string(b.coefficient(*d)) + ")";
        fail(name, why);
    }
    void summary() {
        os << checks << " checks, " << failures << " failed\n";
    }
};

// Sum over w+h = n of the x^w y^h coefficients at q = s = t = 1.
Rational perimeter_count(const Series& polyomino_gf, std::uint32_t n) {
    Series sp = polyomino_gf;
    for (const char* v : {"q", "s", "t"}) sp = specialized(sp, v, 1);
    const VarTable& t = *sp.table();
    std::size_t xi = t.index_of("x"), yi = t.index_of("y");
    Rational total(0);
    for (const auto& [m, c] : sp.terms())
        if (static_cast<std::uint32_t>(m.exp[xi]) + m.exp[yi] == n) total += c;
    return total;
}

void verify_common(Reporter& rep, const BuiltModel& model) {
    for (const auto& [name, eq] : model.equations)
        rep.equal(name + ": sequence sum matches fixed point",
                  solve_sequence_sum(eq), solve_fixed_point(eq));
}

void verify_parallel(Reporter& rep, const RunConfig& c) {
    RunConfig serial = c;
    serial.threads = 1;
    RunConfig parallel = c;
    parallel.threads = 4;
    rep.equal("parallel solve matches serial solve",
              build_model(serial).solved, build_model(parallel).solved);
}

int cmd_verify(const RunConfig& c, std::ostream& os) {
    Reporter rep{os};
    BuiltModel model = build_model(c);
    verify_common(rep, model);

    if (c.model == "coin") {
        const VarTablePtr& table = model.solved.table();
        Series one = Series::constant(table, Rational(1));
        Series q = Series::variable(table, "q");
        Series x = Series::variable(table, "x");
        Series r = Series::variable(table, "r");
        Series expected = Series::zero(table);
        Series x_pow = one;
        for (std::uint32_t n = 0; n <= c.caps.at("x"); ++n) {
            expected = expected + x_pow * pow(one + q, n) * r;
            x_pow = x_pow * x;
        }
        rep.equal("matches the binomial expansion", model.solved, expected);
        rep.equal("matches the closed form r/(1-x-qx)", model.solved,
                  r * invert(one - x - q * x));
    } else if (c.model == "mbm") {
        SampleMbm parts = sample_mbm(model.solved.table());
        rep.equal("closed form matches sequence sum",
                  solve_mbm(parts.e, parts.f, parts.g, "s"), model.solved);
    } else if (c.model == "polyomino") {
        MbmParts parts = polyomino_mbm_parts(model.solved.table());
        rep.equal("closed form matches sequence sum",
                  solve_mbm(parts.e, parts.f, parts.g, "s"), model.solved);
        std::uint32_t q_cap = c.caps.at("q"), x_cap = c.caps.at("x");
        Series brute = polyomino_series(
            enumerate_polyominoes(static_cast<int>(q_cap)),
            model.solved.table());
        rep.equal("matches brute-force enumeration", model.solved, brute);
        if (x_cap >= 5 && q_cap >= 11) {
            Rational c11 = model.solved.coefficient(
                {{"q", 11}, {"s", 2}, {"t", 1}, {"x", 5}, {"y", 4}});
            if (c11 >= 1)
                rep.ok("q^11 s^2 t x^5 y^4 is realized");
            else
                rep.fail("q^11 s^2 t x^5 y^4 is realized",
                         "coefficient is " + to_string(c11));
        } else {
            rep.skip("q^11 s^2 t x^5 y^4 is realized",
                     "needs --cap x>=5 q>=11");
        }
        if (x_cap >= 3 && q_cap >= 4) {
            Rational count = perimeter_count(model.solved, 4);
            if (count == 5)
                rep.ok("perimeter-8 count is the Catalan number 5");
            else
                rep.fail("perimeter-8 count is the Catalan number 5",
                         "got " + to_string(count));
        } else {
            rep.skip("perimeter-8 count is the Catalan number 5",
                     "needs --cap x>=3 q>=4");
        }
    } else if (c.model == "lmr") {
        long L = param_or(c, "L", 1), R = param_or(c, "R", 1);
        std::uint32_t x_cap = c.caps.at("x"), q_cap = c.caps.at("q");
        const Series& g = model.solved;
        std::size_t ti = g.table()->index_of("t");
        // F0 is the t-free part of G; every F1 term carries t.
        bool partition_ok = true;
        auto table = lmr_vartable(x_cap, q_cap);
        FunctionalEquation f0_eq =
            lmr_f0_equation(static_cast<int>(L), static_cast<int>(R), table);
        Series f0 = solve_sequence_sum(f0_eq);
        Series f1 = solve_sequence_sum(
            lmr_f1_equation(static_cast<int>(L), static_cast<int>(R), f0));
        for (const auto& [m, coeff] : f0.terms())
            if (m.exp[ti] != 0) partition_ok = false;
        for (const auto& [m, coeff] : f1.terms())
            if (m.exp[ti] == 0) partition_ok = false;
        if (partition_ok)
            rep.ok("F0 is t-free and every F1 term carries t");
        else
            rep.fail("F0 is t-free and every F1 term carries t");
        if (L + R + static_cast<long>(x_cap) <= 14) {
            rep.equal("matches brute-force enumeration", g,
                      lmr_brute_series(static_cast<int>(L),
                                       static_cast<int>(R), g.table()));
            rep.equal("size-marked series matches brute force",
                      lmr_n_marked(g, static_cast<int>(L),
                                   static_cast<int>(R)),
                      lmr_brute_n_marked(static_cast<int>(L),
                                         static_cast<int>(R),
                                         static_cast<int>(x_cap), q_cap));
        } else {
            rep.skip("matches brute-force enumeration",
                     "L + R + x cap exceeds the enumeration guard of 14");
            rep.skip("size-marked series matches brute force",
                     "L + R + x cap exceeds the enumeration guard of 14");
        }
    }

    verify_parallel(rep, c);
    rep.summary();
    return rep.failures == 0 ? 0 : 1;
}

void cmd_solve(const RunConfig& c, std::ostream& os) {
    Series solved = build_model(c).solved;
    if (c.format == "json" || c.format == "csv") {
        for (const auto& [name, value] : c.specialize)
            solved = specialized(solved, name, value);
    }
    if (c.format == "json") {
        os << series_to_json(solved) << '\n';
    } else if (c.format == "csv") {
        series_to_csv(solved, os);
    } else if (c.format == "human") {
        emit_grid(solved, "x", "q", c.specialize, "human", os);
    } else {
        throw error("unknown format '" + c.format +
                    "' (expected human, csv, or json)");
    }
}

void cmd_table(const RunConfig& c, std::ostream& os) {
    if (c.format != "human" && c.format != "csv" && c.format != "json")
        throw error("unknown format '" + c.format +
                    "' (expected human, csv, or json)");
    Series solved = build_model(c).solved;
    emit_grid(solved, c.rows_var, c.cols_var, c.specialize, c.format, os);
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        std::ofstream file;
        std::ostream* os = &out;
        if (!config.out_path.empty()) {
            file.open(config.out_path);
            if (!file) throw error("cannot open output file: " +
                                   config.out_path);
            os = &file;
        }
        if (config.command == "solve") {
            cmd_solve(config, *os);
            return 0;
        }
        if (config.command == "verify") {
            return cmd_verify(config, *os);
        }
        if (config.command == "table") {
            cmd_table(config, *os);
            return 0;
        }
        throw error("unknown command '" + config.command +
                    "' (expected solve, verify, or table)");
    } catch (const error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace mvfe
