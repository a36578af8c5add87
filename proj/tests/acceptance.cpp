// Acceptance runner: one line per criterion, exact comparisons, wall-clock
// budgets enforced.  Exits nonzero if any criterion fails.

#include "mvfe/equation_io.hpp"
#include "mvfe/lmr.hpp"
#include "mvfe/polyomino.hpp"
#include "mvfe/qbinomial.hpp"
#include "mvfe/solver.hpp"
#include "random_eq.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mvfe;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

// Runs one criterion, timing it and enforcing the budget (0 = untimed).
// The body returns an empty string on success or a description of the first
// failure.
void criterion(int number, const std::string& label, double budget_seconds,
               const std::function<std::string()>& body) {
    auto start = Clock::now();
    std::string detail;
    try {
        detail = body();
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (detail.empty() && budget_seconds > 0 && elapsed > budget_seconds)
        detail = "exceeded the time budget";
    bool pass = detail.empty();
    if (!pass) ++g_failures;
    std::string timing;
    {
        std::ostringstream os;
        os.precision(2);
        os << std::fixed << " (" << elapsed << "s";
        if (budget_seconds > 0) os << ", budget " << int(budget_seconds) << "s";
        os << ")";
        timing = os.str();
    }
    std::printf("%s: criterion %d: %s%s%s%s\n", pass ? "PASS" : "FAIL",
                number, label.c_str(), timing.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    std::fflush(stdout);
}

std::string mismatch(const char* what, const Series& a, const Series& b) {
    std::ostringstream os;
    os << what;
    auto d = first_difference(a, b);
    if (d)
        os << " differ at " << to_text(*d, *a.table()) << " ("
           << to_string(a.coefficient(*d)) << " vs "
           << to_string(b.coefficient(*d)) << ")";
    else
        os << " differ";
    return os.str();
}

FunctionalEquation coin_equation(std::uint32_t x_cap, std::uint32_t q_cap) {
    auto table = make_table({"x", "q", "r"}, {{"x", x_cap}, {"q", q_cap}});
    Series one = Series::constant(table, 1);
    std::vector<StepSpec> steps;
    steps.push_back({{0}, one});
    steps.push_back({{1}, one});
    return FunctionalEquation(table, {"r"}, Series::variable(table, "r"),
                              std::move(steps));
}

// ---- criterion bodies -------------------------------------------------------

std::string run_coin() {
    FunctionalEquation eq = coin_equation(12, 12);
    Series solved = solve_sequence_sum(eq);
    const VarTablePtr& t = eq.table();
    Series one = Series::constant(t, 1);
    Series q = Series::variable(t, "q");
    Series x = Series::variable(t, "x");
    Series r = Series::variable(t, "r");
    Series expected = Series::zero(t);
    Series x_pow = one;
    for (int n = 0; n <= 12; ++n) {
        expected = expected + x_pow * pow(one + q, n) * r;
        x_pow = x_pow * x;
    }
    if (solved != expected)
        return mismatch("coin series and binomial expansion", solved,
                        expected);
    return {};
}

std::string run_oracle_equivalence() {
    // the worked single-variable example
    {
        FunctionalEquation eq = coin_equation(8, 8);
        if (solve_sequence_sum(eq) != solve_fixed_point(eq))
            return "oracles disagree on the coin equation";
    }
    // a single-variable-shape instance
    {
        auto table = make_table({"x", "q", "s"}, {{"x", 6}, {"q", 8}});
        Series one = Series::constant(table, 1);
        Series q = Series::variable(table, "q");
        Series s = Series::variable(table, "s");
        FunctionalEquation eq = make_mbm_equation(s, one + q * s, q * s, "s");
        if (solve_sequence_sum(eq) != solve_fixed_point(eq))
            return "oracles disagree on the single-variable-shape equation";
    }
    // the symmetric two-variable, four-step instance
    {
        auto table = make_table({"x", "q", "u", "v"}, {{"x", 5}, {"q", 7}});
        Series one = Series::constant(table, 1);
        Series q = Series::variable(table, "q");
        Series u = Series::variable(table, "u");
        Series v = Series::variable(table, "v");
        std::vector<StepSpec> steps;
        steps.push_back({{-1, -1}, one});
        steps.push_back({{-1, 1}, u});
        steps.push_back({{1, -1}, q});
        steps.push_back({{1, 1}, one + q * v});
        FunctionalEquation eq(table, {"u", "v"}, u * v, std::move(steps));
        if (solve_sequence_sum(eq) != solve_fixed_point(eq))
            return "oracles disagree on the two-variable equation";
    }
    std::mt19937_64 rng(20260816);
    for (int trial = 0; trial < 100; ++trial) {
        FunctionalEquation eq = mvfe_test::random_equation(rng);
        Series a = solve_sequence_sum(eq);
        Series b = solve_fixed_point(eq);
        if (a != b) {
            std::ostringstream os;
            os << "random equation " << trial << ": "
               << mismatch("oracles", a, b);
            return os.str();
        }
    }
    return {};
}

std::string run_mbm_closed_form() {
    std::mt19937_64 rng(833);
    std::uniform_int_distribution<std::uint32_t> x_cap_dist(1, 6);
    std::uniform_int_distribution<std::uint32_t> q_cap_dist(1, 8);
    for (int trial = 0; trial < 50; ++trial) {
        auto table = make_table(
            {"x", "q", "s"}, {{"x", x_cap_dist(rng)}, {"q", q_cap_dist(rng)}});
        Series e = mvfe_test::random_poly(rng, table, 3);
        Series f = mvfe_test::random_poly(rng, table, 3);
        Series g = mvfe_test::random_poly(rng, table, 3);
        Series closed = solve_mbm(e, f, g, "s");
        Series summed = solve_sequence_sum(make_mbm_equation(e, f, g, "s"));
        if (closed != summed) {
            std::ostringstream os;
            os << "random instance " << trial << ": "
               << mismatch("closed form and sequence sum", closed, summed);
            return os.str();
        }
    }
    auto table = polyomino_vartable(6, 12);
    MbmParts parts = polyomino_mbm_parts(table);
    Series closed = solve_mbm(parts.e, parts.f, parts.g, "s");
    Series summed = solve_sequence_sum(polyomino_equation(table));
    if (closed != summed)
        return mismatch("polyomino closed form and sequence sum", closed,
                        summed);
    return {};
}

// The state after a prefix, written straight from the definition: a_i sums
// the entries after the last -1, b_i survives only if no -1 occurred.
ExponentState state_from_prefix(const std::vector<std::vector<int>>& prefix,
                                std::size_t m) {
    ExponentState st = ExponentState::initial(m);
    for (std::size_t i = 0; i < m; ++i) {
        std::uint64_t a = 0;
        bool saw_minus = false;
        for (const auto& j : prefix) {
            if (j[i] == -1) {
                a = 0;
                saw_minus = true;
            } else {
                a += static_cast<std::uint64_t>(j[i]);
            }
        }
        st.a[i] = a;
        st.b[i] = saw_minus ? 0 : 1;
    }
    return st;
}

std::string run_exponent_bookkeeping() {
    std::mt19937_64 rng(555);
    std::uniform_int_distribution<int> m_dist(1, 4);
    std::uniform_int_distribution<int> len_dist(0, 15);
    std::uniform_int_distribution<int> entry_dist(-1, 3);
    for (int trial = 0; trial < 10000; ++trial) {
        std::size_t m = static_cast<std::size_t>(m_dist(rng));
        int len = len_dist(rng);
        std::vector<std::vector<int>> prefix;
        ExponentState st = ExponentState::initial(m);
        for (int k = 0; k < len; ++k) {
            std::vector<int> j(m);
            for (auto& e : j) e = entry_dist(rng);
            prefix.push_back(j);
            st = update_state(st, j);
        }
        if (!(st == state_from_prefix(prefix, m))) {
            std::ostringstream os;
            os << "state mismatch on random sequence " << trial;
            return os.str();
        }
    }
    // over {-1,1}: a counts the consecutive 1s ending at the previous entry
    for (int n = 0; n <= 10; ++n) {
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            ExponentState st = ExponentState::initial(1);
            std::uint64_t run = 0;
            bool all_ones = true;
            for (int k = 0; k < n; ++k) {
                int j = (mask >> k) & 1 ? 1 : -1;
                st = update_state(st, {j});
                if (j == 1) {
                    ++run;
                } else {
                    run = 0;
                    all_ones = false;
                }
                if (st.a[0] != run || st.b[0] != (all_ones ? 1 : 0)) {
                    std::ostringstream os;
                    os << "consecutive-ones characterization fails at n=" << n
                       << " mask=" << mask << " k=" << k;
                    return os.str();
                }
            }
        }
    }
    return {};
}

std::string run_polyomino_multistatistic() {
    auto table = polyomino_vartable(12, 12);
    Series solved = solve_sequence_sum(polyomino_equation(table));
    std::vector<Polyomino> all = enumerate_polyominoes(12);
    Series brute = polyomino_series(all, table);
    if (solved != brute)
        return mismatch("solved series and brute-force count", solved, brute);

    // the five-column example's monomial
    long example_count = 0;
    for (const auto& p : all) {
        PolyominoStats st = polyomino_stats(p);
        if (st.area == 11 && st.left == 2 && st.right == 1 && st.width == 5 &&
            st.height == 4)
            ++example_count;
    }
    Rational coeff = solved.coefficient(
        {{"q", 11}, {"s", 2}, {"t", 1}, {"x", 5}, {"y", 4}});
    if (example_count < 1) return "example polyomino not enumerated";
    if (coeff != example_count) {
        std::ostringstream os;
        os << "q^11 s^2 t x^5 y^4 coefficient is " << to_string(coeff)
           << ", brute force counts " << example_count;
        return os.str();
    }

    // perimeter 2n (half-perimeter n = w + h): Catalan numbers
    auto wide = polyomino_vartable(7, 16);
    Series fat = solve_sequence_sum(polyomino_equation(wide));
    for (const char* v : {"q", "s", "t"}) fat = specialized(fat, v, 1);
    std::size_t xi = wide->index_of("x"), yi = wide->index_of("y");
    const long catalan[]{1, 1, 2, 5, 14, 42, 132, 429};  // C_0 .. C_7
    for (int n = 2; n <= 8; ++n) {
        Rational total(0);
        for (const auto& [m, c] : fat.terms())
            if (m.exp[xi] + m.exp[yi] == n) total += c;
        if (total != catalan[n - 1]) {
            std::ostringstream os;
            os << "half-perimeter " << n << " count is " << to_string(total)
               << ", expected " << catalan[n - 1];
            return os.str();
        }
    }
    return {};
}

std::string run_coefficient_extraction() {
    auto table = polyomino_vartable(5, 12);
    Series solved = solve_sequence_sum(polyomino_equation(table));
    for (int n = 0; n <= 4; ++n) {
        for (int m = 1; m <= 3; ++m) {
            Series direct = polyomino_coefficient_xt(n, m, 12);
            Series sliced = slice(
                solved,
                {{"x", static_cast<std::uint32_t>(n + 1)},
                 {"t", static_cast<std::uint32_t>(m)}},
                direct.table());
            if (direct != sliced) {
                std::ostringstream os;
                os << "n=" << n << " m=" << m << ": "
                   << mismatch("formula and sliced series", direct, sliced);
                return os.str();
            }
        }
    }
    return {};
}

std::string run_lmr() {
    for (auto [L, R] : {std::pair{1, 1}, {1, 2}, {2, 1}, {2, 2}}) {
        auto table = lmr_vartable(6, 25);
        Series f0 = solve_sequence_sum(lmr_f0_equation(L, R, table));
        Series f1 = solve_sequence_sum(lmr_f1_equation(L, R, f0));
        Series g = assemble_g(f0, f1);
        Series brute = lmr_brute_series(L, R, table);
        if (g != brute) {
            std::ostringstream os;
            os << "(L,R)=(" << L << "," << R << "): "
               << mismatch("G and brute force", g, brute);
            return os.str();
        }
        Series marked = lmr_n_marked(g, L, R);
        Series marked_brute = lmr_brute_n_marked(L, R, 6, 25);
        if (marked != marked_brute) {
            std::ostringstream os;
            os << "(L,R)=(" << L << "," << R << "): "
               << mismatch("size-marked series and brute force", marked,
                           marked_brute);
            return os.str();
        }
    }
    return {};
}

// Interleaving oracle, also used in the unit tests: histogram inversions of
// all interleavings of k smaller with n-k larger values.
QPolynomial interleaving_oracle(std::uint32_t n, std::uint32_t k) {
    std::vector<Integer> hist(k * (n - k) + 1, 0);
    std::function<void(std::uint32_t, std::uint32_t, std::uint32_t)> rec =
        [&](std::uint32_t remaining, std::uint32_t bound, std::uint32_t inv) {
            if (remaining == 0) {
                hist[inv] += 1;
                return;
            }
            for (std::uint32_t passed = 0; passed <= bound; ++passed)
                rec(remaining - 1, passed, inv + passed);
        };
    rec(k, n - k, 0);
    return QPolynomial(hist);
}

std::string run_qbinomials() {
    for (std::uint32_t n = 0; n <= 8; ++n) {
        for (std::uint32_t k = 0; k <= n; ++k) {
            QPolynomial b = q_binomial(n, k);
            if (n >= 1 && k >= 1 &&
                !(b == q_binomial(n - 1, k - 1) +
                          q_power(k) * q_binomial(n - 1, k)))
                return "recurrence fails";
            if (!(b == q_binomial(n, n - k))) return "symmetry fails";
            Integer at_one = value_at_one(b);
            Integer expect;
            mpz_bin_uiui(expect.get_mpz_t(), n, k);
            if (at_one != expect) return "q=1 specialization fails";
            if (!(b == interleaving_oracle(n, k)))
                return "interleaving oracle disagrees";
        }
    }
    return {};
}

std::string capture(const std::string& command, int& exit_code) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) {
        exit_code = -1;
        return out;
    }
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string run_determinism() {
    const std::string base = std::string(MVFE_CLI_PATH) +
                             " verify --model polyomino --cap x=8 --cap q=11";
    struct Run {
        const char* label;
        std::string flags;
    };
    const Run runs[]{{"serial, first", " --threads 1"},
                     {"serial, second", " --threads 1"},
                     {"parallel, first", " --threads 4"},
                     {"parallel, second", " --threads 4"}};
    std::vector<std::string> reports;
    for (const Run& r : runs) {
        int code = 0;
        std::string out = capture(base + r.flags + " 2>/dev/null", code);
        if (code != 0) {
            std::ostringstream os;
            os << "verify run (" << r.label << ") exited with " << code;
            return os.str();
        }
        reports.push_back(std::move(out));
    }
    for (std::size_t i = 1; i < reports.size(); ++i)
        if (reports[i] != reports[0]) {
            std::ostringstream os;
            os << "report of run " << i + 1 << " differs from run 1";
            return os.str();
        }
    if (reports[0].find("0 failed") == std::string::npos)
        return "verify report does not end clean";
    return {};
}

}  // namespace

int main() {
    criterion(1, "coin-flip series matches the binomial expansion", 1,
              run_coin);
    criterion(2, "sequence-sum and fixed-point oracles agree", 30,
              run_oracle_equivalence);
    criterion(3, "single-variable closed form matches the sequence sum", 30,
              run_mbm_closed_form);
    criterion(4, "exponent bookkeeping matches the prefix definition", 0,
              run_exponent_bookkeeping);
    criterion(5, "polyomino multistatistic series is exact", 60,
              run_polyomino_multistatistic);
    criterion(6, "coefficient extraction in x and t", 10,
              run_coefficient_extraction);
    criterion(7, "(L)(M)(R)-word generating functions are exact", 120,
              run_lmr);
    criterion(8, "q-binomial identities", 1, run_qbinomials);
    criterion(9, "verify reports are byte-identical across runs and threads",
              0, run_determinism);
    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criteria FAILED\n", g_failures);
    return 1;
}
