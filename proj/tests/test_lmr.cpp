#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mvfe/lmr.hpp"
#include "mvfe/solver.hpp"

#include <algorithm>
#include <set>

using namespace mvfe;

namespace {

// Definition check written independently of the enumerator.
bool is_lmr_word(const std::vector<int>& w, int L, int M, int R) {
    const int n = L + M + R;
    if (static_cast<int>(w.size()) != n) return false;
    // permutation
    std::vector<bool> seen(n + 1, false);
    for (int v : w) {
        if (v < 1 || v > n || seen[v]) return false;
        seen[v] = true;
    }
    // 321 pattern
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k)
                if (w[i] > w[j] && w[j] > w[k]) return false;
    // low block increasing, high block increasing
    std::vector<int> lows, highs;
    for (int v : w) {
        if (v <= L) lows.push_back(v);
        if (v > L + M) highs.push_back(v);
    }
    if (!std::is_sorted(lows.begin(), lows.end())) return false;
    if (!std::is_sorted(highs.begin(), highs.end())) return false;
    // every low left of every high
    int last_low = -1, first_high = n;
    for (int i = 0; i < n; ++i) {
        if (w[i] <= L) last_low = i;
        if (w[i] > L + M && i < first_high) first_high = i;
    }
    return last_low < first_high;
}

std::vector<std::vector<int>> filter_oracle(int L, int M, int R) {
    const int n = L + M + R;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i + 1;
    std::vector<std::vector<int>> out;
    do {
        if (is_lmr_word(perm, L, M, R)) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

}  // namespace

TEST_CASE("lmr: statistics of the fourteen-letter example") {
    LMRWord w{4, 8, 2, {1, 2, 7, 3, 8, 4, 5, 10, 6, 12, 9, 13, 14, 11}};
    LMRStats st = lmr_stats(w);
    CHECK(st.n == 14);
    CHECK(st.m == 8);
    CHECK(st.inversions == 13);
    CHECK(st.descents == 3);
    CHECK(st.alpha == 1);
    CHECK(st.beta == 2);
    CHECK(st.gamma == 1);
    bool found = false;
    enumerate_lmr(4, 2, 8, [&](const LMRWord& cand) {
        if (cand.word == w.word) found = true;
    });
    CHECK(found);
}

TEST_CASE("lmr: statistics of small words") {
    // 1 3 2 4: one inversion, one descent, alpha counts the trailing 2
    LMRStats st = lmr_stats({1, 2, 1, {1, 3, 2, 4}});
    CHECK(st.n == 4);
    CHECK(st.m == 2);
    CHECK(st.inversions == 1);
    CHECK(st.descents == 1);
    CHECK(st.alpha == 1);
    CHECK(st.beta == 0);
    CHECK(st.gamma == 0);

    // no descent at all: alpha is zero by convention
    LMRStats flat = lmr_stats({1, 1, 1, {1, 2, 3}});
    CHECK(flat.descents == 0);
    CHECK(flat.alpha == 0);
    CHECK(flat.beta == 0);
    CHECK(flat.gamma == 0);

    // M after the leftmost R contributes to gamma and beta counts Rs
    // before the last M: 1 3 4 2 with M = {2, 3}, R = {4}
    LMRStats g = lmr_stats({1, 2, 1, {1, 3, 4, 2}});
    CHECK(g.inversions == 2);
    CHECK(g.descents == 1);
    CHECK(g.gamma == 1);
    CHECK(g.beta == 1);
}

TEST_CASE("lmr: word validation") {
    CHECK_THROWS_AS(lmr_stats({0, 1, 1, {1, 2}}), error);
    CHECK_THROWS_AS(lmr_stats({1, 1, 1, {1, 2}}), error);        // wrong length
    CHECK_THROWS_AS(lmr_stats({1, 1, 1, {1, 2, 2}}), error);     // repeat
    CHECK_THROWS_AS(lmr_stats({2, 1, 1, {2, 1, 3, 4}}), error);  // lows misordered
    CHECK_THROWS_AS(lmr_stats({1, 1, 2, {1, 4, 3, 2}}), error);  // highs misordered
    CHECK_THROWS_AS(lmr_stats({1, 2, 1, {4, 2, 3, 1}}), error);  // low after high
    CHECK_THROWS_AS(lmr_stats({1, 3, 1, {1, 4, 3, 2, 5}}), error);  // 321
}

TEST_CASE("lmr: enumeration against a permutation filter") {
    for (auto [L, M, R] : {std::tuple{1, 0, 1}, {1, 1, 1}, {2, 2, 1},
                           {1, 3, 2}, {2, 2, 2}}) {
        std::vector<std::vector<int>> expect = filter_oracle(L, M, R);
        std::vector<std::vector<int>> got;
        enumerate_lmr(L, R, M,
                      [&](const LMRWord& w) { got.push_back(w.word); });
        std::sort(expect.begin(), expect.end());
        std::sort(got.begin(), got.end());
        CHECK(got == expect);
    }
    // no mids: exactly the identity word
    CHECK(enumerate_lmr(3, 2, 0).size() == 1);
    // enumeration emits no duplicates
    auto words = enumerate_lmr(2, 2, 4);
    std::set<std::vector<int>> dedup;
    for (const auto& w : words) CHECK(dedup.insert(w.word).second);
    CHECK_THROWS_AS(enumerate_lmr(8, 8, 8), error);  // size guard
}

TEST_CASE("lmr: solved G matches brute force and splits as F0 + F1") {
    auto table = lmr_vartable(5, 12);
    FunctionalEquation f0_eq = lmr_f0_equation(1, 1, table);
    Series f0 = solve_sequence_sum(f0_eq);
    CHECK(f0 == solve_fixed_point(f0_eq));
    FunctionalEquation f1_eq = lmr_f1_equation(1, 1, f0);
    Series f1 = solve_sequence_sum(f1_eq);
    CHECK(f1 == solve_fixed_point(f1_eq));
    Series g = assemble_g(f0, f1);
    CHECK(g == lmr_brute_series(1, 1, table));

    // the partition: F0 has no t, F1 is entirely within t >= 1
    std::size_t ti = table->index_of("t");
    for (const auto& [m, c] : f0.terms()) CHECK(m.exp[ti] == 0);
    for (const auto& [m, c] : f1.terms()) CHECK(m.exp[ti] >= 1);
}

TEST_CASE("lmr: two descents force at least four mids") {
    auto table = lmr_vartable(5, 10);
    Series f0 = solve_sequence_sum(lmr_f0_equation(1, 1, table));
    Series f1 = solve_sequence_sum(lmr_f1_equation(1, 1, f0));
    Series g = assemble_g(f0, f1);
    std::size_t xi = table->index_of("x");
    for (const auto& [m, c] : g.terms()) CHECK(m.exp[xi] >= 4);
    // and x^4 is realized
    bool has_x4 = false;
    for (const auto& [m, c] : g.terms())
        if (m.exp[xi] == 4) has_x4 = true;
    CHECK(has_x4);
}

TEST_CASE("lmr: size-marked specialization matches brute force") {
    for (auto [L, R] : {std::pair{1, 1}, {2, 1}, {1, 2}}) {
        auto table = lmr_vartable(5, 12);
        Series f0 = solve_sequence_sum(lmr_f0_equation(L, R, table));
        Series f1 = solve_sequence_sum(lmr_f1_equation(L, R, f0));
        Series g = assemble_g(f0, f1);
        CHECK(lmr_n_marked(g, L, R) == lmr_brute_n_marked(L, R, 5, 12));
    }
}

TEST_CASE("lmr: equation construction validates its inputs") {
    auto table = lmr_vartable(4, 8);
    CHECK_THROWS_AS(lmr_f0_equation(0, 1, table), error);
    CHECK_THROWS_AS(lmr_f0_equation(1, 0, table), error);
    // F1 needs all five variables in the solution's table
    auto small = make_table({"x", "q", "r"}, {{"x", 4}, {"q", 8}});
    Series f0_wrong = Series::zero(small);
    CHECK_THROWS_AS(lmr_f1_equation(1, 1, f0_wrong), error);
    // assembling from different tables is rejected
    auto other = lmr_vartable(5, 8);
    CHECK_THROWS_AS(
        assemble_g(Series::zero(table), Series::zero(other)), error);
}
