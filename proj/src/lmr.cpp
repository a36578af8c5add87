#include "mvfe/lmr.hpp"

#include "mvfe/qbinomial.hpp"

#include <algorithm>

namespace mvfe {

LMRStats lmr_stats(const LMRWord& w) {
    const int L = w.L, M = w.M, R = w.R;
    if (L < 1 || R < 1 || M < 0) throw error("need L >= 1, R >= 1, M >= 0");
    const int n = L + M + R;
    if (static_cast<int>(w.word.size()) != n)
        throw error("word length does not match L + M + R");
    std::vector<bool> seen(n + 1, false);
    for (int v : w.word) {
        if (v < 1 || v > n || seen[v]) throw error("word is not a permutation");
        seen[v] = true;
    }
    // Block-order invariants.
    int last_low = 0, last_high = L + M, first_high_pos = -1;
    for (std::size_t i = 0; i < w.word.size(); ++i) {
        int v = w.word[i];
        if (v <= L) {
            if (v != last_low + 1) throw error("low block out of order");
            ++last_low;
            if (first_high_pos >= 0)
                throw error("a low value appears right of a high value");
        } else if (v > L + M) {
            if (v != last_high + 1) throw error("high block out of order");
            ++last_high;
            if (first_high_pos < 0) first_high_pos = static_cast<int>(i);
        }
    }
    // 321-avoidance.
    {
        int max_so_far = 0, inner = 0;
        for (int v : w.word) {
            if (v < inner) throw error("word contains a 321 pattern");
            if (v < max_so_far) inner = std::max(inner, v);
            max_so_far = std::max(max_so_far, v);
        }
    }

    LMRStats st{};
    st.n = n;
    st.m = M;
    for (std::size_t i = 0; i < w.word.size(); ++i)
        for (std::size_t j = i + 1; j < w.word.size(); ++j)
            if (w.word[i] > w.word[j]) ++st.inversions;

    std::vector<int> m_vals, m_pos;
    for (std::size_t i = 0; i < w.word.size(); ++i)
        if (w.word[i] > L && w.word[i] <= L + M) {
            m_vals.push_back(w.word[i]);
            m_pos.push_back(static_cast<int>(i));
        }
    int last_descent = -1;  // occurrence index (0-based) of the descent's left element
    for (std::size_t i = 0; i + 1 < m_vals.size(); ++i)
        if (m_vals[i] > m_vals[i + 1]) {
            ++st.descents;
            last_descent = static_cast<int>(i);
        }

    if (last_descent >= 0)
        for (std::size_t i = last_descent + 1; i < m_pos.size(); ++i)
            if (m_pos[i] < first_high_pos) ++st.alpha;
    if (!m_pos.empty()) {
        int last_m_pos = m_pos.back();
        for (std::size_t i = 0; i < w.word.size(); ++i)
            if (w.word[i] > L + M && static_cast<int>(i) < last_m_pos)
                ++st.beta;
        for (int p : m_pos)
            if (p > first_high_pos) ++st.gamma;
    }
    return st;
}

namespace {

struct Builder {
    int L, M, R, n;
    std::vector<int> word;
    int used_low = 0, used_mid_mask = 0, used_high = 0;
    int max_so_far = 0, inner = 0;
    const std::function<void(const LMRWord&)>* visit;

    void try_value(int v) {
        if (v < inner) return;  // would complete a 321 pattern
        int save_max = max_so_far, save_inner = inner;
        if (v < max_so_far) inner = std::max(inner, v);
        max_so_far = std::max(max_so_far, v);
        word.push_back(v);
        place();
        word.pop_back();
        max_so_far = save_max;
        inner = save_inner;
    }

    void place() {
        if (static_cast<int>(word.size()) == n) {
            (*visit)({L, M, R, word});
            return;
        }
        // Candidates in increasing value order for a deterministic listing.
        if (used_low < L && used_high == 0) {
            ++used_low;
            try_value(used_low);
            --used_low;
        }
        for (int i = 0; i < M; ++i) {
            if (used_mid_mask & (1 << i)) continue;
            used_mid_mask |= 1 << i;
            try_value(L + 1 + i);
            used_mid_mask &= ~(1 << i);
        }
        if (used_high < R && used_low == L) {
            ++used_high;
            try_value(L + M + used_high);
            --used_high;
        }
    }
};

}  // namespace

void enumerate_lmr(int L, int R, int M,
                   const std::function<void(const LMRWord&)>& visit) {
    if (L < 1 || R < 1 || M < 0) throw error("need L >= 1, R >= 1, M >= 0");
    if (L + M + R > 14) throw error("word size guard exceeded (L+M+R <= 14)");
    Builder b;
    b.L = L;
    b.M = M;
    b.R = R;
    b.n = L + M + R;
    b.visit = &visit;
    b.place();
}

std::vector<LMRWord> enumerate_lmr(int L, int R, int M) {
    std::vector<LMRWord> out;
    enumerate_lmr(L, R, M, [&](const LMRWord& w) { out.push_back(w); });
    return out;
}

VarTablePtr lmr_vartable(std::uint32_t x_cap, std::uint32_t q_cap) {
    return make_table({"x", "q", "r", "s", "t"}, {{"x", x_cap}, {"q", q_cap}});
}

Series lmr_brute_series(int L, int R, VarTablePtr table) {
    std::uint32_t x_cap = *table->cap(table->index_of("x"));
    auto q_cap = table->cap(table->index_of("q"));
    TermMap terms;
    for (int M = 0; M <= static_cast<int>(x_cap); ++M) {
        enumerate_lmr(L, R, M, [&](const LMRWord& w) {
            LMRStats st = lmr_stats(w);
            if (st.descents < 2) return;
            if (q_cap && st.inversions > static_cast<long>(*q_cap)) return;
            Monomial m;
            m.width = static_cast<std::uint32_t>(table->size());
            m.exp[table->index_of("x")] = static_cast<std::uint16_t>(st.m);
            m.exp[table->index_of("q")] =
                static_cast<std::uint16_t>(st.inversions);
            m.exp[table->index_of("r")] = static_cast<std::uint16_t>(st.alpha);
            m.exp[table->index_of("s")] = static_cast<std::uint16_t>(st.beta);
            m.exp[table->index_of("t")] = static_cast<std::uint16_t>(st.gamma);
            auto [it, inserted] = terms.try_emplace(m);
            it->second += 1;
        });
    }
    return Series::from_terms(std::move(table), std::move(terms));
}

namespace {

// The double sum shared by E0 and E1's tail:
//   sum_{m>=0} sum_{i=1}^{m-1} x^{m+1} [L+i choose L]_q ([m choose i]_q - 1) inner(m, i)
// with the m-range cut at the x cap by the x^{m+1} factor.
Series descent_tail_sum(
    int L, const VarTablePtr& table,
    const std::function<Series(int m, int i)>& inner) {
    std::uint32_t x_cap = *table->cap(table->index_of("x"));
    Series total = Series::zero(table);
    Series x = Series::variable(table, "x");
    for (std::uint32_t m = 0; m + 1 <= x_cap; ++m) {
        for (std::uint32_t i = 1; i + 1 <= m; ++i) {
            QPolynomial weight =
                q_binomial(static_cast<std::uint32_t>(L) + i,
                           static_cast<std::uint32_t>(L)) *
                (q_binomial(m, i) - QPolynomial::one());
            if (weight.is_zero()) continue;
            Series inner_sum = inner(static_cast<int>(m), static_cast<int>(i));
            if (inner_sum.is_zero()) continue;
            total = total + pow(x, m + 1) * to_series(weight, table) * inner_sum;
        }
    }
    return total;
}

}  // namespace

FunctionalEquation lmr_f0_equation(int L, int R, VarTablePtr table) {
    if (L < 1 || R < 1) throw error("need L >= 1 and R >= 1");
    Series one = Series::constant(table, Rational(1));
    Series x = Series::variable(table, "x");
    Series q = Series::variable(table, "q");
    Series r = Series::variable(table, "r");
    Series qr = q * r;

    Series e0 = descent_tail_sum(L, table, [&](int m, int i) {
        Series sum = Series::zero(table);
        Series qr_pow = one;
        for (int k = 1; k <= m - i - 1; ++k) {
            qr_pow = qr_pow * qr;
            sum = sum + qr_pow;
        }
        return sum;
    });

    Series inv_1_xr = invert(one - x * r);
    Series step = qr * invert(one - qr) * inv_1_xr;
    std::vector<StepSpec> steps;
    steps.push_back({{-1}, step});
    steps.push_back({{1}, -step});
    return FunctionalEquation(table, {"r"}, e0 * inv_1_xr, std::move(steps));
}

FunctionalEquation lmr_f1_equation(int L, int R, const Series& f0_solution) {
    if (L < 1 || R < 1) throw error("need L >= 1 and R >= 1");
    const VarTablePtr& table = f0_solution.table();
    for (const char* name : {"x", "q", "r", "s", "t"})
        if (!table->has(name))
            throw error(std::string("F1 needs the variable '") + name + "'");
    Series one = Series::constant(table, Rational(1));
    Series x = Series::variable(table, "x");
    Series q = Series::variable(table, "q");
    Series r = Series::variable(table, "r");
    Series s = Series::variable(table, "s");
    Series t = Series::variable(table, "t");
    Series qr = q * r;
    Series qs = q * s;

    // xt (sum_{b=1}^R (qs)^b) F0(r)
    Series qs_sum = Series::zero(table);
    Series qs_pow = one;
    for (int b = 1; b <= R; ++b) {
        qs_pow = qs_pow * qs;
        qs_sum = qs_sum + qs_pow;
    }
    Series e1 = x * t * qs_sum * f0_solution;

    e1 = e1 + descent_tail_sum(L, table, [&](int m, int i) {
             // sum_{k=1}^{m-i-1} sum_{c=1}^{k} sum_{b=1}^{R}
             //   q^{k+b+c-1} r^{k-c} s^b t^c [b+c-2 choose b-1]_q
             Series sum = Series::zero(table);
             for (int k = 1; k <= m - i - 1; ++k)
                 for (int c = 1; c <= k; ++c)
                     for (int b = 1; b <= R; ++b) {
                         Monomial mono = one.make_monomial(
                             {{"q", static_cast<std::uint32_t>(k + b + c - 1)},
                              {"r", static_cast<std::uint32_t>(k - c)},
                              {"s", static_cast<std::uint32_t>(b)},
                              {"t", static_cast<std::uint32_t>(c)}});
                         Series term = mul_monomial(one, mono);  // drops out-of-cap
                         if (term.is_zero()) continue;
                         sum = sum +
                               term * to_series(
                                          q_binomial(
                                              static_cast<std::uint32_t>(b + c - 2),
                                              static_cast<std::uint32_t>(b - 1)),
                                          table);
                     }
             return sum;
         });

    Series inv_1_qr = invert(one - qr);
    Series inv_1_qs = invert(one - qs);
    Series qs_r1 = pow(qs, static_cast<std::uint32_t>(R) + 1);
    std::vector<StepSpec> steps;
    steps.push_back({{-1, 0, 1}, inv_1_qr});
    steps.push_back({{1, 0, 1}, -(qr * inv_1_qr)});
    steps.push_back({{0, -1, 0}, -(t * qs_r1 * inv_1_qs)});
    steps.push_back({{0, 1, 0}, t * inv_1_qs});
    return FunctionalEquation(table, {"r", "s", "t"}, std::move(e1),
                              std::move(steps));
}

Series assemble_g(const Series& f0, const Series& f1) {
    if (!same_table(f0.table(), f1.table()))
        throw error("F0 and F1 must share one table");
    return f0 + f1;
}

Series lmr_n_marked(const Series& g, int L, int R) {
    if (L < 1 || R < 1) throw error("need L >= 1 and R >= 1");
    const VarTablePtr& from = g.table();
    Series at_one = g;
    for (const char* v : {"r", "s", "t"}) at_one = specialized(at_one, v, 1);
    std::uint32_t x_cap = *from->cap(from->index_of("x"));
    std::uint32_t q_cap = *from->cap(from->index_of("q"));
    auto target = make_table(
        {"x", "q"},
        {{"x", x_cap + static_cast<std::uint32_t>(L + R)}, {"q", q_cap}});
    Series widened = retabled(at_one, target);
    Monomial shift;
    shift.width = 2;
    shift.exp[target->index_of("x")] = static_cast<std::uint16_t>(L + R);
    return mul_monomial(widened, shift);
}

Series lmr_brute_n_marked(int L, int R, int max_m, std::uint32_t q_cap) {
    auto table = make_table(
        {"x", "q"},
        {{"x", static_cast<std::uint32_t>(L + R + max_m)}, {"q", q_cap}});
    TermMap terms;
    for (int M = 0; M <= max_m; ++M) {
        enumerate_lmr(L, R, M, [&](const LMRWord& w) {
            LMRStats st = lmr_stats(w);
            if (st.descents < 2) return;
            if (st.inversions > static_cast<long>(q_cap)) return;
            Monomial m;
            m.width = 2;
            m.exp[0] = static_cast<std::uint16_t>(st.n);
            m.exp[1] = static_cast<std::uint16_t>(st.inversions);
            auto [it, inserted] = terms.try_emplace(m);
            it->second += 1;
        });
    }
    return Series::from_terms(std::move(table), std::move(terms));
}

}  // namespace mvfe
