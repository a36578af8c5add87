#include "mvfe/polyomino.hpp"

#include <numeric>

namespace mvfe {

PolyominoStats polyomino_stats(const Polyomino& p) {
    const auto& o = p.offsets;
    const auto& h = p.heights;
    if (o.empty() || o.size() != h.size())
        throw error("polyomino needs equal, nonempty offset and height lists");
    if (o.front() != 0) throw error("polyomino must touch the bottom-left");
    for (std::size_t i = 0; i < o.size(); ++i) {
        if (o[i] < 0) throw error("negative column offset");
        if (h[i] < 1) throw error("column heights must be positive");
    }
    for (std::size_t i = 0; i + 1 < o.size(); ++i) {
        if (o[i + 1] < o[i]) throw error("bottom path must be nondecreasing");
        if (o[i + 1] + h[i + 1] < o[i] + h[i])
            throw error("top path must be nondecreasing");
        if (o[i + 1] > o[i] + h[i] - 1)
            throw error("adjacent columns must overlap");
    }
    PolyominoStats s;
    s.area = std::accumulate(h.begin(), h.end(), 0L);
    s.left = h.front();
    s.right = h.back();
    s.width = static_cast<long>(h.size());
    s.height = o.back() + h.back();
    return s;
}

namespace {

void extend(std::vector<Polyomino>& out, Polyomino& p, int area_left) {
    out.push_back(p);
    int o_prev = p.offsets.back();
    int top_prev = o_prev + p.heights.back();
    for (int o = o_prev; o <= top_prev - 1; ++o) {
        for (int h = std::max(1, top_prev - o); h <= area_left; ++h) {
            p.offsets.push_back(o);
            p.heights.push_back(h);
            extend(out, p, area_left - h);
            p.offsets.pop_back();
            p.heights.pop_back();
        }
    }
}

}  // namespace

std::vector<Polyomino> enumerate_polyominoes(int max_area) {
    if (max_area < 1) throw error("max_area must be at least 1");
    std::vector<Polyomino> out;
    Polyomino p;
    for (int h = 1; h <= max_area; ++h) {
        p.offsets.assign(1, 0);
        p.heights.assign(1, h);
        extend(out, p, max_area - h);
    }
    return out;
}

VarTablePtr polyomino_vartable(std::uint32_t x_cap, std::uint32_t q_cap) {
    return make_table({"q", "s", "t", "x", "y"}, {{"x", x_cap}, {"q", q_cap}});
}

Series polyomino_series(const std::vector<Polyomino>& polyominoes,
                        VarTablePtr table) {
    TermMap terms;
    for (const Polyomino& p : polyominoes) {
        PolyominoStats st = polyomino_stats(p);
        Monomial m;
        m.width = static_cast<std::uint32_t>(table->size());
        m.exp[table->index_of("q")] = static_cast<std::uint16_t>(st.area);
        m.exp[table->index_of("s")] = static_cast<std::uint16_t>(st.left);
        m.exp[table->index_of("t")] = static_cast<std::uint16_t>(st.right);
        m.exp[table->index_of("x")] = static_cast<std::uint16_t>(st.width);
        m.exp[table->index_of("y")] = static_cast<std::uint16_t>(st.height);
        bool in_caps = true;
        for (std::size_t i = 0; i < table->size() && in_caps; ++i) {
            auto c = table->cap(i);
            if (c && m.exp[i] > *c) in_caps = false;
        }
        if (!in_caps) continue;
        auto [it, inserted] = terms.try_emplace(m);
        it->second += 1;
    }
    return Series::from_terms(std::move(table), std::move(terms));
}

MbmParts polyomino_mbm_parts(VarTablePtr table) {
    Series one = Series::constant(table, Rational(1));
    Series q = Series::variable(table, "q");
    Series s = Series::variable(table, "s");
    Series t = Series::variable(table, "t");
    Series y = Series::variable(table, "y");
    Series styq = s * t * y * q;
    Series sq = s * q;
    Series syq = s * y * q;
    MbmParts parts{
        styq * invert(one - styq),
        sq * invert((one - sq) * (one - syq)),
        Series::zero(table),
    };
    parts.g = -parts.f;
    return parts;
}

FunctionalEquation polyomino_equation(VarTablePtr table) {
    MbmParts parts = polyomino_mbm_parts(table);
    return make_mbm_equation(parts.e, parts.f, parts.g, "s");
}

Series polyomino_coefficient_xt(std::uint32_t n, std::uint32_t m,
                                std::uint32_t q_cap) {
    if (m < 1) throw error("the t-exponent m must be at least 1");
    if (n > 20) throw error("sequence length too large for direct evaluation");
    auto table = make_table({"q", "s", "y"}, {{"q", q_cap}});
    Series one = Series::constant(table, Rational(1));
    Series total = Series::zero(table);

    // All J in {-1,1}^n, bit i set meaning j_{i+1} = 1.
    for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << n); ++mask) {
        ExponentState state = ExponentState::initial(1);
        Series product = one;
        bool dead = false;
        for (std::uint32_t k = 0; k < n && !dead; ++k) {
            // factor q^{a_k+1} s^{b_k} / ((1-q^{a_k+1}s^{b_k})(1-q^{a_k+1}s^{b_k}y))
            std::uint64_t qe = state.a[0] + 1;
            if (qe > q_cap) {
                dead = true;
                break;
            }
            ExponentSpec base{{"q", static_cast<std::uint32_t>(qe)},
                              {"s", state.b[0]}};
            Series block = Series::monomial(table, base, Rational(1));
            ExponentSpec base_y = base;
            base_y.emplace_back("y", 1);
            Series block_y = Series::monomial(table, base_y, Rational(1));
            product = product * block * invert(one - block) *
                      invert(one - block_y);
            if (product.is_zero()) dead = true;
            state = update_state(state, {(mask >> k) & 1 ? 1 : -1});
        }
        if (dead) continue;
        std::uint64_t qe = (state.a[0] + 1) * m;
        if (qe > q_cap) continue;
        Series head = Series::monomial(
            table,
            {{"y", m},
             {"q", static_cast<std::uint32_t>(qe)},
             {"s", static_cast<std::uint32_t>(state.b[0] * m)}},
            Rational(1));
        int ones = 0;
        for (std::uint32_t k = 0; k < n; ++k) ones += (mask >> k) & 1;
        Series term = head * product;
        total = (ones % 2 == 0) ? total + term : total - term;
    }
    return total;
}

std::string render(const Polyomino& p) {
    PolyominoStats st = polyomino_stats(p);
    std::string out;
    for (long row = st.height - 1; row >= 0; --row) {
        for (std::size_t i = 0; i < p.offsets.size(); ++i) {
            bool filled =
                row >= p.offsets[i] && row < p.offsets[i] + p.heights[i];
            out += filled ? '#' : '.';
        }
        out += '\n';
    }
    return out;
}

}  // namespace mvfe
