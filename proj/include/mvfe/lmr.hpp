#pragma once

// (L)(M)(R)-words: 321-avoiding permutations of {1,...,L+M+R} whose low
// block {1..L} and high block {L+M+1..L+M+R} are internally increasing, with
// every low value left of every high value. Statistics, brute-force
// enumeration, and the F0/F1 functional equations whose sum G(x,q,r,s,t)
// enumerates the words with at least two M-descents (x marks the middle
// block size M, q inversions, r/s/t the boundary statistics alpha/beta/gamma).

#include "mvfe/solver.hpp"

#include <functional>
#include <vector>

namespace mvfe {

struct LMRWord {
    int L;
    int M;
    int R;
    std::vector<int> word;  // a permutation of 1..L+M+R
};

struct LMRStats {
    int n;            // L + M + R
    int m;            // M
    long inversions;  // marked by q
    int descents;     // M-descents: i-th M-value exceeds the (i+1)-st
    int alpha;        // M's after the last M-descent, before the leftmost R
    int beta;         // R's before the last M
    int gamma;        // M's right of the leftmost R
};

// Validates all word invariants and throws on violation. alpha is 0 when the
// word has no M-descent; beta and gamma are 0 whenever their delimiter is
// absent (e.g. M = 0).
LMRStats lmr_stats(const LMRWord& w);

// All (L)(M)(R)-words in a deterministic order, via backtracking with
// incremental 321-checking. The visitor form avoids storing the words.
// Guards L+M+R <= 14.
void enumerate_lmr(int L, int R, int M,
                   const std::function<void(const LMRWord&)>& visit);
std::vector<LMRWord> enumerate_lmr(int L, int R, int M);

// The table {x, q, r, s, t} with caps on x (bounds M) and q only.
VarTablePtr lmr_vartable(std::uint32_t x_cap, std::uint32_t q_cap);

// Brute-force G: sum of x^M q^inversions r^alpha s^beta t^gamma over all
// words with at least two M-descents and M <= the table's x cap, dropping
// out-of-cap monomials.
Series lmr_brute_series(int L, int R, VarTablePtr table);

// F0 counts the words with gamma = 0:
//   F0(r) = E0(r)/(1-xr) + [xqr/((1-qr)(1-xr))] F0(1)
//                        - [xqr/((1-qr)(1-xr))] F0(qr)
// with E0 the double sum over q-binomials; substitution variable r.
FunctionalEquation lmr_f0_equation(int L, int R, VarTablePtr table);

// F1 counts the words with gamma >= 1; consumes the solved F0 (same table)
// for its e-term. Substitution variables (r, s, t).
FunctionalEquation lmr_f1_equation(int L, int R, const Series& f0_solution);

// G = F0 + F1 (same table).
Series assemble_g(const Series& f0, const Series& f1);

// x^{L+R} G(x,q,1,1,1) over the table {x, q}: reinterprets x as marking the
// word size n = L+M+R. The x cap grows by L+R; no re-solve happens.
Series lmr_n_marked(const Series& g, int L, int R);

// Brute-force counterpart of lmr_n_marked over the same {x, q} table:
// sum of x^{n(w)} q^{inversions(w)} over words with at least two M-descents.
Series lmr_brute_n_marked(int L, int R, int max_m, std::uint32_t q_cap);

}  // namespace mvfe
