#pragma once

// Parallelogram polyominoes: column encoding, brute-force enumeration, the
// generating-function equation in F(q,s,t,x,y) (q: area, s: left height,
// t: right height, x: width, y: bounding height), and the coefficient
// formula for x^{n+1} t^m.

#include "mvfe/solver.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvfe {

// Columns left to right: offsets[i] is the lowest cell of column i (0-based
// rows), heights[i] its cell count. Both boundary paths must be staircases
// and adjacent columns must overlap.
struct Polyomino {
    std::vector<int> offsets;
    std::vector<int> heights;
};

struct PolyominoStats {
    long area;
    long left;    // height of the leftmost column
    long right;   // height of the rightmost column
    long width;
    long height;  // bounding-rectangle height
};

// Validates the invariants (first offset 0, positive heights, nondecreasing
// bottom and top paths, column overlap) and throws on violation.
PolyominoStats polyomino_stats(const Polyomino& p);

// All parallelogram polyominoes with area <= max_area, each exactly once,
// in a deterministic order.
std::vector<Polyomino> enumerate_polyominoes(int max_area);

// The table {q, s, t, x, y} with caps on x (width) and q (area) only.
VarTablePtr polyomino_vartable(std::uint32_t x_cap, std::uint32_t q_cap);

// Brute-force generating function: sum of q^a s^l t^r x^w y^h over the given
// polyominoes, dropping any whose monomial exceeds the table's caps.
Series polyomino_series(const std::vector<Polyomino>& polyominoes,
                        VarTablePtr table);

// The functional equation
//   F(s) = xstyq/(1-styq) + [xsq/((1-sq)(1-syq))] F(1)
//                         - [xsq/((1-sq)(1-syq))] F(sq)
// encoded with steps {-1, 1} and substitution variable s.
FunctionalEquation polyomino_equation(VarTablePtr table);

// The same equation's ingredients for the single-variable closed form
// (without the leading structural x).
struct MbmParts {
    Series e;
    Series f;  // coefficient of F(1)
    Series g;  // coefficient of F(qs)
};
MbmParts polyomino_mbm_parts(VarTablePtr table);

// The coefficient of x^{n+1} t^m in F, as a series over {q, s, y} with the
// given q cap:
//   sum over J in {-1,1}^n of (-1)^{o(J)} (y q^{a_{n+1}+1} s^{b_{n+1}})^m
//   prod_k q^{a_k+1} s^{b_k} / ((1 - q^{a_k+1} s^{b_k})(1 - q^{a_k+1} s^{b_k} y))
// with o(J) the number of entries equal to 1.
Series polyomino_coefficient_xt(std::uint32_t n, std::uint32_t m,
                                std::uint32_t q_cap);

// Rows top to bottom, '#' for cells, '.' for empty positions.
std::string render(const Polyomino& p);

}  // namespace mvfe
