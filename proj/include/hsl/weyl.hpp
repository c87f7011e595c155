#ifndef HSL_WEYL_HPP
#define HSL_WEYL_HPP

#include <array>
#include <map>
#include <vector>

#include "hsl/check.hpp"
#include "hsl/laurent.hpp"

namespace hsl {

// Polynomial difference-operator algebra on Laurent variables z_1..z_n with
// the grading operators D_i = eps z_i d/dz_i. A WeylElem is a polynomial in
// normal order (z-powers left of D-powers) stored as a commutative
// LaurentPoly over the table below; all noncommutativity lives in weyl_mul,
// which reorders via D_i z_i^k = z_i^k (D_i + k eps). Never combine two
// WeylElems with the commutative product unless one of them is central
// (z- and D-free).
using WeylElem = LaurentPoly;

struct WeylVars {
    VarTable table;
    int n = 0;
    int z0 = 0, d0 = 0, eps = 0, x = 0, x1 = 0, x2 = 0;
    int z(int i) const { return z0 + i; } // 0-based
    int d(int i) const { return d0 + i; }
};

WeylVars make_weyl_vars(int n);

WeylElem weyl_mul(const WeylElem& a, const WeylElem& b, const WeylVars& v);
WeylElem weyl_one(const WeylVars& v);
// commutator a b - b a
WeylElem weyl_bracket(const WeylElem& a, const WeylElem& b, const WeylVars& v);
// argument shift var -> var + c * eps (var must be one of the central x's)
WeylElem weyl_arg_shift(const WeylElem& a, const WeylVars& v, int var, const Scalar& c);

struct Mat2Weyl {
    std::array<std::array<WeylElem, 2>, 2> e;
};

Mat2Weyl mat2_mul(const Mat2Weyl& a, const Mat2Weyl& b, const WeylVars& v);

// Local factor M(z_i) = [[x - D_i, z_i^{-1}], [-z_i, 0]] with the central
// argument xvar.
Mat2Weyl weyl_local_factor(const WeylVars& v, int i, int xvar);
// S(x) = M(z_n) ... M(z_1); entries polynomial in xvar of degree <= n.
Mat2Weyl build_S(const WeylVars& v, int xvar);

// [(x1-x2) Id - eps P] S1(x1) S2(x2) = S2(x2) S1(x1) [(x1-x2) Id - eps P]
// as 4x4 matrices over the Weyl algebra, exact in x1, x2.
CheckResult verify_rtt(int n);

// S22(x) S11(x-eps) - S12(x) S21(x-eps); the suite asserts it equals 1.
WeylElem qdet_S(const WeylVars& v);
CheckResult verify_qdet(int n);

// Truncated series sum_{r >= lead} c_r x^{-r} with x-free WeylElem
// coefficients; coefficients are known exactly for r < order.
struct InvXSeries {
    int lead = 0;
    int order = 0; // exclusive
    std::map<int, WeylElem> c;
};

InvXSeries series_from_poly(const WeylElem& p, const WeylVars& v, int xvar, int order);
InvXSeries series_add(const InvXSeries& a, const InvXSeries& b);
InvXSeries series_sub(const InvXSeries& a, const InvXSeries& b);
InvXSeries series_mul(const InvXSeries& a, const InvXSeries& b, const WeylVars& v);
// Two-sided inverse by Newton iteration; requires the leading coefficient to
// be the constant 1 (monic after factoring x^{-lead}).
InvXSeries series_invert(const InvXSeries& a, const WeylVars& v);

struct GaussParts {
    InvXSeries e, f, g1, g2;
};

// Triangular decomposition S = [[1,0],[f,1]] [[g1,0],[0,g2]] [[1,e],[0,1]]
// as x^{-1}-series to the given order; the check certifies e, f = O(x^{-1}),
// g1 = x^n (1 + O(x^{-1})), g2 = x^{-n} (1 + O(x^{-1})), and the round-trip
// reconstruction of S to truncation order.
std::pair<GaussParts, CheckResult> gauss_decompose(int n, int order);

// Coefficients H_1..H_n of S11(x) = x^n + sum_r (-1)^r H_r x^{n-r}, plus the
// pairwise commutativity check.
std::pair<std::vector<WeylElem>, CheckResult> toda_hamiltonians(int n);

} // namespace hsl

#endif
