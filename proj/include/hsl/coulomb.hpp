#ifndef HSL_COULOMB_HPP
#define HSL_COULOMB_HPP

#include <map>
#include <utility>

#include "hsl/check.hpp"
#include "hsl/ratfunc.hpp"

namespace hsl {

// Additive variable layout for the abelianized convolution-algebra operators:
// equivariant parameters a_1..a_n, the loop rotation weight eps, and the
// polynomial argument X of the generating functions.
struct CoulombVars {
    VarTable table;
    int n = 0;
    int a0 = 0, eps = 0, X = 0;
    int a(int i) const { return a0 + i; } // 0-based
};

CoulombVars make_coulomb_vars(int n);

// eps-difference operator: sum over integer vectors delta of c_delta * E_delta
// where E_delta sends a_i -> a_i + delta_i eps. Coefficients are stored to the
// left of the shift symbol, mirroring MultShiftOp:
//   (c1, d1) (c2, d2) = (c1 * shift_{d1}(c2), d1 + d2),
//   f (c, d) = shift_{-d}(f * c).
struct AddShiftOp {
    std::map<Mono, RatFunc, MonoGrlex> terms;
};

// a_i -> a_i + delta_i * eps.
RatFunc eps_shift(const RatFunc& f, const CoulombVars& v, const Mono& delta);

AddShiftOp add_compose(const AddShiftOp& a, const AddShiftOp& b, const CoulombVars& v);
RatFunc add_apply_right(const RatFunc& f, const AddShiftOp& op, const CoulombVars& v);

// Argument shift X -> X + c*eps, applied to one coefficient or to every
// coefficient of an operator. The a-shifts are untouched.
RatFunc arg_shift(const RatFunc& f, const CoulombVars& v, const Scalar& c);
AddShiftOp op_arg_shift(const AddShiftOp& op, const CoulombVars& v, const Scalar& c);

// Substitute X := value into a coefficient polynomial in X.
RatFunc arg_eval(const RatFunc& f, const CoulombVars& v, const RatFunc& value);

// U^{+}(X) = +sum_i E_{+e_i} prod_{j!=i} (X - a_j)/(a_i - a_j) and its inverse
// twin U^{-}(X) with all shifts negated, each brought to left-coefficient
// normal form (which moves a_i by ±eps in the denominators).
AddShiftOp coulomb_U(const CoulombVars& v, int sign);

// Q(X) = prod_i (X - a_i), the monic characteristic polynomial.
RatFunc coulomb_Q(const CoulombVars& v);

// Every shift coefficient of P = U^+(X) U^-(X-eps) + 1 is divisible (as a
// polynomial in X) by Q(X-eps) shifted along that term's own delta; the
// quotients assemble into an operator Qt of X-degree n-2 (zero at n=1)
// satisfying Qt(X+eps/2) Q(X-eps/2) - U^+(X+eps/2) U^-(X-eps/2) = 1.
// Returns Qt and a check bundling the zero remainders, the degree bound, and
// the half-shifted relation.
std::pair<AddShiftOp, CheckResult> coulomb_qtilde(const CoulombVars& v);

// Evaluation X = a_l + eps of U^+(X) U^-(X-eps), coefficients read with the
// shift symbol factored to the left: the identity coefficient collapses to -1
// for every l and every moving coefficient vanishes.
CheckResult verify_coulomb_eval(const CoulombVars& v);

// Suite wrapper: both checks above at rank n.
CheckResult verify_coulomb_relation(int n);

} // namespace hsl

#endif
