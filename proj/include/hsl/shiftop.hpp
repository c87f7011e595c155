#ifndef HSL_SHIFTOP_HPP
#define HSL_SHIFTOP_HPP

#include <map>
#include <utility>
#include <vector>

#include "hsl/genus.hpp"

namespace hsl {

// q-difference operator: sum over shift vectors delta of c_delta * T_delta,
// where T_delta sends y_i -> q^{delta_i} y_i (entries of delta indexed by the
// multiplicative variables of the ambient table). Coefficients are stored to
// the left of the shift symbol; operators compose by
//   (c1, d1) (c2, d2) = (c1 * shift_{d1}(c2), d1 + d2)
// and act on functions from the right via f (c, d) = shift_{-d}(f * c).
struct MultShiftOp {
    std::map<Mono, FactoredSum, MonoGrlex> terms;
};

enum class Block { Y, X };

// Apply T_delta to a factored sum: every monomial picks up the q-exponent
// <delta, m>.
FactoredSum fsum_qshift(const FactoredSum& s, const Mono& delta, int qvar);

MultShiftOp op_compose(const MultShiftOp& a, const MultShiftOp& b, int qvar);

// Exterior-power Macdonald operator on the first `count` variables of the
// block. dual = false builds the y-side operator sum_{|I|=k} prod q^{D_i}
// f-weights (coefficients conjugated into left normal form); dual = true
// builds the x-side operator with the f-weights already left of the shifts.
MultShiftOp macdonald_op(const LocVars& v, int count, int k, Block block, bool dual);

// Formal product prod_{i<=rows, l<=cols} phi(t y_i/x_l)/phi(y_i/x_l) with an
// accumulated rational prefactor; phi(w) = prod_{j>=0} (1 - q^j w).
struct PhiProduct {
    int rows = 0, cols = 0;
    RatFunc prefactor;
};

PhiProduct make_phi(const LocVars& v, int cols);

// Multiplier Phi(q^delta .)/Phi(.) from the telescoping functional equation
// phi(q w) = phi(w)/(1 - w), as a single factored term.
FactoredSum phi_mult_terms(const LocVars& v, int cols, const Mono& delta);

// Left application of the operator to the phi-symbol: each term (c, delta)
// becomes (c * multiplier(+delta), same symbol).
std::vector<std::pair<RatFunc, PhiProduct>> act_on_phi(const MultShiftOp& op,
                                                       const PhiProduct& target,
                                                       const LocVars& v);

// Right action on a rational function, materialized.
RatFunc apply_right(const RatFunc& f, const MultShiftOp& op, const LocVars& v);

// The difference equation satisfied by the phi-product: the y-side operator
// acting from the right reproduces the weighted sum of x-side operators
// applied from the left, and both reductions agree termwise with the
// localization sums.
CheckResult verify_maps_diffeq(int k, int n, int m, Engine& eng);

// Pairwise commutativity of the exterior-power operators at rank n.
CheckResult verify_macdonald_commute(int n, Engine& eng);

} // namespace hsl

#endif
