#ifndef HSL_RESIDUE_HPP
#define HSL_RESIDUE_HPP

#include "hsl/genus.hpp"
#include "hsl/ratfunc.hpp"

namespace hsl {

// Contour integrand for the rank-one wall: the measure convention is
// dz/(2 pi i z) and f carries the 1/(1-t) prefactor. Poles in z sit at the
// y_i, at q x_l, and at 0 and infinity.
struct Integrand {
    LocVars vars;
    RatFunc f;
};

Integrand build_integrand(int n);

// The same kernel kept as a single factored term over make_loc_vars(n).
FactoredSum integrand_terms(const LocVars& v);

// Residue of s dzv at zv = rc * X^rm, which must be at most a simple zero of
// each term's denominator; terms regular at the point contribute nothing.
FactoredSum fsum_residue_at(const FactoredSum& s, int zv, const Scalar& rc, const Mono& rm);

// Coefficient of zv^k in the Laurent expansion valid near zero (at_zero) or
// near infinity. Exact: each factor contributes a finite binomial slice once
// it is oriented for the regime, so no truncation error enters.
FactoredSum fsum_series_coeff(const FactoredSum& s, int zv, int k, bool at_zero);

// Slide the contour both ways and compare: sum of residues at z = y_i plus
// the residue at 0 equals the (negated) residues at z = q x_l plus the
// residue at infinity; both corner residues equal t^n/(1-t); the two pole
// sums reproduce chi(X(1,n,n)) and chi(Xv(1,n,n)).
CheckResult verify_residue_identity(int n, Engine& eng);

// Exploratory k=2 ledger: enumerate iterated-residue pole chains for the
// two-variable contour integral, sum the admissible ones toward zero, and
// report how the stable chains compare with chi(X(2,n,n)). Never asserts;
// discrepancies are documented in the witness note.
CheckResult brute_iterated_residues(int k, int n, Engine& eng);

} // namespace hsl

#endif
