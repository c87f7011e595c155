#ifndef HSL_GENUS_HPP
#define HSL_GENUS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hsl/check.hpp"
#include "hsl/engine.hpp"

namespace hsl {

// Fixed-point localization data for the three flag-type spaces handled here:
// the Grassmannian Gr(k,n), the total space X(k,n,m) fibered over it, and the
// dual-side space Xv(k,n,m) built from subsets of the framing block.
enum class Space { Gr, X, Xdual };

struct GenusSpec {
    Space space = Space::Gr;
    int k = 0;
    int n = 0;
    int m = 0; // framing size; ignored for Gr
};

// Shared variable layout: y_1..y_n, x_1..x_n, s, q, lam, z.
// t is represented throughout as s^2. lam is the scaling parameter used by
// limit checks, z the auxiliary contour variable.
struct LocVars {
    VarTable table;
    int n = 0;
    int y0 = 0, x0 = 0, s = 0, q = 0, lam = 0, z = 0;
    int y(int i) const { return y0 + i; } // 0-based
    int x(int l) const { return x0 + l; } // 0-based
};

LocVars make_loc_vars(int n);
// Interchangeable-variable blocks ({y_i}, {x_l}) used for subproblem caching.
Engine::Blocks loc_blocks(const LocVars& v);

// All k-subsets of {0,..,n-1} in colexicographic order.
std::vector<std::vector<int>> subsets_colex(int n, int k);

// Localization sum as factored terms, one per torus fixed point.
FactoredSum chi_terms(const GenusSpec& g, const LocVars& v);
// Materialized rational function (small n only).
RatFunc chi_genus(const GenusSpec& g, const LocVars& v);

// Poincare polynomial of Gr(k,n) in t = s^2, one monomial per fixed point.
FactoredSum poincare_terms(int k, int n, const LocVars& v);

// Right side of the wall-crossing identity: sum over k1 + k2 = k of
// t^{k2 (m - k1)} P_{Gr(k2, n-m)}(t) * chi(Xv(k1, n, m)).
FactoredSum wallcross_rhs_terms(int k, int n, int m, const LocVars& v);

// Random-point counterexample search; nullopt if the sides agree at every
// sampled point.
std::optional<Witness> fsum_separate(const FactoredSum& lhs, const FactoredSum& rhs,
                                     const VarTable& vt, std::uint64_t seed);

// Engine-backed equality check with failure witness extraction.
CheckResult engine_zero_check(Engine& eng, const std::string& suite,
                              const std::string& name, CheckParams params,
                              const FactoredSum& lhs, const FactoredSum& rhs,
                              const LocVars& v);

// chi(X(k,n,n)) = chi(Xv(k,n,n)).
CheckResult verify_flop(int k, int n, Engine& eng);
// chi(X(k,n,m)) = wallcross_rhs_terms(k,n,m).
CheckResult verify_wallcross(int k, int n, int m, Engine& eng);
// Scaling degeneration x_l -> lam x_l for l > m, lam -> infinity:
// the X side descends termwise onto chi(X(k,n,m)); the Xv side reproduces
// the wall-crossing right side.
CheckResult verify_asymptotic_descent(int k, int n, int m, Engine& eng);
// Chamber degeneration y_i -> lam^i y_i of the Gr sum: termwise limits are
// pure powers of t whose collected sum is the Poincare polynomial, with
// binomial(n,k) total terms at t = 1.
CheckResult verify_chamber_limit(int k, int n);

// Character variables z_1..z_n, s.
VarTable make_char_vars(int n);
// Exterior-power character at the principal t-weighted point:
// s^{k(n-k)} sum over k-subsets I of prod_{i in I} z_i^{-1} s^{2i-1-n}.
// rank may be smaller than the table's z count; extra z's are untouched.
LaurentPoly hecke_eigenvalue(const VarTable& ct, int rank, int k);
// E(n,k) = E(n-1,k) + z_n^{-1} t^{n-k} E(n-1,k-1), exact polynomial identity.
CheckResult verify_character_recursion(int n, int k);

} // namespace hsl

#endif
