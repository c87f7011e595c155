#ifndef HSL_ENGINE_HPP
#define HSL_ENGINE_HPP

#include <atomic>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hsl/ratfunc.hpp"

namespace hsl {

// Canonical binomial factor (1 + c * X^dm) with dm lexicographically positive.
struct Factor {
    Scalar c;
    Mono dm;
    friend bool operator==(const Factor& a, const Factor& b) {
        return a.dm == b.dm && a.c == b.c;
    }
};
int factor_cmp(const Factor& a, const Factor& b);

// coeff * X^m * prod_i factor_i^{e_i}; factors kept sorted and merged.
struct FTerm {
    Scalar c;
    Mono m;
    std::vector<std::pair<Factor, int>> f;
};
using FactoredSum = std::vector<FTerm>;

// Build a term, canonicalizing factor orientation and folding constants.
// Returns a term with c == 0 if a positive power of a vanishing factor appears.
FTerm mk_term(Scalar c, Mono m, std::vector<std::pair<Factor, int>> factors);
// Merge identical terms, drop zero coefficients.
FactoredSum collect(FactoredSum terms);
FTerm fterm_mul(const FTerm& a, const FTerm& b);
FactoredSum fsum_mul(const FactoredSum& a, const FactoredSum& b);
FactoredSum fsum_scale(FactoredSum s, const Scalar& c, const Mono& m);
FactoredSum fsum_neg(FactoredSum s);
void fsum_append(FactoredSum& dst, const FactoredSum& src);
bool fsum_struct_equal(const FactoredSum& a, const FactoredSum& b);

// Substitute var := rc * X^rm in a term (rm may mention var itself).
// nullopt means the term vanished (a positive factor power became zero).
std::optional<FTerm> fterm_subst(const FTerm& t, int var, const Scalar& rc, const Mono& rm);
FactoredSum fsum_subst(const FactoredSum& s, int var, const Scalar& rc, const Mono& rm);

// Exact degree and valuation of a term in var, as a rational function.
void fterm_span(const FTerm& t, int var, long& lo, long& hi);
// Termwise limit; requires the term's exact degree (valuation) in var to be
// <= 0 (>= 0); nullopt if the limit is 0, throws if unbounded.
std::optional<FTerm> fterm_limit_inf(const FTerm& t, int var);
std::optional<FTerm> fterm_limit_zero(const FTerm& t, int var);
FactoredSum fsum_limit(const FactoredSum& s, int var, LimitDir dir);

// Materialize as a RatFunc (feasible only for desk-size sums).
RatFunc fsum_to_ratfunc(const FactoredSum& s, int arity);
// Fully expanded Laurent polynomial over the union denominator; second value
// is the cleared denominator as a factor multiset.
LaurentPoly fsum_clear_expand(const FactoredSum& s, int arity);

// Clear to the union denominator and expand with a hard cap on live monomial
// counts; nullopt means the cap was exceeded. Exact zero test otherwise.
std::optional<bool> fsum_expand_zero_capped(const FactoredSum& s, std::size_t cap);

// Strip variables whose exponents are pinned by an affine relation satisfied
// by every monomial of the expanded sum; the result is zero iff the input is.
FactoredSum fsum_lattice_reduce(FactoredSum s);
// Evaluate some variables at exact points, keep the rest symbolic.
RatFunc fsum_eval_partial(const FactoredSum& s, int arity,
                          const std::vector<std::optional<Scalar>>& point);
// Evaluate every variable; nullopt if a denominator factor vanishes.
std::optional<Scalar> fsum_eval(const FactoredSum& s, const std::vector<Scalar>& point);

struct EngineStats {
    std::atomic<long> calls{0}, memo_hits{0}, leaf_expansions{0}, limit_steps{0},
        node_evals{0};
    // cumulative microseconds per phase, for the bench tool
    std::atomic<long> us_collect{0}, us_reduce{0}, us_key{0}, us_expand{0}, us_groups{0},
        us_deriv{0}, us_subst{0};
};

// Recursive exact zero test for sums of factored terms. Denominator poles are
// discharged as vanishing principal-part obligations; what remains is a
// Laurent polynomial in the pivot with a known exponent window, pinned by
// termwise limits plus evaluation at rational nodes. Small subproblems are
// expanded directly. Subproblems are memoized under a cheap canonical
// relabeling of interchangeable variable blocks.
class Engine {
public:
    using Blocks = std::vector<std::vector<int>>; // interchangeable variable groups

    struct Config {
        long expand_budget = 1 << 17; // live-monomial cap for direct expansion
        long call_cap = 20000000;
    };

    Engine() : cfg_{} {}
    explicit Engine(Config cfg) : cfg_(cfg) {}

    bool prove_zero(const FactoredSum& terms, const Blocks& blocks);
    EngineStats& stats() { return stats_; }

private:
    bool prove_rec(FactoredSum terms, int depth, const Blocks& blocks);
    std::string canonical_key(const FactoredSum& terms, const Blocks& blocks) const;

    Config cfg_;
    EngineStats stats_;
    std::mutex mu_;
    std::unordered_map<std::string, bool> memo_;
};

} // namespace hsl

#endif
