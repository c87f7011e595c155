#ifndef HSL_RATFUNC_HPP
#define HSL_RATFUNC_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsl/laurent.hpp"

namespace hsl {

// Exact rational function num/den. Equality is mathematical (cross
// multiplication); normalization only strips scalar and monomial content, no
// multivariate gcd is ever computed.
class RatFunc {
public:
    RatFunc() = default;
    explicit RatFunc(int arity)
        : num_(LaurentPoly(arity)), den_(LaurentPoly::constant(arity, Scalar(1))) {}
    RatFunc(LaurentPoly num, LaurentPoly den);

    static RatFunc constant(int arity, const Scalar& c) {
        return RatFunc(LaurentPoly::constant(arity, c),
                       LaurentPoly::constant(arity, Scalar(1)));
    }
    static RatFunc from_poly(LaurentPoly p) {
        int a = p.arity();
        return RatFunc(std::move(p), LaurentPoly::constant(a, Scalar(1)));
    }
    static RatFunc variable(int arity, int var) {
        return from_poly(LaurentPoly::monomial(Mono::unit(arity, var), Scalar(1)));
    }

    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }
    int arity() const { return den_.arity(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_poly() const { return den_.is_constant(); }
    std::optional<Scalar> as_constant() const {
        auto n = num_.as_constant();
        auto d = den_.as_constant();
        if (n && d) return *n / *d;
        return std::nullopt;
    }

    RatFunc operator-() const { return RatFunc(-num_, den_); }
    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::runtime_error("RatFunc: division by zero");
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
    RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
    RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }
    RatFunc& operator/=(const RatFunc& o) { return *this = *this / o; }
    RatFunc pow(int e) const;

    // Exact evaluation; the point must not zero the denominator.
    std::optional<Scalar> eval(const std::vector<Scalar>& point) const {
        Scalar d = den_.eval(point);
        if (hsl::is_zero(d)) return std::nullopt;
        return num_.eval(point) / d;
    }

    std::string to_string(const VarTable& vt) const;

private:
    LaurentPoly num_, den_;
};

// rat_arith is spelled as overloaded operators above; rat_equal is the
// mathematical equality test with a seeded random-evaluation fast path.
bool rat_equal(const RatFunc& lhs, const RatFunc& rhs, std::uint64_t seed = 17);

// Optional witness for a failed equality: evaluation point and the two side values.
struct EqWitness {
    std::vector<Scalar> point;
    Scalar lhs, rhs;
};
std::optional<EqWitness> rat_equal_witness(const RatFunc& lhs, const RatFunc& rhs,
                                           std::uint64_t seed = 17);

// A substitution binding: multiplicative (var -> c * X^mono) or additive
// (var -> var + poly shift).
struct Binding {
    enum Kind { Mult, Add } kind;
    Scalar coeff;      // Mult
    Mono target;       // Mult
    LaurentPoly shift; // Add
    static Binding mult(const Scalar& c, const Mono& m) { return {Mult, c, m, {}}; }
    static Binding add(LaurentPoly s) { return {Add, Scalar(0), Mono{}, std::move(s)}; }
};
RatFunc substitute(const RatFunc& f, const std::map<int, Binding>& bindings);

// Polynomial division in a distinguished variable; f and g must be polynomial
// in var (denominators free of var), g nonzero in var-lead.
struct DivResult {
    RatFunc quotient, remainder;
};
DivResult poly_divide(const RatFunc& f, const RatFunc& g, int var);
int deg_in_var(const RatFunc& f, int var);
// Nonzero coefficients of var^k, k >= 0; requires f polynomial in var.
std::map<int, RatFunc> var_coeffs(const RatFunc& f, int var);

// One-parameter limit var->0 or var->infinity; throws if the limit is infinite.
enum class LimitDir { ToZero, ToInfinity };
RatFunc limit_along(const RatFunc& f, int var, LimitDir dir);

// Residues in one variable. Finite nonzero points are RatFuncs in the other
// variables; pole0/poleInf use the dz/(2*pi*i*z) measure convention (constant
// Laurent coefficient at 0 / infinity).
RatFunc residue_at(const RatFunc& f, int var, const RatFunc& point);
RatFunc residue_at_zero(const RatFunc& f, int var);
RatFunc residue_at_infinity(const RatFunc& f, int var);

} // namespace hsl

#endif
