#ifndef HSL_LAURENT_HPP
#define HSL_LAURENT_HPP

#include <map>
#include <optional>
#include <vector>

#include "hsl/scalar.hpp"
#include "hsl/vartable.hpp"

namespace hsl {

// Laurent polynomial: finite map exponent vector -> nonzero Scalar, kept in
// graded-lex order so iteration (and hence printing) is canonical.
class LaurentPoly {
public:
    using Map = std::map<Mono, Scalar, MonoGrlex>;

    LaurentPoly() = default;
    explicit LaurentPoly(int arity) : arity_(arity) {}

    static LaurentPoly constant(int arity, const Scalar& c) {
        LaurentPoly p(arity);
        if (!hsl::is_zero(c)) p.terms_[Mono::zero(arity)] = c;
        return p;
    }
    static LaurentPoly monomial(const Mono& m, const Scalar& c) {
        LaurentPoly p(m.n);
        if (!hsl::is_zero(c)) p.terms_[m] = c;
        return p;
    }
    // 1 + c*X^m
    static LaurentPoly binomial(const Mono& m, const Scalar& c) {
        LaurentPoly p = constant(m.n, Scalar(1));
        p.add_term(m, c);
        return p;
    }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_zero());
    }
    std::optional<Scalar> as_constant() const {
        if (terms_.empty()) return Scalar(0);
        if (is_constant()) return terms_.begin()->second;
        return std::nullopt;
    }
    std::size_t size() const { return terms_.size(); }
    const Map& terms() const { return terms_; }

    void add_term(const Mono& m, const Scalar& c) {
        if (hsl::is_zero(c)) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second += c;
            if (hsl::is_zero(it->second)) terms_.erase(it);
        }
    }

    LaurentPoly& operator+=(const LaurentPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    LaurentPoly& operator-=(const LaurentPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    LaurentPoly operator-() const {
        LaurentPoly r(arity_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        LaurentPoly r(a.arity_ ? a.arity_ : b.arity_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) r.add_term(ma + mb, ca * cb);
        return r;
    }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    LaurentPoly scaled(const Scalar& c) const {
        LaurentPoly r(arity_);
        if (hsl::is_zero(c)) return r;
        for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
        return r;
    }
    friend LaurentPoly operator*(const LaurentPoly& a, const Scalar& c) { return a.scaled(c); }
    friend LaurentPoly operator*(const Scalar& c, const LaurentPoly& a) { return a.scaled(c); }
    LaurentPoly shifted(const Mono& m) const {
        LaurentPoly r(arity_);
        for (const auto& [mm, c] : terms_) r.terms_.emplace(mm + m, c);
        return r;
    }
    LaurentPoly pow(int e) const;

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.terms_ == b.terms_;
    }

    // Degree / valuation in a single variable (0 for the zero polynomial).
    int deg_in(int var) const {
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first || m[var] > d) d = m[var];
            first = false;
        }
        return d;
    }
    int val_in(int var) const {
        int d = 0;
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first || m[var] < d) d = m[var];
            first = false;
        }
        return d;
    }
    bool depends_on(int var) const {
        for (const auto& [m, c] : terms_)
            if (m[var]) return true;
        return false;
    }

    // Coefficient of var^k, as a polynomial with var's slot zeroed.
    LaurentPoly coeff_of(int var, int k) const {
        LaurentPoly r(arity_);
        for (const auto& [m, c] : terms_)
            if (m[var] == k) {
                Mono mm = m;
                mm.e[var] = 0;
                r.terms_.emplace(mm, c);
            }
        return r;
    }
    // Leading coefficient in graded-lex order.
    Scalar lead_coeff() const {
        if (terms_.empty()) return Scalar(0);
        return terms_.rbegin()->second;
    }

    // Multiplicative substitution var -> c * X^target (c nonzero).
    LaurentPoly subst_mono(int var, const Scalar& c, const Mono& target) const;
    // Additive substitution var -> var + shift (requires var-exponents >= 0
    // everywhere; shift must not involve var).
    LaurentPoly subst_additive(int var, const LaurentPoly& shift) const;
    // Exact evaluation; point must be nonzero in variables with negative exponents.
    Scalar eval(const std::vector<Scalar>& point) const;
    // Evaluate every variable except `keep`; result is univariate in `keep`.
    LaurentPoly eval_partial(const std::vector<std::optional<Scalar>>& point) const;

    // Exact division test: returns quotient iff divisor divides exactly.
    static std::optional<LaurentPoly> exact_divide(const LaurentPoly& num,
                                                   const LaurentPoly& den);

    std::string to_string(const VarTable& vt) const;

private:
    int arity_ = 0;
    Map terms_;
};

std::string mono_to_string(const Mono& m, const VarTable& vt);

inline std::optional<LaurentPoly> exact_divide(const LaurentPoly& num, const LaurentPoly& den) {
    return LaurentPoly::exact_divide(num, den);
}

} // namespace hsl

#endif
