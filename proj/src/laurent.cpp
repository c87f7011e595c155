#include "hsl/laurent.hpp"

#include <sstream>
#include <stdexcept>

namespace hsl {

LaurentPoly LaurentPoly::pow(int e) const {
    if (e < 0) throw std::runtime_error("LaurentPoly::pow: negative exponent");
    LaurentPoly acc = constant(arity_, Scalar(1));
    LaurentPoly base = *this;
    unsigned k = static_cast<unsigned>(e);
    while (k) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

LaurentPoly LaurentPoly::subst_mono(int var, const Scalar& c, const Mono& target) const {
    LaurentPoly r(arity_);
    for (const auto& [m, k] : terms_) {
        int e = m[var];
        Mono mm = m;
        mm.e[var] = 0;
        if (e) mm += target.scaled(e);
        r.add_term(mm, k * pow_int(c, e));
    }
    return r;
}

LaurentPoly LaurentPoly::subst_additive(int var, const LaurentPoly& shift) const {
    if (shift.depends_on(var))
        throw std::runtime_error("subst_additive: shift involves the substituted variable");
    LaurentPoly r(arity_);
    // Cache powers of (var + shift).
    std::vector<LaurentPoly> pows;
    pows.push_back(constant(arity_, Scalar(1)));
    LaurentPoly base = monomial(Mono::unit(arity_, var), Scalar(1)) + shift;
    for (const auto& [m, k] : terms_) {
        int e = m[var];
        if (e < 0) throw std::runtime_error("subst_additive: negative exponent in " + std::to_string(var));
        while (static_cast<int>(pows.size()) <= e) pows.push_back(pows.back() * base);
        Mono mm = m;
        mm.e[var] = 0;
        r += pows[e].shifted(mm).scaled(k);
    }
    return r;
}

Scalar LaurentPoly::eval(const std::vector<Scalar>& point) const {
    Scalar acc(0);
    for (const auto& [m, c] : terms_) {
        Scalar v = c;
        for (int i = 0; i < m.n; ++i)
            if (m[i]) v *= pow_int(point[i], m[i]);
        acc += v;
    }
    return acc;
}

LaurentPoly LaurentPoly::eval_partial(const std::vector<std::optional<Scalar>>& point) const {
    LaurentPoly r(arity_);
    for (const auto& [m, c] : terms_) {
        Scalar v = c;
        Mono mm = Mono::zero(arity_);
        for (int i = 0; i < m.n; ++i) {
            if (!m[i]) continue;
            if (point[i])
                v *= pow_int(*point[i], m[i]);
            else
                mm.e[i] = m.e[i];
        }
        r.add_term(mm, v);
    }
    return r;
}

std::optional<LaurentPoly> LaurentPoly::exact_divide(const LaurentPoly& num,
                                                     const LaurentPoly& den) {
    if (den.is_zero()) return std::nullopt;
    if (num.is_zero()) return LaurentPoly(den.arity());
    LaurentPoly rem = num, quot(den.arity());
    const Mono& dlead = den.terms_.rbegin()->first;
    const Scalar& dc = den.terms_.rbegin()->second;
    // If the division is exact, the quotient's grlex-smallest monomial is the
    // ratio of the two smallest monomials; anything below that proves failure.
    Mono qmin = num.terms_.begin()->first - den.terms_.begin()->first;
    long guard = 200000;
    while (!rem.is_zero()) {
        const Mono& rlead = rem.terms_.rbegin()->first;
        Mono q = rlead - dlead;
        if (MonoGrlex{}(q, qmin) || --guard < 0) return std::nullopt;
        Scalar qc = rem.terms_.rbegin()->second / dc;
        quot.add_term(q, qc);
        rem -= den.shifted(q).scaled(qc);
    }
    return quot;
}

std::string mono_to_string(const Mono& m, const VarTable& vt) {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < m.n; ++i) {
        if (!m[i]) continue;
        if (!first) os << "*";
        first = false;
        os << vt.name(i);
        if (m[i] != 1) os << "^" << m[i];
    }
    if (first) return "1";
    return os.str();
}

std::string LaurentPoly::to_string(const VarTable& vt) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Scalar a = c;
        if (!first) {
            if (sgn(a) < 0) {
                os << " - ";
                a = -a;
            } else {
                os << " + ";
            }
        } else if (sgn(a) < 0) {
            os << "-";
            a = -a;
        }
        first = false;
        if (m.is_zero()) {
            os << hsl::to_string(a);
        } else if (is_one(a)) {
            os << mono_to_string(m, vt);
        } else {
            os << hsl::to_string(a) << "*" << mono_to_string(m, vt);
        }
    }
    return os.str();
}

} // namespace hsl
