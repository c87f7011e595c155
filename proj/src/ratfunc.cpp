#include "hsl/ratfunc.hpp"

#include <sstream>

namespace hsl {

RatFunc::RatFunc(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw std::runtime_error("RatFunc: zero denominator");
    if (num_.is_zero()) {
        den_ = LaurentPoly::constant(den_.arity(), Scalar(1));
        return;
    }
    // Normalize representation: make the denominator's least monomial the
    // constant and its leading coefficient 1. No polynomial gcd.
    const Mono dmin = den_.terms().begin()->first;
    if (!dmin.is_zero()) {
        Mono neg = dmin.negated();
        num_ = num_.shifted(neg);
        den_ = den_.shifted(neg);
    }
    Scalar lc = den_.lead_coeff();
    if (!is_one(lc)) {
        Scalar inv = Scalar(1) / lc;
        num_ = num_.scaled(inv);
        den_ = den_.scaled(inv);
    }
}

RatFunc RatFunc::pow(int e) const {
    if (e == 0) return constant(arity(), Scalar(1));
    if (e < 0) {
        if (is_zero()) throw std::runtime_error("RatFunc: inverse of zero");
        return RatFunc(den_.pow(-e), num_.pow(-e));
    }
    return RatFunc(num_.pow(e), den_.pow(e));
}

std::string RatFunc::to_string(const VarTable& vt) const {
    if (is_poly()) {
        Scalar d = *den_.as_constant();
        return num_.scaled(Scalar(1) / d).to_string(vt);
    }
    return "(" + num_.to_string(vt) + ")/(" + den_.to_string(vt) + ")";
}

namespace {

std::vector<Scalar> sample_point(int arity, Rng& rng) {
    std::vector<Scalar> p;
    p.reserve(arity);
    for (int i = 0; i < arity; ++i) p.push_back(rng.rational());
    return p;
}

} // namespace

std::optional<EqWitness> rat_equal_witness(const RatFunc& lhs, const RatFunc& rhs,
                                           std::uint64_t seed) {
    // Fast path: seeded evaluations with rejection sampling on denominator zeros.
    Rng rng(seed);
    int arity = lhs.arity();
    int found = 0;
    for (int tries = 0; tries < 64 && found < 4; ++tries) {
        auto p = sample_point(arity, rng);
        auto a = lhs.eval(p);
        auto b = rhs.eval(p);
        if (!a || !b) continue;
        ++found;
        if (*a != *b) return EqWitness{std::move(p), *a, *b};
    }
    // Exact: cross-multiplied difference must vanish identically.
    if (lhs.num() * rhs.den() == rhs.num() * lhs.den()) return std::nullopt;
    // Unequal but not yet witnessed: keep sampling until a separating point shows up.
    for (int tries = 0; tries < 100000; ++tries) {
        auto p = sample_point(arity, rng);
        auto a = lhs.eval(p);
        auto b = rhs.eval(p);
        if (a && b && *a != *b) return EqWitness{std::move(p), *a, *b};
    }
    throw std::runtime_error("rat_equal_witness: failed to separate unequal functions");
}

bool rat_equal(const RatFunc& lhs, const RatFunc& rhs, std::uint64_t seed) {
    Rng rng(seed);
    int arity = lhs.arity();
    int found = 0;
    for (int tries = 0; tries < 64 && found < 4; ++tries) {
        auto p = sample_point(arity, rng);
        auto a = lhs.eval(p);
        auto b = rhs.eval(p);
        if (!a || !b) continue;
        ++found;
        if (*a != *b) return false;
    }
    return lhs.num() * rhs.den() == rhs.num() * lhs.den();
}

RatFunc substitute(const RatFunc& f, const std::map<int, Binding>& bindings) {
    LaurentPoly num = f.num(), den = f.den();
    // Clear negative powers of additively bound variables by a common factor.
    Mono clear = Mono::zero(f.arity());
    for (const auto& [var, b] : bindings)
        if (b.kind == Binding::Add) {
            int d = std::min(num.is_zero() ? 0 : num.val_in(var), den.val_in(var));
            if (d < 0) clear.e[var] = static_cast<std::int16_t>(-d);
        }
    if (!clear.is_zero()) {
        num = num.shifted(clear);
        den = den.shifted(clear);
    }
    for (const auto& [var, b] : bindings) {
        if (b.kind == Binding::Mult) {
            if (hsl::is_zero(b.coeff)) throw std::runtime_error("substitute: zero coefficient");
            for (const auto& [other, ob] : bindings)
                if (other != var && b.target[other])
                    throw std::runtime_error("substitute: bindings interfere");
            num = num.subst_mono(var, b.coeff, b.target);
            den = den.subst_mono(var, b.coeff, b.target);
        } else {
            for (const auto& [other, ob] : bindings)
                if (other != var && b.shift.depends_on(other))
                    throw std::runtime_error("substitute: bindings interfere");
            num = num.subst_additive(var, b.shift);
            den = den.subst_additive(var, b.shift);
        }
    }
    if (den.is_zero()) throw std::runtime_error("substitute: denominator became zero");
    return RatFunc(std::move(num), std::move(den));
}

// View of a RatFunc as a polynomial in one variable with RatFunc coefficients.
std::map<int, RatFunc> var_coeffs(const RatFunc& f, int var) {
    if (f.den().depends_on(var))
        throw std::runtime_error("var_coeffs: denominator depends on the variable");
    if (f.num().val_in(var) < 0)
        throw std::runtime_error("var_coeffs: negative powers of the variable");
    std::map<int, RatFunc> out;
    int deg = f.num().deg_in(var);
    for (int k = 0; k <= deg; ++k) {
        LaurentPoly ck = f.num().coeff_of(var, k);
        if (!ck.is_zero()) out.emplace(k, RatFunc(std::move(ck), f.den()));
    }
    return out;
}

namespace {

RatFunc assemble(const std::map<int, RatFunc>& coeffs, int var, int arity) {
    RatFunc acc(arity);
    for (const auto& [k, c] : coeffs)
        acc += c * RatFunc::from_poly(
                       LaurentPoly::monomial(Mono::unit(arity, var, k), Scalar(1)));
    return acc;
}

} // namespace

int deg_in_var(const RatFunc& f, int var) {
    if (f.is_zero()) return -1;
    return f.num().deg_in(var) - f.den().deg_in(var);
}

DivResult poly_divide(const RatFunc& f, const RatFunc& g, int var) {
    int arity = f.arity();
    auto fc = var_coeffs(f, var);
    auto gc = var_coeffs(g, var);
    if (gc.empty()) throw std::runtime_error("poly_divide: division by zero polynomial");
    int dg = gc.rbegin()->first;
    const RatFunc glead = gc.rbegin()->second;
    std::map<int, RatFunc> quot;
    auto deg_of = [](const std::map<int, RatFunc>& m) { return m.empty() ? -1 : m.rbegin()->first; };
    while (deg_of(fc) >= dg) {
        int dr = deg_of(fc);
        RatFunc q = fc.rbegin()->second / glead;
        quot[dr - dg] = q;
        for (const auto& [k, c] : gc) {
            int idx = k + dr - dg;
            auto it = fc.find(idx);
            RatFunc val = (it == fc.end() ? RatFunc(arity) : it->second) - q * c;
            if (val.is_zero())
                fc.erase(idx);
            else
                fc[idx] = val;
        }
        fc.erase(dr); // lead cancels exactly; guard against roundoff-free residue
    }
    return {assemble(quot, var, arity), assemble(fc, var, arity)};
}

RatFunc limit_along(const RatFunc& f, int var, LimitDir dir) {
    if (f.is_zero()) return f;
    int arity = f.arity();
    if (dir == LimitDir::ToInfinity) {
        int dn = f.num().deg_in(var), dd = f.den().deg_in(var);
        if (dn > dd) throw std::runtime_error("limit_along: infinite limit");
        if (dn < dd) return RatFunc(arity);
        return RatFunc(f.num().coeff_of(var, dn), f.den().coeff_of(var, dd));
    }
    int vn = f.num().val_in(var), vd = f.den().val_in(var);
    if (vn < vd) throw std::runtime_error("limit_along: infinite limit");
    if (vn > vd) return RatFunc(arity);
    return RatFunc(f.num().coeff_of(var, vn), f.den().coeff_of(var, vd));
}

namespace {

// Split f = var^shift * N/D with N, D polynomial in var and D of var-valuation 0.
struct VarSplit {
    int shift;
    std::map<int, RatFunc> num, den;
};

VarSplit var_split(const RatFunc& f, int var) {
    int vn = f.num().val_in(var), vd = f.den().val_in(var);
    VarSplit s;
    s.shift = vn - vd;
    int arity = f.arity();
    auto split = [&](const LaurentPoly& p, int val) {
        std::map<int, RatFunc> out;
        for (int k = val; k <= p.deg_in(var); ++k) {
            LaurentPoly ck = p.coeff_of(var, k);
            if (!ck.is_zero()) out.emplace(k - val, RatFunc::from_poly(std::move(ck)));
        }
        return out;
    };
    s.num = split(f.num(), vn);
    s.den = split(f.den(), vd);
    (void)arity;
    return s;
}

// Coefficients of the power-series quotient N/D up to `order`, D(0) invertible.
std::vector<RatFunc> series_quotient(const std::map<int, RatFunc>& N,
                                     const std::map<int, RatFunc>& D, int order, int arity) {
    auto get = [arity](const std::map<int, RatFunc>& m, int k) {
        auto it = m.find(k);
        return it == m.end() ? RatFunc(arity) : it->second;
    };
    RatFunc d0 = get(D, 0);
    if (d0.is_zero()) throw std::runtime_error("series_quotient: non-unit divisor");
    std::vector<RatFunc> s;
    for (int j = 0; j <= order; ++j) {
        RatFunc v = get(N, j);
        for (int i = 1; i <= j; ++i) v -= get(D, i) * s[j - i];
        s.push_back(v / d0);
    }
    return s;
}

} // namespace

RatFunc residue_at(const RatFunc& f, int var, const RatFunc& point) {
    int arity = f.arity();
    if (f.is_zero()) return RatFunc(arity);
    // Make numerator and denominator polynomial in var (multiply by var powers).
    int vmin = std::min(f.num().val_in(var), f.den().val_in(var));
    LaurentPoly num = f.num(), den = f.den();
    if (vmin < 0) {
        Mono up = Mono::unit(arity, var, -vmin);
        num = num.shifted(up);
        den = den.shifted(up);
    }
    // Extract multiplicity of the root `point` from den by synthetic division.
    auto coeffs = [&](const LaurentPoly& p) {
        std::map<int, RatFunc> out;
        for (int k = 0; k <= p.deg_in(var); ++k) {
            LaurentPoly ck = p.coeff_of(var, k);
            if (!ck.is_zero()) out.emplace(k, RatFunc::from_poly(std::move(ck)));
        }
        return out;
    };
    auto dpoly = coeffs(den);
    auto eval_at = [&](const std::map<int, RatFunc>& p) {
        RatFunc acc(arity);
        for (const auto& [k, c] : p) acc += c * point.pow(k);
        return acc;
    };
    auto divide_root = [&](std::map<int, RatFunc> p) {
        // p / (var - point), exact when point is a root.
        std::map<int, RatFunc> q;
        RatFunc carry(arity);
        int deg = p.rbegin()->first;
        for (int k = deg; k >= 1; --k) {
            auto it = p.find(k);
            RatFunc ck = (it == p.end() ? RatFunc(arity) : it->second) + carry;
            if (!ck.is_zero()) q.emplace(k - 1, ck);
            carry = ck * point;
        }
        return q;
    };
    int mult = 0;
    while (!dpoly.empty() && rat_equal(eval_at(dpoly), RatFunc(arity))) {
        dpoly = divide_root(std::move(dpoly));
        ++mult;
    }
    if (mult == 0) return RatFunc(arity);
    // f = N / ((var-point)^mult * D1); residue = [u^(mult-1)] of N/D1 at var=point+u.
    auto npoly = coeffs(num);
    auto taylor = [&](const std::map<int, RatFunc>& p) {
        // coefficients of p(point + u) in u, via binomials.
        std::map<int, RatFunc> out;
        for (const auto& [k, c] : p) {
            RatFunc pw = RatFunc::constant(arity, Scalar(1));
            Scalar binom(1);
            for (int j = k; j >= 0; --j) {
                // coefficient of u^j in (point+u)^k is C(k,j) * point^(k-j)
                // built incrementally from j=k downward.
                RatFunc term = c * RatFunc::constant(arity, binom) * pw;
                auto it = out.find(j);
                if (it == out.end())
                    out.emplace(j, term);
                else
                    it->second += term;
                if (j > 0) {
                    pw = pw * point;
                    binom = binom * Scalar(j) / Scalar(k - j + 1);
                }
            }
        }
        return out;
    };
    auto nt = taylor(npoly);
    auto dt = taylor(dpoly);
    auto series = series_quotient(nt, dt, mult - 1, arity);
    return series[mult - 1];
}

RatFunc residue_at_zero(const RatFunc& f, int var) {
    int arity = f.arity();
    if (f.is_zero()) return RatFunc(arity);
    VarSplit s = var_split(f, var);
    // Constant Laurent coefficient: [var^(-shift)] of the power series num/den.
    int want = -s.shift;
    if (want < 0) return RatFunc(arity);
    auto series = series_quotient(s.num, s.den, want, arity);
    return series[want];
}

RatFunc residue_at_infinity(const RatFunc& f, int var) {
    // Invert the variable and read the constant coefficient at zero.
    int arity = f.arity();
    Mono inv = Mono::unit(arity, var, -1);
    LaurentPoly num = f.num().subst_mono(var, Scalar(1), inv);
    LaurentPoly den = f.den().subst_mono(var, Scalar(1), inv);
    return residue_at_zero(RatFunc(std::move(num), std::move(den)), var);
}

} // namespace hsl
