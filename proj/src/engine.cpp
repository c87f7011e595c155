#include "hsl/engine.hpp"

#include <algorithm>
#include <map>
#include <chrono>
#include <climits>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace hsl {

int factor_cmp(const Factor& a, const Factor& b) {
    int c = a.dm.lex_cmp(b.dm);
    if (c) return c;
    return cmp_scalar(a.c, b.c);
}

namespace {

bool factor_less(const std::pair<Factor, int>& a, const std::pair<Factor, int>& b) {
    int c = factor_cmp(a.first, b.first);
    if (c) return c < 0;
    return a.second < b.second;
}

int term_cmp(const FTerm& a, const FTerm& b) {
    int c = a.m.lex_cmp(b.m);
    if (c) return c;
    if (a.f.size() != b.f.size()) return a.f.size() < b.f.size() ? -1 : 1;
    for (std::size_t i = 0; i < a.f.size(); ++i) {
        c = factor_cmp(a.f[i].first, b.f[i].first);
        if (c) return c;
        if (a.f[i].second != b.f[i].second) return a.f[i].second < b.f[i].second ? -1 : 1;
    }
    return 0;
}

} // namespace

FTerm mk_term(Scalar c, Mono m, std::vector<std::pair<Factor, int>> factors) {
    // Canonical orientation: (1 + c X^dm) with dm lex-negative is rewritten as
    // c X^dm * (1 + (1/c) X^{-dm}); constant factors fold into the coefficient.
    std::vector<std::pair<Factor, int>> canon;
    canon.reserve(factors.size());
    for (auto& [fac, e] : factors) {
        if (e == 0 || is_zero(c)) continue;
        if (fac.dm.is_zero()) {
            Scalar v = Scalar(1) + fac.c;
            if (is_zero(v)) {
                if (e < 0) throw std::runtime_error("mk_term: zero factor in denominator");
                c = Scalar(0);
                continue;
            }
            c *= pow_int(v, e);
            continue;
        }
        if (fac.dm.lex_positive()) {
            canon.emplace_back(fac, e);
        } else {
            c *= pow_int(fac.c, e);
            m += fac.dm.scaled(e);
            canon.emplace_back(Factor{Scalar(1) / fac.c, fac.dm.negated()}, e);
        }
    }
    if (is_zero(c)) return FTerm{Scalar(0), m, {}};
    std::sort(canon.begin(), canon.end(), factor_less);
    // Merge equal factors.
    std::vector<std::pair<Factor, int>> merged;
    for (auto& fe : canon) {
        if (!merged.empty() && factor_cmp(merged.back().first, fe.first) == 0)
            merged.back().second += fe.second;
        else
            merged.push_back(fe);
    }
    std::erase_if(merged, [](const auto& fe) { return fe.second == 0; });
    return FTerm{std::move(c), m, std::move(merged)};
}

FactoredSum collect(FactoredSum terms) {
    std::erase_if(terms, [](const FTerm& t) { return is_zero(t.c); });
    std::sort(terms.begin(), terms.end(),
              [](const FTerm& a, const FTerm& b) { return term_cmp(a, b) < 0; });
    FactoredSum out;
    for (auto& t : terms) {
        if (!out.empty() && term_cmp(out.back(), t) == 0)
            out.back().c += t.c;
        else
            out.push_back(std::move(t));
    }
    std::erase_if(out, [](const FTerm& t) { return is_zero(t.c); });
    return out;
}

FTerm fterm_mul(const FTerm& a, const FTerm& b) {
    std::vector<std::pair<Factor, int>> f = a.f;
    f.insert(f.end(), b.f.begin(), b.f.end());
    return mk_term(a.c * b.c, a.m + b.m, std::move(f));
}

FactoredSum fsum_mul(const FactoredSum& a, const FactoredSum& b) {
    FactoredSum out;
    out.reserve(a.size() * b.size());
    for (const auto& ta : a)
        for (const auto& tb : b) out.push_back(fterm_mul(ta, tb));
    return collect(std::move(out));
}

FactoredSum fsum_scale(FactoredSum s, const Scalar& c, const Mono& m) {
    for (auto& t : s) {
        t.c *= c;
        t.m += m;
    }
    return s;
}

FactoredSum fsum_neg(FactoredSum s) {
    for (auto& t : s) t.c = -t.c;
    return s;
}

void fsum_append(FactoredSum& dst, const FactoredSum& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

bool fsum_struct_equal(const FactoredSum& a, const FactoredSum& b) {
    FactoredSum ca = collect(a), cb = collect(b);
    if (ca.size() != cb.size()) return false;
    for (std::size_t i = 0; i < ca.size(); ++i)
        if (ca[i].c != cb[i].c || term_cmp(ca[i], cb[i]) != 0) return false;
    return true;
}

std::optional<FTerm> fterm_subst(const FTerm& t, int var, const Scalar& rc, const Mono& rm) {
    Scalar c = t.c;
    Mono m = t.m;
    int e0 = m[var];
    if (e0) {
        m.e[var] = 0;
        m += rm.scaled(e0);
        c *= pow_int(rc, e0);
    }
    std::vector<std::pair<Factor, int>> fl;
    fl.reserve(t.f.size());
    for (const auto& [fac, e] : t.f) {
        int a = fac.dm[var];
        if (a == 0) {
            fl.emplace_back(fac, e);
            continue;
        }
        Mono dm2 = fac.dm;
        dm2.e[var] = 0;
        dm2 += rm.scaled(a);
        Scalar cf2 = fac.c * pow_int(rc, a);
        if (dm2.is_zero()) {
            Scalar v = Scalar(1) + cf2;
            if (is_zero(v)) {
                if (e < 0)
                    throw std::runtime_error("fterm_subst: denominator factor vanished");
                return std::nullopt;
            }
            c *= pow_int(v, e);
        } else {
            fl.emplace_back(Factor{std::move(cf2), dm2}, e);
        }
    }
    FTerm r = mk_term(std::move(c), m, std::move(fl));
    if (is_zero(r.c)) return std::nullopt;
    return r;
}

FactoredSum fsum_subst(const FactoredSum& s, int var, const Scalar& rc, const Mono& rm) {
    FactoredSum out;
    out.reserve(s.size());
    for (const auto& t : s)
        if (auto st = fterm_subst(t, var, rc, rm)) out.push_back(std::move(*st));
    return out;
}

void fterm_span(const FTerm& t, int var, long& lo, long& hi) {
    lo = hi = t.m[var];
    for (const auto& [fac, e] : t.f) {
        int a = fac.dm[var];
        if (a > 0)
            hi += static_cast<long>(e) * a;
        else if (a < 0)
            lo += static_cast<long>(e) * a;
    }
    if (lo > hi) std::swap(lo, hi); // negative exponents flip the contributions
}

namespace {

// Exact rational-function degree (v -> infinity growth exponent) of a term.
long fterm_deg(const FTerm& t, int var) {
    long d = t.m[var];
    for (const auto& [fac, e] : t.f) {
        int a = fac.dm[var];
        if (a > 0) d += static_cast<long>(e) * a;
    }
    return d;
}
long fterm_val(const FTerm& t, int var) {
    long d = t.m[var];
    for (const auto& [fac, e] : t.f) {
        int a = fac.dm[var];
        if (a < 0) d += static_cast<long>(e) * a;
    }
    return d;
}

} // namespace

std::optional<FTerm> fterm_limit_inf(const FTerm& t, int var) {
    long deg = fterm_deg(t, var);
    if (deg > 0) throw std::runtime_error("fterm_limit_inf: unbounded term");
    if (deg < 0) return std::nullopt;
    Scalar c = t.c;
    Mono m = t.m;
    m.e[var] = 0;
    std::vector<std::pair<Factor, int>> fl;
    for (const auto& [fac, e] : t.f) {
        int a = fac.dm[var];
        if (a == 0) {
            fl.emplace_back(fac, e);
        } else if (a > 0) {
            // (1 + c X^dm)^e ~ (c X^dm)^e; the v-powers cancel against deg == 0.
            c *= pow_int(fac.c, e);
            Mono d2 = fac.dm;
            d2.e[var] = 0;
            m += d2.scaled(e);
        }
        // a < 0: factor tends to 1.
    }
    FTerm r = mk_term(std::move(c), m, std::move(fl));
    if (is_zero(r.c)) return std::nullopt;
    return r;
}

std::optional<FTerm> fterm_limit_zero(const FTerm& t, int var) {
    long val = fterm_val(t, var);
    if (val < 0) throw std::runtime_error("fterm_limit_zero: unbounded term");
    if (val > 0) return std::nullopt;
    Scalar c = t.c;
    Mono m = t.m;
    m.e[var] = 0;
    std::vector<std::pair<Factor, int>> fl;
    for (const auto& [fac, e] : t.f) {
        int a = fac.dm[var];
        if (a == 0) {
            fl.emplace_back(fac, e);
        } else if (a < 0) {
            c *= pow_int(fac.c, e);
            Mono d2 = fac.dm;
            d2.e[var] = 0;
            m += d2.scaled(e);
        }
    }
    FTerm r = mk_term(std::move(c), m, std::move(fl));
    if (is_zero(r.c)) return std::nullopt;
    return r;
}

FactoredSum fsum_limit(const FactoredSum& s, int var, LimitDir dir) {
    FactoredSum out;
    for (const auto& t : s) {
        auto lt = dir == LimitDir::ToInfinity ? fterm_limit_inf(t, var)
                                              : fterm_limit_zero(t, var);
        if (lt) out.push_back(std::move(*lt));
    }
    return collect(std::move(out));
}

RatFunc fsum_to_ratfunc(const FactoredSum& s, int arity) {
    RatFunc acc(arity);
    for (const auto& t : s) {
        LaurentPoly num = LaurentPoly::monomial(t.m, t.c);
        LaurentPoly den = LaurentPoly::constant(arity, Scalar(1));
        for (const auto& [fac, e] : t.f) {
            LaurentPoly b = LaurentPoly::binomial(fac.dm, fac.c);
            if (e > 0)
                num *= b.pow(e);
            else
                den *= b.pow(-e);
        }
        acc += RatFunc(std::move(num), std::move(den));
    }
    return acc;
}

RatFunc fsum_eval_partial(const FactoredSum& s, int arity,
                          const std::vector<std::optional<Scalar>>& point) {
    RatFunc acc(arity);
    for (const auto& t : s) {
        LaurentPoly base = LaurentPoly::monomial(t.m, t.c).eval_partial(point);
        LaurentPoly num = std::move(base);
        LaurentPoly den = LaurentPoly::constant(arity, Scalar(1));
        for (const auto& [fac, e] : t.f) {
            LaurentPoly b =
                LaurentPoly::binomial(fac.dm, fac.c).eval_partial(point);
            if (b.is_zero()) {
                if (e < 0) throw std::runtime_error("fsum_eval_partial: denominator factor vanished");
                num = LaurentPoly(arity);
                break;
            }
            if (e > 0)
                num *= b.pow(e);
            else
                den *= b.pow(-e);
        }
        if (!num.is_zero()) acc += RatFunc(std::move(num), std::move(den));
    }
    return acc;
}

std::optional<Scalar> fsum_eval(const FactoredSum& s, const std::vector<Scalar>& point) {
    auto mono_eval = [&](const Mono& m) -> std::optional<Scalar> {
        Scalar r(1);
        for (int v = 0; v < m.n; ++v) {
            int e = m[v];
            if (e == 0) continue;
            if (e < 0 && sgn(point[v]) == 0) return std::nullopt;
            r *= pow_int(point[v], e);
        }
        return r;
    };
    Scalar total(0);
    for (const auto& t : s) {
        auto mv = mono_eval(t.m);
        if (!mv) return std::nullopt;
        Scalar val = t.c * *mv;
        bool dead = false;
        for (const auto& [fac, e] : t.f) {
            auto dv = mono_eval(fac.dm);
            if (!dv) return std::nullopt;
            Scalar b = Scalar(1) + fac.c * *dv;
            if (sgn(b) == 0) {
                if (e < 0) return std::nullopt;
                dead = true;
                continue;
            }
            if (!dead) val *= pow_int(b, e);
        }
        if (!dead) total += val;
    }
    return total;
}

namespace {

struct DenKeyLess {
    bool operator()(const std::pair<Mono, Scalar>& a, const std::pair<Mono, Scalar>& b) const {
        int c = a.first.lex_cmp(b.first);
        if (c) return c < 0;
        return cmp_scalar(a.second, b.second) < 0;
    }
};
using DenMax = std::map<std::pair<Mono, Scalar>, int, DenKeyLess>; // keyed for determinism

DenMax union_denominator(const FactoredSum& terms) {
    DenMax dm;
    for (const auto& t : terms)
        for (const auto& [fac, e] : t.f)
            if (e < 0) {
                auto key = std::make_pair(fac.dm, fac.c);
                auto it = dm.find(key);
                if (it == dm.end())
                    dm.emplace(key, -e);
                else
                    it->second = std::max(it->second, -e);
            }
    return dm;
}

bool denmax_less(const std::pair<Mono, Scalar>& a, const std::pair<Mono, Scalar>& b) {
    int c = a.first.lex_cmp(b.first);
    if (c) return c < 0;
    return cmp_scalar(a.second, b.second) < 0;
}

} // namespace

LaurentPoly fsum_clear_expand(const FactoredSum& s, int arity) {
    DenMax dm = union_denominator(s);
    using Acc = std::unordered_map<Mono, Scalar, MonoHash>;
    Acc acc;
    auto mul_binomial = [](Acc& poly, const Mono& d, const Scalar& c) {
        Acc out;
        out.reserve(poly.size() * 2);
        for (const auto& [m, k] : poly) {
            out[m] += k;
            out[m + d] += k * c;
        }
        poly = std::move(out);
    };
    for (const auto& t : s) {
        Acc poly;
        poly[t.m] = t.c;
        for (const auto& [fac, e] : t.f) {
            auto it = dm.find(std::make_pair(fac.dm, fac.c));
            int reps = e + (it == dm.end() ? 0 : it->second);
            for (int r = 0; r < reps; ++r) mul_binomial(poly, fac.dm, fac.c);
        }
        for (const auto& [key, mx] : dm) {
            bool present = false;
            for (const auto& [fac, e] : t.f)
                if (fac.dm == key.first && fac.c == key.second) {
                    present = true;
                    break;
                }
            if (!present)
                for (int r = 0; r < mx; ++r) mul_binomial(poly, key.first, key.second);
        }
        for (auto& [m, c] : poly) acc[m] += c;
    }
    LaurentPoly out(arity);
    for (auto& [m, c] : acc) out.add_term(m, c);
    return out;
}

namespace {

// Every monomial in the expansion of the sum lies on the affine lattice slice
// { u : alpha . u = w } for any alpha orthogonal to all factor exponents and
// to all differences of term monomials. On such a slice the exponent of any
// variable v with alpha_v != 0 is determined by the remaining exponents, so
// substituting a nonzero constant for v is injective on the cleared
// numerator: the reduced sum is zero iff the original is. Repeating while a
// usable alpha exists strips provably redundant variables before the
// expensive recursion.
FactoredSum lattice_reduce(FactoredSum terms) {
    for (;;) {
        if (terms.empty()) return terms;
        const int arity = terms[0].m.n;
        std::vector<bool> occurs(arity, false);
        // Deduplicated constraint rows: factor exponents and term-monomial
        // differences. Exact fraction-free elimination over int64; the small
        // entries (int16 inputs, <= 16 columns) keep products in range, and
        // any overflow falls back to "no reduction", which is always sound.
        std::vector<std::array<long long, MAXV>> mat;
        auto push_row = [&](const Mono& r) {
            std::array<long long, MAXV> v{};
            bool nz = false;
            for (int i = 0; i < arity; ++i) {
                v[i] = r[i];
                if (r[i]) nz = true;
            }
            if (nz) mat.push_back(v);
        };
        for (const auto& t : terms) {
            for (int i = 0; i < arity; ++i)
                if (t.m[i]) occurs[i] = true;
            for (const auto& [fac, e] : t.f) {
                for (int i = 0; i < arity; ++i)
                    if (fac.dm[i]) occurs[i] = true;
                push_row(fac.dm);
            }
            push_row(t.m - terms[0].m);
        }
        std::sort(mat.begin(), mat.end());
        mat.erase(std::unique(mat.begin(), mat.end()), mat.end());
        std::vector<int> pivot_col;
        std::size_t rank = 0;
        bool overflow = false;
        for (int col = 0; col < arity && rank < mat.size() && !overflow; ++col) {
            std::size_t sel = rank;
            while (sel < mat.size() && mat[sel][col] == 0) ++sel;
            if (sel == mat.size()) continue;
            std::swap(mat[rank], mat[sel]);
            const auto& pr = mat[rank];
            for (std::size_t r2 = 0; r2 < mat.size(); ++r2) {
                if (r2 == rank || mat[r2][col] == 0) continue;
                long long a = pr[col], b = mat[r2][col];
                for (int j = 0; j < arity; ++j) {
                    long long x = mat[r2][j], y = pr[j];
                    if ((x && (std::abs(x) > (1LL << 40) || std::abs(a) > (1LL << 20))) ||
                        (y && (std::abs(y) > (1LL << 40) || std::abs(b) > (1LL << 20)))) {
                        overflow = true;
                        break;
                    }
                    mat[r2][j] = x * a - y * b;
                }
                if (overflow) break;
            }
            pivot_col.push_back(col);
            ++rank;
        }
        if (overflow) return terms;
        std::vector<bool> is_pivot(arity, false);
        for (int c : pivot_col) is_pivot[c] = true;
        // A free occurring column v gives alpha with alpha_v != 0: eliminate v.
        int victim = -1;
        for (int v = arity - 1; v >= 0; --v)
            if (!is_pivot[v] && occurs[v]) {
                victim = v;
                break;
            }
        if (victim < 0) return terms;
        // Pick a constant that keeps every denominator factor supported only
        // on the victim away from zero.
        static const int kValues[] = {1, -1, 2, -2, 3, -3, 5, -5, 7, -7};
        Scalar value(1);
        for (int cand : kValues) {
            bool ok = true;
            for (const auto& t : terms) {
                for (const auto& [fac, e] : t.f) {
                    if (e >= 0 || fac.dm[victim] == 0) continue;
                    Mono rest = fac.dm;
                    rest.e[victim] = 0;
                    if (!rest.is_zero()) continue;
                    if (is_zero(Scalar(1) + fac.c * pow_int(Scalar(cand), fac.dm[victim]))) {
                        ok = false;
                        break;
                    }
                }
                if (!ok) break;
            }
            if (ok) {
                value = Scalar(cand);
                break;
            }
        }
        terms = collect(fsum_subst(terms, victim, value, Mono::zero(arity)));
    }
}

long expand_cost(const FactoredSum& terms, long budget) {
    DenMax dm = union_denominator(terms);
    long tot = 0;
    for (const auto& t : terms) {
        long nf = 0;
        for (const auto& [fac, e] : t.f) {
            auto it = dm.find(std::make_pair(fac.dm, fac.c));
            nf += e + (it == dm.end() ? 0 : it->second);
        }
        for (const auto& [key, mx] : dm) {
            bool present = false;
            for (const auto& [fac, e] : t.f)
                if (fac.dm == key.first && fac.c == key.second) {
                    present = true;
                    break;
                }
            if (!present) nf += mx;
        }
        tot += 1L << std::min(nf, 50L);
        if (tot > budget) return tot;
    }
    return tot;
}

bool expand_zero(const FactoredSum& terms, int arity) {
    return fsum_clear_expand(terms, arity).is_zero();
}

// Expansion factor multiset of one term: own numerator factors plus the
// union-denominator cofactors. Calls fn(dm, c) once per binomial repetition.
template <typename Fn>
void for_each_expansion_factor(const FTerm& t, const DenMax& dm, Fn&& fn) {
    for (const auto& [fac, e] : t.f) {
        auto it = dm.find(std::make_pair(fac.dm, fac.c));
        int reps = e + (it == dm.end() ? 0 : it->second);
        for (int r = 0; r < reps; ++r) fn(fac.dm, fac.c);
    }
    for (const auto& [key, mx] : dm) {
        bool present = false;
        for (const auto& [fac, e] : t.f)
            if (fac.dm == key.first && fac.c == key.second) {
                present = true;
                break;
            }
        if (!present)
            for (int r = 0; r < mx; ++r) fn(key.first, key.second);
    }
}

// Product over variables of (exponent span + 1) for each cleared term: an
// upper bound on the monomial count of its expansion, saturated at limit.
long expand_box_bound(const FactoredSum& terms, long limit) {
    DenMax dm = union_denominator(terms);
    long total = 0;
    for (const auto& t : terms) {
        const int arity = t.m.n;
        std::vector<long> lo(arity, 0), hi(arity, 0);
        for_each_expansion_factor(t, dm, [&](const Mono& d, const Scalar&) {
            for (int v = 0; v < arity; ++v) {
                if (d[v] > 0)
                    hi[v] += d[v];
                else if (d[v] < 0)
                    lo[v] += d[v];
            }
        });
        long box = 1;
        for (int v = 0; v < arity; ++v) {
            long w = hi[v] - lo[v] + 1;
            if (box > (limit + 1) / w + 1) {
                box = limit + 1;
                break;
            }
            box *= w;
        }
        total += box;
        if (total > limit) return total;
    }
    return total;
}

// Sorted-vector Laurent accumulator: multiplication by a binomial is a linear
// merge of the stream with its monomial-shifted copy (lex order is shift
// invariant), and sums of streams are merges with cancellation.
using PolyRow = std::pair<Mono, Scalar>;

void merge_binomial(std::vector<PolyRow>& poly, std::vector<PolyRow>& tmp, const Mono& d,
                    const Scalar& c) {
    tmp.clear();
    tmp.reserve(poly.size() * 2);
    const std::size_t n = poly.size();
    std::size_t i = 0, j = 0;
    while (i < n || j < n) {
        if (j >= n) {
            tmp.push_back(poly[i++]);
            continue;
        }
        Mono mj = poly[j].first + d;
        if (i >= n) {
            tmp.emplace_back(mj, poly[j].second * c);
            ++j;
            continue;
        }
        int cmp = poly[i].first.lex_cmp(mj);
        if (cmp < 0) {
            tmp.push_back(poly[i++]);
        } else if (cmp > 0) {
            tmp.emplace_back(mj, poly[j].second * c);
            ++j;
        } else {
            Scalar s = poly[i].second + poly[j].second * c;
            if (!is_zero(s)) tmp.emplace_back(mj, std::move(s));
            ++i;
            ++j;
        }
    }
    poly.swap(tmp);
}

void merge_add(std::vector<PolyRow>& acc, std::vector<PolyRow>& poly, std::vector<PolyRow>& tmp) {
    tmp.clear();
    tmp.reserve(acc.size() + poly.size());
    std::size_t i = 0, j = 0;
    while (i < acc.size() || j < poly.size()) {
        if (j >= poly.size()) {
            tmp.push_back(std::move(acc[i++]));
        } else if (i >= acc.size()) {
            tmp.push_back(std::move(poly[j++]));
        } else {
            int cmp = acc[i].first.lex_cmp(poly[j].first);
            if (cmp < 0) {
                tmp.push_back(std::move(acc[i++]));
            } else if (cmp > 0) {
                tmp.push_back(std::move(poly[j++]));
            } else {
                Scalar s = acc[i].second + poly[j].second;
                if (!is_zero(s)) tmp.emplace_back(acc[i].first, std::move(s));
                ++i;
                ++j;
            }
        }
    }
    acc.swap(tmp);
}

// Clear to the union denominator and expand with a hard cap on live monomial
// counts; nullopt means the cap was hit and the caller should recurse instead.
std::optional<bool> expand_zero_capped(const FactoredSum& terms, std::size_t cap) {
    DenMax dm = union_denominator(terms);
    std::vector<PolyRow> acc, poly, tmp;
    for (const auto& t : terms) {
        poly.clear();
        poly.emplace_back(t.m, t.c);
        bool overflow = false;
        for_each_expansion_factor(t, dm, [&](const Mono& d, const Scalar& c) {
            if (overflow) return;
            merge_binomial(poly, tmp, d, c);
            if (poly.size() > cap) overflow = true;
        });
        if (overflow) return std::nullopt;
        merge_add(acc, poly, tmp);
        if (acc.size() > 2 * cap) return std::nullopt;
    }
    return acc.empty();
}

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
                           97, 101, 103, 107, 109, 113, 127, 131, 137, 139,
                           149, 151, 157, 163, 167, 173};

} // namespace

std::optional<bool> fsum_expand_zero_capped(const FactoredSum& s, std::size_t cap) {
    return expand_zero_capped(s, cap);
}

FactoredSum fsum_lattice_reduce(FactoredSum s) {
    return lattice_reduce(std::move(s));
}

std::string Engine::canonical_key(const FactoredSum& terms, const Blocks& blocks) const {
    int arity = terms.empty() ? 0 : terms[0].m.n;
    // Per-variable signature inside each interchangeable block, stable sort,
    // then serialize the relabeled problem. Any relabeling is a ring
    // automorphism, so key collisions only identify genuinely equal problems.
    auto append_int = [](std::string& s, long v) {
        char buf[24];
        int len = std::snprintf(buf, sizeof buf, "%ld", v);
        s.append(buf, len);
    };
    // Scalar strings are reused across the per-variable signature loops.
    std::vector<std::string> term_c(terms.size());
    std::vector<std::vector<std::string>> fac_c(terms.size());
    for (std::size_t ti = 0; ti < terms.size(); ++ti) {
        term_c[ti] = terms[ti].c.get_str();
        fac_c[ti].reserve(terms[ti].f.size());
        for (const auto& [fac, e] : terms[ti].f) fac_c[ti].push_back(fac.c.get_str());
    }
    std::vector<int> perm(arity);
    for (int i = 0; i < arity; ++i) perm[i] = i;
    std::vector<std::string> rows;
    std::vector<std::string> fs;
    for (const auto& block : blocks) {
        std::vector<std::pair<std::string, int>> sigs;
        sigs.reserve(block.size());
        for (int v : block) {
            rows.clear();
            rows.reserve(terms.size());
            for (std::size_t ti = 0; ti < terms.size(); ++ti) {
                const auto& t = terms[ti];
                std::string os;
                os.reserve(64);
                os += term_c[ti];
                os += '|';
                append_int(os, t.m[v]);
                os += '|';
                fs.clear();
                for (std::size_t fi = 0; fi < t.f.size(); ++fi) {
                    const auto& [fac, e] = t.f[fi];
                    if (!fac.dm[v]) continue;
                    std::string fo = fac_c[ti][fi];
                    fo += ',';
                    append_int(fo, fac.dm[v]);
                    fo += ',';
                    append_int(fo, e);
                    fo += ';';
                    fs.push_back(std::move(fo));
                }
                std::sort(fs.begin(), fs.end());
                for (auto& x : fs) os += x;
                rows.push_back(std::move(os));
            }
            std::sort(rows.begin(), rows.end());
            std::string os;
            for (auto& r : rows) {
                os += r;
                os += '\n';
            }
            sigs.emplace_back(std::move(os), v);
        }
        std::stable_sort(sigs.begin(), sigs.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (std::size_t i = 0; i < block.size(); ++i) perm[block[i]] = sigs[i].second;
    }
    std::vector<int> inv(arity);
    for (int newpos = 0; newpos < arity; ++newpos) inv[perm[newpos]] = newpos;
    auto remap = [&](const Mono& m) {
        Mono r = Mono::zero(arity);
        for (int i = 0; i < arity; ++i) r.e[inv[i]] = m.e[i];
        return r;
    };
    FactoredSum relabeled;
    relabeled.reserve(terms.size());
    for (const auto& t : terms) {
        std::vector<std::pair<Factor, int>> fl;
        fl.reserve(t.f.size());
        for (const auto& [fac, e] : t.f) fl.emplace_back(Factor{fac.c, remap(fac.dm)}, e);
        relabeled.push_back(mk_term(t.c, remap(t.m), std::move(fl)));
    }
    relabeled = collect(std::move(relabeled));
    // Zero-testing is invariant under a global unit: translate exponents so the
    // componentwise monomial minimum is zero, divide the coefficients by their
    // rational content, and fix the overall sign by an order-free rule. Sums
    // differing by lambda * X^mu then share a memo entry. This runs after the
    // relabeling so it can only merge keys the raw serialization would split.
    if (!relabeled.empty()) {
        Mono mu = relabeled[0].m;
        for (const auto& t : relabeled)
            for (int v = 0; v < arity; ++v)
                if (t.m[v] < mu[v]) mu.e[v] = t.m[v];
        mpz_class g(0), l(1);
        for (const auto& t : relabeled) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.c.get_num().get_mpz_t());
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.c.get_den().get_mpz_t());
        }
        Scalar content(g, l);
        content.canonicalize();
        std::vector<Scalar> sorted;
        sorted.reserve(relabeled.size());
        for (auto& t : relabeled) {
            t.m += mu.negated();
            t.c /= content;
            sorted.push_back(t.c);
        }
        auto lt = [](const Scalar& a, const Scalar& b) { return cmp_scalar(a, b) < 0; };
        std::sort(sorted.begin(), sorted.end(), lt);
        std::vector<Scalar> flipped;
        flipped.reserve(sorted.size());
        for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) flipped.push_back(-*it);
        if (std::lexicographical_compare(flipped.begin(), flipped.end(), sorted.begin(),
                                         sorted.end(), lt))
            for (auto& t : relabeled) t.c = -t.c;
    }
    std::string os;
    os.reserve(relabeled.size() * 96);
    for (const auto& t : relabeled) {
        os += t.c.get_str();
        os += '#';
        for (int i = 0; i < arity; ++i) {
            append_int(os, t.m[i]);
            os += ',';
        }
        os += '#';
        for (const auto& [fac, e] : t.f) {
            os += fac.c.get_str();
            os += '@';
            for (int i = 0; i < arity; ++i) {
                append_int(os, fac.dm[i]);
                os += ',';
            }
            os += '^';
            append_int(os, e);
            os += ';';
        }
        os += '\n';
    }
    return os;
}

bool Engine::prove_zero(const FactoredSum& terms, const Blocks& blocks) {
    return prove_rec(terms, 0, blocks);
}

bool Engine::prove_rec(FactoredSum terms, int depth, const Blocks& blocks) {
    long call_id = stats_.calls.fetch_add(1);
    if (call_id > cfg_.call_cap) throw std::runtime_error("Engine: call cap exceeded");
    static const bool trace = std::getenv("HSL_TRACE") != nullptr;
    if (trace && call_id % 512 == 0)
        std::fprintf(stderr,
                     "[engine] calls=%ld depth=%d terms=%zu memo=%ld leaf=%ld node=%ld "
                     "collect=%ldms reduce=%ldms key=%ldms expand=%ldms groups=%ldms "
                     "deriv=%ldms subst=%ldms\n",
                     call_id, depth, terms.size(), stats_.memo_hits.load(),
                     stats_.leaf_expansions.load(), stats_.node_evals.load(),
                     stats_.us_collect.load() / 1000, stats_.us_reduce.load() / 1000,
                     stats_.us_key.load() / 1000, stats_.us_expand.load() / 1000,
                     stats_.us_groups.load() / 1000, stats_.us_deriv.load() / 1000,
                     stats_.us_subst.load() / 1000);
    auto stamp = [] { return std::chrono::steady_clock::now(); };
    auto lap = [&](std::atomic<long>& slot, std::chrono::steady_clock::time_point t0) {
        slot.fetch_add(std::chrono::duration_cast<std::chrono::microseconds>(stamp() - t0).count());
    };
    auto tc = stamp();
    terms = collect(std::move(terms));
    lap(stats_.us_collect, tc);
    if (terms.empty()) return true;
    tc = stamp();
    terms = lattice_reduce(std::move(terms));
    lap(stats_.us_reduce, tc);
    if (terms.empty()) return true;
    int arity = terms[0].m.n;
    tc = stamp();
    std::string key = canonical_key(terms, blocks);
    lap(stats_.us_key, tc);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find(key);
        if (it != memo_.end()) {
            stats_.memo_hits.fetch_add(1);
            return it->second;
        }
    }
    auto remember = [&](bool r) {
        std::lock_guard<std::mutex> lk(mu_);
        memo_.emplace(std::move(key), r);
        return r;
    };

    tc = stamp();
    if (expand_cost(terms, 4096) <= 4096) {
        stats_.leaf_expansions.fetch_add(1);
        bool r = expand_zero(terms, arity);
        lap(stats_.us_expand, tc);
        return remember(r);
    }
    if (expand_box_bound(terms, cfg_.expand_budget) <= cfg_.expand_budget) {
        auto z = expand_zero_capped(terms, static_cast<std::size_t>(cfg_.expand_budget));
        if (z) {
            stats_.leaf_expansions.fetch_add(1);
            lap(stats_.us_expand, tc);
            return remember(*z);
        }
    }
    lap(stats_.us_expand, tc);

    // Pivot: first variable occurring linearly in some denominator factor.
    int pivot = -1;
    for (int v = 0; v < arity && pivot < 0; ++v) {
        bool occurs = false, linear = true;
        for (const auto& t : terms)
            for (const auto& [fac, e] : t.f)
                if (e < 0 && fac.dm[v]) {
                    occurs = true;
                    if (fac.dm[v] != 1 && fac.dm[v] != -1) linear = false;
                }
        if (occurs && linear) pivot = v;
    }
    if (pivot < 0) {
        stats_.leaf_expansions.fetch_add(1);
        return remember(expand_zero(terms, arity));
    }
    const int v = pivot;

    // Group denominator factors by their root locus v = rc * X^rm.
    using RootKey = std::pair<Scalar, Mono>;
    auto root_key = [&](const Factor& fac) {
        int a = fac.dm[v];
        Mono rest = fac.dm;
        rest.e[v] = 0;
        if (a == 1) return RootKey{Scalar(-1) / fac.c, rest.negated()};
        return RootKey{-fac.c, rest};
    };
    std::map<RootKey, std::vector<std::pair<std::size_t, int>>,
             bool (*)(const RootKey&, const RootKey&)>
        groups(+[](const RootKey& a, const RootKey& b) {
            int c = a.second.lex_cmp(b.second);
            if (c) return c < 0;
            return cmp_scalar(a.first, b.first) < 0;
        });
    for (std::size_t idx = 0; idx < terms.size(); ++idx) {
        std::map<RootKey, int, bool (*)(const RootKey&, const RootKey&)> orders(
            +[](const RootKey& a, const RootKey& b) {
                int c = a.second.lex_cmp(b.second);
                if (c) return c < 0;
                return cmp_scalar(a.first, b.first) < 0;
            });
        for (const auto& [fac, e] : terms[idx].f) {
            if (e >= 0 || fac.dm[v] == 0) continue;
            orders[root_key(fac)] -= e;
        }
        for (const auto& [k, o] : orders) groups[k].push_back({idx, o});
    }

    // High-multiplicity loci make the derivative chains below explode (the
    // j-th rebuild carries O(T * F^j) terms), so past this threshold the pole
    // is cleared instead: multiply every term by (v - rho)^o and fold the root
    // into the Laurent window pinned at scalar nodes at the end. Term count
    // is unchanged by the clearing; only factor lists grow.
    constexpr int xmul_min_o = 3;
    std::vector<std::pair<RootKey, int>> cleared_roots;

    for (const auto& [rk, lst] : groups) {
        const Scalar& rc = rk.first;
        const Mono& rm = rk.second;
        int o = 0;
        for (const auto& [idx, od] : lst) o = std::max(o, od);
        if (o >= xmul_min_o) {
            cleared_roots.emplace_back(rk, o);
            continue;
        }
        auto tg = stamp();
        // Multiply contributing terms by (v - rho)^o: cancel matching root
        // factors through their linear parts, then synthesize the rest as
        // explicit v * (1 - rho/v) factors.
        FactoredSum cur;
        cur.reserve(lst.size());
        for (const auto& [idx, od] : lst) {
            const FTerm& t = terms[idx];
            Scalar c2 = t.c;
            Mono m2 = t.m;
            std::vector<std::pair<Factor, int>> f2;
            int extra = o;
            for (const auto& [fac, e] : t.f) {
                int a = fac.dm[v];
                if (e < 0 && a != 0 && root_key(fac) == rk) {
                    if (a == 1) {
                        Mono rest = fac.dm;
                        rest.e[v] = 0;
                        c2 *= pow_int(fac.c, e);
                        m2 += rest.scaled(e);
                    } else {
                        m2.e[v] = static_cast<std::int16_t>(m2.e[v] - e);
                    }
                    extra += e;
                    continue;
                }
                f2.emplace_back(fac, e);
            }
            for (int r = 0; r < extra; ++r) {
                Mono mm = rm;
                mm.e[v] = static_cast<std::int16_t>(mm.e[v] - 1);
                f2.emplace_back(Factor{-rc, mm}, 1);
                m2.e[v] = static_cast<std::int16_t>(m2.e[v] + 1);
            }
            cur.push_back(mk_term(std::move(c2), m2, std::move(f2)));
        }
        lap(stats_.us_groups, tg);
        // Laurent coefficients at (v - rho)^{-o+j}, j = 0..o-1, must vanish:
        // j-th derivative of cur, evaluated at v = rho.
        for (int j = 0; j < o; ++j) {
            tc = stamp();
            FactoredSum evald = fsum_subst(collect(cur), v, rc, rm);
            lap(stats_.us_subst, tc);
            if (!prove_rec(std::move(evald), depth + 1, blocks)) return remember(false);
            if (j < o - 1) {
                tc = stamp();
                FactoredSum nxt;
                for (const auto& t : cur) {
                    if (t.m[v] != 0) {
                        FTerm d = t;
                        d.c *= Scalar(t.m[v]);
                        d.m.e[v] = static_cast<std::int16_t>(d.m.e[v] - 1);
                        nxt.push_back(std::move(d));
                    }
                    for (std::size_t fi = 0; fi < t.f.size(); ++fi) {
                        const auto& [fac, e] = t.f[fi];
                        if (fac.dm[v] == 0) continue;
                        std::vector<std::pair<Factor, int>> f2 = t.f;
                        if (--f2[fi].second == 0) f2.erase(f2.begin() + fi);
                        Mono m2 = t.m + fac.dm;
                        m2.e[v] = static_cast<std::int16_t>(m2.e[v] - 1);
                        nxt.push_back(mk_term(t.c * Scalar(e) * fac.c * Scalar(fac.dm[v]),
                                              m2, std::move(f2)));
                    }
                }
                cur = collect(std::move(nxt));
                lap(stats_.us_deriv, tc);
            }
        }
    }

    if (!cleared_roots.empty()) {
        auto tg = stamp();
        FactoredSum scaled;
        scaled.reserve(terms.size());
        auto rk_less = +[](const RootKey& a, const RootKey& b) {
            int c = a.second.lex_cmp(b.second);
            if (c) return c < 0;
            return cmp_scalar(a.first, b.first) < 0;
        };
        std::map<RootKey, int, bool (*)(const RootKey&, const RootKey&)> want(rk_less);
        for (const auto& [rk, o] : cleared_roots) want.emplace(rk, o);
        for (const auto& t : terms) {
            Scalar c2 = t.c;
            Mono m2 = t.m;
            std::vector<std::pair<Factor, int>> f2;
            f2.reserve(t.f.size() + cleared_roots.size());
            std::map<RootKey, int, bool (*)(const RootKey&, const RootKey&)> left(want);
            for (const auto& [fac, e] : t.f) {
                int a = fac.dm[v];
                if (e < 0 && a != 0) {
                    auto it = left.find(root_key(fac));
                    if (it != left.end()) {
                        if (a == 1) {
                            Mono rest = fac.dm;
                            rest.e[v] = 0;
                            c2 *= pow_int(fac.c, e);
                            m2 += rest.scaled(e);
                        } else {
                            m2.e[v] = static_cast<std::int16_t>(m2.e[v] - e);
                        }
                        it->second += e;
                        continue;
                    }
                }
                f2.emplace_back(fac, e);
            }
            for (const auto& [rk, extra] : left) {
                if (extra == 0) continue;
                Mono mm = rk.second;
                mm.e[v] = static_cast<std::int16_t>(mm.e[v] - 1);
                f2.emplace_back(Factor{-rk.first, mm}, extra);
                m2.e[v] = static_cast<std::int16_t>(m2.e[v] + extra);
            }
            scaled.push_back(mk_term(std::move(c2), m2, std::move(f2)));
        }
        terms = collect(std::move(scaled));
        lap(stats_.us_groups, tg);
    }

    // All finite nonzero poles discharged or cleared: the sum is a Laurent
    // polynomial in v with exponents inside [lo, hi].
    long lo = 0, hi = 0;
    bool first = true;
    for (const auto& t : terms) {
        long tl, th;
        fterm_span(t, v, tl, th);
        if (first) {
            lo = tl;
            hi = th;
            first = false;
        } else {
            lo = std::min(lo, tl);
            hi = std::max(hi, th);
        }
    }
    long nodes_needed = hi - lo + 1;
    if (hi <= 0) {
        // v -> infinity limit kills the v^0 coefficient and keeps problems
        // structured for the memo; remaining exponents need lo..-1.
        stats_.limit_steps.fetch_add(1);
        if (!prove_rec(fsum_limit(terms, v, LimitDir::ToInfinity), depth + 1, blocks))
            return remember(false);
        nodes_needed = -lo;
    } else if (lo >= 0) {
        stats_.limit_steps.fetch_add(1);
        if (!prove_rec(fsum_limit(terms, v, LimitDir::ToZero), depth + 1, blocks))
            return remember(false);
        nodes_needed = hi;
    }
    if (nodes_needed > 0) {
        // Pin the remaining coefficients at distinct nonzero rational nodes,
        // skipping constant root loci (their substitution would zero a
        // denominator factor).
        std::vector<Scalar> avoid;
        for (const auto& [rk, lst] : groups)
            if (rk.second.is_zero()) avoid.push_back(rk.first);
        Mono zero = Mono::zero(arity);
        long used = 0;
        for (int p : kPrimes) {
            if (used >= nodes_needed) break;
            Scalar node(p);
            bool bad = false;
            for (const auto& a : avoid)
                if (a == node) bad = true;
            if (bad) continue;
            ++used;
            stats_.node_evals.fetch_add(1);
            tc = stamp();
            FactoredSum ev = fsum_subst(terms, v, node, zero);
            lap(stats_.us_subst, tc);
            if (!prove_rec(std::move(ev), depth + 1, blocks)) return remember(false);
        }
        if (used < nodes_needed) throw std::runtime_error("Engine: ran out of evaluation nodes");
    }
    return remember(true);
}

} // namespace hsl
