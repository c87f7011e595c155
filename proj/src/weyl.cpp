#include "hsl/weyl.hpp"

#include <chrono>
#include <stdexcept>
#include <string>

namespace hsl {

namespace {

long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

LaurentPoly poly_pow(LaurentPoly base, int e) {
    LaurentPoly acc = LaurentPoly::constant(base.arity(), Scalar(1));
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

} // namespace

WeylVars make_weyl_vars(int n) {
    if (n < 1) throw std::invalid_argument("make_weyl_vars: need n >= 1");
    WeylVars v;
    v.n = n;
    for (int i = 1; i <= n; ++i) v.table.add("z" + std::to_string(i), VarRole::TorusMult);
    v.z0 = 0;
    v.d0 = v.table.add("D1", VarRole::Aux);
    for (int i = 2; i <= n; ++i) v.table.add("D" + std::to_string(i), VarRole::Aux);
    v.eps = v.table.add("eps", VarRole::TorusAdd);
    v.x = v.table.add("x", VarRole::CentralPoly);
    v.x1 = v.table.add("x1", VarRole::CentralPoly);
    v.x2 = v.table.add("x2", VarRole::CentralPoly);
    return v;
}

WeylElem weyl_one(const WeylVars& v) {
    return LaurentPoly::constant(v.table.arity(), Scalar(1));
}

WeylElem weyl_mul(const WeylElem& a, const WeylElem& b, const WeylVars& v) {
    int ar = v.table.arity();
    LaurentPoly out(ar);
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            // D_i^{p} z_i^{k} = z_i^{k} (D_i + k eps)^{p}
            Mono base = ma + mb;
            int collide = 0;
            for (int i = 0; i < v.n; ++i)
                if (ma[v.d(i)] != 0 && mb[v.z(i)] != 0) ++collide;
            if (!collide) {
                out.add_term(base, ca * cb);
                continue;
            }
            LaurentPoly acc(ar);
            {
                Mono m0 = base;
                for (int i = 0; i < v.n; ++i)
                    if (ma[v.d(i)] != 0 && mb[v.z(i)] != 0)
                        m0.e[v.d(i)] = static_cast<std::int16_t>(m0.e[v.d(i)] - ma[v.d(i)]);
                acc = LaurentPoly::monomial(m0, ca * cb);
            }
            for (int i = 0; i < v.n; ++i) {
                int p = ma[v.d(i)], k = mb[v.z(i)];
                if (p == 0 || k == 0) continue;
                LaurentPoly lin(ar);
                lin.add_term(v.table.unit(v.d(i)), Scalar(1));
                lin.add_term(v.table.unit(v.eps), Scalar(k));
                acc = acc * poly_pow(lin, p);
            }
            out += acc;
        }
    return out;
}

WeylElem weyl_bracket(const WeylElem& a, const WeylElem& b, const WeylVars& v) {
    return weyl_mul(a, b, v) - weyl_mul(b, a, v);
}

WeylElem weyl_arg_shift(const WeylElem& a, const WeylVars& v, int var, const Scalar& c) {
    if (is_zero(c)) return a;
    return a.subst_additive(var, LaurentPoly::monomial(v.table.unit(v.eps), c));
}

Mat2Weyl mat2_mul(const Mat2Weyl& a, const Mat2Weyl& b, const WeylVars& v) {
    Mat2Weyl out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.e[i][j] =
                weyl_mul(a.e[i][0], b.e[0][j], v) + weyl_mul(a.e[i][1], b.e[1][j], v);
    return out;
}

Mat2Weyl weyl_local_factor(const WeylVars& v, int i, int xvar) {
    int ar = v.table.arity();
    Mat2Weyl m;
    LaurentPoly xd(ar);
    xd.add_term(v.table.unit(xvar), Scalar(1));
    xd.add_term(v.table.unit(v.d(i)), Scalar(-1));
    m.e[0][0] = std::move(xd);
    m.e[0][1] = LaurentPoly::monomial(v.table.unit(v.z(i), -1), Scalar(1));
    m.e[1][0] = LaurentPoly::monomial(v.table.unit(v.z(i)), Scalar(-1));
    m.e[1][1] = LaurentPoly(ar);
    return m;
}

Mat2Weyl build_S(const WeylVars& v, int xvar) {
    Mat2Weyl s = weyl_local_factor(v, 0, xvar);
    for (int i = 1; i < v.n; ++i) s = mat2_mul(weyl_local_factor(v, i, xvar), s, v);
    return s;
}

CheckResult verify_rtt(int n) {
    CheckResult r;
    r.suite = "rtt";
    r.name = "rtt n=" + std::to_string(n);
    r.params = {n, 0, std::nullopt};
    r.status = Status::Pass;
    long t0 = now_ms();

    WeylVars v = make_weyl_vars(n);
    int ar = v.table.arity();
    Mat2Weyl S1 = build_S(v, v.x1);
    Mat2Weyl S2 = build_S(v, v.x2);

    using M4 = std::array<std::array<WeylElem, 4>, 4>;
    auto zero4 = [&] {
        M4 m;
        for (auto& row : m)
            for (auto& e : row) e = LaurentPoly(ar);
        return m;
    };
    auto mul4 = [&](const M4& a, const M4& b) {
        M4 out = zero4();
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                for (int k = 0; k < 4; ++k)
                    out[i][j] += weyl_mul(a[i][k], b[k][j], v);
        return out;
    };

    // rows and columns indexed by (i,k) -> 2i + k
    M4 R = zero4(), B1 = zero4(), B2 = zero4();
    LaurentPoly xdiff(ar);
    xdiff.add_term(v.table.unit(v.x1), Scalar(1));
    xdiff.add_term(v.table.unit(v.x2), Scalar(-1));
    LaurentPoly epsp = LaurentPoly::monomial(v.table.unit(v.eps), Scalar(1));
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k) {
            R[2 * i + k][2 * i + k] += xdiff;
            R[2 * i + k][2 * k + i] -= epsp;
            for (int j = 0; j < 2; ++j) {
                B1[2 * i + k][2 * j + k] = S1.e[i][j];
                B2[2 * k + i][2 * k + j] = S2.e[i][j];
            }
        }

    M4 lhs = mul4(mul4(R, B1), B2);
    M4 rhs = mul4(mul4(B2, B1), R);
    for (int i = 0; i < 4 && r.status == Status::Pass; ++i)
        for (int j = 0; j < 4; ++j) {
            ++r.terms;
            if (!(lhs[i][j] - rhs[i][j]).is_zero()) {
                r.status = Status::Fail;
                Witness w;
                w.note = "exchange relation fails at entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ")";
                r.witness = w;
                break;
            }
        }
    r.elapsed_ms = now_ms() - t0;
    return r;
}

WeylElem qdet_S(const WeylVars& v) {
    Mat2Weyl S = build_S(v, v.x);
    WeylElem s11m = weyl_arg_shift(S.e[0][0], v, v.x, Scalar(-1));
    WeylElem s21m = weyl_arg_shift(S.e[1][0], v, v.x, Scalar(-1));
    return weyl_mul(S.e[1][1], s11m, v) - weyl_mul(S.e[0][1], s21m, v);
}

CheckResult verify_qdet(int n) {
    CheckResult r;
    r.suite = "qdet";
    r.name = "qdet n=" + std::to_string(n);
    r.params = {n, 0, std::nullopt};
    r.status = Status::Pass;
    long t0 = now_ms();
    WeylVars v = make_weyl_vars(n);
    WeylElem q = qdet_S(v);
    r.terms = static_cast<long>(q.size());
    if (!(q - weyl_one(v)).is_zero()) {
        r.status = Status::Fail;
        Witness w;
        w.note = "quantum determinant differs from 1";
        w.lhs = q.to_string(v.table);
        w.rhs = "1";
        r.witness = w;
    }
    r.elapsed_ms = now_ms() - t0;
    return r;
}

InvXSeries series_from_poly(const WeylElem& p, const WeylVars& v, int xvar, int order) {
    InvXSeries s;
    s.order = order;
    s.lead = order;
    for (const auto& [m, c] : p.terms()) {
        int r = -m[xvar];
        if (r >= order) continue;
        Mono rest = m;
        rest.e[xvar] = 0;
        if (r < s.lead) s.lead = r;
        auto it = s.c.find(r);
        if (it == s.c.end()) it = s.c.emplace(r, LaurentPoly(p.arity())).first;
        it->second.add_term(rest, c);
    }
    return s;
}

InvXSeries series_add(const InvXSeries& a, const InvXSeries& b) {
    InvXSeries s;
    s.order = std::min(a.order, b.order);
    s.lead = std::min(a.lead, b.lead);
    for (const auto& [r, c] : a.c)
        if (r < s.order) s.c[r] = c;
    for (const auto& [r, c] : b.c) {
        if (r >= s.order) continue;
        auto it = s.c.find(r);
        if (it == s.c.end())
            s.c.emplace(r, c);
        else if ((it->second += c).is_zero())
            s.c.erase(it);
    }
    return s;
}

InvXSeries series_sub(const InvXSeries& a, const InvXSeries& b) {
    InvXSeries nb = b;
    for (auto& [r, c] : nb.c) c = -c;
    return series_add(a, nb);
}

InvXSeries series_mul(const InvXSeries& a, const InvXSeries& b, const WeylVars& v) {
    InvXSeries s;
    s.lead = a.lead + b.lead;
    s.order = std::min(a.lead + b.order, b.lead + a.order);
    for (const auto& [ra, ca] : a.c)
        for (const auto& [rb, cb] : b.c) {
            int r = ra + rb;
            if (r >= s.order) continue;
            WeylElem prod = weyl_mul(ca, cb, v);
            if (prod.is_zero()) continue;
            auto it = s.c.find(r);
            if (it == s.c.end())
                s.c.emplace(r, std::move(prod));
            else if ((it->second += prod).is_zero())
                s.c.erase(it);
        }
    return s;
}

InvXSeries series_invert(const InvXSeries& a, const WeylVars& v) {
    int N = a.order - a.lead;
    auto leadit = a.c.find(a.lead);
    if (N <= 0 || leadit == a.c.end() || !(leadit->second - weyl_one(v)).is_zero())
        throw std::runtime_error("series_invert: leading coefficient must be 1");

    // normalized tail A = 1 + u, exponents shifted down by lead
    std::map<int, WeylElem> A;
    for (const auto& [r, c] : a.c) A[r - a.lead] = c;
    auto mul_trunc = [&](const std::map<int, WeylElem>& f, const std::map<int, WeylElem>& g,
                         int cut) {
        std::map<int, WeylElem> out;
        for (const auto& [rf, cf] : f)
            for (const auto& [rg, cg] : g) {
                if (rf + rg >= cut) continue;
                WeylElem p = weyl_mul(cf, cg, v);
                if (p.is_zero()) continue;
                auto it = out.find(rf + rg);
                if (it == out.end())
                    out.emplace(rf + rg, std::move(p));
                else if ((it->second += p).is_zero())
                    out.erase(it);
            }
        return out;
    };

    std::map<int, WeylElem> y{{0, weyl_one(v)}};
    for (int prec = 1; prec < N; prec *= 2) {
        int np = std::min(2 * prec, N);
        std::map<int, WeylElem> t = mul_trunc(A, y, np);
        for (auto& [r, c] : t) c = -c;
        auto it = t.find(0);
        if (it == t.end())
            t.emplace(0, weyl_one(v) + weyl_one(v));
        else
            it->second += weyl_one(v) + weyl_one(v);
        y = mul_trunc(y, t, np);
    }

    InvXSeries out;
    out.lead = -a.lead;
    out.order = N - a.lead;
    for (const auto& [r, c] : y)
        if (!c.is_zero()) out.c[r - a.lead] = c;
    return out;
}

std::pair<GaussParts, CheckResult> gauss_decompose(int n, int order) {
    if (order < n + 1)
        throw std::invalid_argument("gauss_decompose: order too small to see the block shape");
    CheckResult r;
    r.suite = "gauss";
    r.name = "gauss n=" + std::to_string(n) + " order=" + std::to_string(order);
    r.params = {n, 0, std::nullopt};
    r.status = Status::Pass;
    long t0 = now_ms();

    WeylVars v = make_weyl_vars(n);
    Mat2Weyl S = build_S(v, v.x);
    // Working precision: the tightest constraint is the round trip of
    // g1 * e, which needs e through order + n, hence the inverse through
    // order + 2n - 1; series_invert returns big + 2n, so big = order + 2
    // leaves a margin of one coefficient everywhere.
    int big = order + 2;
    InvXSeries s11 = series_from_poly(S.e[0][0], v, v.x, big);
    InvXSeries s12 = series_from_poly(S.e[0][1], v, v.x, big);
    InvXSeries s21 = series_from_poly(S.e[1][0], v, v.x, big);
    InvXSeries s22 = series_from_poly(S.e[1][1], v, v.x, big);

    GaussParts g;
    g.g1 = s11;
    InvXSeries inv = series_invert(s11, v);
    g.e = series_mul(inv, s12, v);
    g.f = series_mul(s21, inv, v);
    g.g2 = series_sub(s22, series_mul(g.f, s12, v));

    auto fail = [&](const std::string& note) {
        if (r.status == Status::Pass) {
            r.status = Status::Fail;
            Witness w;
            w.note = note;
            r.witness = w;
        }
    };
    auto coeff_zero_through = [&](const InvXSeries& s, int last) {
        for (const auto& [rr, c] : s.c)
            if (rr <= last && !c.is_zero()) return false;
        return true;
    };

    // block shape: g1 = x^n (1 + O(1/x)), g2 = x^{-n}(1 + O(1/x)), e,f = O(1/x)
    auto g1lead = g.g1.c.find(-n);
    if (g1lead == g.g1.c.end() || !(g1lead->second - weyl_one(v)).is_zero() ||
        !coeff_zero_through(g.g1, -n - 1))
        fail("diagonal part g1 is not monic of degree n");
    auto g2lead = g.g2.c.find(n);
    if (g.g2.order <= n || g2lead == g.g2.c.end() ||
        !(g2lead->second - weyl_one(v)).is_zero() || !coeff_zero_through(g.g2, n - 1))
        fail("diagonal part g2 does not start at x^{-n}");
    if (!coeff_zero_through(g.e, 0) || g.e.order <= 0) fail("upper part e is not O(1/x)");
    if (!coeff_zero_through(g.f, 0) || g.f.order <= 0) fail("lower part f is not O(1/x)");

    // round trip to the requested order
    InvXSeries r11 = g.g1;
    InvXSeries r12 = series_mul(g.g1, g.e, v);
    InvXSeries r21 = series_mul(g.f, g.g1, v);
    InvXSeries r22 = series_add(series_mul(series_mul(g.f, g.g1, v), g.e, v), g.g2);
    const InvXSeries* rec[4] = {&r11, &r12, &r21, &r22};
    const InvXSeries* orig[4] = {&s11, &s12, &s21, &s22};
    for (int idx = 0; idx < 4; ++idx) {
        InvXSeries d = series_sub(*rec[idx], *orig[idx]);
        if (d.order <= order) fail("round trip precision fell short");
        for (const auto& [rr, c] : d.c)
            if (rr <= order && !c.is_zero()) {
                fail("round trip mismatch in entry " + std::to_string(idx / 2 + 1) + "," +
                     std::to_string(idx % 2 + 1) + " at order " + std::to_string(rr));
                break;
            }
        ++r.terms;
    }
    r.elapsed_ms = now_ms() - t0;
    return {g, r};
}

std::pair<std::vector<WeylElem>, CheckResult> toda_hamiltonians(int n) {
    CheckResult r;
    r.suite = "toda";
    r.name = "toda n=" + std::to_string(n);
    r.params = {n, 0, std::nullopt};
    r.status = Status::Pass;
    long t0 = now_ms();

    WeylVars v = make_weyl_vars(n);
    int ar = v.table.arity();
    WeylElem s11 = build_S(v, v.x).e[0][0];
    std::vector<WeylElem> H(static_cast<size_t>(n) + 1, LaurentPoly(ar));
    for (const auto& [m, c] : s11.terms()) {
        int rr = n - m[v.x];
        if (rr < 0 || rr > n) throw std::runtime_error("toda: unexpected x-degree");
        Mono rest = m;
        rest.e[v.x] = 0;
        H[static_cast<size_t>(rr)].add_term(rest, (rr % 2) ? -c : c);
    }
    if (!(H[0] - weyl_one(v)).is_zero()) {
        r.status = Status::Fail;
        Witness w;
        w.note = "generating polynomial is not monic";
        r.witness = w;
    }
    for (size_t a = 1; a <= static_cast<size_t>(n) && r.status == Status::Pass; ++a)
        for (size_t b = a + 1; b <= static_cast<size_t>(n); ++b) {
            ++r.terms;
            WeylElem br = weyl_bracket(H[a], H[b], v);
            if (!br.is_zero()) {
                r.status = Status::Fail;
                Witness w;
                w.note = "hamiltonians " + std::to_string(a) + " and " + std::to_string(b) +
                         " do not commute";
                w.lhs = br.to_string(v.table);
                w.rhs = "0";
                r.witness = w;
                break;
            }
        }
    H.erase(H.begin());
    r.elapsed_ms = now_ms() - t0;
    return {H, r};
}

} // namespace hsl
