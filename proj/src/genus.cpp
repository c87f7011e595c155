#include "hsl/genus.hpp"

#include <chrono>
#include <stdexcept>

namespace hsl {

namespace {

long now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string case_name(const std::string& head, const CheckParams& p) {
    std::string s = head + " n=" + std::to_string(p.n) + " k=" + std::to_string(p.k);
    if (p.m) s += " m=" + std::to_string(*p.m);
    return s;
}

std::uint64_t case_seed(const CheckParams& p) {
    std::uint64_t s = 0x51ab5e3du;
    s = s * 1000003u + static_cast<std::uint64_t>(p.n + 1);
    s = s * 1000003u + static_cast<std::uint64_t>(p.k + 1);
    s = s * 1000003u + static_cast<std::uint64_t>(p.m ? *p.m + 1 : 0);
    return s;
}

Scalar binom_scalar(int n, int k) {
    if (k < 0 || k > n) return Scalar(0);
    Scalar r(1);
    for (int i = 0; i < k; ++i) r = r * Scalar(n - i) / Scalar(i + 1);
    return r;
}

} // namespace

LocVars make_loc_vars(int n) {
    LocVars v;
    v.n = n;
    for (int i = 1; i <= n; ++i) v.table.add("y" + std::to_string(i), VarRole::TorusMult);
    for (int l = 1; l <= n; ++l) v.table.add("x" + std::to_string(l), VarRole::TorusMult);
    v.y0 = 0;
    v.x0 = n;
    v.s = v.table.add("s", VarRole::Aux);
    v.q = v.table.add("q", VarRole::Aux);
    v.lam = v.table.add("lam", VarRole::Aux);
    v.z = v.table.add("z", VarRole::TorusMult);
    return v;
}

Engine::Blocks loc_blocks(const LocVars& v) {
    Engine::Blocks b(2);
    for (int i = 0; i < v.n; ++i) b[0].push_back(v.y(i));
    for (int l = 0; l < v.n; ++l) b[1].push_back(v.x(l));
    return b;
}

std::vector<std::vector<int>> subsets_colex(int n, int k) {
    std::vector<std::vector<int>> out;
    if (k < 0 || k > n) return out;
    std::vector<int> I(k);
    for (int i = 0; i < k; ++i) I[i] = i;
    for (;;) {
        out.push_back(I);
        int j = 0;
        while (j < k && (j + 1 < k ? I[j] + 1 == I[j + 1] : I[j] + 1 == n)) ++j;
        if (j == k) break;
        ++I[j];
        for (int i = 0; i < j; ++i) I[i] = i;
    }
    return out;
}

FactoredSum chi_terms(const GenusSpec& g, const LocVars& v) {
    const int n = g.n, k = g.k;
    const int m = (g.space == Space::Gr) ? 0 : g.m;
    FactoredSum out;
    auto ratio = [&](int numvar, int denvar) {
        return v.table.unit(numvar) + v.table.unit(denvar, -1);
    };
    // (1 - t q^qpow u) / (1 - q^qpow u) with u = X^du, t = s^2.
    auto add_fg = [&](std::vector<std::pair<Factor, int>>& f, Mono du, int qpow) {
        if (qpow) du += v.table.unit(v.q, qpow);
        Mono nm = du + v.table.unit(v.s, 2);
        f.push_back({Factor{Scalar(-1), nm}, 1});
        f.push_back({Factor{Scalar(-1), du}, -1});
    };
    if (g.space == Space::Gr || g.space == Space::X) {
        for (const auto& I : subsets_colex(n, k)) {
            std::vector<char> in(static_cast<size_t>(n), 0);
            for (int i : I) in[static_cast<size_t>(i)] = 1;
            std::vector<std::pair<Factor, int>> f;
            for (int i : I)
                for (int j = 0; j < n; ++j)
                    if (!in[static_cast<size_t>(j)]) add_fg(f, ratio(v.y(j), v.y(i)), 0);
            for (int i : I)
                for (int l = 0; l < m; ++l) add_fg(f, ratio(v.y(i), v.x(l)), -1);
            out.push_back(mk_term(Scalar(1), v.table.zero(), std::move(f)));
        }
    } else {
        for (const auto& L : subsets_colex(m, k)) {
            std::vector<char> in(static_cast<size_t>(std::max(m, 1)), 0);
            for (int l : L) in[static_cast<size_t>(l)] = 1;
            std::vector<std::pair<Factor, int>> f;
            for (int l : L)
                for (int mp = 0; mp < m; ++mp)
                    if (!in[static_cast<size_t>(mp)]) add_fg(f, ratio(v.x(l), v.x(mp)), 0);
            for (int i = 0; i < n; ++i)
                for (int l : L) add_fg(f, ratio(v.y(i), v.x(l)), -1);
            out.push_back(mk_term(Scalar(1), v.table.zero(), std::move(f)));
        }
    }
    return collect(std::move(out));
}

RatFunc chi_genus(const GenusSpec& g, const LocVars& v) {
    return fsum_to_ratfunc(chi_terms(g, v), v.table.arity());
}

FactoredSum poincare_terms(int k, int n, const LocVars& v) {
    FactoredSum out;
    for (const auto& I : subsets_colex(n, k)) {
        int w = 0;
        for (int a = 0; a < static_cast<int>(I.size()); ++a) w += I[static_cast<size_t>(a)] - a;
        out.push_back(mk_term(Scalar(1), v.table.unit(v.s, 2 * w), {}));
    }
    return collect(std::move(out));
}

FactoredSum wallcross_rhs_terms(int k, int n, int m, const LocVars& v) {
    FactoredSum out;
    for (int k2 = 0; k2 <= k; ++k2) {
        int k1 = k - k2;
        if (k1 > m || k2 > n - m) continue;
        FactoredSum piece = fsum_mul(poincare_terms(k2, n - m, v),
                                     chi_terms({Space::Xdual, k1, n, m}, v));
        piece = fsum_scale(std::move(piece), Scalar(1), v.table.unit(v.s, 2 * k2 * (m - k1)));
        fsum_append(out, piece);
    }
    return collect(std::move(out));
}

std::optional<Witness> fsum_separate(const FactoredSum& lhs, const FactoredSum& rhs,
                                     const VarTable& vt, std::uint64_t seed) {
    Rng rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<Scalar> pt;
        pt.reserve(static_cast<size_t>(vt.arity()));
        for (int i = 0; i < vt.arity(); ++i) pt.push_back(rng.rational());
        auto a = fsum_eval(lhs, pt);
        if (!a) continue;
        auto b = fsum_eval(rhs, pt);
        if (!b) continue;
        if (*a != *b) {
            Witness w;
            for (int i = 0; i < vt.arity(); ++i) w.point[vt.name(i)] = to_string(pt[i]);
            w.lhs = to_string(*a);
            w.rhs = to_string(*b);
            return w;
        }
    }
    return std::nullopt;
}

CheckResult engine_zero_check(Engine& eng, const std::string& suite,
                              const std::string& name, CheckParams params,
                              const FactoredSum& lhs, const FactoredSum& rhs,
                              const LocVars& v) {
    long t0 = now_ms();
    CheckResult r;
    r.suite = suite;
    r.name = name;
    r.params = params;
    r.terms = static_cast<long>(lhs.size() + rhs.size());
    FactoredSum diff = lhs;
    fsum_append(diff, fsum_neg(rhs));
    bool ok = eng.prove_zero(collect(std::move(diff)), loc_blocks(v));
    r.status = ok ? Status::Pass : Status::Fail;
    if (!ok) {
        auto w = fsum_separate(lhs, rhs, v.table, case_seed(params));
        if (!w) {
            w = Witness{};
            w->note = "sides disagree symbolically; no separating sample found";
        }
        r.witness = w;
    }
    r.elapsed_ms = now_ms() - t0;
    return r;
}

CheckResult verify_flop(int k, int n, Engine& eng) {
    LocVars v = make_loc_vars(n);
    CheckParams p{n, k, std::nullopt};
    auto lhs = chi_terms({Space::X, k, n, n}, v);
    auto rhs = chi_terms({Space::Xdual, k, n, n}, v);
    return engine_zero_check(eng, "flop", case_name("flop", p), p, lhs, rhs, v);
}

CheckResult verify_wallcross(int k, int n, int m, Engine& eng) {
    LocVars v = make_loc_vars(n);
    CheckParams p{n, k, m};
    auto lhs = chi_terms({Space::X, k, n, m}, v);
    auto rhs = wallcross_rhs_terms(k, n, m, v);
    return engine_zero_check(eng, "wallcross", case_name("wallcross", p), p, lhs, rhs, v);
}

CheckResult verify_asymptotic_descent(int k, int n, int m, Engine& eng) {
    LocVars v = make_loc_vars(n);
    CheckParams p{n, k, m};
    long t0 = now_ms();

    auto scale_tail = [&](FactoredSum terms) {
        for (int l = m; l < n; ++l)
            terms = fsum_subst(terms, v.x(l), Scalar(1),
                               v.table.unit(v.x(l)) + v.table.unit(v.lam));
        return collect(fsum_limit(terms, v.lam, LimitDir::ToInfinity));
    };

    FactoredSum side_a = scale_tail(chi_terms({Space::X, k, n, n}, v));
    bool ok_a = fsum_struct_equal(side_a, chi_terms({Space::X, k, n, m}, v));

    FactoredSum side_b = scale_tail(chi_terms({Space::Xdual, k, n, n}, v));
    CheckResult r = engine_zero_check(eng, "asymptotics", case_name("asymptotics", p), p,
                                      side_b, wallcross_rhs_terms(k, n, m, v), v);
    if (!ok_a) {
        r.status = Status::Fail;
        if (!r.witness) {
            Witness w;
            w.note = "termwise descent does not reproduce the truncated fixed-point sum";
            r.witness = w;
        }
    }
    r.elapsed_ms = now_ms() - t0;
    return r;
}

CheckResult verify_chamber_limit(int k, int n) {
    LocVars v = make_loc_vars(n);
    CheckParams p{n, k, std::nullopt};
    long t0 = now_ms();
    CheckResult r;
    r.suite = "asymptotics";
    r.name = case_name("chamber", p);
    r.params = p;

    FactoredSum terms = chi_terms({Space::Gr, k, n, 0}, v);
    for (int i = 0; i < n; ++i)
        terms = fsum_subst(terms, v.y(i), Scalar(1),
                           v.table.unit(v.y(i)) + v.table.unit(v.lam, i + 1));
    terms = collect(fsum_limit(terms, v.lam, LimitDir::ToInfinity));
    r.terms = static_cast<long>(terms.size());

    bool ok = fsum_struct_equal(terms, poincare_terms(k, n, v));
    std::vector<Scalar> ones(static_cast<size_t>(v.table.arity()), Scalar(1));
    auto cnt = fsum_eval(terms, ones);
    ok = ok && cnt && *cnt == binom_scalar(n, k);
    r.status = ok ? Status::Pass : Status::Fail;
    if (!ok) {
        Witness w;
        w.note = "chamber degeneration disagrees with the cell decomposition";
        if (cnt) {
            w.lhs = to_string(*cnt);
            w.rhs = to_string(binom_scalar(n, k));
        }
        r.witness = w;
    }
    r.elapsed_ms = now_ms() - t0;
    return r;
}

VarTable make_char_vars(int n) {
    VarTable ct;
    for (int i = 1; i <= n; ++i) ct.add("z" + std::to_string(i), VarRole::TorusMult);
    ct.add("s", VarRole::Aux);
    return ct;
}

LaurentPoly hecke_eigenvalue(const VarTable& ct, int rank, int k) {
    LaurentPoly acc(ct.arity());
    if (k < 0 || k > rank) return acc;
    int sv = ct.find("s");
    for (const auto& I : subsets_colex(rank, k)) {
        Mono mo = ct.unit(sv, k * (rank - k));
        for (int i0 : I) {
            mo += ct.unit(i0, -1);
            mo += ct.unit(sv, 2 * i0 + 1 - rank);
        }
        acc.add_term(mo, Scalar(1));
    }
    return acc;
}

CheckResult verify_character_recursion(int n, int k) {
    if (n < 1) throw std::invalid_argument("character recursion needs n >= 1");
    VarTable ct = make_char_vars(n);
    CheckParams p{n, k, std::nullopt};
    long t0 = now_ms();
    CheckResult r;
    r.suite = "characters";
    r.name = case_name("characters", p);
    r.params = p;

    LaurentPoly lhs = hecke_eigenvalue(ct, n, k);
    LaurentPoly rhs = hecke_eigenvalue(ct, n - 1, k);
    if (k >= 1) {
        int sv = ct.find("s");
        Mono shift = ct.unit(n - 1, -1) + ct.unit(sv, 2 * (n - k));
        rhs += hecke_eigenvalue(ct, n - 1, k - 1).shifted(shift);
    }
    r.terms = static_cast<long>(lhs.terms().size());
    r.status = (lhs == rhs) ? Status::Pass : Status::Fail;
    if (r.status == Status::Fail) {
        Witness w;
        w.lhs = lhs.to_string(ct);
        w.rhs = rhs.to_string(ct);
        r.witness = w;
    }
    r.elapsed_ms = now_ms() - t0;
    return r;
}

} // namespace hsl
