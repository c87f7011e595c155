// Timing smoke for the heavy identity checks. Not part of the test suite.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "hsl/coulomb.hpp"
#include "hsl/genus.hpp"
#include "hsl/weyl.hpp"

using namespace hsl;

static long ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - t0)
        .count();
}

int main(int argc, char** argv) {
    int nmax = argc > 1 ? std::atoi(argv[1]) : 4;
    const char* suite = argc > 2 ? argv[2] : "flop";
    if (std::strcmp(suite, "expand") == 0) {
        // Root-expansion probe: clear-and-expand the flop difference directly.
        std::size_t cap = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : (1u << 24);
        for (int k = 2; k <= nmax - 2; ++k) {
            LocVars v = make_loc_vars(nmax);
            FactoredSum diff = chi_terms({Space::X, k, nmax, nmax}, v);
            fsum_append(diff, fsum_neg(chi_terms({Space::Xdual, k, nmax, nmax}, v)));
            auto t0 = std::chrono::steady_clock::now();
            FactoredSum red = fsum_lattice_reduce(collect(diff));
            long tred = ms_since(t0);
            auto z = fsum_expand_zero_capped(red, cap);
            std::fprintf(stderr, "expand n=%d k=%d: reduce=%ldms verdict=%s total=%ldms\n", nmax,
                         k, tred, z ? (*z ? "zero" : "NONZERO") : "cap", ms_since(t0));
        }
        return 0;
    }
    if (std::strcmp(suite, "rtt") == 0 || std::strcmp(suite, "qdet") == 0 ||
        std::strcmp(suite, "gauss") == 0 || std::strcmp(suite, "toda") == 0 ||
        std::strcmp(suite, "mcrel") == 0) {
        for (int n = 1; n <= nmax; ++n) {
            auto t0 = std::chrono::steady_clock::now();
            CheckResult r;
            if (std::strcmp(suite, "rtt") == 0)
                r = verify_rtt(n);
            else if (std::strcmp(suite, "qdet") == 0)
                r = verify_qdet(n);
            else if (std::strcmp(suite, "gauss") == 0)
                r = gauss_decompose(n, 2 * n + 2).second;
            else if (std::strcmp(suite, "toda") == 0)
                r = toda_hamiltonians(n).second;
            else
                r = verify_coulomb_relation(n);
            std::fprintf(stderr, "%s n=%d: %s %ldms\n", suite, n, status_name(r.status),
                         ms_since(t0));
        }
        return 0;
    }
    Engine eng;
    int only_k = argc > 3 ? std::atoi(argv[3]) : -1;
    for (int n = 0; n <= nmax; ++n) {
        if (only_k >= 0 && n != nmax) continue;
        for (int k = 0; k <= n; ++k) {
            if (only_k >= 0 && k != only_k) continue;
            if (std::strcmp(suite, "flop") == 0) {
                auto t0 = std::chrono::steady_clock::now();
                auto r = verify_flop(k, n, eng);
                std::fprintf(stderr,
                             "flop n=%d k=%d: %s terms=%ld %ldms calls=%ld memo=%ld leaf=%ld "
                             "lim=%ld node=%ld | collect=%ldms reduce=%ldms key=%ldms "
                             "expand=%ldms\n",
                             n, k, status_name(r.status), r.terms, ms_since(t0),
                             eng.stats().calls.load(), eng.stats().memo_hits.load(),
                             eng.stats().leaf_expansions.load(), eng.stats().limit_steps.load(),
                             eng.stats().node_evals.load(), eng.stats().us_collect.load() / 1000,
                             eng.stats().us_reduce.load() / 1000, eng.stats().us_key.load() / 1000,
                             eng.stats().us_expand.load() / 1000);
            } else if (std::strcmp(suite, "wallcross") == 0) {
                for (int m = 0; m < n; ++m) {
                    auto t0 = std::chrono::steady_clock::now();
                    auto r = verify_wallcross(k, n, m, eng);
                    std::fprintf(stderr, "wallcross n=%d k=%d m=%d: %s terms=%ld %ldms calls=%ld\n",
                                 n, k, m, status_name(r.status), r.terms, ms_since(t0),
                                 eng.stats().calls.load());
                }
            } else if (std::strcmp(suite, "asymptotics") == 0) {
                for (int m = 0; m <= n; ++m) {
                    auto t0 = std::chrono::steady_clock::now();
                    auto r = verify_asymptotic_descent(k, n, m, eng);
                    std::fprintf(stderr, "asymptotics n=%d k=%d m=%d: %s terms=%ld %ldms\n", n, k,
                                 m, status_name(r.status), r.terms, ms_since(t0));
                }
            }
        }
    }
    return 0;
}
