#include "vfree/exact_seq.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "vfree/errors.hpp"
#include "vfree/invariants.hpp"

namespace vfree {

namespace {

// (order, multiplicity-sign) sites of the counting formula: each geometric
// edge contributes to the numerator, each vertex to the denominator.
struct Sites {
    std::vector<u64> edge_orders;
    std::vector<u64> vertex_orders;
};

Sites collect_sites(const GraphOfGroups& g) {
    Sites s;
    for (const auto& e : g.edges) s.edge_orders.push_back(e.order);
    for (const auto& [_, order] : g.vertices) s.vertex_orders.push_back(order);
    return s;
}

} // namespace

std::vector<mpq_class> g_sequence(const GraphOfGroups& g, u64 terms) {
    require_valid(g);
    const u64 m = m_gamma(g);
    Sites sites = collect_sites(g);

    std::vector<mpq_class> out;
    out.reserve(terms + 1);
    out.emplace_back(1);
    for (u64 lam = 1; lam <= terms; ++lam) {
        mpz_class num = 1, den = 1;
        for (u64 n : sites.edge_orders) {
            const u64 k = m / n;
            for (u64 i = (lam - 1) * k + 1; i <= lam * k; ++i)
                num *= static_cast<unsigned long>(i);
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n),
                          static_cast<unsigned long>(k));
            num *= pw;
        }
        for (u64 n : sites.vertex_orders) {
            const u64 k = m / n;
            for (u64 i = (lam - 1) * k + 1; i <= lam * k; ++i)
                den *= static_cast<unsigned long>(i);
            mpz_class pw;
            mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(n),
                          static_cast<unsigned long>(k));
            den *= pw;
        }
        mpq_class ratio(num, den);
        ratio.canonicalize();
        out.push_back(out.back() * ratio);
    }
    return out;
}

std::vector<mpz_class> f_sequence(const GraphOfGroups& g, u64 terms, Exec exec) {
    if (terms == 0) throw precondition_error("f_sequence: terms must be >= 1");
    const u64 m = m_gamma(g);
    std::vector<mpq_class> gs = g_sequence(g, terms);

    // Clear denominators once: with D = lcm of all den(g_mu), the convolution
    // runs entirely over integers and each f_lam is recovered by one exact
    // division by D.
    mpz_class D = 1;
    for (u64 mu = 1; mu <= terms; ++mu)
        mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), gs[mu].get_den().get_mpz_t());
    std::vector<mpz_class> gscaled(terms + 1);
    gscaled[0] = D;
    for (u64 mu = 1; mu <= terms; ++mu)
        gscaled[mu] = gs[mu].get_num() * (D / gs[mu].get_den());

    std::vector<mpz_class> f(terms + 1);

    auto finalize = [&](u64 lam, mpz_class& sum) {
        mpz_class scaled = mpz_class(static_cast<unsigned long>(m)) *
                               static_cast<unsigned long>(lam) * gscaled[lam] -
                           sum;
        if (!mpz_divisible_p(scaled.get_mpz_t(), D.get_mpz_t()))
            throw internal_error("f_sequence: non-integer value at index " + std::to_string(lam));
        f[lam] = scaled / D;
        if (f[lam] < 0)
            throw internal_error("f_sequence: negative value at index " + std::to_string(lam));
    };

    // see f_mod: per-level synchronisation only pays off for wide operands
    const u64 limbs = mpz_size(gscaled[terms].get_mpz_t());
    const bool use_parallel = thread_count(exec) > 1 && limbs >= 48 && terms >= 512;
    if (!use_parallel) {
        for (u64 lam = 1; lam <= terms; ++lam) {
            mpz_class sum = 0;
            for (u64 mu = 1; mu < lam; ++mu) sum += gscaled[mu] * f[lam - mu];
            finalize(lam, sum);
        }
        return f;
    }
#ifdef _OPENMP
    mpz_class shared_sum = 0;
    std::exception_ptr failure = nullptr;
#pragma omp parallel
    {
        mpz_class local;
        for (u64 lam = 1; lam <= terms; ++lam) {
            local = 0;
#pragma omp for schedule(static) nowait
            for (long long mu = 1; mu < static_cast<long long>(lam); ++mu)
                local += gscaled[mu] * f[lam - mu];
#pragma omp critical
            shared_sum += local;
#pragma omp barrier
#pragma omp single
            {
                try {
                    if (!failure) finalize(lam, shared_sum);
                } catch (...) {
                    failure = std::current_exception();
                }
                shared_sum = 0;
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
#endif
    return f;
}

SequencePrefix compute_prefix(const GraphOfGroups& g, u64 terms, Exec exec) {
    SequencePrefix p;
    p.m = m_gamma(g);
    p.g = g_sequence(g, terms);
    p.f = terms ? f_sequence(g, terms, exec) : std::vector<mpz_class>{mpz_class(0)};
    return p;
}

GfIdentityResult gf_identity_check(const SequencePrefix& prefix) {
    // m*(lam+1)*g_{lam+1} = sum_{i=0}^{lam} f_{i+1} * g_{lam-i}, degree by degree
    const u64 terms = prefix.terms();
    for (u64 deg = 0; deg + 1 <= terms; ++deg) {
        mpq_class lhs = mpq_class(static_cast<unsigned long>(prefix.m)) *
                        static_cast<unsigned long>(deg + 1) * prefix.g[deg + 1];
        mpq_class rhs = 0;
        for (u64 i = 0; i <= deg; ++i)
            rhs += mpq_class(prefix.f[i + 1]) * prefix.g[deg - i];
        if (lhs != rhs) return {false, deg};
    }
    return {true, 0};
}

long long vp_g(const GraphOfGroups& g, u64 p, u64 lam) {
    const u64 m = m_gamma(g);
    long long v = 0;
    for (const auto& e : g.edges) {
        const u64 arg = lam * (m / e.order);
        v += static_cast<long long>(num::factorial_valuation(arg, p));
        if (e.order % p == 0)
            v += static_cast<long long>(arg) *
                 static_cast<long long>(num::valuation(e.order, p));
    }
    for (const auto& [_, order] : g.vertices) {
        const u64 arg = lam * (m / order);
        v -= static_cast<long long>(num::factorial_valuation(arg, p));
        if (order % p == 0)
            v -= static_cast<long long>(arg) *
                 static_cast<long long>(num::valuation(order, p));
    }
    return v;
}

LemmaMainResult lemma_main_check(const GraphOfGroups& g, u64 p, u64 terms, Exec exec) {
    if (!num::is_prime(p)) throw precondition_error("lemma_main_check: p must be prime");
    const u64 m = m_gamma(g);
    if (m % p == 0) throw precondition_error("lemma_main_check: requires p not dividing m");
    if (free_rank(g) < 2) throw precondition_error("lemma_main_check: requires free rank >= 2");

    std::vector<unsigned char> bad(terms + 1, 0);
    parallel_for(exec, 0, static_cast<std::int64_t>(terms) + 1, [&](std::int64_t lam) {
        if (vp_g(g, p, static_cast<u64>(lam)) <
            static_cast<long long>(num::factorial_valuation(static_cast<u64>(lam), p)))
            bad[static_cast<std::size_t>(lam)] = 1;
    });
    for (u64 lam = 0; lam <= terms; ++lam)
        if (bad[lam]) return {false, lam};
    return {true, 0};
}

namespace {

bool is_free_product_of_cyclics(const GraphOfGroups& g) {
    if (g.edge_count() + 1 != g.vertex_count()) return false;
    for (const auto& e : g.edges)
        if (e.order != 1) return false;
    return true;
}

// number of permutations of S_points in which every cycle has length exactly n
mpz_class all_n_cycle_count(u64 points, u64 n) {
    if (points % n != 0) return 0;
    const u64 c = points / n;
    mpz_class fact_points, fact_c, npow;
    mpz_fac_ui(fact_points.get_mpz_t(), static_cast<unsigned long>(points));
    mpz_fac_ui(fact_c.get_mpz_t(), static_cast<unsigned long>(c));
    mpz_ui_pow_ui(npow.get_mpz_t(), static_cast<unsigned long>(n),
                  static_cast<unsigned long>(c));
    mpz_class denom = fact_c * npow;
    if (!mpz_divisible_p(fact_points.get_mpz_t(), denom.get_mpz_t()))
        throw internal_error("cycle-type count is not integral");
    return fact_points / denom;
}

bool all_cycles_have_length(const std::vector<int>& perm, u64 n) {
    const int sz = static_cast<int>(perm.size());
    std::vector<char> seen(sz, 0);
    for (int s = 0; s < sz; ++s) {
        if (seen[s]) continue;
        int len = 0, cur = s;
        do {
            seen[cur] = 1;
            cur = perm[cur];
            ++len;
        } while (cur != s);
        if (static_cast<u64>(len) != n) return false;
    }
    return true;
}

std::vector<std::vector<int>> enumerate_all_n_cycle_perms(u64 points, u64 n) {
    std::vector<std::vector<int>> out;
    if (points % n != 0) return out;
    std::vector<int> perm(points);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (all_cycles_have_length(perm, n)) out.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

} // namespace

mpq_class oracle_g_enumerate(const GraphOfGroups& g, u64 lam) {
    require_valid(g);
    if (!is_free_product_of_cyclics(g))
        throw precondition_error(
            "oracle_g_enumerate: only free products of cyclic groups are supported");
    const u64 m = m_gamma(g);
    const u64 points = lam * m;
    if (lam == 0) return 1;

    mpz_class tuple_count = 1;
    for (const auto& [_, order] : g.vertices) {
        if (points <= 8) {
            // count by direct enumeration
            mpz_class c = 0;
            for ([[maybe_unused]] const auto& perm : enumerate_all_n_cycle_perms(points, order))
                ++c;
            tuple_count *= c;
        } else {
            tuple_count *= all_n_cycle_count(points, order);
        }
    }
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(points));
    mpq_class result(tuple_count, fact);
    result.canonicalize();
    return result;
}

mpz_class oracle_f_transitive(const GraphOfGroups& g, u64 lam) {
    require_valid(g);
    if (!is_free_product_of_cyclics(g))
        throw precondition_error(
            "oracle_f_transitive: only free products of cyclic groups are supported");
    if (lam == 0) throw precondition_error("oracle_f_transitive: lam must be >= 1");
    const u64 m = m_gamma(g);
    const u64 points = lam * m;
    if (points > 8)
        throw precondition_error("oracle_f_transitive: requires lam * m <= 8");

    std::vector<std::vector<std::vector<int>>> factor_perms;
    double tuple_estimate = 1;
    for (const auto& [_, order] : g.vertices) {
        factor_perms.push_back(enumerate_all_n_cycle_perms(points, order));
        tuple_estimate *= static_cast<double>(factor_perms.back().size());
        if (tuple_estimate > 2e7)
            throw budget_error("oracle_f_transitive: tuple space too large");
    }

    // iterate the cartesian product, test transitivity via union-find
    const std::size_t nf = factor_perms.size();
    std::vector<std::size_t> idx(nf, 0);
    mpz_class transitive = 0;
    std::vector<int> parent(points);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    while (true) {
        std::iota(parent.begin(), parent.end(), 0);
        int components = static_cast<int>(points);
        for (std::size_t fi = 0; fi < nf; ++fi) {
            const auto& perm = factor_perms[fi][idx[fi]];
            for (u64 i = 0; i < points; ++i) {
                int a = find(static_cast<int>(i)), b = find(perm[i]);
                if (a != b) {
                    parent[a] = b;
                    --components;
                }
            }
        }
        if (components == 1) ++transitive;

        std::size_t pos = 0;
        while (pos < nf && ++idx[pos] == factor_perms[pos].size()) {
            idx[pos] = 0;
            ++pos;
        }
        if (pos == nf) break;
    }

    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(points - 1));
    if (!mpz_divisible_p(transitive.get_mpz_t(), fact.get_mpz_t()))
        throw internal_error("oracle_f_transitive: count not divisible by (points-1)!");
    return transitive / fact;
}

} // namespace vfree
