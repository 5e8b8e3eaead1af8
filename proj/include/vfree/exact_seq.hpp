#ifndef VFREE_EXACT_SEQ_HPP
#define VFREE_EXACT_SEQ_HPP

#include <vector>

#include <gmpxx.h>

#include "vfree/gog.hpp"
#include "vfree/parallel.hpp"

namespace vfree {

// Exact prefix of the two counting sequences. g[lam] is the normalised number
// of torsion-free actions on lam*m points (g[0] = 1); f[lam] is the number of
// free subgroups of index lam*m (f[0] is unused and zero).
struct SequencePrefix {
    u64 m = 1;
    std::vector<mpq_class> g; // indices 0..terms
    std::vector<mpz_class> f; // indices 0..terms, f[0] unused
    u64 terms() const { return g.empty() ? 0 : g.size() - 1; }
};

// g[lam] for lam = 0..terms, computed incrementally: each step multiplies by a
// ratio built from m/|order| consecutive integers and one power per site,
// instead of recomputing factorials.
std::vector<mpq_class> g_sequence(const GraphOfGroups& g, u64 terms);

// f[lam] for lam = 1..terms via the transformation formula
//   f_lam = m*lam*g_lam - sum_{mu=1}^{lam-1} g_mu * f_{lam-mu},
// evaluated exactly. Every f_lam must come out a non-negative integer;
// anything else is an internal hard failure. This is the transparent
// reference path; the fast modular path lives in modular_seq.
std::vector<mpz_class> f_sequence(const GraphOfGroups& g, u64 terms,
                                  Exec exec = Exec::parallel);

SequencePrefix compute_prefix(const GraphOfGroups& g, u64 terms, Exec exec = Exec::parallel);

struct GfIdentityResult {
    bool ok = true;
    u64 first_failure_degree = 0;
};

// Verifies m*G'(z) = F(z)*G(z) as formal power series through degree terms-1.
GfIdentityResult gf_identity_check(const SequencePrefix& prefix);

// Exact p-adic valuation of g_lam without big integers: factorial valuations
// by Legendre's formula plus the per-site power contributions (which vanish
// when p does not divide m).
long long vp_g(const GraphOfGroups& g, u64 p, u64 lam);

struct LemmaMainResult {
    bool ok = true;
    u64 first_failure = 0;
};

// Checks v_p(g_lam) >= v_p(lam!) for 0 <= lam <= terms.
// Requires p prime, p not dividing m, and free rank >= 2.
LemmaMainResult lemma_main_check(const GraphOfGroups& g, u64 p, u64 terms,
                                 Exec exec = Exec::parallel);

// Independent counting oracle for free products of cyclic groups (tree, all
// edge orders 1): counts permutation tuples, one per vertex factor C_n, in
// which every cycle has length exactly n, divided by (lam*m)!. Tiny sets are
// fully enumerated; larger ones use the closed cycle-type count per factor.
mpq_class oracle_g_enumerate(const GraphOfGroups& g, u64 lam);

// Enumerates torsion-free tuples on lam*m points (lam*m <= 8), keeps those
// whose joint action is transitive, divides by (lam*m - 1)!.
mpz_class oracle_f_transitive(const GraphOfGroups& g, u64 lam);

} // namespace vfree

#endif
