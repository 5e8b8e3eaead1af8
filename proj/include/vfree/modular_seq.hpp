#ifndef VFREE_MODULAR_SEQ_HPP
#define VFREE_MODULAR_SEQ_HPP

#include <span>
#include <vector>

#include <gmpxx.h>

#include "vfree/gog.hpp"
#include "vfree/padic.hpp"
#include "vfree/parallel.hpp"

namespace vfree {

// Precision plan for the modular pipeline. All intermediate values of the
// convolution are held as fixed-point residues scaled by p^scale, modulo
// p^(alpha + guard + scale). `scale` absorbs the most negative valuation of
// any g term; `guard` bounds, via a min-plus recursion over the valuations,
// how far storage-truncation errors can climb through the convolution. Both
// are zero whenever p does not divide m.
struct ModularPlan {
    u64 p = 2;
    u64 alpha = 1;
    u64 terms = 0;
    long long min_valuation = 0;
    u64 scale = 0; // V
    u64 guard = 0; // gamma
    u64 unit_precision() const { return alpha + guard + scale; }
};

ModularPlan plan_modular(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms,
                         Exec exec = Exec::parallel);

// g_lam as p-adic numbers with working precision alpha + scale; exact
// valuations come from vp_g, unit parts from the factorial unit table.
std::vector<PAdicNumber> g_mod(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms,
                               Exec exec = Exec::parallel);

// f_lam mod p^alpha for lam = 1..terms (index 0 unused), computed through the
// transformation-formula convolution entirely in modular arithmetic. Matches
// f_sequence reduced mod p^alpha; a scaled intermediate failing its exact
// divisibility check indicates a precision shortfall and is a hard failure.
std::vector<mpz_class> f_mod(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms,
                             Exec exec = Exec::parallel);

// Smallest lam with v_p(lam!) >= alpha. Past this cutoff every g term has
// valuation >= alpha, so the convolution collapses to a linear recurrence.
// Requires p prime not dividing m and free rank >= 2.
u64 cutoff_lambda0(const GraphOfGroups& g, u64 p, u64 alpha);

// Homogeneous linear recurrence s_{n+d} = c_1 s_{n+d-1} + ... + c_d s_n over
// Z/p^alpha. The modulus must fit in 64 bits.
struct ModRecurrence {
    u64 p = 2;
    u64 alpha = 1;
    u64 modulus = 2; // p^alpha
    u64 order = 1;   // d >= 1
    std::vector<u64> coeffs; // c_1..c_d
};

// The order-(cutoff-1) recurrence with coefficients -g_1, ..., -g_{d} mod
// p^alpha satisfied by the f sequence from the cutoff on.
ModRecurrence recurrence_mod(const GraphOfGroups& g, u64 p, u64 alpha);

struct PeriodReport {
    u64 preperiod = 0;       // least n0 for the reported period
    u64 period = 0;          // least period of the value sequence
    bool purely_periodic = false;
    bool certified = false;   // true: s_{n+period} = s_n for all n >= preperiod, guaranteed
    bool budget_exhausted = false;
    mpz_class theoretical_cap; // |Z/p^alpha|^order, attached for reference
    u64 steps_used = 0;
};

// Advances the order-d state vector hashing states; the first repeated state
// certifies the period (equal d-windows under an order-d recurrence agree
// forever). The reported (preperiod, period) are then minimised at the value
// level. Stops without a claim when the budget runs out.
PeriodReport detect_period(const ModRecurrence& rec, std::span<const u64> initial_state,
                           u64 budget = 1'000'000);

// Empirical scan of an explicit residue prefix; never certified.
PeriodReport detect_period_prefix(std::span<const u64> seq);

// True iff the trailing coefficient c_d is a unit mod p^alpha, in which case
// the recurrence map is invertible and any orbit is purely periodic.
bool purity_certificate(const ModRecurrence& rec);

// Residues f_1..f_terms mod p^alpha as u64 (requires p^alpha < 2^63).
std::vector<u64> f_mod_u64(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms,
                           Exec exec = Exec::parallel);

} // namespace vfree

#endif
