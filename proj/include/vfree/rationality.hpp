#ifndef VFREE_RATIONALITY_HPP
#define VFREE_RATIONALITY_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "vfree/gog.hpp"
#include "vfree/parallel.hpp"

namespace vfree {

enum class MainCase {
    periodic_p_not_dividing_m, // (iii)_1
    periodic_mu_p_positive,    // (iii)_2
    periodic_finite,           // (iii)_3
    periodic_virtually_cyclic_p2, // (iii)_4
    not_periodic,
};

struct Classification {
    MainCase label;
    u64 p = 2;
    u64 m = 1;
    u64 mu = 0;
    u64 mu_p = 0;
};

// First-match dispatch: p not dividing m; p | m with mu_p > 0; mu = 0;
// mu = 1 with p = 2; otherwise not periodic.
Classification classify(const GraphOfGroups& g, u64 p);

const char* case_name(MainCase c);
std::string case_description(const Classification& c);

// Asserts f_lam = 0 mod p over the whole prefix. Requires p | m and mu_p > 0;
// a nonzero residue is an internal hard failure, not a return value.
bool check_zero_mod_p(const GraphOfGroups& g, u64 p, u64 terms);

struct DenominatorSign {
    int sigma;       // +1: powers of (1 - z); -1: powers of (1 + z)
    u64 exponent;    // M = (mu - mu_p) / (p - 1)
};

// Requires p | m and mu_p = 1. M must come out an integer.
DenominatorSign expected_denominator_sign(const GraphOfGroups& g, u64 p);

// (1 - sigma*z)^k * F(z) = numerator mod p^alpha, certified on the given
// prefix with at least `margin` vanishing coefficients past the numerator.
struct RationalFit {
    u64 p = 2;
    u64 alpha = 1;
    int sigma = 1;
    u64 k = 0;
    std::vector<mpz_class> numerator; // constant term first; empty = zero series
    u64 verified_prefix_length = 0;
    u64 margin = 0;
};

// Finds the least k <= max_k whose product series vanishes past some degree,
// with at least `margin` trailing zeros observed. Failure within the budget is
// reported as budget exhaustion, never as a mathematical claim.
// `series` holds the coefficients of F(z), i.e. series[lam] = f_{lam+1} mod p^alpha.
RationalFit fit_rational(std::span<const mpz_class> series, u64 p, u64 alpha, int sigma,
                         u64 max_k, u64 margin);

// Coefficient of z^lam in numerator / (1 - sigma*z)^k mod p^alpha, by O(k)
// binomial products with valuation tracking.
mpz_class fit_coefficient(const RationalFit& fit, u64 lam);

// Re-expands the fit and compares against the full prefix, in parallel.
bool fit_reproduces_prefix(const RationalFit& fit, std::span<const mpz_class> series,
                           Exec exec = Exec::parallel);

// True iff omega shifts the coefficient sequence onto itself; window-certified
// (equal windows of length k propagate through the order-k recurrence).
bool fit_period_window_check(const RationalFit& fit, u64 omega);

// Least period of the coefficient sequence of the fit: scans the divisors of
// a certified period cap of the form (sign factor) * p^j in ascending order,
// window-verifying each candidate.
u64 rational_period(const RationalFit& fit);

struct PolynomialCheck {
    bool is_polynomial_prefix = false;
    std::vector<mpz_class> head; // nonzero head of F mod p^alpha
    u64 trailing_zeros = 0;
};

// For p | m, mu_p >= 2: verifies that F mod p^alpha has at least `margin`
// trailing zero coefficients over the prefix. `waive_preconditions` is for
// test mode only.
PolynomialCheck polynomial_check(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms,
                                 u64 margin, bool waive_preconditions = false);

// Guarded mod-p closed form for groups with mu_p = 0: defined only when
// (p-1) divides lam-1, mu*lam and mu-1, and p does not divide lam; returns
// nullopt otherwise.
std::optional<u64> mod_p_closed_form(const GraphOfGroups& g, u64 p, u64 lam);

// Classification of the base-3 digit word of lam (most significant digit
// first) against the three digit languages governing the free subgroup
// numbers of the modular group mod 3: returns -1, 0 or +1.
int psl2_mod3_automaton(u64 lam);

} // namespace vfree

#endif
