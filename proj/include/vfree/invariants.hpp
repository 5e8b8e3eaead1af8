#ifndef VFREE_INVARIANTS_HPP
#define VFREE_INVARIANTS_HPP

#include <map>
#include <string>

#include <gmpxx.h>

#include "vfree/gog.hpp"

namespace vfree {

// The type invariant: m together with the integers zeta_kappa for each
// divisor kappa of m, where zeta_kappa counts geometric edges minus vertices
// whose order divides kappa. Determines every free subgroup number.
struct GroupType {
    u64 m = 1;
    std::map<u64, long long> zeta; // keys are exactly the divisors of m

    bool operator==(const GroupType&) const = default;
};

u64 m_gamma(const GraphOfGroups& g);

GroupType group_type(const GraphOfGroups& g);

// Sum of reciprocal vertex orders minus reciprocal edge orders, exact.
mpq_class euler_char(const GraphOfGroups& g);

// -(1/m) * sum over kappa | m of phi(m/kappa) * zeta_kappa.
mpq_class euler_char_from_type(const GroupType& t);

// Free rank mu = 1 - m*chi, cross-checked against 1 + sum phi(m/kappa)*zeta_kappa.
// The two routes disagreeing is an internal hard failure.
u64 free_rank(const GraphOfGroups& g);

// mu_p = 1 + sum over p | kappa | m of phi(m/kappa) * zeta_kappa.
u64 p_rank(const GraphOfGroups& g, u64 p);

struct LargenessReport {
    bool chi_negative = false;     // chi < 0
    bool rank_at_least_two = false; // mu >= 2
    bool structural = false;        // shape criterion on the normalized graph
    bool is_large = false;
    std::string detail;
};

// Evaluates three equivalent largeness criteria on the normalized graph and
// requires them to agree.
LargenessReport is_large(const GraphOfGroups& g);

enum class SmallRankKind {
    finite,              // mu = 0
    inf_cyclic_case_i,   // mu = 1, finite normal subgroup with infinite-cyclic quotient
    inf_cyclic_case_ii,  // mu = 1, amalgam of two finite groups over an index-2 subgroup
    large,               // mu >= 2
};

struct SmallRankClass {
    SmallRankKind kind;
    u64 mu = 0;
};

SmallRankClass classify_small_rank(const GraphOfGroups& g);

const char* to_string(SmallRankKind k);

} // namespace vfree

#endif
