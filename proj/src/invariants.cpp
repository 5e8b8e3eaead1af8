#include "vfree/invariants.hpp"

#include <numeric>

#include "vfree/errors.hpp"

namespace vfree {

u64 m_gamma(const GraphOfGroups& g) {
    require_valid(g);
    u64 m = 1;
    for (const auto& [_, order] : g.vertices) m = std::lcm(m, order);
    return m;
}

GroupType group_type(const GraphOfGroups& g) {
    GroupType t;
    t.m = m_gamma(g);
    for (u64 kappa : num::divisors(t.m)) {
        long long z = 0;
        for (const auto& e : g.edges)
            if (kappa % e.order == 0) ++z;
        for (const auto& [_, order] : g.vertices)
            if (kappa % order == 0) --z;
        t.zeta[kappa] = z;
    }
    // zeta_kappa >= 0 for kappa < m, zeta_m >= -1
    for (const auto& [kappa, z] : t.zeta) {
        if (kappa < t.m && z < 0)
            throw internal_error("group type: zeta_" + std::to_string(kappa) + " negative");
        if (kappa == t.m && z < -1)
            throw internal_error("group type: zeta_m below -1");
    }
    return t;
}

mpq_class euler_char(const GraphOfGroups& g) {
    require_valid(g);
    mpq_class chi = 0;
    for (const auto& [_, order] : g.vertices)
        chi += mpq_class(1, static_cast<unsigned long>(order));
    for (const auto& e : g.edges)
        chi -= mpq_class(1, static_cast<unsigned long>(e.order));
    chi.canonicalize();
    return chi;
}

mpq_class euler_char_from_type(const GroupType& t) {
    mpz_class acc = 0;
    for (const auto& [kappa, z] : t.zeta)
        acc += mpz_class(static_cast<unsigned long>(num::totient(t.m / kappa))) *
               static_cast<long>(z);
    mpq_class chi(-acc, mpz_class(static_cast<unsigned long>(t.m)));
    chi.canonicalize();
    return chi;
}

u64 free_rank(const GraphOfGroups& g) {
    GroupType t = group_type(g);
    mpq_class via_chi = 1 - mpq_class(static_cast<unsigned long>(t.m)) * euler_char(g);
    long via_type = 1;
    for (const auto& [kappa, z] : t.zeta)
        via_type += static_cast<long>(num::totient(t.m / kappa)) * static_cast<long>(z);
    if (via_chi.get_den() != 1 || via_chi.get_num() != via_type || via_type < 0)
        throw internal_error("free rank: Euler-characteristic and type formulas disagree");
    return static_cast<u64>(via_type);
}

u64 p_rank(const GraphOfGroups& g, u64 p) {
    if (!num::is_prime(p)) throw precondition_error("p_rank: p must be prime");
    GroupType t = group_type(g);
    long long mu_p = 1;
    for (const auto& [kappa, z] : t.zeta)
        if (kappa % p == 0)
            mu_p += static_cast<long long>(num::totient(t.m / kappa)) *
                    static_cast<long long>(z);
    if (mu_p < 0) throw internal_error("p_rank: negative value");
    return static_cast<u64>(mu_p);
}

LargenessReport is_large(const GraphOfGroups& g) {
    GraphOfGroups n = normalize(g);
    LargenessReport r;
    r.chi_negative = euler_char(n) < 0;
    r.rank_at_least_two = free_rank(n) >= 2;

    // structural criterion on the normalized graph
    const std::size_t nv = n.vertex_count();
    const std::size_t ne = n.edge_count();
    if (nv == 1) {
        const u64 vorder = n.vertices.begin()->second;
        if (ne > 1) {
            r.structural = true;
            r.detail = "one vertex, more than one geometric edge";
        } else if (ne == 1) {
            r.structural = 2 * n.edges[0].order <= vorder;
            r.detail = "one vertex, single loop, index " +
                       std::to_string(vorder / n.edges[0].order);
        } else {
            r.structural = false;
            r.detail = "single finite vertex group";
        }
    } else {
        if (ne > nv - 1) {
            r.structural = true;
            r.detail = "underlying graph is not a tree";
        } else if (ne >= 2) {
            r.structural = true;
            r.detail = "tree with more than one geometric edge";
        } else {
            // two vertices, one edge: amalgam of the endpoint groups
            const GeometricEdge& e = n.edges[0];
            mpq_class chi0 = mpq_class(1, static_cast<unsigned long>(n.vertices.at(e.u))) +
                             mpq_class(1, static_cast<unsigned long>(n.vertices.at(e.v))) -
                             mpq_class(1, static_cast<unsigned long>(e.order));
            chi0.canonicalize();
            r.structural = chi0 < 0;
            r.detail = "single-edge tree, amalgam Euler characteristic " + chi0.get_str();
        }
    }

    if (r.chi_negative != r.rank_at_least_two || r.chi_negative != r.structural)
        throw internal_error("largeness criteria disagree: chi<0=" +
                             std::to_string(r.chi_negative) +
                             " mu>=2=" + std::to_string(r.rank_at_least_two) +
                             " structural=" + std::to_string(r.structural));
    r.is_large = r.chi_negative;
    return r;
}

SmallRankClass classify_small_rank(const GraphOfGroups& g) {
    GroupType t = group_type(g);
    u64 mu = free_rank(g);
    if (mu == 0) return {SmallRankKind::finite, 0};
    if (mu >= 2) return {SmallRankKind::large, mu};
    long long zm = t.zeta.at(t.m);
    if (zm == 0) return {SmallRankKind::inf_cyclic_case_i, 1};
    if (zm == -1) return {SmallRankKind::inf_cyclic_case_ii, 1};
    throw internal_error("classify_small_rank: mu = 1 with zeta_m = " + std::to_string(zm));
}

const char* to_string(SmallRankKind k) {
    switch (k) {
        case SmallRankKind::finite: return "Finite";
        case SmallRankKind::inf_cyclic_case_i: return "InfCyclicCaseI";
        case SmallRankKind::inf_cyclic_case_ii: return "InfCyclicCaseII";
        case SmallRankKind::large: return "Large";
    }
    return "?";
}

} // namespace vfree
