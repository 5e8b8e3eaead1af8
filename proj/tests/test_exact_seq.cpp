#include <doctest.h>

#include "test_oracles.hpp"
#include "vfree/errors.hpp"
#include "vfree/exact_seq.hpp"
#include "vfree/invariants.hpp"

using namespace vfree;
using vfree::testing::amalgam;
using vfree::testing::free_product;
using vfree::testing::loop_graph;
using vfree::testing::oracle_f_counting;

TEST_SUITE_BEGIN("exact_seq");

namespace {
GraphOfGroups finite_cyclic(u64 n) {
    GraphOfGroups g;
    g.vertices = {{"a", n}};
    return g;
}
} // namespace

TEST_CASE("g-sequence of the modular group") {
    auto g = g_sequence(free_product({2, 3}), 3);
    CHECK(g[0] == 1);
    CHECK(g[1] == mpq_class(5, 6));
    CHECK(g[2] == mpq_class(385, 72));
    CHECK(g[3] * 1 == mpq_class(85085, 1296)); // incremental path stays exact
}

TEST_CASE("g-sequence of the index-2 amalgam is the central binomial") {
    auto g = g_sequence(amalgam(4, 4, 2), 5);
    CHECK(g[1] == mpq_class(1, 2));
    CHECK(g[2] == mpq_class(3, 8));
    CHECK(g[3] == mpq_class(5, 16));
    CHECK(g[4] == mpq_class(35, 128));
    CHECK(g[5] == mpq_class(63, 256));
}

TEST_CASE("g0 = 1 always") {
    for (const auto& g : {free_product({2, 3}), amalgam(4, 4, 2), loop_graph(6, 6),
                          finite_cyclic(5)})
        CHECK(g_sequence(g, 0)[0] == 1);
}

TEST_CASE("f-sequence of the modular group") {
    auto f = f_sequence(free_product({2, 3}), 8);
    const long expect[] = {5, 60, 1105, 27120, 828250};
    for (int i = 0; i < 5; ++i) CHECK(f[i + 1] == expect[i]);
    CHECK(f[6] == mpz_class("30220800"));
    CHECK(f[7] == mpz_class("1282031525"));
    CHECK(f[8] == mpz_class("61999046400"));
}

TEST_CASE("f-sequence of the order-6 sibling") {
    auto f = f_sequence(free_product({2, 6}), 4);
    CHECK(f[1] == 15);
    CHECK(f[2] == 1695);
    CHECK(f[3] == 472200);
    CHECK(f[4] == mpz_class("242183775"));
}

TEST_CASE("transformation formula re-verified independently of the build loop") {
    for (const auto& g : {free_product({2, 3}), free_product({2, 6}), amalgam(4, 4, 2)}) {
        SequencePrefix prefix = compute_prefix(g, 40);
        const u64 m = prefix.m;
        for (u64 lam = 1; lam <= 40; ++lam) {
            mpq_class rhs = mpq_class(static_cast<unsigned long>(m)) *
                            static_cast<unsigned long>(lam) * prefix.g[lam];
            mpq_class lhs = 0;
            for (u64 mu = 0; mu < lam; ++mu)
                lhs += prefix.g[mu] * mpq_class(prefix.f[lam - mu]);
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("generating-function identity check") {
    SequencePrefix prefix = compute_prefix(free_product({2, 3}), 20);
    CHECK(gf_identity_check(prefix).ok);

    SequencePrefix broken = prefix;
    broken.f[1] += 1;
    auto r = gf_identity_check(broken);
    CHECK_FALSE(r.ok);
    CHECK(r.first_failure_degree == 0);

    SequencePrefix empty = compute_prefix(free_product({2, 3}), 0);
    CHECK(gf_identity_check(empty).ok); // vacuous
}

TEST_CASE("valuations of g via the factorial formula") {
    GraphOfGroups psl2 = free_product({2, 3});
    CHECK(vp_g(psl2, 7, 7) == 1);
    CHECK(vp_g(psl2, 7, 49) == 8);
    CHECK(vp_g(psl2, 5, 0) == 0);
    CHECK(vp_g(psl2, 3, 1) == -1); // g_1 = 5/6

    // cross-check against the big-rational path
    for (const auto& g : {free_product({2, 3}), free_product({2, 6}), amalgam(4, 4, 2)}) {
        auto gs = g_sequence(g, 30);
        for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull}) {
            for (u64 lam = 1; lam <= 30; ++lam) {
                long expected = num::valuation(gs[lam].get_num(), p) -
                                num::valuation(gs[lam].get_den(), p);
                CHECK(vp_g(g, p, lam) == expected);
            }
        }
    }
}

TEST_CASE("valuation lower bound") {
    GraphOfGroups psl2 = free_product({2, 3});
    CHECK(lemma_main_check(psl2, 5, 500).ok);
    CHECK(lemma_main_check(psl2, 7, 500).ok);
    CHECK_THROWS_AS(lemma_main_check(amalgam(4, 4, 2), 3, 10), precondition_error); // mu = 1
    CHECK_THROWS_AS(lemma_main_check(psl2, 3, 10), precondition_error);             // p | m
}

TEST_CASE("enumeration oracle for g") {
    CHECK(oracle_g_enumerate(free_product({2, 3}), 1) == mpq_class(5, 6));
    CHECK(oracle_g_enumerate(free_product({2, 2, 2}), 1) == mpq_class(1, 2));
    CHECK(oracle_g_enumerate(finite_cyclic(2), 1) == mpq_class(1, 2));
    CHECK_THROWS_AS(oracle_g_enumerate(amalgam(4, 4, 2), 1), precondition_error);

    // closed cycle-type counting agrees with the formula path beyond the
    // enumeration range
    for (u64 lam = 1; lam <= 4; ++lam)
        CHECK(oracle_g_enumerate(free_product({2, 3}), lam) ==
              g_sequence(free_product({2, 3}), lam)[lam]);
}

TEST_CASE("transitive-action oracle for f") {
    CHECK(oracle_f_transitive(free_product({2, 3}), 1) == 5);
    CHECK(oracle_f_transitive(free_product({2, 2, 2}), 1) == 1);
    CHECK(oracle_f_transitive(free_product({2, 2}), 1) == 1);
    CHECK_THROWS_AS(oracle_f_transitive(free_product({2, 3}), 2), precondition_error);
}

TEST_CASE("counting oracle agrees with the pipeline") {
    GraphOfGroups psl2 = free_product({2, 3});
    auto f = f_sequence(psl2, 4);
    for (u64 lam = 1; lam <= 4; ++lam) CHECK(oracle_f_counting(psl2, lam) == f[lam]);
    CHECK(oracle_f_counting(psl2, 2) == 60);

    GraphOfGroups c2c2c2 = free_product({2, 2, 2});
    auto f3 = f_sequence(c2c2c2, 6);
    CHECK(f3[1] == 1);
    CHECK(f3[2] == 4);
    CHECK(f3[3] == 25);
    CHECK(f3[4] == 208);
    CHECK(f3[5] == 2146);
    CHECK(f3[6] == 26368);
    for (u64 lam = 1; lam <= 5; ++lam) CHECK(oracle_f_counting(c2c2c2, lam) == f3[lam]);
}

TEST_CASE("monotonicity trichotomy over computed prefixes") {
    // large: strictly increasing
    auto f = f_sequence(free_product({2, 3}), 30);
    for (u64 lam = 2; lam <= 30; ++lam) CHECK(f[lam] > f[lam - 1]);

    // rank one: constant with the predicted value
    auto floop = f_sequence(loop_graph(6, 6), 30);
    for (u64 lam = 1; lam <= 30; ++lam) CHECK(floop[lam] == 6);
    auto famal = f_sequence(amalgam(4, 4, 2), 30);
    for (u64 lam = 1; lam <= 30; ++lam) CHECK(famal[lam] == 2);

    // finite: 1, then zeros
    auto ffin = f_sequence(finite_cyclic(6), 20);
    CHECK(ffin[1] == 1);
    for (u64 lam = 2; lam <= 20; ++lam) CHECK(ffin[lam] == 0);
}

TEST_CASE("f is invariant under normalization and relabeling") {
    GraphOfGroups g;
    g.vertices = {{"v0", 2}, {"v1", 6}, {"v2", 6}};
    g.edges = {{"e0", "v0", "v1", 1}, {"e1", "v1", "v2", 6}};
    auto f1 = f_sequence(g, 12);
    auto f2 = f_sequence(normalize(g), 12);
    auto f3 = f_sequence(free_product({2, 6}), 12);
    CHECK(f1 == f2);
    CHECK(f1 == f3);

    GraphOfGroups relabeled;
    relabeled.vertices = {{"zz", 2}, {"aa", 6}, {"mm", 6}};
    relabeled.edges = {{"q", "zz", "aa", 1}, {"b", "aa", "mm", 6}};
    CHECK(f_sequence(relabeled, 12) == f1);
}

TEST_SUITE_END();
