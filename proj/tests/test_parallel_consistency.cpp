#include <doctest.h>

#include "test_oracles.hpp"
#include "vfree/exact_seq.hpp"
#include "vfree/modular_seq.hpp"
#include "vfree/padic.hpp"
#include "vfree/rationality.hpp"

using namespace vfree;
using vfree::testing::free_product;

// Every OpenMP kernel keeps a serial reference path; the two must produce
// bit-identical results (the reductions are exact, so order cannot matter).

TEST_SUITE_BEGIN("parallel");

TEST_CASE("factorial unit table: serial == parallel") {
    for (u64 p : {2ull, 3ull, 7ull}) {
        FactorialUnits serial(p, 6, 5000, Exec::serial);
        FactorialUnits parallel(p, 6, 5000, Exec::parallel);
        for (u64 n = 0; n <= 5000; n += 37) CHECK(serial.unit(n) == parallel.unit(n));
        CHECK(serial.unit(5000) == parallel.unit(5000));
    }
}

TEST_CASE("exact convolution: serial == parallel") {
    for (const auto& g : {free_product({2, 3}), free_product({2, 6})}) {
        auto fs = f_sequence(g, 150, Exec::serial);
        auto fp = f_sequence(g, 150, Exec::parallel);
        CHECK(fs == fp);
    }
}

TEST_CASE("modular convolution: serial == parallel, including guarded cases") {
    for (const auto& g : {free_product({2, 3}), free_product({2, 6})}) {
        for (auto [p, alpha] : {std::pair<u64, u64>{3, 2}, {2, 3}, {5, 2}}) {
            auto fs = f_mod(g, p, alpha, 150, Exec::serial);
            auto fp = f_mod(g, p, alpha, 150, Exec::parallel);
            CHECK(fs == fp);
        }
    }
}

TEST_CASE("valuation scan: serial == parallel") {
    GraphOfGroups psl2 = free_product({2, 3});
    auto rs = lemma_main_check(psl2, 7, 2000, Exec::serial);
    auto rp = lemma_main_check(psl2, 7, 2000, Exec::parallel);
    CHECK(rs.ok == rp.ok);

    auto ps = plan_modular(psl2, 3, 1, 300, Exec::serial);
    auto pp = plan_modular(psl2, 3, 1, 300, Exec::parallel);
    CHECK(ps.scale == pp.scale);
    CHECK(ps.guard == pp.guard);
}

TEST_CASE("fit verification: serial == parallel") {
    GraphOfGroups h6 = free_product({2, 6});
    auto f = f_mod(h6, 3, 9, 400);
    std::vector<mpz_class> series(f.begin() + 1, f.end());
    RationalFit fit = fit_rational(series, 3, 9, -1, 43, 50);
    CHECK(fit_reproduces_prefix(fit, series, Exec::serial));
    CHECK(fit_reproduces_prefix(fit, series, Exec::parallel));
}

TEST_SUITE_END();
