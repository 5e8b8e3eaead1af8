#include <doctest.h>

#include <random>
#include <set>

#include "test_oracles.hpp"
#include "vfree/errors.hpp"
#include "vfree/gog.hpp"
#include "vfree/invariants.hpp"

using namespace vfree;
using vfree::testing::amalgam;
using vfree::testing::free_product;
using vfree::testing::loop_graph;

TEST_SUITE_BEGIN("gog");

TEST_CASE("parse: modular-group presentation") {
    GraphOfGroups g = parse_gog("vertex a 2\nvertex b 3\nedge e a b 1\n");
    CHECK(g.vertices.at("a") == 2);
    CHECK(g.vertices.at("b") == 3);
    REQUIRE(g.edges.size() == 1);
    CHECK(g.edges[0].order == 1);
}

TEST_CASE("parse: one-vertex loop of order 6") {
    GraphOfGroups g = parse_gog("vertex a 6\nedge e a a 6\n");
    CHECK(g.vertex_count() == 1);
    CHECK(g.edges[0].u == g.edges[0].v);
}

TEST_CASE("parse: comments, blank lines, crlf") {
    GraphOfGroups g =
        parse_gog("# header\n\nvertex a 2 # trailing\r\n\nvertex b 2\nedge e a b 1\n");
    CHECK(g.vertex_count() == 2);
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_gog("vertex a 4\nedge e a b 2\n"), input_error); // unknown endpoint
    CHECK_THROWS_AS(parse_gog("vertex a 2\nvertex a 3\n"), input_error);   // duplicate vertex
    CHECK_THROWS_AS(parse_gog("vertex a 2\nedge e a a 1\nedge e a a 1\n"), input_error);
    CHECK_THROWS_AS(parse_gog("vertex a 0\n"), input_error);               // zero order
    CHECK_THROWS_AS(parse_gog("vertex a x\n"), input_error);               // bad number
    CHECK_THROWS_AS(parse_gog("vertx a 2\n"), input_error);                // bad directive
    CHECK_THROWS_AS(parse_gog(""), input_error);                           // empty graph
}

TEST_CASE("validate reports every violation") {
    GraphOfGroups g;
    g.vertices = {{"a", 2}, {"b", 8}, {"c", 3}};
    g.edges = {{"e", "a", "b", 4}}; // divisibility violated at a; c disconnected
    auto issues = validate(g);
    REQUIRE(issues.size() == 2);
    bool div = false, conn = false;
    for (const auto& i : issues) {
        if (i.kind == ValidationIssue::Kind::divisibility) div = true;
        if (i.kind == ValidationIssue::Kind::disconnected) conn = true;
    }
    CHECK(div);
    CHECK(conn);
}

TEST_CASE("validate: ok cases") {
    CHECK(validate(free_product({2, 3})).empty());
    CHECK(validate(loop_graph(6, 6)).empty());
    CHECK(validate(amalgam(4, 4, 2)).empty());
}

TEST_CASE("serialize round-trip is the identity on valid graphs") {
    for (const auto& g : {free_product({2, 3}), amalgam(4, 4, 2), loop_graph(6, 6),
                          free_product({2, 6, 3})}) {
        GraphOfGroups back = parse_gog(serialize_gog(g));
        CHECK(back.vertices == g.vertices);
        CHECK(serialize_gog(back) == serialize_gog(g));
    }
}

TEST_CASE("spanning tree: single vertex, parallel edges, path") {
    CHECK(spanning_tree(loop_graph(6, 6)).edge_ids.empty());

    GraphOfGroups par;
    par.vertices = {{"a", 2}, {"b", 2}};
    par.edges = {{"e2", "a", "b", 1}, {"e1", "a", "b", 1}};
    auto t = spanning_tree(par);
    REQUIRE(t.edge_ids.size() == 1);
    CHECK(t.edge_ids[0] == "e1"); // smallest edge id wins

    auto path = spanning_tree(free_product({2, 3, 5}));
    CHECK(path.edge_ids.size() == 2);
}

TEST_CASE("orient_from_root: path rooted at each end") {
    GraphOfGroups g;
    g.vertices = {{"a", 2}, {"b", 2}, {"c", 2}};
    g.edges = {{"e1", "a", "b", 1}, {"e2", "b", "c", 1}};
    auto t = spanning_tree(g);

    auto oa = orient_from_root(g, t, "a");
    REQUIRE(oa.edges.size() == 2);
    CHECK(oa.edges[0].from == "a");
    CHECK(oa.edges[0].to == "b");
    CHECK(oa.edges[1].from == "b");
    CHECK(oa.edges[1].to == "c");

    auto ob = orient_from_root(g, t, "b");
    for (const auto& e : ob.edges) CHECK(e.from == "b");

    CHECK_THROWS_AS(orient_from_root(g, t, "zz"), precondition_error);
}

TEST_CASE("orient_from_root: star rooted at a leaf") {
    GraphOfGroups g;
    g.vertices = {{"c", 2}, {"x", 2}, {"y", 2}, {"z", 2}};
    g.edges = {{"ex", "c", "x", 1}, {"ey", "c", "y", 1}, {"ez", "c", "z", 1}};
    auto t = spanning_tree(g);
    auto o = orient_from_root(g, t, "x");
    REQUIRE(o.edges.size() == 3);
    CHECK(o.edges[0].from == "x");
    CHECK(o.edges[0].to == "c");
    for (std::size_t i = 1; i < 3; ++i) CHECK(o.edges[i].from == "c");
}

TEST_CASE("orientation away from the root is a bijection onto V minus root") {
    std::mt19937_64 rng(7);
    for (int iter = 0; iter < 40; ++iter) {
        std::uniform_int_distribution<int> nv_dist(1, 7);
        int nv = nv_dist(rng);
        GraphOfGroups g;
        for (int i = 0; i < nv; ++i) g.vertices["v" + std::to_string(i)] = 2;
        for (int i = 1; i < nv; ++i) {
            int par = std::uniform_int_distribution<int>(0, i - 1)(rng);
            g.edges.push_back({"e" + std::to_string(i), "v" + std::to_string(par),
                               "v" + std::to_string(i), 1});
        }
        auto t = spanning_tree(g);
        for (int root = 0; root < nv; ++root) {
            auto o = orient_from_root(g, t, "v" + std::to_string(root));
            CHECK(o.edges.size() == g.vertex_count() - 1);
            std::set<std::string> termini;
            for (const auto& e : o.edges) {
                CHECK(e.to != "v" + std::to_string(root));
                CHECK(termini.insert(e.to).second);
            }
        }
    }
}

TEST_CASE("normalize: contraction of a trivial chain edge") {
    // orders (2, 6, 6): edge of order 1 between v0,v1 and order 6 between v1,v2
    GraphOfGroups g;
    g.vertices = {{"v0", 2}, {"v1", 6}, {"v2", 6}};
    g.edges = {{"e0", "v0", "v1", 1}, {"e1", "v1", "v2", 6}};
    GraphOfGroups n = normalize(g);
    CHECK(n.vertex_count() == 2);
    CHECK(n.edge_count() == 1);
    CHECK(group_type(n) == group_type(free_product({2, 6})));
    CHECK(group_type(n) == group_type(g));
}

TEST_CASE("normalize: fixed points") {
    GraphOfGroups psl2 = free_product({2, 3});
    CHECK(serialize_gog(normalize(psl2)) == serialize_gog(psl2));
    GraphOfGroups loop = loop_graph(6, 6); // loops are never tree edges
    CHECK(serialize_gog(normalize(loop)) == serialize_gog(loop));
}

TEST_CASE("normalize is idempotent and type-preserving on random graphs") {
    std::mt19937_64 rng(23);
    int done = 0;
    for (int iter = 0; iter < 400 && done < 60; ++iter) {
        std::uniform_int_distribution<int> nv_dist(1, 5);
        int nv = nv_dist(rng);
        GraphOfGroups g;
        std::uniform_int_distribution<u64> ord(1, 12);
        for (int i = 0; i < nv; ++i) g.vertices["v" + std::to_string(i)] = ord(rng);
        int eid = 0;
        for (int i = 1; i < nv; ++i) {
            int par = std::uniform_int_distribution<int>(0, i - 1)(rng);
            u64 gcd_orders = std::gcd(g.vertices["v" + std::to_string(par)],
                                      g.vertices["v" + std::to_string(i)]);
            auto divs = num::divisors(gcd_orders);
            g.edges.push_back({"e" + std::to_string(eid++), "v" + std::to_string(par),
                               "v" + std::to_string(i),
                               divs[std::uniform_int_distribution<std::size_t>(
                                   0, divs.size() - 1)(rng)]});
        }
        if (!validate(g).empty()) continue;
        ++done;
        GraphOfGroups n1 = normalize(g);
        GraphOfGroups n2 = normalize(n1);
        CHECK(serialize_gog(n1) == serialize_gog(n2));
        CHECK(group_type(n1) == group_type(g));
        auto t = spanning_tree(n1);
        for (const auto& id : t.edge_ids) {
            const auto& e = n1.edge_by_id(id);
            CHECK(e.order < n1.vertices.at(e.u));
            CHECK(e.order < n1.vertices.at(e.v));
        }
    }
    CHECK(done >= 60);
}

TEST_CASE("lift: identity, doubling, composition") {
    GraphOfGroups psl2 = free_product({2, 3});
    CHECK(serialize_gog(lift(psl2, 1)) == serialize_gog(psl2));

    GraphOfGroups l2 = lift(psl2, 2);
    CHECK(l2.vertices.at("v0") == 4);
    CHECK(l2.vertices.at("v1") == 6);
    CHECK(l2.edges[0].order == 2);

    GraphOfGroups l3 = lift(psl2, 3);
    CHECK(l3.vertices.at("v0") == 6);
    CHECK(l3.vertices.at("v1") == 9);

    CHECK(serialize_gog(lift(lift(psl2, 2), 3)) == serialize_gog(lift(psl2, 6)));
    CHECK_THROWS_AS(lift(psl2, 0), input_error);
}

TEST_SUITE_END();
