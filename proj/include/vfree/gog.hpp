#ifndef VFREE_GOG_HPP
#define VFREE_GOG_HPP

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "vfree/numeric.hpp"

namespace vfree {

using num::u64;

// One geometric edge {e, e-bar}. Loops (u == v) and parallel edges are allowed.
struct GeometricEdge {
    std::string id;
    std::string u;
    std::string v;
    u64 order = 1;
};

// A finite connected multigraph whose vertices and geometric edges carry
// finite cyclic-group orders. Only stabiliser orders are stored; edge
// embeddings are the canonical ones of a cyclic cover, which exist exactly
// when each edge order divides both endpoint orders.
//
// Instances are immutable after construction and safe to share across
// threads; all operations on them are pure functions.
struct GraphOfGroups {
    std::map<std::string, u64> vertices; // id -> |Gamma(v)|
    std::vector<GeometricEdge> edges;

    bool has_vertex(const std::string& id) const { return vertices.count(id) != 0; }
    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t edge_count() const { return edges.size(); }
    const GeometricEdge& edge_by_id(const std::string& id) const;
};

struct ValidationIssue {
    enum class Kind {
        empty_graph,
        bad_order,
        divisibility,
        disconnected,
    };
    Kind kind;
    std::string message;
};

// Checks every type invariant and reports all violations, not just the first.
std::vector<ValidationIssue> validate(const GraphOfGroups& g);

// Throws input_error listing every violated invariant.
void require_valid(const GraphOfGroups& g);

// Line format:  vertex <id> <order>  |  edge <id> <u> <v> <order>
// '#' starts a comment, blank lines are ignored. Parsing validates the result.
GraphOfGroups parse_gog(std::string_view text);
GraphOfGroups load_gog_file(const std::string& path);

// Canonical form: vertices then edges, each sorted by id. parse(serialize(g)) == g.
std::string serialize_gog(const GraphOfGroups& g);

struct SpanningTree {
    std::vector<std::string> edge_ids; // in discovery order; |edges| = |V| - 1
    bool contains(const std::string& id) const;
};

// Deterministic: breadth-first growth from the lexicographically smallest
// vertex id, scanning incident edges in increasing edge-id order.
SpanningTree spanning_tree(const GraphOfGroups& g);

struct OrientedEdge {
    std::string edge_id;
    std::string from;
    std::string to;
};

// A direction for each geometric edge of a subset of the graph.
struct Orientation {
    std::vector<OrientedEdge> edges;
};

// Orients every tree edge away from the root; edge -> terminus is then a
// bijection onto V \ {root}.
Orientation orient_from_root(const GraphOfGroups& g, const SpanningTree& t, const std::string& root);

// Contracts trivial spanning-tree edges (edge order equal to an endpoint
// order) one at a time, smallest edge id first, rescanning after each
// contraction. The result has no trivial tree edge; the group type is
// preserved. Idempotent.
GraphOfGroups normalize(const GraphOfGroups& g);

// Multiplies every vertex and edge order by ell >= 1.
GraphOfGroups lift(const GraphOfGroups& g, u64 ell);

} // namespace vfree

#endif
