#include "vfree/gog.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "vfree/errors.hpp"

namespace vfree {

const GeometricEdge& GraphOfGroups::edge_by_id(const std::string& id) const {
    for (const auto& e : edges)
        if (e.id == id) return e;
    throw internal_error("unknown edge id: " + id);
}

std::vector<ValidationIssue> validate(const GraphOfGroups& g) {
    std::vector<ValidationIssue> issues;
    auto add = [&](ValidationIssue::Kind k, std::string msg) {
        issues.push_back({k, std::move(msg)});
    };

    if (g.vertices.empty()) {
        add(ValidationIssue::Kind::empty_graph, "graph has no vertices");
        return issues;
    }
    for (const auto& [id, order] : g.vertices)
        if (order == 0)
            add(ValidationIssue::Kind::bad_order, "vertex " + id + " has order 0");
    for (const auto& e : g.edges) {
        if (e.order == 0) {
            add(ValidationIssue::Kind::bad_order, "edge " + e.id + " has order 0");
            continue;
        }
        auto iu = g.vertices.find(e.u);
        auto iv = g.vertices.find(e.v);
        if (iu == g.vertices.end() || iv == g.vertices.end())
            continue; // parse already rejects unknown endpoints
        if (iu->second % e.order != 0 || iv->second % e.order != 0)
            add(ValidationIssue::Kind::divisibility,
                "edge " + e.id + " order " + std::to_string(e.order) +
                    " does not divide both endpoint orders (" + std::to_string(iu->second) +
                    ", " + std::to_string(iv->second) + ")");
    }

    // connectivity over the multigraph
    std::set<std::string> seen;
    std::queue<std::string> work;
    work.push(g.vertices.begin()->first);
    seen.insert(g.vertices.begin()->first);
    while (!work.empty()) {
        std::string cur = work.front();
        work.pop();
        for (const auto& e : g.edges) {
            if (!g.has_vertex(e.u) || !g.has_vertex(e.v)) continue;
            std::string other;
            if (e.u == cur) other = e.v;
            else if (e.v == cur) other = e.u;
            else continue;
            if (seen.insert(other).second) work.push(other);
        }
    }
    if (seen.size() != g.vertices.size())
        add(ValidationIssue::Kind::disconnected,
            "graph is not connected (" + std::to_string(seen.size()) + " of " +
                std::to_string(g.vertices.size()) + " vertices reachable)");
    return issues;
}

void require_valid(const GraphOfGroups& g) {
    auto issues = validate(g);
    if (issues.empty()) return;
    std::string msg = "invalid graph of groups:";
    for (const auto& i : issues) msg += "\n  - " + i.message;
    throw input_error(msg);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

u64 parse_order(const std::string& tok, int lineno) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        throw input_error("line " + std::to_string(lineno) + ": order '" + tok +
                          "' is not a decimal positive integer");
    try {
        unsigned long long v = std::stoull(tok);
        if (v == 0)
            throw input_error("line " + std::to_string(lineno) + ": order must be positive");
        return v;
    } catch (const std::out_of_range&) {
        throw input_error("line " + std::to_string(lineno) + ": order out of range");
    }
}

} // namespace

GraphOfGroups parse_gog(std::string_view text) {
    GraphOfGroups g;
    std::set<std::string> edge_ids;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    std::vector<GeometricEdge> pending_edges;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (toks[0] == "vertex") {
            if (toks.size() != 3)
                throw input_error("line " + std::to_string(lineno) +
                                  ": expected 'vertex <id> <order>'");
            if (g.vertices.count(toks[1]))
                throw input_error("line " + std::to_string(lineno) + ": duplicate vertex id '" +
                                  toks[1] + "'");
            g.vertices[toks[1]] = parse_order(toks[2], lineno);
        } else if (toks[0] == "edge") {
            if (toks.size() != 5)
                throw input_error("line " + std::to_string(lineno) +
                                  ": expected 'edge <id> <vertex-id> <vertex-id> <order>'");
            if (!edge_ids.insert(toks[1]).second)
                throw input_error("line " + std::to_string(lineno) + ": duplicate edge id '" +
                                  toks[1] + "'");
            pending_edges.push_back({toks[1], toks[2], toks[3], parse_order(toks[4], lineno)});
        } else {
            throw input_error("line " + std::to_string(lineno) + ": unknown directive '" +
                              toks[0] + "'");
        }
    }
    for (const auto& e : pending_edges) {
        if (!g.has_vertex(e.u))
            throw input_error("edge " + e.id + ": unknown endpoint " + e.u);
        if (!g.has_vertex(e.v))
            throw input_error("edge " + e.id + ": unknown endpoint " + e.v);
        g.edges.push_back(e);
    }
    require_valid(g);
    return g;
}

GraphOfGroups load_gog_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_gog(buf.str());
}

std::string serialize_gog(const GraphOfGroups& g) {
    std::ostringstream out;
    for (const auto& [id, order] : g.vertices)
        out << "vertex " << id << ' ' << order << '\n';
    auto edges = g.edges;
    std::sort(edges.begin(), edges.end(),
              [](const GeometricEdge& a, const GeometricEdge& b) { return a.id < b.id; });
    for (const auto& e : edges)
        out << "edge " << e.id << ' ' << e.u << ' ' << e.v << ' ' << e.order << '\n';
    return out.str();
}

bool SpanningTree::contains(const std::string& id) const {
    return std::find(edge_ids.begin(), edge_ids.end(), id) != edge_ids.end();
}

SpanningTree spanning_tree(const GraphOfGroups& g) {
    require_valid(g);
    // incident edges per vertex, sorted by edge id
    std::map<std::string, std::vector<const GeometricEdge*>> incident;
    for (const auto& e : g.edges) {
        incident[e.u].push_back(&e);
        if (e.v != e.u) incident[e.v].push_back(&e);
    }
    for (auto& [_, v] : incident)
        std::sort(v.begin(), v.end(),
                  [](const GeometricEdge* a, const GeometricEdge* b) { return a->id < b->id; });

    SpanningTree tree;
    std::set<std::string> seen;
    std::queue<std::string> work;
    const std::string root = g.vertices.begin()->first;
    seen.insert(root);
    work.push(root);
    while (!work.empty()) {
        std::string cur = work.front();
        work.pop();
        for (const GeometricEdge* e : incident[cur]) {
            const std::string& other = (e->u == cur) ? e->v : e->u;
            if (other == cur) continue; // loops never enter a tree
            if (seen.insert(other).second) {
                tree.edge_ids.push_back(e->id);
                work.push(other);
            }
        }
    }
    if (tree.edge_ids.size() + 1 != g.vertices.size())
        throw internal_error("spanning tree size mismatch");
    return tree;
}

Orientation orient_from_root(const GraphOfGroups& g, const SpanningTree& t,
                             const std::string& root) {
    if (!g.has_vertex(root)) throw precondition_error("unknown root id: " + root);
    std::map<std::string, std::vector<const GeometricEdge*>> incident;
    for (const auto& id : t.edge_ids) {
        const GeometricEdge& e = g.edge_by_id(id);
        incident[e.u].push_back(&e);
        incident[e.v].push_back(&e);
    }
    for (auto& [_, v] : incident)
        std::sort(v.begin(), v.end(),
                  [](const GeometricEdge* a, const GeometricEdge* b) { return a->id < b->id; });

    Orientation o;
    std::set<std::string> seen{root};
    std::queue<std::string> work;
    work.push(root);
    while (!work.empty()) {
        std::string cur = work.front();
        work.pop();
        for (const GeometricEdge* e : incident[cur]) {
            const std::string& other = (e->u == cur) ? e->v : e->u;
            if (seen.insert(other).second) {
                o.edges.push_back({e->id, cur, other});
                work.push(other);
            }
        }
    }
    if (o.edges.size() != t.edge_ids.size())
        throw precondition_error("root does not reach every tree vertex");
    return o;
}

GraphOfGroups normalize(const GraphOfGroups& g) {
    require_valid(g);
    GraphOfGroups cur = g;
    while (true) {
        SpanningTree tree = spanning_tree(cur);
        // trivial: tree edge whose order equals an endpoint order
        const GeometricEdge* pick = nullptr;
        for (const auto& id : tree.edge_ids) {
            const GeometricEdge& e = cur.edge_by_id(id);
            u64 ou = cur.vertices.at(e.u), ov = cur.vertices.at(e.v);
            if (e.order == ou || e.order == ov)
                if (!pick || e.id < pick->id) pick = &e;
        }
        if (!pick) return cur;

        u64 ou = cur.vertices.at(pick->u), ov = cur.vertices.at(pick->v);
        // the endpoint matching the edge order is absorbed; if both match,
        // keep the smaller vertex id
        std::string removed, survivor;
        if (pick->order == ou && pick->order == ov) {
            survivor = std::min(pick->u, pick->v);
            removed = std::max(pick->u, pick->v);
        } else if (pick->order == ov) {
            survivor = pick->u;
            removed = pick->v;
        } else {
            survivor = pick->v;
            removed = pick->u;
        }

        GraphOfGroups next;
        next.vertices = cur.vertices;
        next.vertices.erase(removed);
        for (const auto& e : cur.edges) {
            if (e.id == pick->id) continue;
            GeometricEdge ne = e;
            if (ne.u == removed) ne.u = survivor;
            if (ne.v == removed) ne.v = survivor;
            next.edges.push_back(ne);
        }
        cur = std::move(next);
    }
}

GraphOfGroups lift(const GraphOfGroups& g, u64 ell) {
    if (ell == 0) throw input_error("lift factor must be >= 1");
    require_valid(g);
    GraphOfGroups out = g;
    for (auto& [_, order] : out.vertices) order *= ell;
    for (auto& e : out.edges) e.order *= ell;
    return out;
}

} // namespace vfree
