#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "elruna/errors.hpp"
#include "elruna/generators.hpp"
#include "elruna/graph.hpp"
#include "elruna/testkit.hpp"

using namespace elruna;

namespace {

Graph path(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i + 1 < n; ++i) e.push_back({i, i + 1});
    return Graph::from_edges(n, e);
}

Graph complete(std::size_t n) {
    std::vector<Edge> e;
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j) e.push_back({i, j});
    return Graph::from_edges(n, e);
}

void check_symmetric(const Graph& g) {
    std::size_t half_degree = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        auto nb = g.neighbors(u);
        CHECK(nb.size() == g.degree(u));
        CHECK(std::is_sorted(nb.begin(), nb.end()));
        for (NodeId v : nb) {
            CHECK(v != u);
            CHECK(g.has_edge(v, u));
        }
        half_degree += nb.size();
    }
    CHECK(half_degree == 2 * g.edge_count());
}

}  // namespace

TEST_CASE("parse a three node path") {
    auto p = parse_edge_list("1 2\n2 3");
    CHECK(p.graph.node_count() == 3);
    CHECK(p.graph.edge_count() == 2);
    CHECK(p.graph.has_edge(p.labels.find("1"), p.labels.find("2")));
    CHECK(p.graph.has_edge(p.labels.find("3"), p.labels.find("2")));
    CHECK_FALSE(p.graph.has_edge(p.labels.find("1"), p.labels.find("3")));
    CHECK(p.labels.label(0) == "1");
    check_symmetric(p.graph);
}

TEST_CASE("duplicates and self loops are dropped and counted") {
    auto p = parse_edge_list("a b\nb a\na a");
    CHECK(p.graph.node_count() == 2);
    CHECK(p.graph.edge_count() == 1);
    CHECK(p.report.duplicates == 1);
    CHECK(p.report.self_loops == 1);
}

TEST_CASE("comments and blank lines") {
    auto p = parse_edge_list("# header\n\n% other\nx y\r\n  y z  \n");
    CHECK(p.graph.node_count() == 3);
    CHECK(p.graph.edge_count() == 2);
}

TEST_CASE("malformed line reports its number") {
    try {
        parse_edge_list("1 2\n2 3\n3\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_edge_list("1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("# nothing\n"), ParseError);
}

TEST_CASE("from_edges rejects out of range endpoints") {
    std::vector<Edge> e{{0, 5}};
    CHECK_THROWS_AS(Graph::from_edges(3, e), PreconditionError);
}

TEST_CASE("400 node BA file round trips") {
    Graph g = generate_ba(400, 7, 11);
    check_symmetric(g);
    std::ostringstream out;
    write_edge_list(out, g);
    auto p = parse_edge_list(out.str());
    REQUIRE(p.graph.node_count() == 400);
    CHECK(p.report.duplicates == 0);

    // labels are the original ids, first-seen order may differ
    for (NodeId u = 0; u < 400; ++u) {
        NodeId pu = p.labels.find(std::to_string(u));
        REQUIRE(pu != kNoNode);
        std::set<std::string> a, b;
        for (NodeId v : g.neighbors(u)) a.insert(std::to_string(v));
        for (NodeId v : p.graph.neighbors(pu)) b.insert(p.labels.label(v));
        CHECK(a == b);
    }

    std::ostringstream again;
    write_edge_list(again, p.graph, p.labels);
    auto q = parse_edge_list(again.str());
    CHECK(q.graph == p.graph);
}

TEST_CASE("diameter") {
    CHECK(diameter(path(4)) == 3);
    CHECK(diameter(complete(5)) == 1);
    CHECK(diameter(Graph::from_edges(3, {})) == 1);

    // two components: path of 5 and a triangle
    std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {5, 6}, {6, 7}, {7, 5}};
    CHECK(diameter(Graph::from_edges(8, e)) == 4);
}

TEST_CASE("diameter agrees with all pairs shortest paths on BA(200, 3)") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Graph g = generate_ba(200, 3, seed);
        auto d = testkit::all_pairs_distances(g);
        int best = 0;
        for (auto& row : d)
            for (int x : row)
                if (x >= 0) best = std::max(best, x);
        CHECK(diameter(g) == best);
        for (NodeId s : {0u, 17u, 199u}) {
            auto bfs = bfs_distances(g, s);
            CHECK(diameter(g) >= *std::max_element(bfs.begin(), bfs.end()));
            for (NodeId t = 0; t < 200; ++t) CHECK(bfs[t] == d[s][t]);
        }
    }
}

TEST_CASE("induced subgraph") {
    SUBCASE("K3 keep two") {
        std::vector<NodeId> keep{0, 1};
        auto sub = induced_subgraph(complete(3), keep);
        CHECK(sub.graph.node_count() == 2);
        CHECK(sub.graph.edge_count() == 1);
        CHECK(sub.to_sub[2] == kNoNode);
    }
    SUBCASE("keep everything") {
        Graph g = generate_ba(30, 2, 4);
        std::vector<NodeId> keep(30);
        for (NodeId i = 0; i < 30; ++i) keep[i] = i;
        CHECK(induced_subgraph(g, keep).graph == g);
    }
    SUBCASE("bad keep sets") {
        Graph g = complete(3);
        CHECK_THROWS_AS(induced_subgraph(g, std::vector<NodeId>{}), PreconditionError);
        CHECK_THROWS_AS(induced_subgraph(g, std::vector<NodeId>{0, 0}), PreconditionError);
        CHECK_THROWS_AS(induced_subgraph(g, std::vector<NodeId>{3}), PreconditionError);
    }
}

TEST_CASE("induced subgraph matches a brute force edge filter") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Graph g = testkit::random_graph_m(20, 60, seed);
        Rng rng(seed, 99);
        std::vector<NodeId> all(20);
        for (NodeId i = 0; i < 20; ++i) all[i] = i;
        std::shuffle(all.begin(), all.end(), rng);
        std::vector<NodeId> keep(all.begin(), all.begin() + 10);

        std::set<std::pair<NodeId, NodeId>> expected;
        for (NodeId a : keep)
            for (NodeId b : keep)
                if (a < b && g.has_edge(a, b)) expected.insert({a, b});

        auto sub = induced_subgraph(g, keep);
        check_symmetric(sub.graph);
        std::set<std::pair<NodeId, NodeId>> got;
        for (Edge e : sub.graph.edges()) {
            NodeId a = sub.to_parent[e.u], b = sub.to_parent[e.v];
            got.insert({std::min(a, b), std::max(a, b)});
        }
        CHECK(got == expected);
        for (NodeId k = 0; k < keep.size(); ++k) CHECK(sub.to_sub[sub.to_parent[k]] == k);
    }
}
