#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "elruna/errors.hpp"
#include "elruna/metrics.hpp"
#include "elruna/testkit.hpp"

using namespace elruna;
using namespace elruna::testkit;

namespace {

Graph triangle() { return Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}, {2, 0}}); }

}  // namespace

TEST_CASE("exact alignment on tiny graphs") {
    auto t = exact_align(triangle(), triangle());
    CHECK(t.best_conserved == 3);
    CHECK(t.permutations_examined == 6);
    CHECK(t.objective_mismatches == 0);
    // first optimum in lexicographic order
    CHECK(t.best_alignment.forward() == std::vector<NodeId>{0, 1, 2});

    Graph p3 = Graph::from_edges(3, std::vector<Edge>{{0, 1}, {1, 2}});
    CHECK(exact_align(p3, triangle()).best_conserved == 2);

    Graph k2 = Graph::from_edges(2, std::vector<Edge>{{0, 1}});
    auto r = exact_align(k2, p3);
    CHECK(r.best_conserved == 1);
    CHECK(r.permutations_examined == 6);
}

TEST_CASE("exact alignment limits") {
    CHECK_THROWS_AS(exact_align(random_graph(9, 0.3, 1), random_graph(9, 0.3, 2)), PreconditionError);
    CHECK_THROWS_AS(exact_align(random_graph(4, 0.3, 1), random_graph(3, 0.3, 2)), PreconditionError);
    CHECK_THROWS_AS(exact_align(random_graph(6, 0.3, 1), random_graph(6, 0.3, 2), 100), PreconditionError);
}

TEST_CASE("best matching audit") {
    CHECK(audit_best_matching(triangle(), triangle(), exact_align(triangle(), triangle())));

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::size_t n1 = 3 + seed % 4;
        Graph g1 = random_graph(n1, 0.5, seed);
        Graph g2 = random_graph(n1 + seed % 2, 0.5, seed + 1000);
        auto exact = exact_align(g1, g2);
        CHECK(exact.objective_mismatches == 0);
        CHECK(audit_best_matching(g1, g2, exact));
        // nothing heuristic can beat it
        Alignment a = random_alignment(n1, g2.node_count(), seed);
        CHECK(conserved_edges(a, g1, g2) <= exact.best_conserved);
    }
}

TEST_CASE("corrupted optimum fails the audit") {
    // path 0-1-2-3 onto itself; swapping 0 and 3 breaks both end edges
    Graph p4 = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {1, 2}, {2, 3}});
    auto exact = exact_align(p4, p4);
    CHECK(exact.best_conserved == 3);
    Alignment bad = exact.best_alignment;
    bad.swap_targets(0, 3);
    CHECK(conserved_edges(bad, p4, p4) < 3);
    CHECK_FALSE(is_best_matched(p4, p4, bad));

    int broken = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Graph g = random_graph(6, 0.5, seed);
        auto e = exact_align(g, g);
        Alignment a = e.best_alignment;
        a.swap_targets(0, 1 + static_cast<NodeId>(seed % 5));
        if (conserved_edges(a, g, g) < e.best_conserved) {
            ++broken;
            CHECK_FALSE(is_best_matched(g, g, a));
        }
    }
    CHECK(broken > 10);
}

TEST_CASE("dense eigenvector on a star") {
    // star with center 0: the stationary mass of the center is fixed by symmetry
    Graph star = Graph::from_edges(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}});
    std::vector<double> o(4, 0.25);
    auto r = dense_principal_eigenvector(star, o, 0.85);
    double total = 0.0;
    for (double x : r) total += x;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(r[2]).epsilon(1e-12));
    // center: x0 = 0.85 * 3 * x1 + 0.0375, leaves: x1 = 0.85 * x0 / 3 + 0.0375
    const double x1 = (0.85 * 0.0375 / 3.0 + 0.0375) / (1.0 - 0.85 * 0.85);
    CHECK(r[1] == doctest::Approx(x1).epsilon(1e-10));
}

TEST_CASE("helpers") {
    Graph g = random_graph_m(30, 50, 4);
    CHECK(g.edge_count() == 50);
    Alignment a = random_alignment(10, 15, 2);
    CHECK(a.is_total());
    CHECK(a.target_size() == 15);
    CHECK(average_clustering(triangle()) == 1.0);
    auto d = all_pairs_distances(Graph::from_edges(3, std::vector<Edge>{{0, 1}}));
    CHECK(d[0][1] == 1);
    CHECK(d[0][2] == -1);
    CHECK(d[2][2] == 0);
}
