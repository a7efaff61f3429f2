#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "elruna/alignment.hpp"
#include "elruna/graph.hpp"

// Brute-force references for tests and acceptance runs. Everything here is
// exhaustive or dense on purpose and independent of the production paths.
namespace elruna::testkit {

struct ExactResult {
    std::size_t best_conserved = 0;
    Alignment best_alignment;
    std::uint64_t permutations_examined = 0;
    std::size_t objective_mismatches = 0;  // candidates where -2 * conserved != dense trace
};

// Enumerates every injection g1 -> g2 in lexicographic order of the forward
// array; ties keep the first optimum. Throws PreconditionError if n1 > 8,
// n1 > n2, or the injection count exceeds @a limit.
ExactResult exact_align(const Graph& g1, const Graph& g2, std::uint64_t limit = 50'000'000);

// Necessary condition for an optimum: no node can raise its conserved-neighbor
// count by moving to an unused g2 node, and no exchange of two targets raises
// the conserved total. Also re-checks the recorded optimum value.
bool audit_best_matching(const Graph& g1, const Graph& g2, const ExactResult& result);

// The same unilateral/exchange check for any total alignment.
bool is_best_matched(const Graph& g1, const Graph& g2, const Alignment& a);

// Dense trace(P^T A P B^T) with explicit 0/1 matrices.
std::int64_t dense_trace_objective(const Alignment& a, const Graph& g1, const Graph& g2);

// Principal eigenvector of E = alpha * C D^-1 + (1 - alpha) * o 1^T via a dense
// eigensolver, scaled to unit L1 norm.
std::vector<double> dense_principal_eigenvector(const Graph& g3, std::span<const double> o, double alpha);

// All-pairs hop distances by Floyd-Warshall; -1 for unreachable.
std::vector<std::vector<int>> all_pairs_distances(const Graph& g);

// Random G(n, p) graph.
Graph random_graph(std::size_t n, double edge_probability, std::uint64_t seed);

// Random G(n, m) graph; m is capped at n(n-1)/2.
Graph random_graph_m(std::size_t n, std::size_t m, std::uint64_t seed);

// Uniform random injection g1 -> g2.
Alignment random_alignment(std::size_t n1, std::size_t n2, std::uint64_t seed);

// Average local clustering coefficient.
double average_clustering(const Graph& g);

}  // namespace elruna::testkit
