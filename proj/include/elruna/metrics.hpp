#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "elruna/alignment.hpp"
#include "elruna/graph.hpp"

namespace elruna {

// Edges (i, j) of g1 whose images (f(i), f(j)) are edges of g2.
std::size_t conserved_edges(const Alignment& a, const Graph& g1, const Graph& g2);

// conserved / |E1|. Throws PreconditionError when g1 has no edges.
double edge_correctness(const Alignment& a, const Graph& g1, const Graph& g2);

// conserved / (|E1| + |E(g2[f(V1)])| - conserved); 0 when that denominator is 0.
// Throws PreconditionError when g1 has no edges.
double s3_score(const Alignment& a, const Graph& g1, const Graph& g2);

// -trace(P^T A P B^T) = -2 * conserved.
std::int64_t qap_objective(const Alignment& a, const Graph& g1, const Graph& g2);

struct Scorecard {
    std::size_t conserved = 0;
    double ec = 0.0;
    double s3 = 0.0;
    std::int64_t objective = 0;
};

Scorecard score(const Alignment& a, const Graph& g1, const Graph& g2);

// One row of the results table.
struct ScoreRow {
    std::string instance;
    std::string method;
    double p = 0.0;
    std::uint64_t seed = 0;
    Scorecard card;
    double wall_ms = 0.0;
    long long iterations = 0;
};

inline constexpr const char* kScoreHeader = "instance,method,p,seed,conserved,ec,s3,objective,wall_ms,iterations";

void write_score_row(std::ostream& out, const ScoreRow& row);

}  // namespace elruna
