#include "elruna/metrics.hpp"

#include <cstdio>
#include <ostream>

#include "elruna/errors.hpp"

namespace elruna {

namespace {

void require_total(const Alignment& a, const Graph& g1, const Graph& g2) {
    if (a.source_size() != g1.node_count() || a.target_size() != g2.node_count() || !a.is_total()) {
        throw PreconditionError("alignment must be total on g1 and sized to both graphs");
    }
}

}  // namespace

std::size_t conserved_edges(const Alignment& a, const Graph& g1, const Graph& g2) {
    require_total(a, g1, g2);
    std::size_t count = 0;
    for (const Edge& e : g1.edges()) {
        if (g2.has_edge(a.target(e.u), a.target(e.v))) ++count;
    }
    return count;
}

double edge_correctness(const Alignment& a, const Graph& g1, const Graph& g2) {
    if (g1.edge_count() == 0) throw PreconditionError("edge correctness undefined for an edgeless g1");
    return static_cast<double>(conserved_edges(a, g1, g2)) / static_cast<double>(g1.edge_count());
}

double s3_score(const Alignment& a, const Graph& g1, const Graph& g2) {
    if (g1.edge_count() == 0) throw PreconditionError("S3 undefined for an edgeless g1");
    const std::size_t conserved = conserved_edges(a, g1, g2);
    const std::size_t induced = induced_subgraph(g2, a.forward()).graph.edge_count();
    const std::size_t denominator = g1.edge_count() + induced - conserved;
    if (denominator == 0) return 0.0;
    return static_cast<double>(conserved) / static_cast<double>(denominator);
}

std::int64_t qap_objective(const Alignment& a, const Graph& g1, const Graph& g2) {
    return -2 * static_cast<std::int64_t>(conserved_edges(a, g1, g2));
}

Scorecard score(const Alignment& a, const Graph& g1, const Graph& g2) {
    Scorecard card;
    card.conserved = conserved_edges(a, g1, g2);
    card.objective = -2 * static_cast<std::int64_t>(card.conserved);
    if (g1.edge_count() > 0) {
        card.ec = edge_correctness(a, g1, g2);
        card.s3 = s3_score(a, g1, g2);
    }
    return card;
}

void write_score_row(std::ostream& out, const ScoreRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof buf, ",%.4g,%llu,%zu,%.10g,%.10g,%lld,%.3f,%lld", row.p,
                  static_cast<unsigned long long>(row.seed), row.card.conserved, row.card.ec, row.card.s3,
                  static_cast<long long>(row.card.objective), row.wall_ms, row.iterations);
    out << row.instance << ',' << row.method << buf;
}

}  // namespace elruna
