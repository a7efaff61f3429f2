#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "elruna/graph.hpp"
#include "elruna/threshold.hpp"

namespace elruna {

/**
 * Dense cross-network similarity matrix after some number of iterations,
 * together with its row maxima (best similarity of each g1 node) and column
 * maxima (best similarity of each g2 node).
 */
struct SimilarityState {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major, rows x cols
    std::vector<double> row_max;
    std::vector<double> col_max;
    int iteration = 0;

    // All-ones matrix: every pair starts equally similar.
    static SimilarityState initial(std::size_t rows, std::size_t cols);

    double at(NodeId i, NodeId u) const { return values[static_cast<std::size_t>(i) * cols + u]; }
    std::span<const double> row(NodeId i) const { return {values.data() + std::size_t{i} * cols, cols}; }

    // Recomputes row_max / col_max from values.
    void refresh_maxima();
};

// Per-node contribution thresholds: best similarity scaled by visited fraction.
struct ContributionContext {
    std::vector<double> row_threshold;  // g1 nodes
    std::vector<double> col_threshold;  // g2 nodes
};

// Thresholds for computing iteration prev.iteration + 1, read from column
// prev.iteration of the threshold matrices.
ContributionContext make_contribution_context(const SimilarityState& prev, const ThresholdMatrix& t1,
                                              const ThresholdMatrix& t2);

/**
 * Amount a neighbor pair with similarity @a s may add to its parents' score.
 *
 * Pairs clearing both thresholds give s, pairs below both give 0. A pair that
 * clears only one side gives its net similarity: s discounted by the
 * similarity the other endpoint would give up, interpolated linearly between
 * that side's threshold and best value. When the needed interpolation range
 * b - c is zero only the crisp branches apply.
 */
double contribution_amount(double s, double c1, double b1, double c2, double b2);

struct PairAccumulation {
    double sum = 0.0;
    std::size_t contributing = 0;  // neighbor pairs that were matched
};

/**
 * Greedy neighbor matching for one cell (i, u).
 *
 * Eligible pairs (j, v) in N(i) x N(u) with S[j,v] >= min(c1[j], c2[v]) are
 * visited by descending similarity, ties by ascending (j, v); each j and each
 * v is used at most once. Holds reusable scratch, so keep one per worker.
 */
class PairAccumulator {
public:
    PairAccumulator(std::size_t rows, std::size_t cols) : row_stamp_(rows, 0), col_stamp_(cols, 0) {}

    PairAccumulation operator()(NodeId i, NodeId u, const SimilarityState& prev,
                                const ContributionContext& ctx, const Graph& g1, const Graph& g2);

private:
    struct Candidate {
        double s;
        NodeId j;
        NodeId v;
    };
    std::vector<Candidate> candidates_;
    std::vector<std::uint64_t> row_stamp_;
    std::vector<std::uint64_t> col_stamp_;
    std::uint64_t epoch_ = 0;
};

PairAccumulation accumulate_pair(NodeId i, NodeId u, const SimilarityState& prev,
                                 const ContributionContext& ctx, const Graph& g1, const Graph& g2);

struct IterationStats {
    std::size_t contributing_pairs = 0;
    std::size_t max_contributing = 0;
    std::size_t cardinality_violations = 0;  // cells with more pairs than min(deg i, deg u)
    std::size_t clamped_cells = 0;           // cells whose raw sum was negative
};

// One sweep over every (i, u). Cells are independent, so the result does not
// depend on @a threads.
SimilarityState iterate(const SimilarityState& prev, const ThresholdMatrix& t1, const ThresholdMatrix& t2,
                        const Graph& g1, const Graph& g2, unsigned threads = 1,
                        IterationStats* stats = nullptr);

struct SimilarityOptions {
    std::optional<int> iterations;  // default: larger diameter of the two graphs
    unsigned threads = 1;
};

struct SimilarityRun {
    SimilarityState state;
    int t_max = 0;
    double threshold_ms = 0.0;
    std::vector<double> iteration_ms;
    IterationStats stats;  // summed over iterations
};

// Throws PreconditionError on an empty graph or a requested budget below 1.
SimilarityRun run_similarity(const Graph& g1, const Graph& g2, const SimilarityOptions& options = {});

// Binary dump: "ELRS", u32 rows, u32 cols, u32 iteration, then rows*cols
// little-endian doubles in row order.
void write_similarity_dump(std::ostream& out, const SimilarityState& state);
SimilarityState read_similarity_dump(std::istream& in);

}  // namespace elruna
