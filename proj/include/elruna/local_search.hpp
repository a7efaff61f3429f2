#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "elruna/alignment.hpp"
#include "elruna/graph.hpp"

namespace elruna {

/**
 * Per-node mismatch levels over the merged node set: ids [0, n1) are g1 nodes,
 * id n1 + i is the g2 node aligned to i.
 */
struct MismatchState {
    std::vector<std::size_t> raw;    // neighbors whose adjacency the alignment fails to keep
    std::vector<double> normalized;  // raw / degree, rescaled to unit L1 norm (all 0 if no mismatch)
};

// Requires a total alignment. g2-side counts use the subgraph induced by the
// aligned g2 nodes.
MismatchState compute_violations(const Alignment& a, const Graph& g1, const Graph& g2);

struct MergedGraph {
    Graph graph;                  // g1 plus the aligned part of g2 plus one link per aligned pair
    std::size_t g1_nodes = 0;     // merged ids below this are g1 ids
    std::vector<NodeId> g2_node;  // g2_node[k] is the g2 id of merged node g1_nodes + k
};

MergedGraph merge_graphs(const Alignment& a, const Graph& g1, const Graph& g2);

struct Propagation {
    std::vector<double> rank;
    int iterations = 0;
    bool converged = false;
    bool no_mismatch = false;     // teleport vector was all zero; rank is empty
    double max_mass_error = 0.0;  // max |sum(R) - 1| over all iterates
    std::vector<double> step_change;  // L1 distance between consecutive iterates
};

/**
 * Random-walk smoothing of mismatch levels over @a g3:
 *   R <- alpha * C D^-1 R + (1 - alpha) * o,  starting from uniform R,
 * until the L1 change drops below @a tol or @a max_iter steps. Every node of
 * g3 needs at least one neighbor.
 */
Propagation propagate_mismatch(const Graph& g3, std::span<const double> o, double alpha = 0.85,
                               double tol = 1e-10, int max_iter = 1000);

// First n1 entries of R as node ids, highest value first, ties by id.
std::vector<NodeId> rank_mismatched(std::span<const double> rank, std::size_t n1);

/**
 * Change in conserved edges if nodes[k] were realigned to new_targets[k]
 * (a permutation of their current targets), counting only edges with at
 * least one endpoint in the block.
 */
std::int64_t block_objective_delta(std::span<const NodeId> nodes, std::span<const NodeId> new_targets,
                                   const Alignment& a, const Graph& g1, const Graph& g2);

struct SearchConfig {
    std::size_t subset_size = 6;
    std::size_t window_size = 50;
    std::size_t window_step = 10;
    std::size_t stall_before_slide = 100;
    std::size_t stall_terminate = 1000;
    std::uint64_t rng_seed = 0;
    double alpha = 0.85;
    double tol = 1e-10;
    int max_propagation_steps = 1000;
    bool record_trace = false;
};

struct TraceRow {
    std::size_t iteration = 0;
    std::size_t window_start = 0;
    std::int64_t accepted_delta = 0;
    std::size_t conserved = 0;
    double wall_ms = 0.0;
    std::size_t window_stall = 0;
    std::size_t global_stall = 0;
};

struct SearchResult {
    Alignment alignment;
    std::size_t iterations = 0;
    std::size_t last_improvement = 0;  // iteration of the final accepted move, 0 if none
    std::size_t accepted_moves = 0;
    std::size_t initial_conserved = 0;
    std::size_t final_conserved = 0;
    std::size_t monotonicity_violations = 0;  // accepted moves that lowered the recount
    bool no_mismatch = false;
    std::vector<TraceRow> trace;
};

// Random blocks from all of g1; stops after stall_terminate consecutive
// iterations without improvement.
SearchResult baseline_search(const Alignment& a, const Graph& g1, const Graph& g2, const SearchConfig& cfg);

// Blocks drawn from a window sliding down the propagated mismatch ranking.
SearchResult rawsem_search(const Alignment& a, const Graph& g1, const Graph& g2, const SearchConfig& cfg);

inline constexpr const char* kTraceHeader = "iteration,window_start,accepted_delta,conserved,wall_ms";

void write_trace(std::ostream& out, std::span<const TraceRow> trace);

}  // namespace elruna
