#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "elruna/graph.hpp"
#include "elruna/rng.hpp"

namespace elruna {

// Preferential attachment: every new node links to @a attach distinct existing
// nodes chosen proportionally to degree. Requires n > attach >= 1.
Graph generate_ba(std::size_t n, std::size_t attach, std::uint64_t seed);

// Holme-Kim variant: after each preferential link, with probability @a q the
// next link closes a triangle through the last preferential target instead.
// generate_hk(n, a, 0, s) == generate_ba(n, a, s).
Graph generate_hk(std::size_t n, std::size_t attach, double q, std::uint64_t seed);

struct NoiseSpec {
    double p = 0.0;  // added edges as a fraction of the input edge count
    std::uint64_t seed = 0;
};

// permutation[original id] = id in the perturbed graph.
struct GroundTruth {
    std::vector<NodeId> permutation;

    std::vector<NodeId> inverse() const;
};

struct NoisyCopy {
    Graph graph;
    GroundTruth truth;
    std::size_t added_edges = 0;
};

// Uniform random relabeling of [0, n).
std::vector<NodeId> random_permutation(std::size_t n, Rng& rng);

/**
 * Relabels @a g with a random permutation, then adds round(p * m) edges drawn
 * uniformly among node pairs that are not yet adjacent. No edge is removed.
 * Throws PreconditionError if p is outside [0, 1] or the graph cannot hold the
 * extra edges.
 */
NoisyCopy perturb(const Graph& g, const NoiseSpec& spec);

// Two-column TSV "orig_label<TAB>permuted_label", one line per original node.
void write_ground_truth(std::ostream& out, const GroundTruth& truth, const LabelMap& original,
                        const LabelMap& permuted);

}  // namespace elruna
