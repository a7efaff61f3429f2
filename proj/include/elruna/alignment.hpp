#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "elruna/graph.hpp"
#include "elruna/similarity.hpp"

namespace elruna {

/**
 * Injective map from g1 nodes into g2 nodes. forward[i] is the image of i
 * (kNoNode while unassigned); inverse[u] is the preimage of u or kNoNode.
 */
class Alignment {
public:
    Alignment() = default;
    Alignment(std::size_t n1, std::size_t n2) : forward_(n1, kNoNode), inverse_(n2, kNoNode) {}

    // Throws PreconditionError if forward is not injective or out of range.
    static Alignment from_forward(std::vector<NodeId> forward, std::size_t n2);

    std::size_t source_size() const noexcept { return forward_.size(); }
    std::size_t target_size() const noexcept { return inverse_.size(); }

    NodeId target(NodeId i) const { return forward_[i]; }
    NodeId source(NodeId u) const { return inverse_[u]; }
    bool is_total() const;

    const std::vector<NodeId>& forward() const noexcept { return forward_; }
    const std::vector<NodeId>& inverse() const noexcept { return inverse_; }

    // Both endpoints must currently be free.
    void assign(NodeId i, NodeId u);

    // Exchanges the targets of two g1 nodes.
    void swap_targets(NodeId i, NodeId j);

    // Gives nodes[k] the target new_targets[k]; new_targets must be a
    // permutation of the current targets of nodes.
    void permute_block(std::span<const NodeId> nodes, std::span<const NodeId> new_targets);

    friend bool operator==(const Alignment&, const Alignment&) = default;

private:
    std::vector<NodeId> forward_;
    std::vector<NodeId> inverse_;
};

// Greedy extraction over all pairs by descending similarity, ties by ascending
// (i, u). Requires rows <= cols.
Alignment naive_align(const SimilarityState& s);

struct SeedExtendStats {
    std::size_t inserted = 0;
    std::size_t extracted = 0;
    std::size_t stale = 0;  // extracted entries skipped because their value was outdated
    std::size_t boosts = 0;
};

/**
 * Seed-and-extend extraction. Repeatedly aligns the most similar free pair,
 * then raises the working similarity of every free neighbor pair of the new
 * anchor by @a delta so that later choices follow already aligned structure.
 * Works on a private copy of the similarities. Requires delta > 0 and
 * rows <= cols.
 */
Alignment seed_and_extend_align(const SimilarityState& s, const Graph& g1, const Graph& g2, double delta,
                                SeedExtendStats* stats = nullptr);

// Mean nonzero similarity; 1 / (rows * cols) if all zero.
double default_seed_delta(const SimilarityState& s);

// Lines "g1_label<TAB>g2_label<TAB>similarity", sorted by g1 label (numeric
// labels compare numerically). Pass nullptr to write 0 similarities.
void write_alignment(std::ostream& out, const Alignment& a, const LabelMap& l1, const LabelMap& l2,
                     const SimilarityState* s = nullptr);

// Reads the format above; the similarity column is optional. Throws ParseError.
Alignment read_alignment(std::istream& in, const LabelMap& l1, const LabelMap& l2);

// Ordering used for output: numeric if both labels are integers, else lexicographic.
bool label_less(const std::string& a, const std::string& b);

}  // namespace elruna
