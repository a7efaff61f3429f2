#pragma once

#include <cstddef>
#include <vector>

#include "elruna/graph.hpp"

namespace elruna {

/**
 * Fraction of the graph each node has reached after k rounds of frontier
 * expansion, for k = 1..t_max. Column 0 is implicit: every node has reached
 * only itself, i.e. 1/n.
 *
 * On a disconnected graph a row plateaus at |component| / n.
 */
class ThresholdMatrix {
public:
    ThresholdMatrix() = default;
    ThresholdMatrix(std::size_t nodes, int t_max)
        : nodes_(nodes), t_max_(t_max), values_(nodes * static_cast<std::size_t>(t_max), 0.0) {}

    std::size_t nodes() const noexcept { return nodes_; }
    int t_max() const noexcept { return t_max_; }

    // k in [0, t_max]
    double at(NodeId i, int k) const {
        if (k == 0) return 1.0 / static_cast<double>(nodes_);
        return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(t_max_) +
                       static_cast<std::size_t>(k - 1)];
    }

    double& cell(NodeId i, int k) {
        return values_[static_cast<std::size_t>(i) * static_cast<std::size_t>(t_max_) +
                       static_cast<std::size_t>(k - 1)];
    }

private:
    std::size_t nodes_ = 0;
    int t_max_ = 0;
    std::vector<double> values_;
};

// Throws PreconditionError if t_max < 1.
ThresholdMatrix compute_thresholds(const Graph& g, int t_max, unsigned threads = 1);

}  // namespace elruna
