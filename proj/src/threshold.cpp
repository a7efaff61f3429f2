#include "elruna/threshold.hpp"

#include "elruna/errors.hpp"
#include "elruna/parallel.hpp"

namespace elruna {

ThresholdMatrix compute_thresholds(const Graph& g, int t_max, unsigned threads) {
    if (t_max < 1) throw PreconditionError("threshold matrix needs t_max >= 1");

    const std::size_t n = g.node_count();
    ThresholdMatrix table(n, t_max);

    struct Scratch {
        std::vector<unsigned> stamp;
        std::vector<NodeId> frontier, next;
    };
    std::vector<Scratch> scratch(threads == 0 ? 1 : threads);

    parallel_for(n, threads, [&](std::size_t source, unsigned worker) {
        Scratch& s = scratch[worker];
        if (s.stamp.empty()) s.stamp.assign(n, 0);
        // Stamps are source + 1, so no reset is needed between rows.
        const auto mark = static_cast<unsigned>(source + 1);
        const auto root = static_cast<NodeId>(source);

        s.stamp[root] = mark;
        s.frontier.assign(1, root);
        std::size_t visited = 1;
        for (int k = 1; k <= t_max; ++k) {
            s.next.clear();
            for (NodeId j : s.frontier) {
                for (NodeId q : g.neighbors(j)) {
                    if (s.stamp[q] != mark) {
                        s.stamp[q] = mark;
                        ++visited;
                        s.next.push_back(q);
                    }
                }
            }
            table.cell(root, k) = static_cast<double>(visited) / static_cast<double>(n);
            std::swap(s.frontier, s.next);
        }
    });
    return table;
}

}  // namespace elruna
