#include "elruna/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "elruna/errors.hpp"

namespace elruna {

namespace {

// Draws @a count distinct entries of @a pool (which may repeat values).
std::vector<NodeId> random_subset(const std::vector<NodeId>& pool, std::size_t count, Rng& rng) {
    std::vector<NodeId> picked;
    picked.reserve(count);
    while (picked.size() < count) {
        NodeId x = pool[rng.below(pool.size())];
        if (std::find(picked.begin(), picked.end(), x) == picked.end()) picked.push_back(x);
    }
    return picked;
}

std::uint64_t pair_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Graph generate_ba(std::size_t n, std::size_t attach, std::uint64_t seed) {
    return generate_hk(n, attach, 0.0, seed);
}

Graph generate_hk(std::size_t n, std::size_t attach, double q, std::uint64_t seed) {
    if (attach < 1 || n <= attach) throw PreconditionError("generator requires n > attach >= 1");
    if (!(q >= 0.0 && q <= 1.0)) throw PreconditionError("triad probability must lie in [0, 1]");

    Rng rng(seed);
    std::vector<Edge> edges;
    std::vector<std::vector<NodeId>> adj(n);
    auto link = [&](NodeId a, NodeId b) {
        // A triad step may already have linked the pair; the duplicate is dropped.
        if (std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end()) return;
        edges.push_back({a, b});
        adj[a].push_back(b);
        adj[b].push_back(a);
    };

    std::vector<NodeId> repeated(attach);
    std::iota(repeated.begin(), repeated.end(), NodeId{0});

    for (auto source = static_cast<NodeId>(attach); source < n; ++source) {
        std::vector<NodeId> targets = random_subset(repeated, attach, rng);
        std::reverse(targets.begin(), targets.end());  // consumed from the back

        NodeId target = targets.back();
        targets.pop_back();
        link(source, target);
        repeated.push_back(target);

        for (std::size_t count = 1; count < attach; ++count) {
            if (q > 0.0 && rng.uniform() < q) {
                std::vector<NodeId> closing;
                for (NodeId nbr : adj[target]) {
                    if (nbr != source &&
                        std::find(adj[source].begin(), adj[source].end(), nbr) == adj[source].end()) {
                        closing.push_back(nbr);
                    }
                }
                if (!closing.empty()) {
                    NodeId nbr = closing[rng.below(closing.size())];
                    link(source, nbr);
                    repeated.push_back(nbr);
                    continue;
                }
            }
            target = targets.back();
            targets.pop_back();
            link(source, target);
            repeated.push_back(target);
        }
        repeated.insert(repeated.end(), attach, source);
    }
    return Graph::from_edges(n, edges);
}

std::vector<NodeId> GroundTruth::inverse() const {
    std::vector<NodeId> inv(permutation.size());
    for (std::size_t i = 0; i < permutation.size(); ++i) inv[permutation[i]] = static_cast<NodeId>(i);
    return inv;
}

std::vector<NodeId> random_permutation(std::size_t n, Rng& rng) {
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), NodeId{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

NoisyCopy perturb(const Graph& g, const NoiseSpec& spec) {
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw PreconditionError("noise level must lie in [0, 1]");

    const std::size_t n = g.node_count();
    const std::size_t m = g.edge_count();
    const auto extra = static_cast<std::size_t>(std::llround(spec.p * static_cast<double>(m)));
    const std::size_t free_pairs = n * (n - 1) / 2 - m;
    if (extra > free_pairs) throw PreconditionError("not enough non-adjacent pairs for the requested noise");

    Rng root(spec.seed);
    Rng perm_rng = root.split(1);
    Rng noise_rng = root.split(2);

    NoisyCopy out;
    out.truth.permutation = random_permutation(n, perm_rng);
    const auto& perm = out.truth.permutation;

    std::vector<Edge> edges;
    edges.reserve(m + extra);
    std::unordered_set<std::uint64_t> present;
    present.reserve(2 * (m + extra));
    for (const Edge& e : g.edges()) {
        edges.push_back({perm[e.u], perm[e.v]});
        present.insert(pair_key(perm[e.u], perm[e.v]));
    }

    if (2 * extra <= free_pairs) {
        // Sparse regime: rejection sampling terminates quickly.
        while (out.added_edges < extra) {
            auto a = static_cast<NodeId>(noise_rng.below(n));
            auto b = static_cast<NodeId>(noise_rng.below(n));
            if (a == b || !present.insert(pair_key(a, b)).second) continue;
            edges.push_back({a, b});
            ++out.added_edges;
        }
    } else {
        std::vector<Edge> candidates;
        candidates.reserve(free_pairs);
        for (NodeId a = 0; a < n; ++a) {
            for (NodeId b = a + 1; b < n; ++b) {
                if (!present.count(pair_key(a, b))) candidates.push_back({a, b});
            }
        }
        for (std::size_t i = 0; i < extra; ++i) {
            std::swap(candidates[i], candidates[i + noise_rng.below(candidates.size() - i)]);
            edges.push_back(candidates[i]);
        }
        out.added_edges = extra;
    }

    out.graph = Graph::from_edges(n, edges);
    return out;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth, const LabelMap& original,
                        const LabelMap& permuted) {
    for (std::size_t i = 0; i < truth.permutation.size(); ++i) {
        out << original.label(static_cast<NodeId>(i)) << '\t' << permuted.label(truth.permutation[i])
            << '\n';
    }
}

}  // namespace elruna
