#include "elruna/local_search.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "elruna/errors.hpp"
#include "elruna/metrics.hpp"
#include "elruna/rng.hpp"

namespace elruna {

MismatchState compute_violations(const Alignment& a, const Graph& g1, const Graph& g2) {
    if (!a.is_total()) throw PreconditionError("violations need a total alignment");
    const std::size_t n1 = g1.node_count();
    // Subgraph ids coincide with g1 ids: sub node i is target(i).
    const Graph sub = induced_subgraph(g2, a.forward()).graph;

    MismatchState m;
    m.raw.assign(2 * n1, 0);
    m.normalized.assign(2 * n1, 0.0);
    for (NodeId i = 0; i < n1; ++i) {
        std::size_t kept = 0;
        for (NodeId j : g1.neighbors(i)) kept += g2.has_edge(a.target(i), a.target(j));
        m.raw[i] = g1.degree(i) - kept;
        if (g1.degree(i)) m.normalized[i] = static_cast<double>(m.raw[i]) / static_cast<double>(g1.degree(i));

        kept = 0;
        for (NodeId v : sub.neighbors(i)) kept += g1.has_edge(i, v);
        m.raw[n1 + i] = sub.degree(i) - kept;
        if (sub.degree(i)) {
            m.normalized[n1 + i] = static_cast<double>(m.raw[n1 + i]) / static_cast<double>(sub.degree(i));
        }
    }

    const double total = std::accumulate(m.normalized.begin(), m.normalized.end(), 0.0);
    if (total > 0.0) {
        for (double& x : m.normalized) x /= total;
    }
    return m;
}

MergedGraph merge_graphs(const Alignment& a, const Graph& g1, const Graph& g2) {
    if (!a.is_total()) throw PreconditionError("merge needs a total alignment");
    const std::size_t n1 = g1.node_count();
    const InducedSubgraph sub = induced_subgraph(g2, a.forward());

    std::vector<Edge> edges(g1.edges().begin(), g1.edges().end());
    for (const Edge& e : sub.graph.edges()) {
        edges.push_back({static_cast<NodeId>(n1 + e.u), static_cast<NodeId>(n1 + e.v)});
    }
    for (NodeId i = 0; i < n1; ++i) edges.push_back({i, static_cast<NodeId>(n1 + i)});

    MergedGraph merged;
    merged.graph = Graph::from_edges(2 * n1, edges);
    merged.g1_nodes = n1;
    merged.g2_node = sub.to_parent;
    return merged;
}

Propagation propagate_mismatch(const Graph& g3, std::span<const double> o, double alpha, double tol,
                               int max_iter) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("alpha must lie in (0, 1)");
    const std::size_t n = g3.node_count();
    if (o.size() != n) throw PreconditionError("teleport vector size does not match the graph");

    Propagation out;
    const double mass = std::accumulate(o.begin(), o.end(), 0.0);
    if (mass <= 0.0) {
        out.no_mismatch = true;
        return out;
    }
    for (NodeId i = 0; i < n; ++i) {
        if (g3.degree(i) == 0) throw PreconditionError("propagation graph has an isolated node");
    }

    std::vector<double> r(n, 1.0 / static_cast<double>(n)), next(n), spread(n);
    for (int step = 1; step <= max_iter; ++step) {
        for (NodeId j = 0; j < n; ++j) spread[j] = r[j] / static_cast<double>(g3.degree(j));
        double change = 0.0, total = 0.0;
        for (NodeId i = 0; i < n; ++i) {
            double acc = 0.0;
            for (NodeId j : g3.neighbors(i)) acc += spread[j];
            next[i] = alpha * acc + (1.0 - alpha) * o[i];
            change += std::abs(next[i] - r[i]);
            total += next[i];
        }
        r.swap(next);
        out.iterations = step;
        out.step_change.push_back(change);
        out.max_mass_error = std::max(out.max_mass_error, std::abs(total - 1.0));
        if (change < tol) {
            out.converged = true;
            break;
        }
    }
    out.rank = std::move(r);
    return out;
}

std::vector<NodeId> rank_mismatched(std::span<const double> rank, std::size_t n1) {
    std::vector<NodeId> order(std::min(n1, rank.size()));
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return rank[a] > rank[b]; });
    return order;
}

std::int64_t block_objective_delta(std::span<const NodeId> nodes, std::span<const NodeId> new_targets,
                                   const Alignment& a, const Graph& g1, const Graph& g2) {
    if (nodes.size() != new_targets.size()) throw PreconditionError("block size mismatch");
    auto position = [&](NodeId x) -> std::ptrdiff_t {
        auto it = std::find(nodes.begin(), nodes.end(), x);
        return it == nodes.end() ? -1 : it - nodes.begin();
    };
    auto block_score = [&](bool moved) {
        auto image = [&](NodeId x) {
            const std::ptrdiff_t p = position(x);
            return (moved && p >= 0) ? new_targets[static_cast<std::size_t>(p)] : a.target(x);
        };
        std::int64_t count = 0;
        for (NodeId i : nodes) {
            for (NodeId x : g1.neighbors(i)) {
                // Edges inside the block are seen from both ends; keep one.
                if (position(x) >= 0 && x < i) continue;
                count += g2.has_edge(image(i), image(x));
            }
        }
        return count;
    };
    return block_score(true) - block_score(false);
}

namespace {

constexpr std::size_t kMaxBlock = 10;

/**
 * Scores every permutation of a block's targets from small precomputed tables:
 * outside[a][b] counts conserved edges from block node a to fixed nodes if a
 * took target b; link[a][b] marks g1 edges inside the block and target_edge
 * the g2 edges among the targets.
 */
class BlockEvaluator {
public:
    BlockEvaluator(std::span<const NodeId> nodes, const Alignment& a, const Graph& g1, const Graph& g2)
        : size_(nodes.size()) {
        for (std::size_t p = 0; p < size_; ++p) targets_[p] = a.target(nodes[p]);
        auto in_block = [&](NodeId x) { return std::find(nodes.begin(), nodes.end(), x) != nodes.end(); };
        for (std::size_t p = 0; p < size_; ++p) {
            for (std::size_t q = 0; q < size_; ++q) {
                outside_[p][q] = 0;
                for (NodeId x : g1.neighbors(nodes[p])) {
                    if (!in_block(x)) outside_[p][q] += g2.has_edge(targets_[q], a.target(x));
                }
                link_[p][q] = p != q && g1.has_edge(nodes[p], nodes[q]);
                target_edge_[p][q] = p != q && g2.has_edge(targets_[p], targets_[q]);
            }
        }
    }

    int score(std::span<const std::size_t> perm) const {
        int total = 0;
        for (std::size_t p = 0; p < size_; ++p) {
            total += outside_[p][perm[p]];
            for (std::size_t q = p + 1; q < size_; ++q) {
                if (link_[p][q]) total += target_edge_[perm[p]][perm[q]];
            }
        }
        return total;
    }

    // Best strictly improving permutation in lexicographic enumeration order.
    std::int64_t best(std::vector<std::size_t>& best_perm) const {
        std::vector<std::size_t> perm(size_);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        const int current = score(perm);
        int top = current;
        best_perm = perm;
        while (std::next_permutation(perm.begin(), perm.end())) {
            const int s = score(perm);
            if (s > top) {
                top = s;
                best_perm = perm;
            }
        }
        return top - current;
    }

    NodeId target(std::size_t p) const { return targets_[p]; }

private:
    std::size_t size_;
    std::array<NodeId, kMaxBlock> targets_{};
    std::array<std::array<int, kMaxBlock>, kMaxBlock> outside_{};
    std::array<std::array<bool, kMaxBlock>, kMaxBlock> link_{};
    std::array<std::array<bool, kMaxBlock>, kMaxBlock> target_edge_{};
};

class SearchDriver {
public:
    SearchDriver(const Alignment& a, const Graph& g1, const Graph& g2, const SearchConfig& cfg)
        : g1_(g1), g2_(g2), cfg_(cfg), rng_(cfg.rng_seed), start_(std::chrono::steady_clock::now()) {
        if (!a.is_total()) throw PreconditionError("local search needs a total alignment");
        if (cfg.subset_size < 2 || cfg.subset_size > kMaxBlock) {
            throw PreconditionError("subset size must lie in [2, 10]");
        }
        if (cfg.subset_size > g1.node_count()) throw PreconditionError("subset size exceeds g1 size");
        result_.alignment = a;
        result_.initial_conserved = conserved_edges(a, g1, g2);
        result_.final_conserved = result_.initial_conserved;
    }

    // One block move drawn from pool; returns true if it improved the alignment.
    bool step(std::span<const NodeId> pool, std::size_t window_start, std::size_t window_stall,
              std::size_t global_stall) {
        const std::size_t k = std::min(cfg_.subset_size, pool.size());
        scratch_.assign(pool.begin(), pool.end());
        for (std::size_t p = 0; p < k; ++p) std::swap(scratch_[p], scratch_[p + rng_.below(scratch_.size() - p)]);
        const std::span<const NodeId> block(scratch_.data(), k);

        ++result_.iterations;
        const BlockEvaluator eval(block, result_.alignment, g1_, g2_);
        const std::int64_t delta = eval.best(perm_);
        if (delta > 0) {
            std::vector<NodeId> targets(k);
            for (std::size_t p = 0; p < k; ++p) targets[p] = eval.target(perm_[p]);
            result_.alignment.permute_block(block, targets);

            const std::size_t recount = conserved_edges(result_.alignment, g1_, g2_);
            if (recount < result_.final_conserved) ++result_.monotonicity_violations;
            result_.final_conserved = recount;
            result_.last_improvement = result_.iterations;
            ++result_.accepted_moves;
        }
        if (cfg_.record_trace) {
            TraceRow row;
            row.iteration = result_.iterations;
            row.window_start = window_start;
            row.accepted_delta = delta > 0 ? delta : 0;
            row.conserved = result_.final_conserved;
            row.wall_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
            row.window_stall = delta > 0 ? 0 : window_stall + 1;
            row.global_stall = delta > 0 ? 0 : global_stall + 1;
            result_.trace.push_back(row);
        }
        return delta > 0;
    }

    SearchResult& result() { return result_; }

private:
    const Graph& g1_;
    const Graph& g2_;
    const SearchConfig& cfg_;
    Rng rng_;
    std::chrono::steady_clock::time_point start_;
    std::vector<NodeId> scratch_;
    std::vector<std::size_t> perm_;
    SearchResult result_;
};

}  // namespace

SearchResult baseline_search(const Alignment& a, const Graph& g1, const Graph& g2, const SearchConfig& cfg) {
    SearchDriver driver(a, g1, g2, cfg);
    std::vector<NodeId> everyone(g1.node_count());
    std::iota(everyone.begin(), everyone.end(), NodeId{0});

    std::size_t stall = 0;
    while (stall < cfg.stall_terminate) {
        stall = driver.step(everyone, 0, stall, stall) ? 0 : stall + 1;
    }
    return std::move(driver.result());
}

SearchResult rawsem_search(const Alignment& a, const Graph& g1, const Graph& g2, const SearchConfig& cfg) {
    if (cfg.window_step == 0 || cfg.window_step > cfg.window_size) {
        throw PreconditionError("window step must lie in [1, window size]");
    }
    SearchDriver driver(a, g1, g2, cfg);

    const MismatchState mismatch = compute_violations(a, g1, g2);
    const MergedGraph merged = merge_graphs(a, g1, g2);
    const Propagation prop =
        propagate_mismatch(merged.graph, mismatch.normalized, cfg.alpha, cfg.tol, cfg.max_propagation_steps);
    if (prop.no_mismatch) {
        driver.result().no_mismatch = true;
        return std::move(driver.result());
    }
    const std::vector<NodeId> ranking = rank_mismatched(prop.rank, g1.node_count());

    const std::size_t width = std::min(std::max(cfg.window_size, cfg.subset_size), ranking.size());
    const std::size_t last_start = ranking.size() - width;
    std::size_t window_start = 0, window_stall = 0, global_stall = 0;
    while (global_stall < cfg.stall_terminate) {
        const std::span<const NodeId> window(ranking.data() + window_start, width);
        if (driver.step(window, window_start, window_stall, global_stall)) {
            window_stall = global_stall = 0;
            continue;
        }
        ++global_stall;
        if (++window_stall >= cfg.stall_before_slide) {
            window_start = std::min(window_start + cfg.window_step, last_start);
            window_stall = 0;
        }
    }
    return std::move(driver.result());
}

void write_trace(std::ostream& out, std::span<const TraceRow> trace) {
    out << kTraceHeader << '\n';
    char buf[160];
    for (const TraceRow& row : trace) {
        std::snprintf(buf, sizeof buf, "%zu,%zu,%lld,%zu,%.3f\n", row.iteration, row.window_start,
                      static_cast<long long>(row.accepted_delta), row.conserved, row.wall_ms);
        out << buf;
    }
}

}  // namespace elruna
