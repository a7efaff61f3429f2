#include "elruna/testkit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <unordered_set>

#include "elruna/errors.hpp"
#include "elruna/metrics.hpp"
#include "elruna/rng.hpp"

namespace elruna::testkit {

namespace {

std::vector<std::vector<std::uint8_t>> dense_adjacency(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<std::uint8_t>> m(n, std::vector<std::uint8_t>(n, 0));
    for (const Edge& e : g.edges()) m[e.u][e.v] = m[e.v][e.u] = 1;
    return m;
}

std::size_t dense_conserved(const std::vector<std::vector<std::uint8_t>>& a,
                            const std::vector<std::vector<std::uint8_t>>& b, const std::vector<NodeId>& f) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (std::size_t j = i + 1; j < f.size(); ++j) count += a[i][j] && b[f[i]][f[j]];
    }
    return count;
}

}  // namespace

std::int64_t dense_trace_objective(const Alignment& a, const Graph& g1, const Graph& g2) {
    const std::size_t n1 = g1.node_count(), n2 = g2.node_count();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n1));
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n2), static_cast<Eigen::Index>(n2));
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n1), static_cast<Eigen::Index>(n2));
    for (const Edge& e : g1.edges()) A(e.u, e.v) = A(e.v, e.u) = 1.0;
    for (const Edge& e : g2.edges()) B(e.u, e.v) = B(e.v, e.u) = 1.0;
    for (std::size_t i = 0; i < n1; ++i) {
        if (a.target(static_cast<NodeId>(i)) != kNoNode) P(static_cast<Eigen::Index>(i), a.target(static_cast<NodeId>(i))) = 1.0;
    }
    const double trace = (P.transpose() * A * P * B.transpose()).trace();
    return -static_cast<std::int64_t>(std::llround(trace));
}

ExactResult exact_align(const Graph& g1, const Graph& g2, std::uint64_t limit) {
    const std::size_t n1 = g1.node_count(), n2 = g2.node_count();
    if (n1 > 8) throw PreconditionError("exact alignment limited to 8 nodes");
    if (n1 > n2) throw PreconditionError("exact alignment needs n1 <= n2");
    std::uint64_t injections = 1;
    for (std::size_t k = 0; k < n1; ++k) {
        injections *= n2 - k;
        if (injections > limit) throw PreconditionError("instance too large for exhaustive search");
    }

    const auto a = dense_adjacency(g1);
    const auto b = dense_adjacency(g2);
    ExactResult result;
    std::vector<NodeId> f(n1);
    std::vector<bool> used(n2, false);
    std::vector<NodeId> best;
    bool have_best = false;

    // Depth-first over positions; targets tried ascending, so leaves come in lexicographic order.
    auto visit = [&](auto&& self, std::size_t pos) -> void {
        if (pos == n1) {
            ++result.permutations_examined;
            const std::size_t c = dense_conserved(a, b, f);
            const Alignment cand = Alignment::from_forward(f, n2);
            if (qap_objective(cand, g1, g2) != -2 * static_cast<std::int64_t>(c) ||
                dense_trace_objective(cand, g1, g2) != -2 * static_cast<std::int64_t>(c)) {
                ++result.objective_mismatches;
            }
            if (!have_best || c > result.best_conserved) {
                have_best = true;
                result.best_conserved = c;
                best = f;
            }
            return;
        }
        for (NodeId u = 0; u < n2; ++u) {
            if (used[u]) continue;
            used[u] = true;
            f[pos] = u;
            self(self, pos + 1);
            used[u] = false;
        }
    };
    visit(visit, 0);
    result.best_alignment = Alignment::from_forward(best, n2);
    return result;
}

bool is_best_matched(const Graph& g1, const Graph& g2, const Alignment& a) {
    const std::size_t n1 = g1.node_count(), n2 = g2.node_count();
    auto kept_at = [&](NodeId i, NodeId u) {
        std::size_t c = 0;
        for (NodeId j : g1.neighbors(i)) c += g2.has_edge(u, a.target(j));
        return c;
    };
    for (NodeId i = 0; i < n1; ++i) {
        const std::size_t here = kept_at(i, a.target(i));
        for (NodeId u = 0; u < n2; ++u) {
            if (a.source(u) == kNoNode && kept_at(i, u) > here) return false;
        }
    }
    const std::size_t total = conserved_edges(a, g1, g2);
    Alignment probe = a;
    for (NodeId i = 0; i < n1; ++i) {
        for (NodeId j = i + 1; j < n1; ++j) {
            probe.swap_targets(i, j);
            const bool better = conserved_edges(probe, g1, g2) > total;
            probe.swap_targets(i, j);
            if (better) return false;
        }
    }
    return true;
}

bool audit_best_matching(const Graph& g1, const Graph& g2, const ExactResult& result) {
    if (conserved_edges(result.best_alignment, g1, g2) != result.best_conserved) return false;
    return is_best_matched(g1, g2, result.best_alignment);
}

std::vector<double> dense_principal_eigenvector(const Graph& g3, std::span<const double> o, double alpha) {
    const auto n = static_cast<Eigen::Index>(g3.node_count());
    Eigen::MatrixXd E(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double walk = g3.has_edge(static_cast<NodeId>(i), static_cast<NodeId>(j))
                                    ? 1.0 / static_cast<double>(g3.degree(static_cast<NodeId>(j)))
                                    : 0.0;
            E(i, j) = alpha * walk + (1.0 - alpha) * o[static_cast<std::size_t>(i)];
        }
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(E);
    const auto& values = solver.eigenvalues();
    Eigen::Index lead = 0;
    for (Eigen::Index k = 1; k < n; ++k) {
        if (values(k).real() > values(lead).real()) lead = k;
    }
    const Eigen::VectorXd vec = solver.eigenvectors().col(lead).real();
    const double sum = vec.sum();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = vec(k) / sum;
    return out;
}

std::vector<std::vector<int>> all_pairs_distances(const Graph& g) {
    const std::size_t n = g.node_count();
    constexpr int kInf = 1 << 29;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (const Edge& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
        }
    }
    for (auto& row : d) {
        for (int& x : row) {
            if (x >= kInf) x = -1;
        }
    }
    return d;
}

Graph random_graph(std::size_t n, double edge_probability, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Edge> edges;
    for (NodeId a = 0; a < n; ++a) {
        for (NodeId b = a + 1; b < n; ++b) {
            if (rng.uniform() < edge_probability) edges.push_back({a, b});
        }
    }
    return Graph::from_edges(n, edges);
}

Graph random_graph_m(std::size_t n, std::size_t m, std::uint64_t seed) {
    Rng rng(seed);
    m = std::min(m, n * (n - 1) / 2);
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    while (edges.size() < m) {
        auto a = static_cast<NodeId>(rng.below(n));
        auto b = static_cast<NodeId>(rng.below(n));
        if (a == b) continue;
        const std::uint64_t key = (std::uint64_t{std::min(a, b)} << 32) | std::max(a, b);
        if (seen.insert(key).second) edges.push_back({a, b});
    }
    return Graph::from_edges(n, edges);
}

Alignment random_alignment(std::size_t n1, std::size_t n2, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<NodeId> targets(n2);
    for (std::size_t u = 0; u < n2; ++u) targets[u] = static_cast<NodeId>(u);
    for (std::size_t k = 0; k < n1; ++k) std::swap(targets[k], targets[k + rng.below(n2 - k)]);
    targets.resize(n1);
    return Alignment::from_forward(targets, n2);
}

double average_clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n == 0) return 0.0;
    double total = 0.0;
    for (NodeId i = 0; i < n; ++i) {
        auto nb = g.neighbors(i);
        if (nb.size() < 2) continue;
        std::size_t links = 0;
        for (std::size_t x = 0; x < nb.size(); ++x) {
            for (std::size_t y = x + 1; y < nb.size(); ++y) links += g.has_edge(nb[x], nb[y]);
        }
        total += 2.0 * static_cast<double>(links) / static_cast<double>(nb.size() * (nb.size() - 1));
    }
    return total / static_cast<double>(n);
}

}  // namespace elruna::testkit
