#include "elruna/similarity.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstring>
#include <istream>
#include <ostream>

#include "elruna/errors.hpp"
#include "elruna/parallel.hpp"

namespace elruna {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

void put_u32(std::ostream& out, std::uint32_t v) {
    std::array<char, 4> b{};
    for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(b[k]) << (8 * k);
    return v;
}

}  // namespace

SimilarityState SimilarityState::initial(std::size_t rows, std::size_t cols) {
    SimilarityState s;
    s.rows = rows;
    s.cols = cols;
    s.values.assign(rows * cols, 1.0);
    s.row_max.assign(rows, 1.0);
    s.col_max.assign(cols, 1.0);
    return s;
}

void SimilarityState::refresh_maxima() {
    row_max.assign(rows, 0.0);
    col_max.assign(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* r = values.data() + i * cols;
        for (std::size_t u = 0; u < cols; ++u) {
            row_max[i] = std::max(row_max[i], r[u]);
            col_max[u] = std::max(col_max[u], r[u]);
        }
    }
}

ContributionContext make_contribution_context(const SimilarityState& prev, const ThresholdMatrix& t1,
                                              const ThresholdMatrix& t2) {
    const int k = prev.iteration;
    if (k > t1.t_max() || k > t2.t_max()) throw PreconditionError("threshold matrix too short");
    ContributionContext ctx;
    ctx.row_threshold.resize(prev.rows);
    ctx.col_threshold.resize(prev.cols);
    for (std::size_t i = 0; i < prev.rows; ++i) {
        ctx.row_threshold[i] = prev.row_max[i] * t1.at(static_cast<NodeId>(i), k);
    }
    for (std::size_t u = 0; u < prev.cols; ++u) {
        ctx.col_threshold[u] = prev.col_max[u] * t2.at(static_cast<NodeId>(u), k);
    }
    return ctx;
}

double contribution_amount(double s, double c1, double b1, double c2, double b2) {
    if (s >= std::max(c1, c2)) return s;
    if (s < std::min(c1, c2)) return 0.0;
    if (s >= c1) {
        // g1 side cleared, g2 side did not.
        if (b1 - c1 <= 0.0) return 0.0;
        return 2.0 * s - ((s - c1) / (b1 - c1) * (b2 - c2) + c2);
    }
    if (b2 - c2 <= 0.0) return 0.0;
    return 2.0 * s - ((s - c2) / (b2 - c2) * (b1 - c1) + c1);
}

PairAccumulation PairAccumulator::operator()(NodeId i, NodeId u, const SimilarityState& prev,
                                             const ContributionContext& ctx, const Graph& g1,
                                             const Graph& g2) {
    PairAccumulation acc;
    auto ni = g1.neighbors(i);
    auto nu = g2.neighbors(u);
    if (ni.empty() || nu.empty()) return acc;

    candidates_.clear();
    for (NodeId j : ni) {
        const double c1 = ctx.row_threshold[j];
        const double* row = prev.values.data() + std::size_t{j} * prev.cols;
        for (NodeId v : nu) {
            const double s = row[v];
            if (s >= std::min(c1, ctx.col_threshold[v])) candidates_.push_back({s, j, v});
        }
    }
    // candidates arrive in (j, v) order, so stability gives the tie-break
    std::stable_sort(candidates_.begin(), candidates_.end(),
                     [](const Candidate& a, const Candidate& b) { return a.s > b.s; });

    const std::size_t cap = std::min(ni.size(), nu.size());
    const std::uint64_t epoch = ++epoch_;
    for (const Candidate& c : candidates_) {
        if (acc.contributing == cap) break;
        if (row_stamp_[c.j] == epoch || col_stamp_[c.v] == epoch) continue;
        row_stamp_[c.j] = epoch;
        col_stamp_[c.v] = epoch;
        acc.sum += contribution_amount(c.s, ctx.row_threshold[c.j], prev.row_max[c.j],
                                       ctx.col_threshold[c.v], prev.col_max[c.v]);
        ++acc.contributing;
    }
    return acc;
}

PairAccumulation accumulate_pair(NodeId i, NodeId u, const SimilarityState& prev,
                                 const ContributionContext& ctx, const Graph& g1, const Graph& g2) {
    PairAccumulator acc(prev.rows, prev.cols);
    return acc(i, u, prev, ctx, g1, g2);
}

SimilarityState iterate(const SimilarityState& prev, const ThresholdMatrix& t1, const ThresholdMatrix& t2,
                        const Graph& g1, const Graph& g2, unsigned threads, IterationStats* stats) {
    const std::size_t n1 = prev.rows, n2 = prev.cols;
    const ContributionContext ctx = make_contribution_context(prev, t1, t2);

    std::vector<double> row_den(n1, 0.0), col_den(n2, 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
        for (NodeId j : g1.neighbors(static_cast<NodeId>(i))) row_den[i] += prev.row_max[j];
    }
    for (std::size_t u = 0; u < n2; ++u) {
        for (NodeId v : g2.neighbors(static_cast<NodeId>(u))) col_den[u] += prev.col_max[v];
    }

    SimilarityState next;
    next.rows = n1;
    next.cols = n2;
    next.iteration = prev.iteration + 1;
    next.values.assign(n1 * n2, 0.0);
    next.row_max.assign(n1, 0.0);

    threads = std::max(1u, threads);
    std::vector<PairAccumulator> workers(threads, PairAccumulator(n1, n2));
    std::vector<IterationStats> worker_stats(threads);

    parallel_for(n1, threads, [&](std::size_t row, unsigned slot) {
        const auto i = static_cast<NodeId>(row);
        PairAccumulator& accumulate = workers[slot];
        IterationStats& st = worker_stats[slot];
        double* out = next.values.data() + row * n2;
        double best = 0.0;
        for (std::size_t col = 0; col < n2; ++col) {
            const auto u = static_cast<NodeId>(col);
            const double den = std::max(row_den[row], col_den[col]);
            if (den <= 0.0) continue;
            const PairAccumulation acc = accumulate(i, u, prev, ctx, g1, g2);
            st.contributing_pairs += acc.contributing;
            st.max_contributing = std::max(st.max_contributing, acc.contributing);
            if (acc.contributing > std::min(g1.degree(i), g2.degree(u))) ++st.cardinality_violations;
            double sum = acc.sum;
            if (sum < 0.0) {
                ++st.clamped_cells;
                sum = 0.0;
            }
            out[col] = sum / den;
            best = std::max(best, out[col]);
        }
        next.row_max[row] = best;
    });

    next.col_max.assign(n2, 0.0);
    for (std::size_t i = 0; i < n1; ++i) {
        const double* r = next.values.data() + i * n2;
        for (std::size_t u = 0; u < n2; ++u) next.col_max[u] = std::max(next.col_max[u], r[u]);
    }

    if (stats) {
        for (const IterationStats& st : worker_stats) {
            stats->contributing_pairs += st.contributing_pairs;
            stats->max_contributing = std::max(stats->max_contributing, st.max_contributing);
            stats->cardinality_violations += st.cardinality_violations;
            stats->clamped_cells += st.clamped_cells;
        }
    }
    return next;
}

SimilarityRun run_similarity(const Graph& g1, const Graph& g2, const SimilarityOptions& options) {
    if (g1.node_count() == 0 || g2.node_count() == 0) throw PreconditionError("similarity needs nonempty graphs");
    if (options.iterations && *options.iterations < 1) {
        throw PreconditionError("iteration count must be at least 1");
    }

    SimilarityRun run;
    const unsigned threads = std::max(1u, options.threads);

    auto start = std::chrono::steady_clock::now();
    run.t_max = options.iterations ? *options.iterations : std::max(diameter(g1), diameter(g2));
    const ThresholdMatrix t1 = compute_thresholds(g1, run.t_max, threads);
    const ThresholdMatrix t2 = compute_thresholds(g2, run.t_max, threads);
    run.threshold_ms = elapsed_ms(start);

    run.state = SimilarityState::initial(g1.node_count(), g2.node_count());
    for (int k = 1; k <= run.t_max; ++k) {
        start = std::chrono::steady_clock::now();
        run.state = iterate(run.state, t1, t2, g1, g2, threads, &run.stats);
        run.iteration_ms.push_back(elapsed_ms(start));
    }
    return run;
}

void write_similarity_dump(std::ostream& out, const SimilarityState& state) {
    out.write("ELRS", 4);
    put_u32(out, static_cast<std::uint32_t>(state.rows));
    put_u32(out, static_cast<std::uint32_t>(state.cols));
    put_u32(out, static_cast<std::uint32_t>(state.iteration));
    for (double x : state.values) {
        auto bits = std::bit_cast<std::uint64_t>(x);
        std::array<char, 8> b{};
        for (int k = 0; k < 8; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xff);
        out.write(b.data(), 8);
    }
}

SimilarityState read_similarity_dump(std::istream& in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (!in || std::memcmp(magic.data(), "ELRS", 4) != 0) throw ParseError("not a similarity dump", 0);

    SimilarityState state;
    state.rows = get_u32(in);
    state.cols = get_u32(in);
    state.iteration = static_cast<int>(get_u32(in));
    state.values.resize(state.rows * state.cols);
    for (double& x : state.values) {
        std::array<unsigned char, 8> b{};
        in.read(reinterpret_cast<char*>(b.data()), 8);
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
        x = std::bit_cast<double>(bits);
    }
    if (!in) throw ParseError("truncated similarity dump", 0);
    state.refresh_maxima();
    return state;
}

}  // namespace elruna
