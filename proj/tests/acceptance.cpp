// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Pass criterion numbers as arguments to run a subset.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "elruna/alignment.hpp"
#include "elruna/generators.hpp"
#include "elruna/local_search.hpp"
#include "elruna/metrics.hpp"
#include "elruna/similarity.hpp"
#include "elruna/testkit.hpp"
#include "elruna/threshold.hpp"

using namespace elruna;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Verdict {
    bool pass = false;
    std::string detail;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// accepted moves that lowered conserved edges, summed over every search run here
std::size_t g_monotonicity_violations = 0;
std::size_t g_search_runs = 0;

void note_search(const SearchResult& r) {
    g_monotonicity_violations += r.monotonicity_violations;
    ++g_search_runs;
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
        if (r.trace[k].conserved < r.trace[k - 1].conserved) ++g_monotonicity_violations;
    }
}

constexpr std::size_t kBaNodes = 200;
constexpr std::size_t kBaAttach = 7;  // 7 * 193 = 1,351 edges

double noisy_seed_ec(double p, std::uint64_t seed, double* seconds = nullptr) {
    Graph g = generate_ba(kBaNodes, kBaAttach, seed);
    NoisyCopy c = perturb(g, {p, seed});
    auto t = Clock::now();
    SimilarityRun run = run_similarity(g, c.graph, {std::nullopt, 1});
    Alignment a = seed_and_extend_align(run.state, g, c.graph, default_seed_delta(run.state));
    if (seconds) *seconds = seconds_since(t);
    return edge_correctness(a, g, c.graph);
}

Verdict criterion1() {
    int perfect = 0;
    double slowest = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        double s = 0.0;
        if (noisy_seed_ec(0.0, seed, &s) == 1.0) ++perfect;
        slowest = std::max(slowest, s);
    }
    return {perfect >= 18 && slowest < 60.0,
            fmt("EC = 1.0 in %d/20 seeds (need 18), slowest run %.2f s (limit 60 s)", perfect, slowest)};
}

Verdict criterion2() {
    const std::vector<double> grid{0.0, 0.05, 0.10, 0.15, 0.20, 0.25};
    std::vector<double> medians;
    for (double p : grid) {
        std::vector<double> ec;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) ec.push_back(noisy_seed_ec(p, seed));
        medians.push_back(median(ec));
    }
    bool monotone = true;
    for (std::size_t k = 1; k < medians.size(); ++k) monotone = monotone && medians[k] <= medians[k - 1];
    std::string detail = "median EC by p:";
    for (std::size_t k = 0; k < grid.size(); ++k) detail += fmt(" %.2f->%.4f", grid[k], medians[k]);
    detail += fmt("; non-increasing %s, EC(0.25) %.4f (need >= 0.5)", monotone ? "yes" : "no", medians.back());
    return {monotone && medians.back() >= 0.5, detail};
}

Verdict criterion3() {
    int close = 0, exceeded = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 5 + seed % 3;
        Graph g1 = testkit::random_graph(n, 0.5, 1000 + seed);
        Graph g2 = testkit::random_graph(n, 0.5, 5000 + seed);
        const auto exact = testkit::exact_align(g1, g2);

        SimilarityRun run = run_similarity(g1, g2, {std::nullopt, 1});
        Alignment a = seed_and_extend_align(run.state, g1, g2, default_seed_delta(run.state));
        SearchConfig cfg;
        cfg.subset_size = std::min<std::size_t>(6, n);
        cfg.rng_seed = seed;
        cfg.record_trace = true;
        SearchResult r = rawsem_search(a, g1, g2, cfg);
        note_search(r);

        ++total;
        if (static_cast<double>(r.final_conserved) >= 0.9 * static_cast<double>(exact.best_conserved)) ++close;
        if (r.final_conserved > exact.best_conserved) ++exceeded;
    }
    return {close >= 80 && exceeded == 0,
            fmt("within 90%% of the exact optimum in %d/%d instances (need 80), above optimum %d times", close,
                total, exceeded)};
}

Verdict criterion4() {
    std::vector<double> ratios, final_gap, base_iters, focus_iters;
    int not_reached = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Graph g = generate_ba(400, kBaAttach, seed);
        NoisyCopy c = perturb(g, {0.25, seed});
        SimilarityRun run = run_similarity(g, c.graph, {std::nullopt, 1});
        Alignment start = naive_align(run.state);

        SearchConfig cfg;
        cfg.rng_seed = seed;
        cfg.record_trace = true;
        SearchResult base = baseline_search(start, g, c.graph, cfg);
        SearchResult focus = rawsem_search(start, g, c.graph, cfg);
        note_search(base);
        note_search(focus);

        // iterations each search needed to first hold the baseline's final count
        const double base_needed = static_cast<double>(std::max<std::size_t>(base.last_improvement, 1));
        double focus_needed = 0.0;
        for (const TraceRow& row : focus.trace) {
            if (row.conserved >= base.final_conserved) {
                focus_needed = static_cast<double>(row.iteration);
                break;
            }
        }
        if (focus.initial_conserved >= base.final_conserved) focus_needed = 1.0;
        if (focus_needed == 0.0) ++not_reached;
        ratios.push_back(focus_needed > 0.0 ? base_needed / focus_needed : 0.0);
        final_gap.push_back(static_cast<double>(focus.final_conserved) - static_cast<double>(base.final_conserved));
        base_iters.push_back(base_needed);
        focus_iters.push_back(static_cast<double>(focus.last_improvement));
    }
    const double ratio = median(ratios), gap = median(final_gap);
    return {ratio >= 5.0 && gap >= 0.0,
            fmt("median iteration ratio %.2f (need >= 5), median final conserved gap %+.1f (need >= 0); "
                "median iterations to final: baseline %.0f, focused %.0f; focused never reached baseline in %d/20",
                ratio, gap, median(base_iters), median(focus_iters), not_reached)};
}

Verdict criterion5() {
    return {g_monotonicity_violations == 0 && g_search_runs > 0,
            fmt("%zu decreasing accepted moves over %zu search runs", g_monotonicity_violations, g_search_runs)};
}

Verdict criterion6() {
    int checked = 0;
    double worst_l1 = 0.0, worst_mass = 0.0;
    bool all_converged = true;
    for (std::uint64_t seed = 0; checked < 50; ++seed) {
        const std::size_t n1 = 2 + seed % 9;  // merged graph has 2 * n1 <= 20 nodes
        Graph g1 = testkit::random_graph(n1, 0.45, 70000 + seed);
        Graph g2 = testkit::random_graph(n1 + seed % 4, 0.45, 90000 + seed);
        Alignment a = testkit::random_alignment(n1, g2.node_count(), seed);
        MismatchState m = compute_violations(a, g1, g2);
        MergedGraph merged = merge_graphs(a, g1, g2);
        Propagation r = propagate_mismatch(merged.graph, m.normalized);
        if (r.no_mismatch) continue;
        ++checked;
        all_converged = all_converged && r.converged;
        auto oracle = testkit::dense_principal_eigenvector(merged.graph, m.normalized, 0.85);
        double l1 = 0.0;
        for (std::size_t k = 0; k < oracle.size(); ++k) l1 += std::abs(r.rank[k] - oracle[k]);
        worst_l1 = std::max(worst_l1, l1);
        worst_mass = std::max(worst_mass, r.max_mass_error);
    }
    return {worst_l1 < 1e-8 && worst_mass <= 1e-12 && all_converged,
            fmt("%d graphs, worst L1 to eigenvector %.2e (limit 1e-8), worst |sum R - 1| %.2e (limit 1e-12)",
                checked, worst_l1, worst_mass)};
}

Verdict criterion7() {
    int identity_fail = 0, s3_fail = 0, oracle_fail = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const std::size_t n1 = 4 + seed % 9, n2 = n1 + seed % 5;
        Graph g1 = testkit::random_graph(n1, 0.2 + 0.05 * static_cast<double>(seed % 7), 3 * seed + 1);
        Graph g2 = testkit::random_graph(n2, 0.2 + 0.05 * static_cast<double>(seed % 5), 3 * seed + 2);
        if (g1.edge_count() == 0) g1 = Graph::from_edges(n1, std::vector<Edge>{{0, 1}});
        Alignment a = testkit::random_alignment(n1, n2, seed);
        const std::int64_t obj = qap_objective(a, g1, g2);
        if (obj != -2 * static_cast<std::int64_t>(conserved_edges(a, g1, g2))) ++identity_fail;
        if (obj != testkit::dense_trace_objective(a, g1, g2)) ++oracle_fail;
        if (s3_score(a, g1, g2) > edge_correctness(a, g1, g2) + 1e-12) ++s3_fail;
    }
    return {identity_fail == 0 && s3_fail == 0 && oracle_fail == 0,
            fmt("1000 instances: objective identity failures %d, dense trace mismatches %d, S3 > EC %d",
                identity_fail, oracle_fail, s3_fail)};
}

Verdict criterion8() {
    int mismatches = 0, monotone_fail = 0, saturation_fail = 0, connected = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 20 + 9 * seed;  // 20 .. 191
        Graph g = seed % 2 ? generate_ba(n, 1 + seed % 4, seed) : testkit::random_graph(n, 3.0 / static_cast<double>(n), seed);
        const int t_max = diameter(g);
        ThresholdMatrix t = compute_thresholds(g, t_max);
        auto d = testkit::all_pairs_distances(g);
        bool is_connected = true;
        for (int x : d[0]) is_connected = is_connected && x >= 0;
        connected += is_connected;
        for (NodeId i = 0; i < n; ++i) {
            for (int k = 1; k <= t_max; ++k) {
                std::size_t ball = 0;
                for (int x : d[i]) ball += x >= 0 && x <= k;
                if (t.at(i, k) != static_cast<double>(ball) / static_cast<double>(n)) ++mismatches;
                if (t.at(i, k) < t.at(i, k - 1)) ++monotone_fail;
            }
            if (is_connected && t.at(i, t_max) != 1.0) ++saturation_fail;
        }
    }
    return {mismatches == 0 && monotone_fail == 0 && saturation_fail == 0 && connected > 0,
            fmt("20 graphs (%d connected): ball mismatches %d, monotonicity failures %d, final column != 1 %d",
                connected, mismatches, monotone_fail, saturation_fail)};
}

int run_cli(const std::string& args) {
    std::string cmd = std::string(ELRUNA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Verdict criterion9() {
    const fs::path dir = fs::temp_directory_path() / ("elruna_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    Graph g = generate_hk(200, 4, 0.4, 9);
    {
        std::ofstream a(dir / "g1.txt"), b(dir / "g2.txt");
        write_edge_list(a, g);
        write_edge_list(b, perturb(g, {0.1, 9}).graph);
    }
    const unsigned max_threads = std::max(4u, std::thread::hardware_concurrency());
    std::set<std::string> alignments, scorecards;
    int runs = 0, failures = 0;
    for (int rep = 0; rep < 5; ++rep) {
        for (unsigned threads : {1u, max_threads}) {
            const std::string args = "align --g1 " + (dir / "g1.txt").string() + " --g2 " + (dir / "g2.txt").string() +
                                     " --method seed --local-search rawsem --seed 17 --no-wall-time --threads " +
                                     std::to_string(threads) + " --output " + (dir / "a.tsv").string() +
                                     " --scorecard " + (dir / "s.csv").string();
            ++runs;
            if (run_cli(args) != 0) {
                ++failures;
                continue;
            }
            alignments.insert(slurp(dir / "a.tsv"));
            scorecards.insert(slurp(dir / "s.csv"));
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    return {failures == 0 && alignments.size() == 1 && scorecards.size() == 1,
            fmt("%d runs (1 and %u threads), %d failed, distinct alignments %zu, distinct scorecards %zu", runs,
                max_threads, failures, alignments.size(), scorecards.size())};
}

Verdict criterion10() {
    const std::vector<double> sizes{100, 200, 400};
    std::vector<double> times;
    for (double n : sizes) {
        const auto nodes = static_cast<std::size_t>(n);
        Graph g = generate_ba(nodes, kBaAttach, 1);
        NoisyCopy c = perturb(g, {0.0, 1});
        double best = 1e300;
        for (int rep = 0; rep < 3; ++rep) {
            auto t = Clock::now();
            run_similarity(g, c.graph, {std::nullopt, 1});
            best = std::min(best, seconds_since(t));
        }
        times.push_back(best);
    }
    // least squares slope of log time against log n
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        mx += std::log(sizes[k]) / 3.0;
        my += std::log(times[k]) / 3.0;
    }
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        sxy += (std::log(sizes[k]) - mx) * (std::log(times[k]) - my);
        sxx += (std::log(sizes[k]) - mx) * (std::log(sizes[k]) - mx);
    }
    const double beta = sxy / sxx;
    return {beta <= 2.7, fmt("best of 3 times %.3f / %.3f / %.3f s at n = 100 / 200 / 400, beta %.3f (limit 2.7)",
                             times[0], times[1], times[2], beta)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"noise-free recovery", criterion1},        {"noise robustness trend", criterion2},
        {"exact oracle gap", criterion3},           {"focused vs baseline search iterations", criterion4},
        {"search monotonicity", criterion5},        {"propagation correctness", criterion6},
        {"metric identities", criterion7},          {"threshold matrix", criterion8},
        {"determinism across thread counts", criterion9}, {"similarity scaling", criterion10},
    };
    std::set<int> only;
    for (int k = 1; k < argc; ++k) only.insert(std::atoi(argv[k]));

    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int id = static_cast<int>(k + 1);
        if (!only.empty() && !only.count(id)) continue;
        auto t = Clock::now();
        Verdict v = criteria[k].second();
        std::printf("[%s] criterion %d (%s): %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", id, criteria[k].first,
                    v.detail.c_str(), seconds_since(t));
        std::fflush(stdout);
        failed += !v.pass;
    }
    std::printf("%d criteria failed\n", failed);
    return failed ? 1 : 0;
}
