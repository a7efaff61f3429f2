#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "elruna/alignment.hpp"
#include "elruna/errors.hpp"
#include "elruna/generators.hpp"
#include "elruna/graph.hpp"
#include "elruna/local_search.hpp"
#include "elruna/metrics.hpp"
#include "elruna/parallel.hpp"
#include "elruna/similarity.hpp"

using namespace elruna;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

// ---- option bundles -------------------------------------------------------

struct SearchFlags {
    std::string mode = "none";
    SearchConfig cfg;

    void attach(CLI::App* app, const std::string& default_mode) {
        mode = default_mode;
        app->add_option("--local-search", mode, "none, baseline or rawsem")
            ->check(CLI::IsMember({"none", "baseline", "rawsem"}))
            ->capture_default_str();
        app->add_option("--subset-size", cfg.subset_size, "nodes permuted per move (2-10)")->capture_default_str();
        app->add_option("--window-size", cfg.window_size, "ranking window width")->capture_default_str();
        app->add_option("--window-step", cfg.window_step, "window slide distance")->capture_default_str();
        app->add_option("--stall-slide", cfg.stall_before_slide, "failed moves before the window slides")
            ->capture_default_str();
        app->add_option("--stall-limit", cfg.stall_terminate, "failed moves before stopping")
            ->capture_default_str();
        app->add_option("--alpha", cfg.alpha, "propagation damping")->capture_default_str();
    }
};

struct ExtractFlags {
    std::string method = "seed";
    std::string iterations = "auto";
    std::optional<double> delta;

    void attach(CLI::App* app) {
        app->add_option("--method", method, "naive or seed")
            ->check(CLI::IsMember({"naive", "seed"}))
            ->capture_default_str();
        add_common(app);
    }

    void add_common(CLI::App* app) {
        app->add_option("--iterations", iterations, "similarity iterations, or auto for the larger diameter")
            ->capture_default_str();
        app->add_option("--delta", delta, "seed-and-extend boost (default: mean nonzero similarity)");
    }

    std::optional<int> iteration_count() const {
        if (iterations == "auto") return std::nullopt;
        int v = 0;
        auto [end, ec] = std::from_chars(iterations.data(), iterations.data() + iterations.size(), v);
        if (ec != std::errc{} || end != iterations.data() + iterations.size()) {
            throw ParseError("--iterations expects an integer or auto", 0);
        }
        return v;
    }
};

struct Outputs {
    std::string scorecard;  // empty: stdout
    std::string trace;
    bool no_wall_time = false;

    void attach(CLI::App* app) {
        app->add_option("--scorecard", scorecard, "scorecard CSV path (default stdout)");
        app->add_option("--trace", trace, "local search trace CSV path");
        app->add_flag("--no-wall-time", no_wall_time, "write 0 for wall_ms so outputs are reproducible");
    }
};

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    return out;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
    if (path.empty() || path == "-") {
        fn(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream out = open_out(path);
    fn(out);
    if (!out) throw Error("failed writing " + path);
}

std::string sanitize(std::string s) {
    std::replace(s.begin(), s.end(), ',', '_');
    return s;
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

void log_phase(const char* phase, double ms) { std::fprintf(stderr, "phase %-10s %10.3f ms\n", phase, ms); }

void log_similarity(const SimilarityRun& run) {
    log_phase("threshold", run.threshold_ms);
    for (std::size_t k = 0; k < run.iteration_ms.size(); ++k) {
        std::fprintf(stderr, "phase similarity %10.3f ms  (iteration %zu of %d)\n", run.iteration_ms[k], k + 1,
                     run.t_max);
    }
}

// ---- shared pipeline ------------------------------------------------------

struct Extracted {
    Alignment alignment;
    double ms = 0.0;
};

Extracted extract(const std::string& method, const SimilarityState& s, const Graph& g1, const Graph& g2,
                  std::optional<double> delta) {
    auto t = Clock::now();
    Extracted out;
    if (method == "naive") {
        out.alignment = naive_align(s);
    } else {
        out.alignment = seed_and_extend_align(s, g1, g2, delta ? *delta : default_seed_delta(s));
    }
    out.ms = ms_since(t);
    return out;
}

struct Searched {
    SearchResult result;
    double ms = 0.0;
};

Searched search(const std::string& mode, const Alignment& a, const Graph& g1, const Graph& g2,
                SearchConfig cfg, bool trace) {
    cfg.record_trace = trace;
    auto t = Clock::now();
    Searched out;
    out.result = mode == "baseline" ? baseline_search(a, g1, g2, cfg) : rawsem_search(a, g1, g2, cfg);
    out.ms = ms_since(t);
    return out;
}

void write_card(const std::string& path, const ScoreRow& row) {
    with_output(path, [&](std::ostream& out) {
        out << kScoreHeader << '\n';
        write_score_row(out, row);
        out << '\n';
    });
}

void check_sizes(const Graph& g1, const Graph& g2) {
    if (g1.node_count() > g2.node_count()) {
        throw PreconditionError("g1 has more nodes than g2; swap the inputs");
    }
}

// ---- generate -------------------------------------------------------------

struct GeneratorFlags {
    std::string model = "ba";
    std::size_t nodes = 200;
    std::size_t attach = 7;
    std::optional<double> triad;

    void attach_to(CLI::App* app) {
        app->add_option("--model", model, "ba or hk")->check(CLI::IsMember({"ba", "hk"}))->capture_default_str();
        app->add_option("--nodes", nodes, "node count")->capture_default_str();
        app->add_option("--attach", attach, "edges added per new node")->capture_default_str();
        app->add_option("--triad-prob", triad, "triad closure probability (hk only, default 0.4)");
    }

    double q() const {
        if (model == "ba") {
            if (triad) throw PreconditionError("--triad-prob only applies to --model hk");
            return 0.0;
        }
        return triad ? *triad : 0.4;
    }

    Graph build(std::uint64_t seed) const {
        return model == "ba" ? generate_ba(nodes, attach, seed) : generate_hk(nodes, attach, q(), seed);
    }

    // encodes everything needed to rebuild the graph except the seed
    std::string instance() const {
        std::string name = model + "_n" + std::to_string(nodes) + "_a" + std::to_string(attach);
        if (model == "hk") name += "_q" + format_number(q());
        return name;
    }
};

int cmd_generate(const GeneratorFlags& gen, std::uint64_t seed, const std::string& output) {
    gen.q();
    auto t = Clock::now();
    Graph g = gen.build(seed);
    log_phase("generate", ms_since(t));
    with_output(output, [&](std::ostream& out) { write_edge_list(out, g); });
    std::fprintf(stderr, "%s seed %llu: %zu nodes, %zu edges\n", gen.instance().c_str(),
                 static_cast<unsigned long long>(seed), g.node_count(), g.edge_count());
    return 0;
}

// ---- perturb --------------------------------------------------------------

int cmd_perturb(const std::string& input, double p, std::uint64_t seed, const std::string& output,
                const std::string& truth) {
    ParsedGraph in = read_edge_list_file(input);
    NoisyCopy c = perturb(in.graph, {p, seed});
    // the copy gets fresh ids 0..n-1; the truth file maps original labels onto them
    with_output(output, [&](std::ostream& out) { write_edge_list(out, c.graph); });
    if (!truth.empty()) {
        with_output(truth, [&](std::ostream& out) {
            write_ground_truth(out, c.truth, in.labels, LabelMap::identity(c.graph.node_count()));
        });
    }
    std::fprintf(stderr, "added %zu edges to %zu\n", c.added_edges, in.graph.edge_count());
    return 0;
}

// ---- align / refine / score -----------------------------------------------

struct AlignArgs {
    std::string g1, g2, output, instance, dump;
    double p = 0.0;
    std::uint64_t seed = 0;
    ExtractFlags extract;
    SearchFlags search;
    Outputs outputs;
};

int cmd_align(const AlignArgs& args, unsigned threads) {
    ParsedGraph p1 = read_edge_list_file(args.g1);
    ParsedGraph p2 = read_edge_list_file(args.g2);
    check_sizes(p1.graph, p2.graph);
    const std::optional<int> iterations = args.extract.iteration_count();

    auto start = Clock::now();
    SimilarityRun run = run_similarity(p1.graph, p2.graph, {iterations, threads});
    log_similarity(run);
    Extracted ex = extract(args.extract.method, run.state, p1.graph, p2.graph, args.extract.delta);
    log_phase("extraction", ex.ms);

    ScoreRow row;
    row.method = args.extract.method;
    row.iterations = run.t_max;
    Alignment final_alignment = ex.alignment;
    if (args.search.mode != "none") {
        SearchConfig cfg = args.search.cfg;
        cfg.rng_seed = args.seed;
        Searched s = search(args.search.mode, ex.alignment, p1.graph, p2.graph, cfg, !args.outputs.trace.empty());
        log_phase("search", s.ms);
        final_alignment = s.result.alignment;
        row.method += "+" + args.search.mode;
        row.iterations = static_cast<long long>(s.result.iterations);
        if (!args.outputs.trace.empty()) {
            if (args.outputs.no_wall_time)
                for (TraceRow& r : s.result.trace) r.wall_ms = 0.0;
            with_output(args.outputs.trace, [&](std::ostream& out) { write_trace(out, s.result.trace); });
        }
    }
    const double total_ms = ms_since(start);

    with_output(args.output, [&](std::ostream& out) {
        write_alignment(out, final_alignment, p1.labels, p2.labels, &run.state);
    });
    if (!args.dump.empty()) {
        with_output(args.dump, [&](std::ostream& out) { write_similarity_dump(out, run.state); });
    }

    row.instance = args.instance.empty() ? sanitize(stem(args.g1) + "-" + stem(args.g2)) : sanitize(args.instance);
    row.p = args.p;
    row.seed = args.seed;
    row.card = score(final_alignment, p1.graph, p2.graph);
    row.wall_ms = args.outputs.no_wall_time ? 0.0 : total_ms;
    write_card(args.outputs.scorecard, row);
    return 0;
}

struct RefineArgs {
    std::string g1, g2, alignment, output, instance;
    double p = 0.0;
    std::uint64_t seed = 0;
    SearchFlags search;
    Outputs outputs;
};

Alignment load_alignment(const std::string& path, const ParsedGraph& p1, const ParsedGraph& p2) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return read_alignment(in, p1.labels, p2.labels);
}

int cmd_refine(const RefineArgs& args) {
    ParsedGraph p1 = read_edge_list_file(args.g1);
    ParsedGraph p2 = read_edge_list_file(args.g2);
    check_sizes(p1.graph, p2.graph);
    Alignment a = load_alignment(args.alignment, p1, p2);
    if (!a.is_total()) throw PreconditionError("refinement needs every g1 node aligned");

    SearchConfig cfg = args.search.cfg;
    cfg.rng_seed = args.seed;
    Searched s = search(args.search.mode, a, p1.graph, p2.graph, cfg, !args.outputs.trace.empty());
    log_phase("search", s.ms);
    if (!args.outputs.trace.empty()) {
        if (args.outputs.no_wall_time)
            for (TraceRow& r : s.result.trace) r.wall_ms = 0.0;
        with_output(args.outputs.trace, [&](std::ostream& out) { write_trace(out, s.result.trace); });
    }
    with_output(args.output, [&](std::ostream& out) { write_alignment(out, s.result.alignment, p1.labels, p2.labels); });

    ScoreRow row;
    row.instance = args.instance.empty() ? sanitize(stem(args.g1) + "-" + stem(args.g2)) : sanitize(args.instance);
    row.method = args.search.mode;
    row.p = args.p;
    row.seed = args.seed;
    row.card = score(s.result.alignment, p1.graph, p2.graph);
    row.wall_ms = args.outputs.no_wall_time ? 0.0 : s.ms;
    row.iterations = static_cast<long long>(s.result.iterations);
    write_card(args.outputs.scorecard, row);
    return 0;
}

struct ScoreArgs {
    std::string g1, g2, alignment, instance, method = "given", scorecard;
    double p = 0.0;
    std::uint64_t seed = 0;
};

int cmd_score(const ScoreArgs& args) {
    ParsedGraph p1 = read_edge_list_file(args.g1);
    ParsedGraph p2 = read_edge_list_file(args.g2);
    Alignment a = load_alignment(args.alignment, p1, p2);
    ScoreRow row;
    row.instance = args.instance.empty() ? sanitize(stem(args.g1) + "-" + stem(args.g2)) : sanitize(args.instance);
    row.method = sanitize(args.method);
    row.p = args.p;
    row.seed = args.seed;
    row.card = score(a, p1.graph, p2.graph);
    write_card(args.scorecard, row);
    return 0;
}

// ---- bench ----------------------------------------------------------------

struct BenchArgs {
    GeneratorFlags gen;
    std::string input;
    std::vector<double> p_grid{0.0, 0.05, 0.10, 0.15, 0.20, 0.25};
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    std::vector<std::string> methods{"naive", "seed"};
    std::string output;
    ExtractFlags extract;
    SearchFlags search;
    bool no_wall_time = false;
};

struct BenchRow {
    ScoreRow row;
    double node_accuracy = 0.0;
};

int cmd_bench(const BenchArgs& args, unsigned threads) {
    const std::optional<int> iterations = args.extract.iteration_count();
    std::optional<ParsedGraph> fixed;
    std::string instance;
    if (!args.input.empty()) {
        fixed = read_edge_list_file(args.input);
        instance = sanitize(stem(args.input));
    } else {
        args.gen.q();  // rejects inconsistent flags early
        instance = args.gen.instance();
    }

    std::vector<BenchRow> rows;
    std::map<std::uint64_t, Graph> graphs;
    for (double p : args.p_grid) {
        for (std::uint64_t seed : args.seeds) {
            if (!fixed && !graphs.count(seed)) graphs.emplace(seed, args.gen.build(seed));
            const Graph& g = fixed ? fixed->graph : graphs.at(seed);
            NoisyCopy noisy = perturb(g, {p, seed});

            SimilarityRun run = run_similarity(g, noisy.graph, {iterations, threads});
            double sim_ms = run.threshold_ms;
            for (double x : run.iteration_ms) sim_ms += x;

            for (const std::string& method : args.methods) {
                Extracted ex = extract(method, run.state, g, noisy.graph, args.extract.delta);
                BenchRow r;
                r.row.instance = instance;
                r.row.method = method;
                r.row.p = p;
                r.row.seed = seed;
                r.row.iterations = run.t_max;
                double ms = sim_ms + ex.ms;
                Alignment final_alignment = ex.alignment;
                if (args.search.mode != "none") {
                    SearchConfig cfg = args.search.cfg;
                    cfg.rng_seed = seed;
                    Searched s = search(args.search.mode, ex.alignment, g, noisy.graph, cfg, false);
                    final_alignment = s.result.alignment;
                    r.row.method += "+" + args.search.mode;
                    r.row.iterations = static_cast<long long>(s.result.iterations);
                    ms += s.ms;
                }
                r.row.card = score(final_alignment, g, noisy.graph);
                r.row.wall_ms = args.no_wall_time ? 0.0 : ms;
                std::size_t hits = 0;
                for (NodeId i = 0; i < g.node_count(); ++i) hits += final_alignment.target(i) == noisy.truth.permutation[i];
                r.node_accuracy = static_cast<double>(hits) / static_cast<double>(g.node_count());
                std::fprintf(stderr, "p=%g seed=%llu %s ec=%.4f %.1f ms\n", p, static_cast<unsigned long long>(seed),
                             r.row.method.c_str(), r.row.card.ec, ms);
                rows.push_back(std::move(r));
            }
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.row.p, a.row.seed, a.row.method) < std::tie(b.row.p, b.row.seed, b.row.method);
    });
    with_output(args.output, [&](std::ostream& out) {
        out << kScoreHeader << ",node_accuracy\n";
        char buf[32];
        for (const BenchRow& r : rows) {
            write_score_row(out, r.row);
            std::snprintf(buf, sizeof buf, ",%.10g\n", r.node_accuracy);
            out << buf;
        }
    });
    return 0;
}

// ---- config ---------------------------------------------------------------

// key=value lines fill in options of the active subcommand (or global ones)
// that were not given on the command line.
void apply_config(CLI::App& app, CLI::App* sub, const std::string& path) {
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_file(path);
    } catch (const CLI::Error& e) {
        throw ParseError(std::string("config: ") + e.what(), 0);
    }
    for (const CLI::ConfigItem& item : items) {
        const std::string key = "--" + item.name;
        if (item.name == "config") throw ParseError("config: nested config files are not supported", 0);
        CLI::Option* opt = sub->get_option_no_throw(key);
        if (!opt) opt = app.get_option_no_throw(key);
        if (!opt) throw ParseError("config: unknown key '" + item.name + "' for " + sub->get_name(), 0);
        if (opt->count() > 0) continue;  // flags win
        try {
            for (const std::string& v : item.inputs) opt->add_result(v);
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw ParseError("config: " + item.name + ": " + e.what(), 0);
        }
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network alignment by iterative neighbor similarity, with mismatch-focused local search"};
    app.require_subcommand(1);
    app.fallthrough();
    int threads_flag = 0;
    app.add_option("--threads", threads_flag, "worker threads (default: ELRUNA_THREADS, then all cores)");

    std::map<CLI::App*, std::string> configs;
    auto with_config = [&](CLI::App* sub) {
        sub->add_option("--config", configs[sub], "key=value defaults; command line flags win");
        return sub;
    };

    // generate
    GeneratorFlags gen;
    std::uint64_t gen_seed = 0;
    std::string gen_out;
    CLI::App* generate = with_config(app.add_subcommand("generate", "write a BA or HK random graph"));
    gen.attach_to(generate);
    generate->add_option("--seed", gen_seed)->capture_default_str();
    generate->add_option("--output", gen_out, "edge list path (default stdout)");

    // perturb
    std::string pert_in, pert_out, pert_truth;
    double pert_p = 0.0;
    std::uint64_t pert_seed = 0;
    CLI::App* perturb_cmd = with_config(app.add_subcommand("perturb", "relabel a graph and add noise edges"));
    perturb_cmd->add_option("--input", pert_in, "edge list")->required();
    perturb_cmd->add_option("--p", pert_p, "added edges as a fraction of the edge count")->required();
    perturb_cmd->add_option("--seed", pert_seed)->capture_default_str();
    perturb_cmd->add_option("--output", pert_out, "edge list path (default stdout)");
    perturb_cmd->add_option("--truth", pert_truth, "ground truth TSV path");

    // align
    AlignArgs align_args;
    CLI::App* align = with_config(app.add_subcommand("align", "align g1 into g2"));
    align->add_option("--g1", align_args.g1, "smaller graph edge list")->required();
    align->add_option("--g2", align_args.g2, "larger graph edge list")->required();
    align->add_option("--output", align_args.output, "alignment TSV path")->required();
    align->add_option("--instance", align_args.instance, "instance name for the scorecard");
    align->add_option("--p", align_args.p, "noise level recorded in the scorecard")->capture_default_str();
    align->add_option("--seed", align_args.seed, "local search seed")->capture_default_str();
    align->add_option("--similarity-dump", align_args.dump, "binary dump of the final similarity matrix");
    align_args.extract.attach(align);
    align_args.search.attach(align, "none");
    align_args.outputs.attach(align);

    // refine
    RefineArgs refine_args;
    CLI::App* refine = with_config(app.add_subcommand("refine", "run local search on an existing alignment"));
    refine->add_option("--g1", refine_args.g1)->required();
    refine->add_option("--g2", refine_args.g2)->required();
    refine->add_option("--alignment", refine_args.alignment, "alignment TSV")->required();
    refine->add_option("--output", refine_args.output, "refined alignment TSV path")->required();
    refine->add_option("--instance", refine_args.instance);
    refine->add_option("--p", refine_args.p)->capture_default_str();
    refine->add_option("--seed", refine_args.seed)->capture_default_str();
    refine_args.search.attach(refine, "rawsem");
    refine->get_option("--local-search")->check(CLI::IsMember({"baseline", "rawsem"}));
    refine_args.outputs.attach(refine);

    // score
    ScoreArgs score_args;
    CLI::App* score_cmd = with_config(app.add_subcommand("score", "score an alignment"));
    score_cmd->add_option("--g1", score_args.g1)->required();
    score_cmd->add_option("--g2", score_args.g2)->required();
    score_cmd->add_option("--alignment", score_args.alignment)->required();
    score_cmd->add_option("--instance", score_args.instance);
    score_cmd->add_option("--method", score_args.method)->capture_default_str();
    score_cmd->add_option("--p", score_args.p)->capture_default_str();
    score_cmd->add_option("--seed", score_args.seed)->capture_default_str();
    score_cmd->add_option("--scorecard", score_args.scorecard, "CSV path (default stdout)");

    // bench
    BenchArgs bench_args;
    CLI::App* bench = with_config(app.add_subcommand("bench", "noise sweep over generated or given graphs"));
    bench_args.gen.attach_to(bench);
    bench->add_option("--input", bench_args.input, "use this graph instead of generating one per seed");
    bench->add_option("--p-grid", bench_args.p_grid, "noise levels")->delimiter(',')->capture_default_str();
    bench->add_option("--seeds", bench_args.seeds, "seeds")->delimiter(',')->capture_default_str();
    bench->add_option("--methods", bench_args.methods, "extraction methods")
        ->delimiter(',')
        ->check(CLI::IsMember({"naive", "seed"}))
        ->capture_default_str();
    bench->add_option("--output", bench_args.output, "CSV path (default stdout)");
    bench->add_flag("--no-wall-time", bench_args.no_wall_time, "write 0 for wall_ms");
    bench_args.extract.add_common(bench);
    bench_args.search.attach(bench, "none");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        if (!configs[sub].empty()) apply_config(app, sub, configs[sub]);
        const unsigned threads = resolve_threads(threads_flag);

        if (sub == generate) return cmd_generate(gen, gen_seed, gen_out);
        if (sub == perturb_cmd) return cmd_perturb(pert_in, pert_p, pert_seed, pert_out, pert_truth);
        if (sub == align) return cmd_align(align_args, threads);
        if (sub == refine) return cmd_refine(refine_args);
        if (sub == score_cmd) return cmd_score(score_args);
        if (sub == bench) return cmd_bench(bench_args, threads);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
