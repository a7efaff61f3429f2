#include "elruna/alignment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>

#include "elruna/errors.hpp"

namespace elruna {

Alignment Alignment::from_forward(std::vector<NodeId> forward, std::size_t n2) {
    Alignment a(forward.size(), n2);
    for (std::size_t i = 0; i < forward.size(); ++i) {
        NodeId u = forward[i];
        if (u == kNoNode) continue;
        if (u >= n2) throw PreconditionError("alignment target out of range");
        if (a.inverse_[u] != kNoNode) throw PreconditionError("alignment is not injective");
        a.assign(static_cast<NodeId>(i), u);
    }
    return a;
}

bool Alignment::is_total() const {
    return std::none_of(forward_.begin(), forward_.end(), [](NodeId u) { return u == kNoNode; });
}

void Alignment::assign(NodeId i, NodeId u) {
    if (forward_[i] != kNoNode || inverse_[u] != kNoNode) throw PreconditionError("node already aligned");
    forward_[i] = u;
    inverse_[u] = i;
}

void Alignment::swap_targets(NodeId i, NodeId j) {
    std::swap(forward_[i], forward_[j]);
    if (forward_[i] != kNoNode) inverse_[forward_[i]] = i;
    if (forward_[j] != kNoNode) inverse_[forward_[j]] = j;
}

void Alignment::permute_block(std::span<const NodeId> nodes, std::span<const NodeId> new_targets) {
    if (nodes.size() != new_targets.size()) throw PreconditionError("block size mismatch");
    std::vector<NodeId> before, after(new_targets.begin(), new_targets.end());
    for (NodeId i : nodes) before.push_back(forward_[i]);
    std::sort(before.begin(), before.end());
    std::sort(after.begin(), after.end());
    if (before != after || std::adjacent_find(after.begin(), after.end()) != after.end()) {
        throw PreconditionError("block targets are not a permutation");
    }
    for (NodeId i : nodes) {
        if (forward_[i] != kNoNode) inverse_[forward_[i]] = kNoNode;
    }
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        forward_[nodes[k]] = new_targets[k];
        inverse_[new_targets[k]] = nodes[k];
    }
}

Alignment naive_align(const SimilarityState& s) {
    if (s.rows > s.cols) throw PreconditionError("extraction needs rows <= cols");

    std::vector<std::size_t> order(s.rows * s.cols);
    std::iota(order.begin(), order.end(), std::size_t{0});
    // Flat index order equals (i, u) order, so a stable sort keeps the tie-break.
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.values[a] > s.values[b]; });

    Alignment a(s.rows, s.cols);
    std::size_t aligned = 0;
    for (std::size_t idx : order) {
        if (aligned == s.rows) break;
        auto i = static_cast<NodeId>(idx / s.cols);
        auto u = static_cast<NodeId>(idx % s.cols);
        if (a.target(i) != kNoNode || a.source(u) != kNoNode) continue;
        a.assign(i, u);
        ++aligned;
    }
    return a;
}

namespace {

struct Entry {
    double value;
    NodeId i;
    NodeId u;
};

// Max-heap order: larger value first, then smaller (i, u).
struct EntryBelow {
    bool operator()(const Entry& a, const Entry& b) const {
        if (a.value != b.value) return a.value < b.value;
        if (a.i != b.i) return a.i > b.i;
        return a.u > b.u;
    }
};

}  // namespace

Alignment seed_and_extend_align(const SimilarityState& s, const Graph& g1, const Graph& g2, double delta,
                                SeedExtendStats* stats) {
    if (!(delta > 0.0)) throw PreconditionError("seed-and-extend needs delta > 0");
    if (s.rows > s.cols) throw PreconditionError("extraction needs rows <= cols");
    if (g1.node_count() != s.rows || g2.node_count() != s.cols) {
        throw PreconditionError("similarity shape does not match the graphs");
    }

    std::vector<double> work = s.values;
    std::vector<Entry> heap;
    heap.reserve(work.size());
    for (std::size_t idx = 0; idx < work.size(); ++idx) {
        heap.push_back({work[idx], static_cast<NodeId>(idx / s.cols), static_cast<NodeId>(idx % s.cols)});
    }
    std::priority_queue<Entry, std::vector<Entry>, EntryBelow> queue(EntryBelow{}, std::move(heap));

    SeedExtendStats st;
    st.inserted = work.size();
    Alignment a(s.rows, s.cols);
    std::size_t aligned = 0;
    while (aligned < s.rows && !queue.empty()) {
        Entry e = queue.top();
        queue.pop();
        ++st.extracted;
        if (a.target(e.i) != kNoNode || a.source(e.u) != kNoNode) continue;
        if (e.value != work[std::size_t{e.i} * s.cols + e.u]) {
            ++st.stale;
            continue;
        }
        a.assign(e.i, e.u);
        ++aligned;

        for (NodeId j : g1.neighbors(e.i)) {
            if (a.target(j) != kNoNode) continue;
            double* row = work.data() + std::size_t{j} * s.cols;
            for (NodeId v : g2.neighbors(e.u)) {
                if (a.source(v) != kNoNode) continue;
                row[v] += delta;
                queue.push({row[v], j, v});
                ++st.inserted;
                ++st.boosts;
            }
        }
    }
    if (stats) *stats = st;
    return a;
}

double default_seed_delta(const SimilarityState& s) {
    double sum = 0.0;
    std::size_t nonzero = 0;
    for (double x : s.values) {
        if (x != 0.0) {
            sum += x;
            ++nonzero;
        }
    }
    if (nonzero == 0) return 1.0 / (static_cast<double>(s.rows) * static_cast<double>(s.cols));
    return sum / static_cast<double>(nonzero);
}

bool label_less(const std::string& a, const std::string& b) {
    long long x = 0, y = 0;
    auto [pa, ea] = std::from_chars(a.data(), a.data() + a.size(), x);
    auto [pb, eb] = std::from_chars(b.data(), b.data() + b.size(), y);
    const bool na = ea == std::errc{} && pa == a.data() + a.size();
    const bool nb = eb == std::errc{} && pb == b.data() + b.size();
    if (na && nb && x != y) return x < y;
    if (na != nb) return na;  // numbers before words
    return a < b;
}

void write_alignment(std::ostream& out, const Alignment& a, const LabelMap& l1, const LabelMap& l2,
                     const SimilarityState* s) {
    std::vector<NodeId> order;
    for (std::size_t i = 0; i < a.source_size(); ++i) {
        if (a.target(static_cast<NodeId>(i)) != kNoNode) order.push_back(static_cast<NodeId>(i));
    }
    std::sort(order.begin(), order.end(),
              [&](NodeId x, NodeId y) { return label_less(l1.label(x), l1.label(y)); });

    char buf[64];
    for (NodeId i : order) {
        const NodeId u = a.target(i);
        std::snprintf(buf, sizeof buf, "%.17g", s ? s->at(i, u) : 0.0);
        out << l1.label(i) << '\t' << l2.label(u) << '\t' << buf << '\n';
    }
}

Alignment read_alignment(std::istream& in, const LabelMap& l1, const LabelMap& l2) {
    std::vector<NodeId> forward(l1.size(), kNoNode);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream tokens(line);
        std::string a, b;
        if (!(tokens >> a >> b)) throw ParseError("expected g1 and g2 labels", line_no);
        NodeId i = l1.find(a), u = l2.find(b);
        if (i == kNoNode || u == kNoNode) throw ParseError("unknown node label", line_no);
        if (forward[i] != kNoNode) throw ParseError("g1 node aligned twice", line_no);
        forward[i] = u;
    }
    try {
        return Alignment::from_forward(std::move(forward), l2.size());
    } catch (const PreconditionError& e) {
        throw ParseError(e.what(), 0);
    }
}

}  // namespace elruna
