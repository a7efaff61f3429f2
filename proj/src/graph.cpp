#include "elruna/graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "elruna/errors.hpp"

namespace elruna {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

Graph Graph::from_edges(std::size_t node_count, std::span<const Edge> edges, BuildReport* report) {
    Graph g;
    BuildReport local;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    g.edges_.reserve(edges.size());

    std::vector<std::size_t> degree(node_count, 0);
    for (const Edge& e : edges) {
        if (e.u >= node_count || e.v >= node_count) {
            throw PreconditionError("edge endpoint out of range");
        }
        if (e.u == e.v) {
            ++local.self_loops;
            continue;
        }
        if (!seen.insert(edge_key(e.u, e.v)).second) {
            ++local.duplicates;
            continue;
        }
        g.edges_.push_back(e);
        ++degree[e.u];
        ++degree[e.v];
    }

    g.offsets_.assign(node_count + 1, 0);
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
    g.neighbors_.resize(g.offsets_.back());

    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (const Edge& e : g.edges_) {
        g.neighbors_[fill[e.u]++] = e.v;
        g.neighbors_[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < node_count; ++i) {
        std::sort(g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
                  g.neighbors_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
    }

    if (report) *report = local;
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const noexcept {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto adj = neighbors(u);
    return std::binary_search(adj.begin(), adj.end(), v);
}

LabelMap LabelMap::identity(std::size_t n) {
    LabelMap map;
    for (std::size_t i = 0; i < n; ++i) map.intern(std::to_string(i));
    return map;
}

NodeId LabelMap::intern(std::string_view label) {
    auto [it, inserted] = ids_.try_emplace(std::string(label), static_cast<NodeId>(labels_.size()));
    if (inserted) labels_.emplace_back(label);
    return it->second;
}

NodeId LabelMap::find(std::string_view label) const {
    auto it = ids_.find(std::string(label));
    return it == ids_.end() ? kNoNode : it->second;
}

ParsedGraph parse_edge_list(std::istream& in) {
    ParsedGraph parsed;
    std::vector<Edge> edges;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#' || line[first] == '%') continue;

        std::istringstream tokens(line);
        std::string a, b, extra;
        if (!(tokens >> a >> b) || (tokens >> extra)) {
            throw ParseError("expected two node labels", line_no);
        }
        edges.push_back({parsed.labels.intern(a), parsed.labels.intern(b)});
    }
    if (parsed.labels.size() == 0) throw ParseError("edge list is empty", 0);

    parsed.graph = Graph::from_edges(parsed.labels.size(), edges, &parsed.report);
    return parsed;
}

ParsedGraph parse_edge_list(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_edge_list(in);
}

ParsedGraph read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path, 0);
    return parse_edge_list(in);
}

void write_edge_list(std::ostream& out, const Graph& g, const LabelMap& labels) {
    for (const Edge& e : g.edges()) out << labels.label(e.u) << ' ' << labels.label(e.v) << '\n';
}

void write_edge_list(std::ostream& out, const Graph& g) {
    for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

std::vector<int> bfs_distances(const Graph& g, NodeId source) {
    std::vector<int> dist(g.node_count(), -1);
    std::deque<NodeId> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        NodeId u = queue.front();
        queue.pop_front();
        for (NodeId v : g.neighbors(u)) {
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

int diameter(const Graph& g) {
    int best = 1;
    const auto n = static_cast<NodeId>(g.node_count());
    for (NodeId s = 0; s < n; ++s) {
        if (g.degree(s) == 0) continue;
        for (int d : bfs_distances(g, s)) best = std::max(best, d);
    }
    return best;
}

InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeId> keep) {
    if (keep.empty()) throw PreconditionError("induced subgraph of an empty node set");

    InducedSubgraph sub;
    sub.to_sub.assign(g.node_count(), kNoNode);
    sub.to_parent.assign(keep.begin(), keep.end());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        NodeId u = keep[i];
        if (u >= g.node_count()) throw PreconditionError("induced subgraph node out of range");
        if (sub.to_sub[u] != kNoNode) throw PreconditionError("induced subgraph node repeated");
        sub.to_sub[u] = static_cast<NodeId>(i);
    }

    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        NodeId a = sub.to_sub[e.u], b = sub.to_sub[e.v];
        if (a != kNoNode && b != kNoNode) edges.push_back({a, b});
    }
    sub.graph = Graph::from_edges(keep.size(), edges);
    return sub;
}

}  // namespace elruna
