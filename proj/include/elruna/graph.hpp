#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace elruna {

using NodeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);

struct Edge {
    NodeId u;
    NodeId v;

    friend bool operator==(const Edge&, const Edge&) = default;
};

// Counts of input edges that were discarded while building a graph.
struct BuildReport {
    std::size_t duplicates = 0;
    std::size_t self_loops = 0;
};

/**
 * Immutable undirected simple graph.
 *
 * Adjacency is stored in CSR form with each neighbor list sorted ascending.
 * The edge list keeps the orientation and order in which each edge was first
 * seen, so an edge list written back out matches its source.
 */
class Graph {
public:
    Graph() = default;

    /// Builds a graph on nodes [0, node_count). Self-loops and repeated edges
    /// (in either orientation) are dropped and counted in @a report.
    static Graph from_edges(std::size_t node_count, std::span<const Edge> edges,
                            BuildReport* report = nullptr);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    std::span<const NodeId> neighbors(NodeId u) const noexcept {
        return {neighbors_.data() + offsets_[u], neighbors_.data() + offsets_[u + 1]};
    }

    std::size_t degree(NodeId u) const noexcept { return offsets_[u + 1] - offsets_[u]; }

    bool has_edge(NodeId u, NodeId v) const noexcept;

    std::span<const Edge> edges() const noexcept { return edges_; }

    friend bool operator==(const Graph& a, const Graph& b) {
        return a.offsets_ == b.offsets_ && a.neighbors_ == b.neighbors_;
    }

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<Edge> edges_;
};

// Original node labels of a parsed graph, indexed by dense id.
class LabelMap {
public:
    LabelMap() = default;

    // Labels "0", "1", ..., "n-1".
    static LabelMap identity(std::size_t n);

    NodeId intern(std::string_view label);
    NodeId find(std::string_view label) const;  // kNoNode if absent

    const std::string& label(NodeId id) const { return labels_[id]; }
    std::size_t size() const noexcept { return labels_.size(); }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> ids_;
};

struct ParsedGraph {
    Graph graph;
    LabelMap labels;
    BuildReport report;
};

// Whitespace-separated edge list; '#' and '%' lines are comments.
// Throws ParseError on a line without exactly two tokens or when no edge is read.
ParsedGraph parse_edge_list(std::istream& in);
ParsedGraph parse_edge_list(std::string_view text);
ParsedGraph read_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, const Graph& g, const LabelMap& labels);
void write_edge_list(std::ostream& out, const Graph& g);

// BFS hop distances from @a source; unreachable nodes get -1.
std::vector<int> bfs_distances(const Graph& g, NodeId source);

/// Largest eccentricity over all connected components, floored at 1 so an
/// edgeless graph still yields a usable iteration budget.
int diameter(const Graph& g);

struct InducedSubgraph {
    Graph graph;
    std::vector<NodeId> to_parent;  // subgraph id -> parent id
    std::vector<NodeId> to_sub;     // parent id -> subgraph id or kNoNode
};

// Nodes keep the relative order of @a keep. Throws PreconditionError if keep is
// empty, repeats a node, or names a node outside the graph.
InducedSubgraph induced_subgraph(const Graph& g, std::span<const NodeId> keep);

}  // namespace elruna
