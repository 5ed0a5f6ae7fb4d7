#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mdlbb {

using NodeId = std::uint32_t;
using EdgeId = std::size_t;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class WeightKind { Integer, Real };

/*
 * Immutable weighted edge list over dense node ids 0..N-1.
 *
 * Construction merges multi-edges by summing their weights and stores the
 * edges sorted by (src, dst). Undirected edges are stored with src <= dst.
 * Labels are optional; without them a node's label is its decimal id.
 */
class WeightedGraph {
public:
    WeightedGraph() = default;
    WeightedGraph(std::size_t num_nodes, std::vector<Edge> edges, bool directed,
                  WeightKind kind = WeightKind::Integer,
                  std::vector<std::string> labels = {});

    std::size_t num_nodes() const noexcept { return num_nodes_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    double total_weight() const noexcept { return total_weight_; }
    bool directed() const noexcept { return directed_; }
    WeightKind weight_kind() const noexcept { return kind_; }

    std::span<const Edge> edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[e]; }

    std::string label(NodeId v) const;
    bool has_labels() const noexcept { return !labels_.empty(); }
    std::span<const std::string> labels() const noexcept { return labels_; }

    /// Index of the edge (src, dst); for undirected graphs either orientation matches.
    std::optional<EdgeId> find_edge(NodeId src, NodeId dst) const;

    friend bool operator==(const WeightedGraph&, const WeightedGraph&) = default;

private:
    std::size_t num_nodes_ = 0;
    std::vector<Edge> edges_;
    bool directed_ = true;
    WeightKind kind_ = WeightKind::Integer;
    std::vector<std::string> labels_;
    double total_weight_ = 0.0;
};

struct ParseOptions {
    bool directed = true;
    WeightKind weight_kind = WeightKind::Integer;
    /// Round real weights to the nearest integer (integer graphs only).
    bool round_weights = false;
};

/*
 * Parse "src dst weight" lines (tab or space separated). Lines starting with
 * '#' are comments, except a "#nodes" header written by write_edge_list,
 * which pre-assigns dense ids so that isolated nodes and id order survive a
 * round trip. Other labels get ids in first-appearance order.
 */
WeightedGraph parse_edge_list(std::istream& in, const ParseOptions& opts = {});
WeightedGraph parse_edge_list(std::string_view text, const ParseOptions& opts = {});
WeightedGraph read_edge_list(const std::string& path, const ParseOptions& opts = {});

/// "src<TAB>dst<TAB>weight" per edge with original labels, sorted by (src, dst) id.
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void write_edge_list(const std::string& path, const WeightedGraph& g);
std::string format_weight(double w);

/// Each undirected edge becomes two arcs of equal weight; self-loops appear once.
WeightedGraph directed_view(const WeightedGraph& g);

/*
 * Edge membership flags over a parent graph plus the summary counts the
 * objectives need. The parent is identified by a fingerprint so that a
 * backbone cannot silently be evaluated against a different graph.
 */
class Backbone {
public:
    Backbone() = default;
    static Backbone empty(const WeightedGraph& parent);
    static Backbone full(const WeightedGraph& parent);
    static Backbone from_flags(const WeightedGraph& parent, std::vector<std::uint8_t> flags);
    static Backbone from_edges(const WeightedGraph& parent, std::span<const EdgeId> edges);

    std::size_t edge_count() const noexcept { return edge_count_; }
    double weight_sum() const noexcept { return weight_sum_; }
    std::size_t parent_edges() const noexcept { return flags_.size(); }
    bool contains(EdgeId e) const { return flags_[e] != 0; }
    std::span<const std::uint8_t> flags() const noexcept { return flags_; }
    std::vector<EdgeId> edge_ids() const;

    /// Throws DomainError unless this backbone was built over a graph shaped like g.
    void check_parent(const WeightedGraph& g) const;

    friend bool operator==(const Backbone&, const Backbone&) = default;

private:
    std::vector<std::uint8_t> flags_;
    std::size_t edge_count_ = 0;
    double weight_sum_ = 0.0;
    double parent_weight_ = 0.0;
};

/// Per-node degree and strength of a backbone, in the directed-view sense.
struct NodeTotals {
    std::vector<std::size_t> degree;
    std::vector<double> strength;
};
NodeTotals node_totals(const WeightedGraph& g);
NodeTotals node_totals(const WeightedGraph& g, const Backbone& bb);

/// Graph on the same node set containing only the backbone edges.
WeightedGraph backbone_subgraph(const WeightedGraph& g, const Backbone& bb);

/*
 * Map arcs (orientations of parent edges) onto an undirected parent. A parent
 * edge is a member iff at least one orientation is present.
 */
Backbone collapse_to_undirected(std::span<const Edge> arcs, const WeightedGraph& parent);

struct NeighborhoodView {
    NodeId node = 0;
    std::span<const EdgeId> edges; // weight descending, ties by dst ascending
    std::size_t degree = 0;
    double strength = 0.0;
};

/// CSR out-neighborhoods of a directed graph.
class Neighborhoods {
public:
    explicit Neighborhoods(const WeightedGraph& g);

    std::size_t size() const noexcept { return offsets_.size() - 1; }
    NeighborhoodView operator[](NodeId v) const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<EdgeId> order_;
    std::vector<double> strength_;
};

Neighborhoods neighborhoods(const WeightedGraph& g);

/// Edge ids sorted by weight descending, ties by (src, dst) ascending.
std::vector<EdgeId> edges_by_weight_desc(const WeightedGraph& g);

} // namespace mdlbb
