#include "mdlbb/graph.hpp"

#include "mdlbb/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace mdlbb {

namespace {

bool is_whole(double w) { return std::isfinite(w) && std::floor(w) == w; }

void validate_weight(double w, WeightKind kind) {
    if (!(w > 0.0) || !std::isfinite(w))
        throw DomainError("edge weights must be positive and finite");
    if (kind == WeightKind::Integer && !is_whole(w))
        throw DomainError("integer graph requires whole-valued weights (got " + format_weight(w) + ")");
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

constexpr std::string_view kNodesHeader = "#nodes";

} // namespace

WeightedGraph::WeightedGraph(std::size_t num_nodes, std::vector<Edge> edges, bool directed,
                             WeightKind kind, std::vector<std::string> labels)
    : num_nodes_(num_nodes), directed_(directed), kind_(kind), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != num_nodes_)
        throw DomainError("label count does not match node count");
    for (auto& e : edges) {
        if (e.src >= num_nodes_ || e.dst >= num_nodes_)
            throw DomainError("edge endpoint out of range");
        validate_weight(e.weight, kind_);
        if (!directed_ && e.src > e.dst) std::swap(e.src, e.dst);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    edges_.reserve(edges.size());
    for (const auto& e : edges) {
        if (!edges_.empty() && edges_.back().src == e.src && edges_.back().dst == e.dst)
            edges_.back().weight += e.weight;
        else
            edges_.push_back(e);
    }
    edges_.shrink_to_fit();
    for (const auto& e : edges_) total_weight_ += e.weight;
}

std::string WeightedGraph::label(NodeId v) const {
    if (labels_.empty()) return std::to_string(v);
    return labels_[v];
}

std::optional<EdgeId> WeightedGraph::find_edge(NodeId src, NodeId dst) const {
    if (!directed_ && src > dst) std::swap(src, dst);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{src, dst},
                               [](const Edge& e, const std::pair<NodeId, NodeId>& key) {
                                   return e.src != key.first ? e.src < key.first : e.dst < key.second;
                               });
    if (it == edges_.end() || it->src != src || it->dst != dst) return std::nullopt;
    return static_cast<EdgeId>(it - edges_.begin());
}

WeightedGraph parse_edge_list(std::istream& in, const ParseOptions& opts) {
    std::unordered_map<std::string, NodeId> ids;
    std::vector<std::string> labels;
    std::vector<Edge> edges;
    auto intern = [&](std::string_view name) {
        auto [it, inserted] = ids.try_emplace(std::string(name), static_cast<NodeId>(labels.size()));
        if (inserted) labels.emplace_back(name);
        return it->second;
    };

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (view.starts_with(kNodesHeader)) {
            if (!edges.empty() || !labels.empty())
                throw ParseError(lineno, "#nodes header must precede all edges");
            auto tokens = split_ws(view.substr(kNodesHeader.size()));
            for (auto t : tokens) {
                if (ids.contains(std::string(t))) throw ParseError(lineno, "duplicate node label in #nodes header");
                intern(t);
            }
            continue;
        }
        auto tokens = split_ws(view);
        if (tokens.empty() || tokens.front().starts_with('#')) continue;
        if (tokens.size() != 3) throw ParseError(lineno, "expected 'src dst weight'");

        double w = 0.0;
        auto wt = tokens[2];
        auto [ptr, ec] = std::from_chars(wt.data(), wt.data() + wt.size(), w);
        if (ec != std::errc() || ptr != wt.data() + wt.size())
            throw ParseError(lineno, "bad weight '" + std::string(wt) + "'");
        if (!(w > 0.0) || !std::isfinite(w))
            throw DomainError("line " + std::to_string(lineno) + ": weight must be positive");
        if (opts.weight_kind == WeightKind::Integer) {
            if (opts.round_weights) {
                w = std::round(w);
                if (w <= 0.0)
                    throw DomainError("line " + std::to_string(lineno) + ": weight rounds to zero");
            } else if (!is_whole(w)) {
                throw DomainError("line " + std::to_string(lineno) +
                                  ": non-integer weight (use rounding or a real-weight objective)");
            }
        }
        NodeId s = intern(tokens[0]);
        NodeId d = intern(tokens[1]);
        edges.push_back({s, d, w});
    }
    if (edges.empty()) throw DomainError("edge list contains no edges");
    auto n = labels.size();
    return WeightedGraph(n, std::move(edges), opts.directed, opts.weight_kind, std::move(labels));
}

WeightedGraph parse_edge_list(std::string_view text, const ParseOptions& opts) {
    std::istringstream in{std::string(text)};
    return parse_edge_list(in, opts);
}

WeightedGraph read_edge_list(const std::string& path, const ParseOptions& opts) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return parse_edge_list(in, opts);
}

std::string format_weight(double w) {
    if (is_whole(w) && std::fabs(w) < 9.007199254740992e15) {
        return std::to_string(static_cast<long long>(w));
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    return std::string(buf, ptr);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
    out << kNodesHeader;
    for (NodeId v = 0; v < g.num_nodes(); ++v) out << '\t' << g.label(v);
    out << '\n';
    for (const auto& e : g.edges())
        out << g.label(e.src) << '\t' << g.label(e.dst) << '\t' << format_weight(e.weight) << '\n';
}

void write_edge_list(const std::string& path, const WeightedGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    write_edge_list(out, g);
    if (!out) throw std::runtime_error("write failed for " + path);
}

WeightedGraph directed_view(const WeightedGraph& g) {
    if (g.directed()) return g;
    std::vector<Edge> arcs;
    arcs.reserve(2 * g.num_edges());
    for (const auto& e : g.edges()) {
        arcs.push_back(e);
        if (e.src != e.dst) arcs.push_back({e.dst, e.src, e.weight});
    }
    std::vector<std::string> labels(g.labels().begin(), g.labels().end());
    return WeightedGraph(g.num_nodes(), std::move(arcs), true, g.weight_kind(), std::move(labels));
}

Backbone Backbone::empty(const WeightedGraph& parent) {
    return from_flags(parent, std::vector<std::uint8_t>(parent.num_edges(), 0));
}

Backbone Backbone::full(const WeightedGraph& parent) {
    return from_flags(parent, std::vector<std::uint8_t>(parent.num_edges(), 1));
}

Backbone Backbone::from_flags(const WeightedGraph& parent, std::vector<std::uint8_t> flags) {
    if (flags.size() != parent.num_edges())
        throw DomainError("backbone flag count does not match parent edge count");
    Backbone bb;
    bb.flags_ = std::move(flags);
    bb.parent_weight_ = parent.total_weight();
    auto edges = parent.edges();
    for (std::size_t e = 0; e < bb.flags_.size(); ++e) {
        if (bb.flags_[e]) {
            bb.flags_[e] = 1;
            ++bb.edge_count_;
            bb.weight_sum_ += edges[e].weight;
        }
    }
    return bb;
}

Backbone Backbone::from_edges(const WeightedGraph& parent, std::span<const EdgeId> edges) {
    std::vector<std::uint8_t> flags(parent.num_edges(), 0);
    for (auto e : edges) {
        if (e >= flags.size()) throw DomainError("backbone edge id out of range");
        flags[e] = 1;
    }
    return from_flags(parent, std::move(flags));
}

std::vector<EdgeId> Backbone::edge_ids() const {
    std::vector<EdgeId> out;
    out.reserve(edge_count_);
    for (std::size_t e = 0; e < flags_.size(); ++e)
        if (flags_[e]) out.push_back(e);
    return out;
}

void Backbone::check_parent(const WeightedGraph& g) const {
    if (flags_.size() != g.num_edges() || parent_weight_ != g.total_weight())
        throw DomainError("backbone is inconsistent with the supplied graph");
}

namespace {

NodeTotals totals_impl(const WeightedGraph& g, const std::uint8_t* flags) {
    NodeTotals t;
    t.degree.assign(g.num_nodes(), 0);
    t.strength.assign(g.num_nodes(), 0.0);
    auto edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e) {
        if (flags && !flags[e]) continue;
        const auto& ed = edges[e];
        ++t.degree[ed.src];
        t.strength[ed.src] += ed.weight;
        if (!g.directed() && ed.src != ed.dst) {
            ++t.degree[ed.dst];
            t.strength[ed.dst] += ed.weight;
        }
    }
    return t;
}

} // namespace

NodeTotals node_totals(const WeightedGraph& g) { return totals_impl(g, nullptr); }

NodeTotals node_totals(const WeightedGraph& g, const Backbone& bb) {
    bb.check_parent(g);
    return totals_impl(g, bb.flags().data());
}

WeightedGraph backbone_subgraph(const WeightedGraph& g, const Backbone& bb) {
    bb.check_parent(g);
    std::vector<Edge> kept;
    kept.reserve(bb.edge_count());
    auto edges = g.edges();
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (bb.contains(e)) kept.push_back(edges[e]);
    std::vector<std::string> labels(g.labels().begin(), g.labels().end());
    return WeightedGraph(g.num_nodes(), std::move(kept), g.directed(), g.weight_kind(), std::move(labels));
}

Backbone collapse_to_undirected(std::span<const Edge> arcs, const WeightedGraph& parent) {
    if (parent.directed()) throw DomainError("collapse_to_undirected needs an undirected parent");
    std::vector<std::uint8_t> flags(parent.num_edges(), 0);
    for (const auto& a : arcs) {
        auto e = parent.find_edge(a.src, a.dst);
        if (!e) throw DomainError("arc is not an orientation of any parent edge");
        flags[*e] = 1;
    }
    return Backbone::from_flags(parent, std::move(flags));
}

Neighborhoods::Neighborhoods(const WeightedGraph& g) {
    if (!g.directed()) throw DomainError("neighborhoods need a directed graph; use directed_view");
    auto edges = g.edges();
    offsets_.assign(g.num_nodes() + 1, 0);
    for (const auto& e : edges) ++offsets_[e.src + 1];
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    // Edges are stored sorted by (src, dst), so each out-neighborhood is contiguous
    // and already in dst order; a stable sort by weight keeps the dst tie order.
    order_.resize(edges.size());
    std::iota(order_.begin(), order_.end(), EdgeId{0});
    strength_.assign(g.num_nodes(), 0.0);
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        auto first = order_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
        auto last = order_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
        std::stable_sort(first, last, [&](EdgeId a, EdgeId b) { return edges[a].weight > edges[b].weight; });
        for (auto it = first; it != last; ++it) strength_[v] += edges[*it].weight;
    }
}

NeighborhoodView Neighborhoods::operator[](NodeId v) const {
    auto lo = offsets_[v];
    auto hi = offsets_[v + 1];
    return {v, std::span<const EdgeId>(order_.data() + lo, hi - lo), hi - lo, strength_[v]};
}

Neighborhoods neighborhoods(const WeightedGraph& g) { return Neighborhoods(g); }

std::vector<EdgeId> edges_by_weight_desc(const WeightedGraph& g) {
    auto edges = g.edges();
    std::vector<std::pair<double, EdgeId>> keyed(edges.size());
    for (std::size_t e = 0; e < edges.size(); ++e) keyed[e] = {-edges[e].weight, e};
    // Edge ids follow (src, dst) order, so sorting on (-weight, id) yields the tie rule.
    std::sort(keyed.begin(), keyed.end());
    std::vector<EdgeId> out(edges.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) out[i] = keyed[i].second;
    return out;
}

} // namespace mdlbb
