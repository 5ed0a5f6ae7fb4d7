#include "mdlbb/baselines.hpp"

#include "mdlbb/error.hpp"
#include "mdlbb/parallel.hpp"
#include "sampling.hpp"
#include "union_find.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <random>

namespace mdlbb {

double disparity_pvalue(double w, double s, std::size_t k) {
    if (k == 0) throw DomainError("disparity p-value needs degree >= 1");
    if (!(w > 0.0) || !(s > 0.0)) throw DomainError("disparity p-value needs positive weight and strength");
    // Strengths are floating sums; allow for their rounding.
    if (w > s * (1.0 + 1e-12)) throw DomainError("edge weight exceeds node strength");
    if (k == 1) return 1.0;
    const double x = std::max(0.0, 1.0 - w / s);
    return std::pow(x, double(k - 1));
}

std::vector<double> disparity_edge_pvalues(const WeightedGraph& g) {
    const auto totals = node_totals(g);
    const auto edges = g.edges();
    std::vector<double> p(edges.size());
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        double v = disparity_pvalue(e.weight, totals.strength[e.src], totals.degree[e.src]);
        if (!g.directed() && e.dst != e.src)
            v = std::min(v, disparity_pvalue(e.weight, totals.strength[e.dst], totals.degree[e.dst]));
        p[i] = v;
    }
    return p;
}

Backbone disparity_filter(const WeightedGraph& g, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("alpha must lie in (0, 1)");
    const auto p = disparity_edge_pvalues(g);
    std::vector<std::uint8_t> flags(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) flags[i] = p[i] < alpha;
    return Backbone::from_flags(g, std::move(flags));
}

Backbone disparity_filter_top_e(const WeightedGraph& g, std::size_t e_target) {
    if (e_target > g.num_edges())
        throw DomainError("e_target " + std::to_string(e_target) + " exceeds edge count " +
                          std::to_string(g.num_edges()));
    const auto p = disparity_edge_pvalues(g);
    const auto edges = g.edges();
    std::vector<EdgeId> order(p.size());
    std::iota(order.begin(), order.end(), EdgeId{0});
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        if (p[a] != p[b]) return p[a] < p[b];
        return edges[a].weight > edges[b].weight;
    });
    return Backbone::from_edges(g, std::span<const EdgeId>(order.data(), e_target));
}

namespace {

struct Adjacency {
    std::vector<std::size_t> offsets;
    std::vector<NodeId> nbr;
    std::vector<EdgeId> edge;
    std::vector<double> length;
};

Adjacency distance_adjacency(const WeightedGraph& g) {
    const std::size_t n = g.num_nodes();
    const auto edges = g.edges();
    Adjacency a;
    a.offsets.assign(n + 1, 0);
    for (const auto& e : edges) {
        if (e.src == e.dst) continue;
        ++a.offsets[e.src + 1];
        if (!g.directed()) ++a.offsets[e.dst + 1];
    }
    std::partial_sum(a.offsets.begin(), a.offsets.end(), a.offsets.begin());
    a.nbr.resize(a.offsets.back());
    a.edge.resize(a.offsets.back());
    a.length.resize(a.offsets.back());
    auto pos = a.offsets;
    auto put = [&](NodeId from, NodeId to, EdgeId id, double len) {
        const auto k = pos[from]++;
        a.nbr[k] = to;
        a.edge[k] = id;
        a.length[k] = len;
    };
    for (EdgeId i = 0; i < edges.size(); ++i) {
        const auto& e = edges[i];
        if (e.src == e.dst) continue;
        put(e.src, e.dst, i, 1.0 / e.weight);
        if (!g.directed()) put(e.dst, e.src, i, 1.0 / e.weight);
    }
    return a;
}

constexpr double kPathTieTolerance = 1e-12;

// Adds one to count[e] for every edge e of the shortest-path tree rooted at root.
void accumulate_tree(const Adjacency& a, NodeId root, std::vector<double>& dist, std::vector<NodeId>& parent,
                     std::vector<EdgeId>& parent_edge, std::vector<NodeId>& touched,
                     std::vector<std::uint64_t>& count) {
    constexpr auto none = std::numeric_limits<NodeId>::max();
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[root] = 0.0;
    touched.push_back(root);
    heap.push({0.0, root});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (d > dist[u]) continue;
        for (auto k = a.offsets[u]; k < a.offsets[u + 1]; ++k) {
            const NodeId v = a.nbr[k];
            if (v == root) continue;
            const double nd = d + a.length[k];
            const double cur = dist[v];
            if (cur == std::numeric_limits<double>::infinity()) {
                touched.push_back(v);
                dist[v] = nd;
                parent[v] = u;
                parent_edge[v] = a.edge[k];
                heap.push({nd, v});
            } else if (std::abs(nd - cur) <= kPathTieTolerance * cur) {
                if (u < parent[v]) {
                    parent[v] = u;
                    parent_edge[v] = a.edge[k];
                }
                if (nd < cur) {
                    dist[v] = nd;
                    heap.push({nd, v});
                }
            } else if (nd < cur) {
                dist[v] = nd;
                parent[v] = u;
                parent_edge[v] = a.edge[k];
                heap.push({nd, v});
            }
        }
    }
    for (auto v : touched) {
        if (v != root) ++count[parent_edge[v]];
        dist[v] = std::numeric_limits<double>::infinity();
        parent[v] = none;
    }
    touched.clear();
}

} // namespace

SalienceTable edge_salience(const WeightedGraph& g, const SalienceOptions& opts) {
    const std::size_t n = g.num_nodes();
    std::vector<std::uint32_t> roots;
    if (n <= opts.sample_cap) {
        roots.resize(n);
        std::iota(roots.begin(), roots.end(), 0u);
    } else {
        std::mt19937_64 rng(opts.seed);
        roots = detail::sample_distinct(n, opts.sample_cap, rng);
    }
    const auto adj = distance_adjacency(g);

    const unsigned threads = std::max(1u, opts.threads);
    std::vector<std::vector<std::uint64_t>> partial(threads);
    const std::size_t chunk = (roots.size() + threads - 1) / std::max<std::size_t>(1, threads);
    parallel_for_chunks(threads, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t t = lo; t < hi; ++t) {
            auto& count = partial[t];
            count.assign(g.num_edges(), 0);
            std::vector<double> dist(n, std::numeric_limits<double>::infinity());
            std::vector<NodeId> parent(n, std::numeric_limits<NodeId>::max());
            std::vector<EdgeId> parent_edge(n, 0);
            std::vector<NodeId> touched;
            const std::size_t b = std::min(roots.size(), t * chunk);
            const std::size_t e = std::min(roots.size(), b + chunk);
            for (std::size_t r = b; r < e; ++r) accumulate_tree(adj, roots[r], dist, parent, parent_edge, touched, count);
        }
    });

    SalienceTable table;
    table.trees_sampled = roots.size();
    table.saliency.assign(g.num_edges(), 0.0);
    if (roots.empty()) return table;
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
        std::uint64_t c = 0;
        for (const auto& part : partial) c += part[i];
        table.saliency[i] = double(c) / double(roots.size());
    }
    return table;
}

Backbone high_salience_skeleton(const WeightedGraph& g, double threshold, const SalienceOptions& opts) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("salience threshold must lie in [0, 1]");
    const auto table = edge_salience(g, opts);
    std::vector<std::uint8_t> flags(g.num_edges());
    for (std::size_t i = 0; i < flags.size(); ++i) flags[i] = table.saliency[i] >= threshold && table.trees_sampled > 0;
    return Backbone::from_flags(g, std::move(flags));
}

namespace {

std::vector<std::uint8_t> touched_nodes(const WeightedGraph& g) {
    std::vector<std::uint8_t> used(g.num_nodes(), 0);
    for (const auto& e : g.edges()) used[e.src] = used[e.dst] = 1;
    return used;
}

} // namespace

std::size_t weak_component_count(const WeightedGraph& g, const Backbone& bb) {
    bb.check_parent(g);
    const auto used = touched_nodes(g);
    detail::UnionFind uf(g.num_nodes());
    std::size_t comps = std::size_t(std::count(used.begin(), used.end(), 1));
    const auto edges = g.edges();
    for (EdgeId i = 0; i < edges.size(); ++i)
        if (bb.contains(i) && uf.unite(edges[i].src, edges[i].dst)) --comps;
    return comps;
}

Backbone percolation_backbone(const WeightedGraph& g) {
    const std::size_t target = weak_component_count(g, Backbone::full(g));
    const auto used = touched_nodes(g);
    std::size_t comps = std::size_t(std::count(used.begin(), used.end(), 1));
    const auto order = edges_by_weight_desc(g);
    const auto edges = g.edges();
    detail::UnionFind uf(g.num_nodes());
    std::vector<std::uint8_t> flags(g.num_edges(), 0);
    std::size_t i = 0;
    while (comps > target && i < order.size()) {
        const double w = edges[order[i]].weight;
        for (; i < order.size() && edges[order[i]].weight == w; ++i) {
            const auto& e = edges[order[i]];
            flags[order[i]] = 1;
            if (uf.unite(e.src, e.dst)) --comps;
        }
    }
    return Backbone::from_flags(g, std::move(flags));
}

} // namespace mdlbb
