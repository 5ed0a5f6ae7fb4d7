#include "mdlbb/metrics.hpp"

#include "mdlbb/error.hpp"
#include "mdlbb/parallel.hpp"
#include "sampling.hpp"
#include "union_find.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace mdlbb {

double jaccard_similarity(const Backbone& a, const Backbone& b) {
    if (a.parent_edges() != b.parent_edges()) throw DomainError("jaccard: backbones come from different graphs");
    std::size_t inter = 0, uni = 0;
    const auto fa = a.flags(), fb = b.flags();
    for (std::size_t i = 0; i < fa.size(); ++i) {
        inter += (fa[i] && fb[i]);
        uni += (fa[i] || fb[i]);
    }
    return uni == 0 ? 1.0 : double(inter) / double(uni);
}

double hellinger_strength_distance(const WeightedGraph& g, const Backbone& bb) {
    bb.check_parent(g);
    if (bb.edge_count() == 0) throw DomainError("hellinger distance undefined for an empty backbone");
    const auto full = node_totals(g);
    const auto part = node_totals(g, bb);
    const double sp = std::accumulate(full.strength.begin(), full.strength.end(), 0.0);
    const double sq = std::accumulate(part.strength.begin(), part.strength.end(), 0.0);
    if (!(sp > 0.0) || !(sq > 0.0)) throw DomainError("hellinger distance needs positive total strength");
    double acc = 0.0;
    for (std::size_t i = 0; i < full.strength.size(); ++i) {
        const double d = std::sqrt(full.strength[i] / sp) - std::sqrt(part.strength[i] / sq);
        acc += d * d;
    }
    return std::min(1.0, std::sqrt(0.5 * acc));
}

namespace {

struct Csr {
    std::vector<std::size_t> offsets;
    std::vector<std::uint32_t> targets;
};

// Reachable ordered pairs (i != j) among the local nodes 0..n-1.
std::uint64_t reachable_pairs(std::size_t n, const std::vector<std::pair<std::uint32_t, std::uint32_t>>& arcs,
                              bool directed, unsigned threads) {
    if (!directed) {
        detail::UnionFind uf(n);
        for (auto [a, b] : arcs) uf.unite(a, b);
        std::uint64_t total = 0;
        for (std::size_t v = 0; v < n; ++v)
            if (uf.find(v) == v) {
                const std::uint64_t c = uf.size_of(v);
                total += c * (c - 1);
            }
        return total;
    }
    Csr csr;
    csr.offsets.assign(n + 1, 0);
    for (auto [a, b] : arcs) ++csr.offsets[a + 1];
    std::partial_sum(csr.offsets.begin(), csr.offsets.end(), csr.offsets.begin());
    csr.targets.resize(arcs.size());
    auto pos = csr.offsets;
    for (auto [a, b] : arcs) csr.targets[pos[a]++] = b;

    threads = std::max(1u, threads);
    std::vector<std::uint64_t> partial(threads, 0);
    const std::size_t chunk = (n + threads - 1) / threads;
    parallel_for_chunks(threads, threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<std::uint32_t> mark(n, 0), stack;
        std::uint32_t stamp = 0;
        for (std::size_t t = lo; t < hi; ++t) {
            const std::size_t b = std::min(n, t * chunk), e = std::min(n, b + chunk);
            for (std::size_t s = b; s < e; ++s) {
                ++stamp;
                std::uint64_t seen = 0;
                stack.assign(1, std::uint32_t(s));
                mark[s] = stamp;
                while (!stack.empty()) {
                    auto u = stack.back();
                    stack.pop_back();
                    for (auto k = csr.offsets[u]; k < csr.offsets[u + 1]; ++k) {
                        auto v = csr.targets[k];
                        if (mark[v] != stamp) {
                            mark[v] = stamp;
                            ++seen;
                            stack.push_back(v);
                        }
                    }
                }
                partial[t] += seen;
            }
        }
    });
    return std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
}

} // namespace

double reachability_ratio(const WeightedGraph& g, const Backbone& bb, const ReachabilityOptions& opts) {
    bb.check_parent(g);
    const std::size_t n = g.num_nodes();
    std::vector<std::uint32_t> local(n, std::uint32_t(-1));
    std::size_t m = n;
    if (n <= opts.sample_cap) {
        std::iota(local.begin(), local.end(), 0u);
    } else {
        std::mt19937_64 rng(opts.seed);
        const auto sample = detail::sample_distinct(n, opts.sample_cap, rng);
        for (std::size_t i = 0; i < sample.size(); ++i) local[sample[i]] = std::uint32_t(i);
        m = sample.size();
    }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> all, kept;
    const auto edges = g.edges();
    for (EdgeId i = 0; i < edges.size(); ++i) {
        const auto a = local[edges[i].src], b = local[edges[i].dst];
        if (a == std::uint32_t(-1) || b == std::uint32_t(-1) || a == b) continue;
        all.emplace_back(a, b);
        if (bb.contains(i)) kept.emplace_back(a, b);
    }
    const auto denom = reachable_pairs(m, all, g.directed(), opts.threads);
    if (denom == 0) throw DomainError("reachability undefined: the graph has no reachable pairs");
    return double(reachable_pairs(m, kept, g.directed(), opts.threads)) / double(denom);
}

BackboneMetrics summarize(const WeightedGraph& g, const Backbone& bb, const ReachabilityOptions& opts,
                          std::optional<double> eta) {
    bb.check_parent(g);
    BackboneMetrics m;
    m.edges = bb.edge_count();
    m.weight = bb.weight_sum();
    m.edge_fraction = g.num_edges() ? double(bb.edge_count()) / double(g.num_edges()) : 0.0;
    m.weight_fraction = g.total_weight() > 0 ? bb.weight_sum() / g.total_weight() : 0.0;
    if (g.num_nodes() > 0) {
        std::vector<std::uint8_t> used(g.num_nodes(), 0);
        const auto edges = g.edges();
        for (EdgeId i = 0; i < edges.size(); ++i)
            if (bb.contains(i)) used[edges[i].src] = used[edges[i].dst] = 1;
        m.nonisolated_fraction = double(std::count(used.begin(), used.end(), 1)) / double(g.num_nodes());
    }
    try {
        m.hellinger = hellinger_strength_distance(g, bb);
    } catch (const DomainError&) {
    }
    try {
        m.reachability = reachability_ratio(g, bb, opts);
    } catch (const DomainError&) {
    }
    m.eta = eta;
    return m;
}

} // namespace mdlbb
