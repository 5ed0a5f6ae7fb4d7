#pragma once

#include "mdlbb/graph.hpp"

#include <cstdint>
#include <vector>

namespace mdlbb {

/// Disparity-filter p-value (1 - w/s)^(k-1); 1 for k = 1.
double disparity_pvalue(double w, double s, std::size_t k);

/*
 * Per-edge disparity p-value. Directed graphs score the source's
 * out-neighborhood only; undirected edges take the smaller of the two
 * endpoint scores.
 */
std::vector<double> disparity_edge_pvalues(const WeightedGraph& g);

/// Keeps edges with p < alpha.
Backbone disparity_filter(const WeightedGraph& g, double alpha);

/// Keeps the e_target edges with the smallest p-values; ties by larger weight, then edge order.
Backbone disparity_filter_top_e(const WeightedGraph& g, std::size_t e_target);

struct SalienceTable {
    std::vector<double> saliency; // per edge of the graph
    std::size_t trees_sampled = 0;
};

struct SalienceOptions {
    std::size_t sample_cap = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/*
 * Fraction of shortest-path trees (distances 1/w) containing each edge.
 * Every node is a root when N <= sample_cap, otherwise a seeded sample of
 * sample_cap roots. Among equally short paths the parent with the smallest
 * node id wins.
 */
SalienceTable edge_salience(const WeightedGraph& g, const SalienceOptions& opts = {});

Backbone high_salience_skeleton(const WeightedGraph& g, double threshold = 0.5, const SalienceOptions& opts = {});

/*
 * Adds whole weight classes, heaviest first, until the backbone's weak
 * components over the non-isolated nodes of g match those of g.
 */
Backbone percolation_backbone(const WeightedGraph& g);

/// Weak component count over the nodes that have at least one edge in g.
std::size_t weak_component_count(const WeightedGraph& g, const Backbone& bb);

} // namespace mdlbb
