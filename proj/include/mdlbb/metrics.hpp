#pragma once

#include "mdlbb/graph.hpp"

#include <cstdint>
#include <optional>

namespace mdlbb {

/// |a ∩ b| / |a ∪ b| over edges of a common parent; 1 when both are empty.
double jaccard_similarity(const Backbone& a, const Backbone& b);

/*
 * Hellinger distance between the node-strength distributions of g and of the
 * backbone (strengths in the directed-view sense). Throws DomainError for an
 * empty backbone.
 */
double hellinger_strength_distance(const WeightedGraph& g, const Backbone& bb);

struct ReachabilityOptions {
    std::size_t sample_cap = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/*
 * Ordered pairs (i, j), i != j, with a path i -> j in the backbone divided by
 * the same count in g. Above sample_cap nodes both counts are taken on the
 * subgraph induced by a seeded node sample.
 */
double reachability_ratio(const WeightedGraph& g, const Backbone& bb, const ReachabilityOptions& opts = {});

struct BackboneMetrics {
    std::size_t edges = 0;
    double weight = 0.0;
    double edge_fraction = 0.0;
    double weight_fraction = 0.0;
    double nonisolated_fraction = 0.0;
    std::optional<double> hellinger;
    std::optional<double> reachability;
    std::optional<double> eta;
};

BackboneMetrics summarize(const WeightedGraph& g, const Backbone& bb, const ReachabilityOptions& opts = {},
                          std::optional<double> eta = std::nullopt);

} // namespace mdlbb
