#pragma once

#include "mdlbb/graph.hpp"
#include "mdlbb/objectives.hpp"

#include <optional>
#include <vector>

namespace mdlbb {

/*
 * Description length of each greedy candidate: values[j] is the objective of
 * the j heaviest edges, j = 0..floor(E/2). weights[j] is the matching
 * backbone weight.
 */
struct DlTrace {
    std::vector<DlValue> values;
    std::vector<double> weights;
    std::size_t argmin = 0;
    std::size_t tie_count = 0;
};

/// Two trace values closer than this are treated as a tie.
inline constexpr double kDlTieTolerance = 1e-10;

struct BackboneResult {
    ObjectiveSpec spec;
    Backbone backbone;
    DlValue dl;
    DlTrace trace;                   // global scope
    std::vector<DlTrace> node_traces; // local scope, only when requested
    /// Local scope only: the selected arcs over the directed view (the set the
    /// objective was minimized over; for undirected input `backbone` is its collapse).
    std::optional<Backbone> arc_backbone;
    DlValue dl_empty_global;
    DlValue dl_empty_local;
    double eta = 1.0;
};

struct SolverOptions {
    bool keep_node_traces = false;
    unsigned threads = 1;
};

/// Adds edges heaviest first up to floor(E/2) and keeps the prefix with the lowest objective.
BackboneResult greedy_global(const WeightedGraph& g, const ObjectiveSpec& spec, const SolverOptions& opts = {});

/*
 * Runs the global sweep independently in every out-neighborhood of the
 * directed view and takes the union. Undirected input is duplicated into
 * arcs first and collapsed afterwards.
 */
BackboneResult greedy_local(const WeightedGraph& g, const ObjectiveSpec& spec, const SolverOptions& opts = {});

/// Dispatches on spec.scope.
BackboneResult solve(const WeightedGraph& g, const ObjectiveSpec& spec, const SolverOptions& opts = {});

/// Largest edge count enumerate_optimal accepts.
inline constexpr std::size_t kMaxEnumerationEdges = 24;

enum class EnumerationRegime {
    AllSubsets,
    /// Per population: at most half the edges, mean weight at least the population mean.
    GreedyRegime,
};

/*
 * Exhaustive minimum over all 2^E membership vectors (local scope: over the
 * arcs of the directed view). Ties go to fewer edges, then the smaller mask.
 */
BackboneResult enumerate_optimal(const WeightedGraph& g, const ObjectiveSpec& spec,
                                 EnumerationRegime regime = EnumerationRegime::AllSubsets);

/// dl_opt / max(dl_global_empty, dl_local_empty).
double inverse_compression_ratio(DlValue dl_opt, DlValue dl_global_empty, DlValue dl_local_empty);

/// Trace of one edge population sorted heaviest first, built from direct evaluation.
DlTrace sweep_trace(const PartitionObjective& objective, std::span<const double> sorted_weights);

/// Same trace, accumulated from per-step add_edge_delta updates.
DlTrace incremental_sweep_trace(const PartitionObjective& objective, std::span<const double> sorted_weights);

} // namespace mdlbb
