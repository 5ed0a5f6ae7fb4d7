#pragma once

#include "mdlbb/graph.hpp"
#include "mdlbb/metrics.hpp"
#include "mdlbb/percolation.hpp"
#include "mdlbb/solver.hpp"

#include <json.hpp>

#include <string>

namespace mdlbb {

using Json = nlohmann::ordered_json;

/// Counts shared by every backbone record: N, E, W, E_b, W_b.
Json backbone_json(const WeightedGraph& g, const Backbone& bb, const std::string& method, const Json& parameters);

/// backbone_json plus description lengths, eta and (global scope) the greedy trace.
Json backbone_json(const WeightedGraph& g, const BackboneResult& r, const std::string& method,
                   const Json& parameters);

Json metrics_json(const BackboneMetrics& m);

/// Wall times are left out unless asked for, keeping output byte-stable.
Json percolation_json(const PercolationReport& rep, bool timings);

} // namespace mdlbb
