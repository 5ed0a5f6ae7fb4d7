#pragma once

#include "mdlbb/graph.hpp"
#include "mdlbb/objectives.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mdlbb {

/// Unit-weight directed graph; each node gets k distinct out-targets (self-loops allowed).
WeightedGraph random_regular_directed(std::size_t N, std::size_t k, std::uint64_t seed);

struct PlantedParams {
    std::size_t N = 0;
    std::size_t k = 0;
    double gamma = 1.0;
    Scope scope = Scope::Global;
    std::uint64_t seed = 0;
};

/// Mixture parameters of one edge population (whole graph or one neighborhood).
struct PlantedDraw {
    double pi_b = 0.0;
    double theta0 = 0.0;
    double theta1 = 0.0;
};

struct PlantedInstance {
    WeightedGraph graph;
    Backbone planted;
    PlantedParams params;
    std::vector<PlantedDraw> draws; // one for global scope, one per node for local
};

/*
 * Geometric weights (support 1, 2, ...) on the edges of a unit-weight
 * directed graph: an edge joins the planted backbone with probability pi_b
 * and draws its weight with parameter theta1 = gamma * theta0 if it does,
 * theta0 otherwise. pi_b and theta0 are uniform on [0, 1].
 */
PlantedInstance plant_weights_canonical(const WeightedGraph& g, double gamma, Scope scope, std::uint64_t seed);

/// random_regular_directed followed by plant_weights_canonical.
PlantedInstance planted_instance(const PlantedParams& params);

struct DmParams {
    std::size_t N = 0;
    std::size_t k = 0;
    std::int64_t W = 0;
    double h_str = 1.0;
    double h_neig = 1.0;
    std::uint64_t seed = 0;
};

struct DmInstance {
    WeightedGraph graph;
    DmParams params;
};

/// Concentrations are clamped into this range before sampling.
inline constexpr double kMinConcentration = 1e-6;
inline constexpr double kMaxConcentration = 1e6;

/*
 * k-regular directed graph with unit base weights. The excess W - N k is
 * spread over nodes by a symmetric Dirichlet-multinomial (h_str) and each
 * node's share over its out-edges by another (h_neig).
 */
DmInstance dirichlet_multinomial_weights(const DmParams& params);

/// Symmetric Dirichlet-multinomial draw of n items into `parts` bins.
std::vector<std::int64_t> dirichlet_multinomial(std::int64_t n, std::size_t parts, double concentration,
                                                std::uint64_t seed);

/*
 * Writes <prefix>.tsv (edge list), <prefix>.json (parameters) and, for
 * planted instances, <prefix>.planted.tsv.
 */
void write_instance(const std::string& prefix, const PlantedInstance& inst);
void write_instance(const std::string& prefix, const DmInstance& inst);
void write_instance(const std::string& prefix, const WeightedGraph& g, std::size_t N, std::size_t k,
                    std::uint64_t seed);

} // namespace mdlbb
