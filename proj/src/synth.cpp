#include "mdlbb/synth.hpp"

#include "mdlbb/error.hpp"
#include "sampling.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

namespace mdlbb {

namespace {

std::vector<Edge> regular_arcs(std::size_t N, std::size_t k, std::mt19937_64& rng) {
    std::vector<Edge> edges;
    edges.reserve(N * k);
    for (std::size_t v = 0; v < N; ++v)
        for (auto t : detail::sample_distinct(N, k, rng)) edges.push_back({NodeId(v), t, 1.0});
    return edges;
}

// Smallest parameter drawn for a geometric weight; keeps weights well inside
// the exactly representable integers.
constexpr double kMinTheta = 1e-9;

PlantedDraw draw_params(double gamma, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PlantedDraw d;
    d.pi_b = unit(rng);
    do {
        d.theta0 = 1.0 - unit(rng); // (0, 1]
        d.theta1 = gamma * d.theta0;
    } while (d.theta1 < kMinTheta);
    return d;
}

double geometric_weight(double theta, std::mt19937_64& rng) {
    if (theta >= 1.0) return 1.0;
    std::geometric_distribution<std::int64_t> geo(theta);
    return double(geo(rng) + 1);
}

std::vector<std::int64_t> dm_draw(std::int64_t n, std::size_t parts, double concentration, std::mt19937_64& rng) {
    std::vector<std::int64_t> out(parts, 0);
    if (parts == 0 || n == 0) return out;
    const double a = std::clamp(concentration, kMinConcentration, kMaxConcentration);
    // Gamma(a) = Gamma(a + 1) * U^(1/a), kept in log space so tiny a does not underflow.
    std::gamma_distribution<double> gam(a + 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> lg(parts);
    for (auto& x : lg) x = std::log(gam(rng)) + std::log(1.0 - unit(rng)) / a;
    const double top = *std::max_element(lg.begin(), lg.end());
    std::vector<double> p(parts);
    for (std::size_t i = 0; i < parts; ++i) p[i] = std::exp(lg[i] - top);
    std::vector<double> tail(parts + 1, 0.0);
    for (std::size_t i = parts; i-- > 0;) tail[i] = tail[i + 1] + p[i];

    std::int64_t left = n;
    for (std::size_t i = 0; i + 1 < parts && left > 0; ++i) {
        const double q = std::clamp(p[i] / tail[i], 0.0, 1.0);
        std::binomial_distribution<std::int64_t> bin(left, q);
        out[i] = bin(rng);
        left -= out[i];
    }
    out[parts - 1] += left;
    return out;
}

} // namespace

WeightedGraph random_regular_directed(std::size_t N, std::size_t k, std::uint64_t seed) {
    if (N == 0) throw DomainError("N must be positive");
    if (k > N) throw DomainError("k = " + std::to_string(k) + " exceeds N = " + std::to_string(N));
    std::mt19937_64 rng(seed);
    return WeightedGraph(N, regular_arcs(N, k, rng), true);
}

PlantedInstance plant_weights_canonical(const WeightedGraph& g, double gamma, Scope scope, std::uint64_t seed) {
    if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
    if (!g.directed()) throw DomainError("planting needs a directed graph");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    PlantedInstance inst;
    inst.params.gamma = gamma;
    inst.params.scope = scope;
    inst.params.seed = seed;
    inst.params.N = g.num_nodes();

    if (scope == Scope::Global) {
        inst.draws.push_back(draw_params(gamma, rng));
    } else {
        inst.draws.reserve(g.num_nodes());
        for (std::size_t v = 0; v < g.num_nodes(); ++v) inst.draws.push_back(draw_params(gamma, rng));
    }

    // Edges stay in (src, dst) order, so ids carry over to the new graph.
    auto edges = std::vector<Edge>(g.edges().begin(), g.edges().end());
    std::vector<std::uint8_t> member(edges.size(), 0);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const auto& d = inst.draws[scope == Scope::Global ? 0 : edges[i].src];
        member[i] = unit(rng) < d.pi_b;
        edges[i].weight = geometric_weight(member[i] ? d.theta1 : d.theta0, rng);
    }
    inst.graph = WeightedGraph(g.num_nodes(), std::move(edges), true, WeightKind::Integer,
                               std::vector<std::string>(g.labels().begin(), g.labels().end()));
    inst.planted = Backbone::from_flags(inst.graph, std::move(member));
    return inst;
}

PlantedInstance planted_instance(const PlantedParams& params) {
    std::mt19937_64 seeder(params.seed);
    const auto topo_seed = seeder();
    const auto weight_seed = seeder();
    auto inst = plant_weights_canonical(random_regular_directed(params.N, params.k, topo_seed), params.gamma,
                                        params.scope, weight_seed);
    inst.params = params;
    return inst;
}

std::vector<std::int64_t> dirichlet_multinomial(std::int64_t n, std::size_t parts, double concentration,
                                                std::uint64_t seed) {
    if (n < 0) throw DomainError("negative item count");
    std::mt19937_64 rng(seed);
    return dm_draw(n, parts, concentration, rng);
}

DmInstance dirichlet_multinomial_weights(const DmParams& params) {
    const auto [N, k, W, h_str, h_neig, seed] = params;
    if (N == 0 || k == 0) throw DomainError("N and k must be positive");
    if (k > N) throw DomainError("k exceeds N");
    if (W < std::int64_t(N * k))
        throw DomainError("W = " + std::to_string(W) + " is below N k = " + std::to_string(N * k));
    if (!(h_str > 0.0) || !(h_neig > 0.0)) throw DomainError("concentrations must be positive");

    std::mt19937_64 rng(seed);
    auto edges = regular_arcs(N, k, rng);
    const auto excess = dm_draw(W - std::int64_t(N * k), N, h_str, rng);
    for (std::size_t v = 0; v < N; ++v) {
        const auto split = dm_draw(excess[v], k, h_neig, rng);
        for (std::size_t j = 0; j < k; ++j) edges[v * k + j].weight += double(split[j]);
    }
    return {WeightedGraph(N, std::move(edges), true), params};
}

namespace {

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace

namespace {

// Sidecar references are relative to the sidecar itself.
std::string sibling(const std::string& prefix, const char* ext) {
    return std::filesystem::path(prefix).filename().string() + ext;
}

} // namespace

void write_instance(const std::string& prefix, const PlantedInstance& inst) {
    write_edge_list(prefix + ".tsv", inst.graph);
    write_edge_list(prefix + ".planted.tsv", backbone_subgraph(inst.graph, inst.planted));
    nlohmann::ordered_json j;
    j["kind"] = "planted";
    j["N"] = inst.params.N;
    j["k"] = inst.params.k;
    j["gamma"] = inst.params.gamma;
    j["scope"] = inst.params.scope == Scope::Global ? "global" : "local";
    j["seed"] = inst.params.seed;
    j["E"] = inst.graph.num_edges();
    j["W"] = inst.graph.total_weight();
    j["planted_edges"] = inst.planted.edge_count();
    auto draws = nlohmann::ordered_json::array();
    for (const auto& d : inst.draws) draws.push_back({{"pi_b", d.pi_b}, {"theta0", d.theta0}, {"theta1", d.theta1}});
    j["draws"] = std::move(draws);
    j["graph"] = sibling(prefix, ".tsv");
    j["planted"] = sibling(prefix, ".planted.tsv");
    write_json(prefix + ".json", j);
}

void write_instance(const std::string& prefix, const DmInstance& inst) {
    write_edge_list(prefix + ".tsv", inst.graph);
    nlohmann::ordered_json j;
    j["kind"] = "dm";
    j["N"] = inst.params.N;
    j["k"] = inst.params.k;
    j["W"] = inst.params.W;
    j["h_str"] = inst.params.h_str;
    j["h_neig"] = inst.params.h_neig;
    j["seed"] = inst.params.seed;
    j["graph"] = sibling(prefix, ".tsv");
    write_json(prefix + ".json", j);
}

void write_instance(const std::string& prefix, const WeightedGraph& g, std::size_t N, std::size_t k,
                    std::uint64_t seed) {
    write_edge_list(prefix + ".tsv", g);
    nlohmann::ordered_json j;
    j["kind"] = "regular";
    j["N"] = N;
    j["k"] = k;
    j["seed"] = seed;
    j["graph"] = sibling(prefix, ".tsv");
    write_json(prefix + ".json", j);
}

} // namespace mdlbb
