#include "mdlbb/report.hpp"

namespace mdlbb {

namespace {

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

Json curve_json(const PercolationCurve& c, bool timings) {
    Json j;
    j["name"] = c.name;
    j["edges"] = c.edges;
    j["S"] = c.S;
    j["iterations"] = c.iterations;
    j["converged"] = Json::array();
    for (auto b : c.converged) j["converged"].push_back(bool(b));
    j["multistable"] = Json::array();
    for (auto b : c.multistable) j["multistable"].push_back(bool(b));
    j["p_crit"] = optional_json(c.p_crit);
    j["eigen_evaluations"] = c.eigen_evaluations;
    if (timings) {
        j["eigen_seconds"] = c.eigen_seconds;
        j["seconds_per_eigen_evaluation"] = c.seconds_per_eigen_evaluation();
        j["message_passing_seconds"] = c.mp_seconds;
    }
    return j;
}

} // namespace

Json backbone_json(const WeightedGraph& g, const Backbone& bb, const std::string& method, const Json& parameters) {
    Json j;
    j["method"] = method;
    j["parameters"] = parameters;
    j["directed"] = g.directed();
    j["N"] = g.num_nodes();
    j["E"] = g.num_edges();
    j["W"] = g.total_weight();
    j["E_b"] = bb.edge_count();
    j["W_b"] = bb.weight_sum();
    Json edges = Json::array();
    for (auto id : bb.edge_ids()) {
        const auto& e = g.edge(id);
        edges.push_back(Json::array({g.label(e.src), g.label(e.dst), e.weight}));
    }
    j["edges"] = std::move(edges);
    return j;
}

Json backbone_json(const WeightedGraph& g, const BackboneResult& r, const std::string& method,
                   const Json& parameters) {
    Json j = backbone_json(g, r.backbone, method, parameters);
    j["objective"] = r.spec.name();
    if (r.arc_backbone && !g.directed()) {
        j["arcs_b"] = r.arc_backbone->edge_count();
    }
    j["dl_bits"] = r.dl.bits;
    j["dl_empty_global_bits"] = r.dl_empty_global.bits;
    j["dl_empty_local_bits"] = r.dl_empty_local.bits;
    j["eta"] = r.eta;
    if (!r.trace.values.empty()) {
        Json t;
        t["argmin"] = r.trace.argmin;
        t["ties"] = r.trace.tie_count;
        Json bits = Json::array(), weight = Json::array();
        for (std::size_t i = 0; i < r.trace.values.size(); ++i) {
            bits.push_back(r.trace.values[i].bits);
            weight.push_back(r.trace.weights[i]);
        }
        t["dl_bits"] = std::move(bits);
        t["W_b"] = std::move(weight);
        j["trace"] = std::move(t);
    }
    return j;
}

Json metrics_json(const BackboneMetrics& m) {
    Json j;
    j["E_b"] = m.edges;
    j["W_b"] = m.weight;
    j["edge_fraction"] = m.edge_fraction;
    j["weight_fraction"] = m.weight_fraction;
    j["nonisolated_fraction"] = m.nonisolated_fraction;
    j["hellinger"] = optional_json(m.hellinger);
    j["reachability"] = optional_json(m.reachability);
    j["eta"] = optional_json(m.eta);
    return j;
}

Json percolation_json(const PercolationReport& rep, bool timings) {
    Json j;
    j["grid"] = rep.grid;
    j["full"] = curve_json(rep.full, timings);
    j["backbones"] = Json::array();
    for (const auto& c : rep.backbones) j["backbones"].push_back(curve_json(c, timings));
    j["comparisons"] = Json::array();
    for (const auto& c : rep.comparisons) {
        Json x;
        x["name"] = c.name;
        x["mean_abs_S_error"] = c.mean_abs_S_error;
        x["p_crit_error"] = optional_json(c.p_crit_error);
        if (timings) x["runtime_ratio"] = c.runtime_ratio;
        j["comparisons"].push_back(std::move(x));
    }
    return j;
}

} // namespace mdlbb
