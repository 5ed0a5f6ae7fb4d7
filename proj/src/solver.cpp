#include "mdlbb/solver.hpp"

#include "mdlbb/combinatorics.hpp"
#include "mdlbb/error.hpp"
#include "mdlbb/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

namespace mdlbb {

namespace {

void finalize_trace(DlTrace& t) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : t.values) best = std::min(best, v.bits);
    t.argmin = 0;
    t.tie_count = 0;
    bool found = false;
    for (std::size_t j = 0; j < t.values.size(); ++j) {
        if (t.values[j].bits <= best + kDlTieTolerance) {
            if (!found) t.argmin = j;
            found = true;
            ++t.tie_count;
        }
    }
}

void check_weights(const WeightedGraph& g, const ObjectiveSpec& spec) {
    spec.validate();
    if (spec.integer_weights() && g.weight_kind() != WeightKind::Integer)
        throw DomainError("objective " + spec.family_name() + " needs integer weights");
}

void fill_compression(BackboneResult& r, const WeightedGraph& g) {
    r.dl_empty_global = empty_backbone_dl(g, r.spec.with_scope(Scope::Global));
    r.dl_empty_local = empty_backbone_dl(g, r.spec.with_scope(Scope::Local));
    r.eta = inverse_compression_ratio(r.dl, r.dl_empty_global, r.dl_empty_local);
}

} // namespace

DlTrace sweep_trace(const PartitionObjective& objective, std::span<const double> sorted_weights) {
    DlTrace t;
    const std::size_t steps = sorted_weights.size() / 2;
    t.values.reserve(steps + 1);
    t.weights.reserve(steps + 1);
    double wb = 0.0;
    t.values.push_back(objective(0, 0.0));
    t.weights.push_back(0.0);
    for (std::size_t j = 1; j <= steps; ++j) {
        wb += sorted_weights[j - 1];
        t.values.push_back(objective(std::int64_t(j), wb));
        t.weights.push_back(wb);
    }
    finalize_trace(t);
    return t;
}

DlTrace incremental_sweep_trace(const PartitionObjective& objective, std::span<const double> sorted_weights) {
    DlTrace t;
    const std::size_t steps = sorted_weights.size() / 2;
    double wb = 0.0;
    double bits = objective(0, 0.0).bits;
    t.values.push_back({bits});
    t.weights.push_back(0.0);
    for (std::size_t j = 1; j <= steps; ++j) {
        const double w = sorted_weights[j - 1];
        bits += objective.add_edge_delta(std::int64_t(j - 1), wb, w);
        wb += w;
        t.values.push_back({bits});
        t.weights.push_back(wb);
    }
    finalize_trace(t);
    return t;
}

double inverse_compression_ratio(DlValue dl_opt, DlValue dl_global_empty, DlValue dl_local_empty) {
    const double denom = std::max(dl_global_empty.bits, dl_local_empty.bits);
    if (!(denom > 0.0)) throw DomainError("compression ratio undefined: empty-backbone description length is zero");
    return dl_opt.bits / denom;
}

BackboneResult greedy_global(const WeightedGraph& g, const ObjectiveSpec& spec, const SolverOptions&) {
    if (spec.scope != Scope::Global) throw DomainError("greedy_global needs a global objective");
    check_weights(g, spec);
    if (g.num_edges() == 0) throw DomainError("cannot backbone an edgeless graph");

    auto order = edges_by_weight_desc(g);
    auto edges = g.edges();
    std::vector<double> weights(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) weights[i] = edges[order[i]].weight;

    const double lf = spec.weight_model == WeightModel::Poisson ? log2_weight_factorials(g) : 0.0;
    PartitionObjective objective(spec, std::int64_t(g.num_edges()), g.total_weight(), lf);

    BackboneResult r;
    r.spec = spec;
    r.trace = sweep_trace(objective, weights);
    r.dl = r.trace.values[r.trace.argmin];
    r.backbone = Backbone::from_edges(g, std::span<const EdgeId>(order.data(), r.trace.argmin));
    fill_compression(r, g);
    return r;
}

BackboneResult greedy_local(const WeightedGraph& g, const ObjectiveSpec& spec, const SolverOptions& opts) {
    if (spec.scope != Scope::Local) throw DomainError("greedy_local needs a local objective");
    check_weights(g, spec);
    if (g.num_edges() == 0) throw DomainError("cannot backbone an edgeless graph");

    std::optional<WeightedGraph> owned;
    if (!g.directed()) owned = directed_view(g);
    const WeightedGraph& dg = owned ? *owned : g;
    const Neighborhoods nbs(dg);
    const auto arcs = dg.edges();
    const bool poisson = spec.weight_model == WeightModel::Poisson;
    const std::size_t n = dg.num_nodes();

    std::vector<std::size_t> keep(n, 0);
    std::vector<double> node_bits(n, 0.0);
    std::vector<DlTrace> traces(opts.keep_node_traces ? n : 0);

    parallel_for_chunks(n, opts.threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> w;
        for (std::size_t v = lo; v < hi; ++v) {
            auto view = nbs[NodeId(v)];
            w.clear();
            double lf = 0.0;
            for (auto e : view.edges) {
                w.push_back(arcs[e].weight);
                if (poisson) lf += log2_factorial(std::int64_t(arcs[e].weight));
            }
            PartitionObjective objective(spec, std::int64_t(view.degree), view.strength, lf);
            auto t = sweep_trace(objective, w);
            keep[v] = t.argmin;
            node_bits[v] = t.values[t.argmin].bits;
            if (opts.keep_node_traces) traces[v] = std::move(t);
        }
    });

    double bits = 0.0;
    if (spec.family == Family::Microcanonical)
        bits = strength_prior_bits(std::int64_t(n), std::int64_t(dg.num_edges()), std::int64_t(dg.total_weight()));
    for (double b : node_bits) bits += b;

    std::vector<std::uint8_t> flags(dg.num_edges(), 0);
    for (std::size_t v = 0; v < n; ++v) {
        auto view = nbs[NodeId(v)];
        for (std::size_t j = 0; j < keep[v]; ++j) flags[view.edges[j]] = 1;
    }

    BackboneResult r;
    r.spec = spec;
    r.dl = {bits};
    r.node_traces = std::move(traces);
    auto arc_bb = Backbone::from_flags(dg, std::move(flags));
    if (g.directed()) {
        r.backbone = arc_bb;
    } else {
        std::vector<Edge> selected;
        selected.reserve(arc_bb.edge_count());
        for (auto a : arc_bb.edge_ids()) selected.push_back(arcs[a]);
        r.backbone = collapse_to_undirected(selected, g);
    }
    r.arc_backbone = std::move(arc_bb);
    fill_compression(r, g);
    return r;
}

BackboneResult solve(const WeightedGraph& g, const ObjectiveSpec& spec, const SolverOptions& opts) {
    return spec.scope == Scope::Global ? greedy_global(g, spec, opts) : greedy_local(g, spec, opts);
}

BackboneResult enumerate_optimal(const WeightedGraph& g, const ObjectiveSpec& spec, EnumerationRegime regime) {
    check_weights(g, spec);
    std::optional<WeightedGraph> owned;
    if (spec.scope == Scope::Local && !g.directed()) owned = directed_view(g);
    const WeightedGraph& eg = owned ? *owned : g;
    const std::size_t m = eg.num_edges();
    if (m > kMaxEnumerationEdges)
        throw DomainError("enumeration refused: " + std::to_string(m) + " edges exceeds the limit of " +
                          std::to_string(kMaxEnumerationEdges));
    if (m == 0) throw DomainError("cannot backbone an edgeless graph");
    auto edges = eg.edges();
    const bool poisson = spec.weight_model == WeightModel::Poisson;

    // Per-population objectives: one for the whole edge set (global) or one
    // per source node (local).
    std::vector<PartitionObjective> objectives;
    std::vector<std::size_t> population(m, 0);
    double constant = 0.0;
    if (spec.scope == Scope::Global) {
        objectives.emplace_back(spec, std::int64_t(m), eg.total_weight(), poisson ? log2_weight_factorials(eg) : 0.0);
    } else {
        auto totals = node_totals(eg);
        std::vector<double> lf(eg.num_nodes(), 0.0);
        if (poisson)
            for (const auto& e : edges) lf[e.src] += log2_factorial(std::int64_t(e.weight));
        for (std::size_t v = 0; v < eg.num_nodes(); ++v)
            objectives.emplace_back(spec, std::int64_t(totals.degree[v]), totals.strength[v], lf[v]);
        for (std::size_t e = 0; e < m; ++e) population[e] = edges[e].src;
        if (spec.family == Family::Microcanonical)
            constant = strength_prior_bits(std::int64_t(eg.num_nodes()), std::int64_t(m),
                                           std::int64_t(eg.total_weight()));
    }

    std::vector<std::int64_t> count(objectives.size(), 0);
    std::vector<double> weight(objectives.size(), 0.0);
    std::vector<double> part(objectives.size());
    std::vector<std::size_t> active;
    for (std::size_t p = 0; p < objectives.size(); ++p) {
        part[p] = objectives[p](0, 0.0).bits;
        if (objectives[p].edges() > 0) active.push_back(p);
    }

    // Populations currently outside the greedy regime; a mask is a candidate only when none are.
    const bool restricted = regime == EnumerationRegime::GreedyRegime;
    std::vector<std::uint8_t> outside(objectives.size(), 0);
    std::size_t n_outside = 0;
    auto admissible = [&](std::size_t p) {
        if (count[p] == 0) return true;
        const auto E = objectives[p].edges();
        const double W = objectives[p].weight();
        return 2 * count[p] <= E && weight[p] * double(E) >= W * double(count[p]) * (1.0 - 1e-12);
    };

    auto total = [&] {
        double s = constant;
        for (auto p : active) s += part[p];
        return s;
    };

    double best = total();
    std::uint64_t best_mask = 0;
    std::uint64_t mask = 0;
    const std::uint64_t limit = std::uint64_t{1} << m;
    for (std::uint64_t i = 1; i < limit; ++i) {
        // Gray code: flip the bit at the position of the lowest set bit of i.
        const int bit = std::countr_zero(i);
        mask ^= std::uint64_t{1} << bit;
        const auto p = population[std::size_t(bit)];
        const double w = edges[std::size_t(bit)].weight;
        if (mask >> bit & 1u) {
            ++count[p];
            weight[p] += w;
        } else {
            --count[p];
            weight[p] -= w;
        }
        // Real weights drift under repeated add/subtract.
        if (count[p] == 0)
            weight[p] = 0.0;
        else if (count[p] == objectives[p].edges())
            weight[p] = objectives[p].weight();
        else
            weight[p] = std::clamp(weight[p], 0.0, objectives[p].weight());
        part[p] = objectives[p](count[p], weight[p]).bits;
        if (restricted) {
            const std::uint8_t out = admissible(p) ? 0 : 1;
            n_outside += out;
            n_outside -= outside[p];
            outside[p] = out;
            if (n_outside) continue;
        }
        const double value = total();
        const auto size = std::popcount(mask);
        const auto best_size = std::popcount(best_mask);
        if (value < best - kDlTieTolerance ||
            (value <= best + kDlTieTolerance && (size < best_size || (size == best_size && mask < best_mask)))) {
            if (value < best) best = value;
            best_mask = mask;
        }
    }
    // Report the value of the chosen mask itself rather than the running minimum.
    std::vector<std::uint8_t> flags(m, 0);
    for (std::size_t e = 0; e < m; ++e) flags[e] = (best_mask >> e) & 1u;

    BackboneResult r;
    r.spec = spec;
    auto chosen = Backbone::from_flags(eg, std::move(flags));
    r.dl = evaluate_objective(eg, chosen, spec);
    if (owned) {
        std::vector<Edge> selected;
        for (auto a : chosen.edge_ids()) selected.push_back(edges[a]);
        r.backbone = collapse_to_undirected(selected, g);
        r.arc_backbone = std::move(chosen);
    } else {
        r.backbone = std::move(chosen);
    }
    fill_compression(r, g);
    return r;
}

} // namespace mdlbb
