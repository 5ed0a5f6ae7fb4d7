#include "mdlbb/combinatorics.hpp"
#include "mdlbb/error.hpp"
#include "mdlbb/solver.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace mdlbb;

namespace {

const auto kMicroG = ObjectiveSpec::micro(Scope::Global);
const auto kMicroL = ObjectiveSpec::micro(Scope::Local);

WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool directed, int wmax) {
    std::uniform_int_distribution<NodeId> nd(0, NodeId(n - 1));
    std::uniform_int_distribution<int> wd(1, wmax);
    std::vector<Edge> edges;
    while (edges.size() < m) {
        NodeId a = nd(rng), b = nd(rng);
        if (a == b) continue;
        edges.push_back({a, b, double(wd(rng))});
    }
    return WeightedGraph(n, std::move(edges), directed);
}

std::vector<ObjectiveSpec> all_specs(Scope s) {
    return {ObjectiveSpec::micro(s), ObjectiveSpec::canonical(s, WeightModel::Geometric),
            ObjectiveSpec::canonical(s, WeightModel::Poisson, 1.0),
            ObjectiveSpec::canonical(s, WeightModel::Exponential, 1.0)};
}

} // namespace

TEST_SUITE("solver") {

TEST_CASE("star keeps the single heavy edge") {
    auto g = parse_edge_list("a b 5\na c 1\na d 1\na e 1");
    auto r = greedy_global(g, kMicroG);
    CHECK(r.backbone.edge_count() == 1);
    CHECK(r.backbone.contains(*g.find_edge(0, 1)));
    CHECK(r.dl.bits == doctest::Approx(6.6438561897747247).epsilon(1e-14));
    CHECK(r.dl_empty_global.bits == doctest::Approx(9.7731392067196912).epsilon(1e-14));
    CHECK(r.dl_empty_local.bits == doctest::Approx(15.902422223664658).epsilon(1e-14));
    CHECK(r.eta == doctest::Approx(0.41778894411996509).epsilon(1e-13));
    REQUIRE(r.trace.values.size() == 3);
    CHECK(r.trace.argmin == 1);
    CHECK(r.trace.weights == std::vector<double>{0, 5, 6});
}

TEST_CASE("flat weights give the empty backbone") {
    auto g = parse_edge_list("a b 2\na c 2\na d 2\na e 2");
    auto r = greedy_global(g, kMicroG);
    CHECK(r.backbone.edge_count() == 0);
    CHECK(r.dl.bits == doctest::Approx(9.7731392067196912).epsilon(1e-14));
    CHECK(r.trace.argmin == 0);
    CHECK(r.trace.tie_count >= 1);
}

TEST_CASE("degenerate inputs") {
    auto one = parse_edge_list("a b 7");
    auto r = greedy_global(one, kMicroG);
    CHECK(r.backbone.edge_count() == 0);
    CHECK(r.trace.values.size() == 1);
    auto rl = greedy_local(one, kMicroL);
    CHECK(rl.backbone.edge_count() == 0);

    auto none = WeightedGraph(3, {}, true);
    CHECK_THROWS_AS(greedy_global(none, kMicroG), DomainError);
    CHECK_THROWS_AS(greedy_local(none, kMicroL), DomainError);

    ParseOptions real;
    real.weight_kind = WeightKind::Real;
    auto rg = parse_edge_list("a b 0.5\na c 2.5", real);
    CHECK_THROWS_AS(greedy_global(rg, kMicroG), DomainError);
    CHECK_NOTHROW(greedy_global(rg, ObjectiveSpec::canonical(Scope::Global, WeightModel::Exponential, 1.0)));
}

TEST_CASE("eta validation") {
    CHECK(inverse_compression_ratio({5.0}, {10.0}, {8.0}) == doctest::Approx(0.5));
    CHECK(inverse_compression_ratio({5.0}, {4.0}, {10.0}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(inverse_compression_ratio({1.0}, {0.0}, {0.0}), DomainError);
}

TEST_CASE("enumeration refuses large inputs") {
    std::mt19937_64 rng(1);
    auto g = random_graph(rng, 30, kMaxEnumerationEdges + 1, true, 9);
    REQUIRE(g.num_edges() > kMaxEnumerationEdges);
    CHECK_THROWS_AS(enumerate_optimal(g, kMicroG), DomainError);
}

TEST_CASE("enumeration agrees on the reference examples") {
    auto star = parse_edge_list("a b 5\na c 1\na d 1\na e 1");
    auto e = enumerate_optimal(star, kMicroG);
    CHECK(e.backbone == greedy_global(star, kMicroG).backbone);
    CHECK(e.dl.bits == doctest::Approx(6.6438561897747247));
    auto flat = parse_edge_list("a b 2\na c 2\na d 2\na e 2");
    CHECK(enumerate_optimal(flat, kMicroG).backbone.edge_count() == 0);
}

TEST_CASE("property: greedy equals enumeration inside the greedy regime") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.1, 50.0);
    int graphs = 0;
    for (int t = 0; t < 240; ++t) {
        const bool directed = t % 3 != 0;
        auto g = random_graph(rng, 6, 2 + t % 11, directed, t % 2 ? 6 : 60);
        std::vector<Edge> re(g.edges().begin(), g.edges().end());
        for (auto& e : re) e.weight = u(rng);
        WeightedGraph rg(g.num_nodes(), re, directed, WeightKind::Real);
        REQUIRE(g.num_edges() <= 12);
        ++graphs;
        for (auto scope : {Scope::Global, Scope::Local}) {
            auto specs = all_specs(scope);
            for (std::size_t k = 0; k < specs.size(); ++k) {
                const auto& spec = specs[k];
                const auto& h = spec.weight_model == WeightModel::Exponential ? rg : g;
                INFO("t=" << t << " spec=" << spec.name());
                auto gr = solve(h, spec);
                auto in_regime = enumerate_optimal(h, spec, EnumerationRegime::GreedyRegime);
                auto all = enumerate_optimal(h, spec);
                CHECK(gr.dl.bits == doctest::Approx(in_regime.dl.bits).epsilon(1e-12).scale(1e3));
                CHECK(all.dl.bits <= gr.dl.bits + 1e-9);
                const auto arcs = directed ? h : directed_view(h);
                const auto& bb = gr.arc_backbone ? *gr.arc_backbone : gr.backbone;
                CHECK(evaluate_objective(gr.arc_backbone ? arcs : h, bb, spec).bits ==
                      doctest::Approx(gr.dl.bits).epsilon(1e-12));
                if (scope == Scope::Global) {
                    double best = gr.trace.values[0].bits;
                    for (const auto& x : gr.trace.values) best = std::min(best, x.bits);
                    CHECK(gr.dl.bits == doctest::Approx(best).epsilon(1e-12));
                    CHECK(gr.backbone.edge_count() == gr.trace.argmin);
                    CHECK(gr.backbone.edge_count() * 2 <= h.num_edges());
                }
            }
        }
    }
    CHECK(graphs >= 200);
}

TEST_CASE("full enumeration can leave the greedy regime") {
    // The light-edge set {1,1,1} wins over every heavy prefix; its bit-flip
    // mirror has five edges, beyond the E/2 the greedy sweep explores.
    auto g = parse_edge_list("a b 8\na c 7\na d 7\na e 6\na f 5\na g 1\na h 1\na i 1");
    auto all = enumerate_optimal(g, kMicroG);
    auto in_regime = enumerate_optimal(g, kMicroG, EnumerationRegime::GreedyRegime);
    auto gr = greedy_global(g, kMicroG);
    CHECK(all.backbone.edge_count() == 3);
    CHECK(all.backbone.weight_sum() == 3);
    CHECK(all.dl.bits < gr.dl.bits - 0.1);
    CHECK(in_regime.dl.bits == doctest::Approx(gr.dl.bits).epsilon(1e-12));
    CHECK(in_regime.backbone == gr.backbone);
}

TEST_CASE("property: incremental and direct traces agree") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const std::size_t E = 2 + t % 60;
        std::vector<double> w(E);
        std::uniform_int_distribution<int> wd(1, t % 2 ? 5 : 5000);
        for (auto& x : w) x = double(wd(rng));
        std::sort(w.rbegin(), w.rend());
        const double W = std::accumulate(w.begin(), w.end(), 0.0);
        double lf = 0;
        for (double x : w) lf += log2_factorial(std::int64_t(x));
        for (const auto& spec : all_specs(Scope::Global)) {
            PartitionObjective obj(spec, E, W, lf);
            auto a = sweep_trace(obj, w);
            auto b = incremental_sweep_trace(obj, w);
            REQUIRE(a.values.size() == E / 2 + 1);
            REQUIRE(b.values.size() == a.values.size());
            for (std::size_t i = 0; i < a.values.size(); ++i) {
                CHECK(b.values[i].bits == doctest::Approx(a.values[i].bits).epsilon(1e-9));
                CHECK(b.weights[i] == a.weights[i]);
            }
            CHECK(a.argmin == b.argmin);
        }
    }
}

TEST_CASE("property: mean-weight ordering at every greedy step") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 80; ++t) {
        auto g = random_graph(rng, 30, 100, t % 2 == 0, t % 3 ? 50 : 3);
        auto r = greedy_global(g, kMicroG);
        const double E = double(g.num_edges()), W = g.total_weight();
        for (std::size_t j = 1; j < r.trace.weights.size(); ++j) {
            const double Eb = double(j), Wb = r.trace.weights[j];
            CHECK(Wb * E >= W * Eb);
            CHECK(W * (E - Eb) >= (W - Wb) * E);
        }
    }
}

TEST_CASE("property: node relabelling does not change the result") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        const bool directed = t % 2 == 0;
        auto g = t % 4 < 2 ? random_graph(rng, 25, 80, directed, 30) : random_graph(rng, 25, 80, directed, 1 << 30);
        std::vector<double> ws;
        for (const auto& e : g.edges()) ws.push_back(e.weight);
        std::sort(ws.begin(), ws.end());
        const bool distinct = std::adjacent_find(ws.begin(), ws.end()) == ws.end();
        std::vector<NodeId> perm(g.num_nodes());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<Edge> pe;
        for (const auto& e : g.edges()) pe.push_back({perm[e.src], perm[e.dst], e.weight});
        WeightedGraph h(g.num_nodes(), pe, directed);
        for (auto scope : {Scope::Global, Scope::Local}) {
            INFO("directed=" << directed << " local=" << (scope == Scope::Local));
            auto a = solve(g, ObjectiveSpec::micro(scope));
            auto b = solve(h, ObjectiveSpec::micro(scope));
            CHECK(a.dl.bits == doctest::Approx(b.dl.bits).epsilon(1e-12));
            // Undirected local: which tied arc a node keeps depends on ids, so the
            // collapse may differ; the arc selection itself may not.
            const auto& sa = a.arc_backbone ? *a.arc_backbone : a.backbone;
            const auto& sb = b.arc_backbone ? *b.arc_backbone : b.backbone;
            CHECK(sa.weight_sum() == sb.weight_sum());
            CHECK(sa.edge_count() == sb.edge_count());
            if (distinct) {
                CHECK(a.backbone.weight_sum() == b.backbone.weight_sum());
                CHECK(a.backbone.edge_count() == b.backbone.edge_count());
            }
        }
    }
}

TEST_CASE("local scope on two stars") {
    auto g = parse_edge_list("a b 5\na c 1\na d 1\na e 1\nf g 5\nf h 1\nf i 1\nf j 1");
    auto r = greedy_local(g, kMicroL);
    CHECK(r.backbone.edge_count() == 2);
    CHECK(r.backbone.weight_sum() == 10);
    const double expect = 2 * dl_neigh_micro(4, 8, 1, 5).bits + strength_prior_bits(10, 8, 16);
    CHECK(r.dl.bits == doctest::Approx(expect).epsilon(1e-13));
    CHECK(r.eta == doctest::Approx(r.dl.bits / std::max(r.dl_empty_global.bits, r.dl_empty_local.bits)));
}

TEST_CASE("local scope on undirected input keeps both arc views consistent") {
    std::mt19937_64 rng(6);
    auto g = random_graph(rng, 20, 70, false, 25);
    auto r = greedy_local(g, kMicroL);
    REQUIRE(r.arc_backbone);
    auto dv = directed_view(g);
    CHECK(r.arc_backbone->parent_edges() == dv.num_edges());
    std::vector<Edge> arcs;
    for (auto id : r.arc_backbone->edge_ids()) arcs.push_back(dv.edge(id));
    CHECK(collapse_to_undirected(arcs, g) == r.backbone);
}

TEST_CASE("property: local result is independent of thread count") {
    std::mt19937_64 rng(7);
    auto g = random_graph(rng, 300, 3000, true, 40);
    for (const auto& spec : all_specs(Scope::Local)) {
        SolverOptions one, many;
        many.threads = 4;
        auto a = greedy_local(g, spec, one);
        auto b = greedy_local(g, spec, many);
        CHECK(a.backbone == b.backbone);
        CHECK(a.dl.bits == b.dl.bits);
    }
}

}
