#include "mdlbb/baselines.hpp"
#include "mdlbb/error.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

using namespace mdlbb;

namespace {

WeightedGraph random_real_graph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool directed) {
    std::uniform_int_distribution<NodeId> nd(0, NodeId(n - 1));
    std::uniform_real_distribution<double> wd(0.1, 10.0);
    std::vector<Edge> edges;
    while (edges.size() < m) {
        NodeId a = nd(rng), b = nd(rng);
        if (a != b) edges.push_back({a, b, wd(rng)});
    }
    return WeightedGraph(n, std::move(edges), directed, WeightKind::Real);
}

WeightedGraph random_int_graph(std::mt19937_64& rng, std::size_t n, std::size_t m, bool directed, int wmax) {
    std::uniform_int_distribution<NodeId> nd(0, NodeId(n - 1));
    std::uniform_int_distribution<int> wd(1, wmax);
    std::vector<Edge> edges;
    while (edges.size() < m) {
        NodeId a = nd(rng), b = nd(rng);
        if (a != b) edges.push_back({a, b, double(wd(rng))});
    }
    return WeightedGraph(n, std::move(edges), directed);
}

// Saliency by all-pairs distances: with unique shortest paths, edge u-v lies in
// the tree rooted at r iff one endpoint is reached through the other.
std::vector<double> floyd_salience(const WeightedGraph& g) {
    const std::size_t n = g.num_nodes();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n * n, inf);
    for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0;
    for (const auto& e : g.edges()) {
        if (e.src == e.dst) continue;
        d[e.src * n + e.dst] = std::min(d[e.src * n + e.dst], 1.0 / e.weight);
        if (!g.directed()) d[e.dst * n + e.src] = std::min(d[e.dst * n + e.src], 1.0 / e.weight);
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::min(d[i * n + j], d[i * n + k] + d[k * n + j]);
    std::vector<double> s(g.num_edges(), 0.0);
    auto on_tree = [&](std::size_t r, std::size_t u, std::size_t v, double len) {
        return d[r * n + u] < inf && std::abs(d[r * n + u] + len - d[r * n + v]) <= 1e-12 * (1 + d[r * n + v]);
    };
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t id = 0; id < g.num_edges(); ++id) {
            const auto& e = g.edge(id);
            if (e.src == e.dst) continue;
            const double len = 1.0 / e.weight;
            bool in = on_tree(r, e.src, e.dst, len) && e.dst != r;
            if (!g.directed()) in = in || (on_tree(r, e.dst, e.src, len) && e.src != r);
            if (in) s[id] += 1.0;
        }
    }
    for (auto& x : s) x /= double(n);
    return s;
}

std::size_t brute_components(const WeightedGraph& g, const std::vector<std::uint8_t>& keep) {
    const std::size_t n = g.num_nodes();
    std::vector<std::uint8_t> touched(n, 0);
    for (const auto& e : g.edges()) touched[e.src] = touched[e.dst] = 1;
    std::vector<std::size_t> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = i;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t id = 0; id < g.num_edges(); ++id) {
            if (!keep[id]) continue;
            auto& a = label[g.edge(id).src];
            auto& b = label[g.edge(id).dst];
            if (a != b) {
                a = b = std::min(a, b);
                changed = true;
            }
        }
    }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < n; ++i)
        if (touched[i]) roots.insert(label[i]);
    return roots.size();
}

} // namespace

TEST_SUITE("baselines") {

TEST_CASE("disparity p-values") {
    CHECK(disparity_pvalue(3, 4, 2) == doctest::Approx(0.25));
    CHECK(disparity_pvalue(2, 4, 2) == doctest::Approx(0.5));
    CHECK(disparity_pvalue(7, 7, 1) == 1.0);
    CHECK(disparity_pvalue(0.97, 1.0, 10) == doctest::Approx(std::pow(0.03, 9)));
    CHECK(disparity_pvalue(0.1, 1.0, 10) == doctest::Approx(std::pow(0.9, 9)));
    CHECK_THROWS_AS(disparity_pvalue(5, 4, 2), DomainError);
    CHECK_THROWS_AS(disparity_pvalue(1, 4, 0), DomainError);
    CHECK_THROWS_AS(disparity_pvalue(0, 4, 2), DomainError);
}

TEST_CASE("disparity filter examples") {
    std::vector<Edge> star{{0, 1, 97.0}};
    for (NodeId v = 2; v <= 10; ++v) star.push_back({0, v, 3.0 / 9.0});
    WeightedGraph g(11, star, true, WeightKind::Real);
    auto bb = disparity_filter(g, 0.05);
    CHECK(bb.edge_count() == 1);
    CHECK(bb.contains(*g.find_edge(0, 1)));

    std::vector<Edge> flat;
    for (NodeId v = 1; v <= 10; ++v) flat.push_back({0, v, 1.0});
    WeightedGraph f(11, flat, true);
    CHECK(disparity_filter(f, 0.05).edge_count() == 0);
    CHECK(disparity_filter(f, 0.999).edge_count() == 10);
    // Undirected: leaves have k = 1, so the hub's score decides.
    WeightedGraph fu(11, flat, false);
    CHECK(disparity_filter(fu, 0.05).edge_count() == 0);
    CHECK(disparity_filter(fu, 0.5).edge_count() == 10);

    CHECK_THROWS_AS(disparity_filter(f, 0.0), DomainError);
    CHECK_THROWS_AS(disparity_filter(f, 1.0), DomainError);
}

TEST_CASE("disparity top-e") {
    auto g = parse_edge_list("a b 5\na c 1\na d 1\na e 1");
    CHECK(disparity_filter_top_e(g, 0).edge_count() == 0);
    CHECK(disparity_filter_top_e(g, 4).edge_count() == 4);
    auto one = disparity_filter_top_e(g, 1);
    CHECK(one.edge_count() == 1);
    CHECK(one.contains(*g.find_edge(0, 1)));
    CHECK_THROWS_AS(disparity_filter_top_e(g, 5), DomainError);
}

TEST_CASE("property: disparity monotonicity") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        auto g = random_int_graph(rng, 40, 200, t % 2 == 0, 30);
        const double alphas[] = {0.01, 0.05, 0.2, 0.5, 0.9};
        for (std::size_t i = 0; i + 1 < std::size(alphas); ++i) {
            auto lo = disparity_filter(g, alphas[i]), hi = disparity_filter(g, alphas[i + 1]);
            for (std::size_t e = 0; e < g.num_edges(); ++e) CHECK((!lo.contains(e) || hi.contains(e)));
        }
        Backbone prev = disparity_filter_top_e(g, 0);
        for (std::size_t k = 1; k <= g.num_edges(); k += 7) {
            auto cur = disparity_filter_top_e(g, k);
            CHECK(cur.edge_count() == k);
            for (std::size_t e = 0; e < g.num_edges(); ++e) CHECK((!prev.contains(e) || cur.contains(e)));
            prev = cur;
        }
        // The top-e set is a p-value prefix.
        auto p = disparity_edge_pvalues(g);
        auto top = disparity_filter_top_e(g, 50);
        double worst_in = 0, best_out = 1;
        for (std::size_t e = 0; e < g.num_edges(); ++e)
            (top.contains(e) ? worst_in : best_out) = top.contains(e) ? std::max(worst_in, p[e]) : std::min(best_out, p[e]);
        CHECK(worst_in <= best_out);
    }
}

TEST_CASE("salience hand examples") {
    ParseOptions u;
    u.directed = false;
    auto path = parse_edge_list("a b 1\nb c 1", u);
    auto t = edge_salience(path);
    CHECK(t.trees_sampled == 3);
    CHECK(t.saliency == std::vector<double>{1.0, 1.0});
    CHECK(high_salience_skeleton(path).edge_count() == 2);

    auto tri = parse_edge_list("a b 3\nb c 3\na c 1", u);
    auto st = edge_salience(tri);
    CHECK(st.saliency[*tri.find_edge(0, 2)] == 0.0);
    auto hss = high_salience_skeleton(tri);
    CHECK(hss.edge_count() == 2);
    CHECK_FALSE(hss.contains(*tri.find_edge(0, 2)));

    auto star = parse_edge_list("h a 2\nh b 5\nh c 1\nh d 9", u);
    for (double s : edge_salience(star).saliency) CHECK(s == 1.0);
}

TEST_CASE("property: salience matches all-pairs distances") {
    std::mt19937_64 rng(32);
    for (int t = 0; t < 40; ++t) {
        auto g = random_real_graph(rng, 14, 30, t % 2 == 0);
        auto table = edge_salience(g);
        auto oracle = floyd_salience(g);
        REQUIRE(table.trees_sampled == g.num_nodes());
        for (std::size_t e = 0; e < g.num_edges(); ++e) CHECK(table.saliency[e] == doctest::Approx(oracle[e]));
    }
}

TEST_CASE("property: salience determinism") {
    std::mt19937_64 rng(33);
    auto g = random_int_graph(rng, 200, 800, false, 5);
    SalienceOptions a, b;
    b.threads = 4;
    b.seed = 99;
    auto ta = edge_salience(g, a), tb = edge_salience(g, b);
    CHECK(ta.saliency == tb.saliency); // every node is a root: seed and threads are irrelevant
    for (double s : ta.saliency) CHECK((s >= 0.0 && s <= 1.0));

    SalienceOptions c;
    c.sample_cap = 50;
    c.seed = 7;
    auto s1 = edge_salience(g, c);
    c.threads = 3;
    auto s2 = edge_salience(g, c);
    CHECK(s1.trees_sampled == 50);
    CHECK(s1.saliency == s2.saliency);
    c.seed = 8;
    CHECK(edge_salience(g, c).saliency != s1.saliency);
}

TEST_CASE("percolation backbone examples") {
    ParseOptions u;
    u.directed = false;
    auto path = parse_edge_list("a b 1\nb c 5\nc d 2", u);
    CHECK(percolation_backbone(path).edge_count() == 3);

    auto tri = parse_edge_list("a b 3\nb c 2\na c 1", u);
    auto bb = percolation_backbone(tri);
    CHECK(bb.edge_count() == 2);
    CHECK_FALSE(bb.contains(*tri.find_edge(0, 2)));

    auto two = parse_edge_list("a b 4\nb c 3\nx y 9\ny z 2\nx z 1", u);
    auto tb = percolation_backbone(two);
    CHECK(weak_component_count(two, tb) == 2);
    CHECK(tb.edge_count() == 4);
    CHECK_FALSE(tb.contains(*two.find_edge(3, 5)));

    // Whole weight classes enter together.
    auto cls = parse_edge_list("a b 4\nb c 1\nx y 9\ny z 2\nx z 1", u);
    CHECK(percolation_backbone(cls).edge_count() == 5);
}

TEST_CASE("property: percolation backbone is the smallest complete weight threshold") {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 60; ++t) {
        auto g = random_int_graph(rng, 30, 45, t % 2 == 0, 6);
        auto bb = percolation_backbone(g);
        const auto target = weak_component_count(g, Backbone::full(g));
        CHECK(weak_component_count(g, bb) == target);
        // Threshold form: every edge at or above the lightest kept weight is kept.
        double cut = std::numeric_limits<double>::infinity();
        for (auto id : bb.edge_ids()) cut = std::min(cut, g.edge(id).weight);
        for (std::size_t e = 0; e < g.num_edges(); ++e) CHECK(bb.contains(e) == (g.edge(e).weight >= cut));
        // Minimality and independent component count.
        std::vector<std::uint8_t> keep(bb.flags().begin(), bb.flags().end());
        CHECK(brute_components(g, keep) == target);
        for (std::size_t e = 0; e < g.num_edges(); ++e)
            if (g.edge(e).weight == cut) keep[e] = 0;
        if (std::count(keep.begin(), keep.end(), 1) > 0 || bb.edge_count() > 0) CHECK(brute_components(g, keep) != target);
        // No originally non-isolated node ends up isolated.
        auto deg = node_totals(g, bb).degree;
        std::vector<std::size_t> in(g.num_nodes(), 0);
        for (auto id : bb.edge_ids()) ++in[g.edge(id).dst];
        auto gdeg = node_totals(g).degree;
        std::vector<std::size_t> gin(g.num_nodes(), 0);
        for (const auto& e : g.edges()) ++gin[e.dst];
        for (std::size_t v = 0; v < g.num_nodes(); ++v)
            if (gdeg[v] + gin[v] > 0) CHECK(deg[v] + in[v] > 0);
    }
}

}
