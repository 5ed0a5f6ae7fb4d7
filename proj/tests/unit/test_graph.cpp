#include "mdlbb/error.hpp"
#include "mdlbb/graph.hpp"

#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

using namespace mdlbb;

namespace {

WeightedGraph random_graph(std::mt19937_64& rng, bool directed, std::size_t n, std::size_t m) {
    std::uniform_int_distribution<NodeId> node(0, NodeId(n - 1));
    std::uniform_int_distribution<int> weight(1, 9);
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < m; ++i) edges.push_back({node(rng), node(rng), double(weight(rng))});
    return WeightedGraph(n, edges, directed);
}

} // namespace

TEST_SUITE("graph") {

TEST_CASE("parse basic edge list") {
    auto g = parse_edge_list("a b 3\nb c 1");
    CHECK(g.num_nodes() == 3);
    CHECK(g.num_edges() == 2);
    CHECK(g.total_weight() == 4.0);
    CHECK(g.label(0) == "a");
    CHECK(g.label(2) == "c");
}

TEST_CASE("multi-edges merge by summation") {
    auto g = parse_edge_list("a b 2\na b 3");
    REQUIRE(g.num_edges() == 1);
    CHECK(g.edge(0) == Edge{0, 1, 5.0});
    ParseOptions undirected;
    undirected.directed = false;
    auto u = parse_edge_list("a b 2\nb a 3\n", undirected);
    REQUIRE(u.num_edges() == 1);
    CHECK(u.edge(0).weight == 5.0);
}

TEST_CASE("weight rounding is opt-in") {
    CHECK_THROWS_AS(parse_edge_list("a b 1.6"), DomainError);
    ParseOptions o;
    o.round_weights = true;
    CHECK(parse_edge_list("a b 1.6", o).edge(0).weight == 2.0);
    CHECK_THROWS_AS(parse_edge_list("a b 0.4", o), DomainError);
    ParseOptions real;
    real.weight_kind = WeightKind::Real;
    CHECK(parse_edge_list("a b 1.6", real).edge(0).weight == 1.6);
}

TEST_CASE("parse errors carry line numbers") {
    try {
        parse_edge_list("# header\na b 1\na b\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_edge_list("a b x"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("a b 1 2"), ParseError);
    CHECK_THROWS_AS(parse_edge_list("a b -1"), DomainError);
    CHECK_THROWS_AS(parse_edge_list("a b 0"), DomainError);
    CHECK_THROWS_AS(parse_edge_list(""), DomainError);
    CHECK_THROWS_AS(parse_edge_list("# only comments\n"), DomainError);
}

TEST_CASE("tabs, spaces and comments") {
    auto g = parse_edge_list("# c\nx\ty\t4\n  y   z 2  \n\n#x z 9\n");
    CHECK(g.num_edges() == 2);
    CHECK(g.total_weight() == 6.0);
}

TEST_CASE("directed_view") {
    ParseOptions o;
    o.directed = false;
    auto g = parse_edge_list("a b 3", o);
    auto d = directed_view(g);
    CHECK(d.directed());
    REQUIRE(d.num_edges() == 2);
    CHECK(d.edge(0) == Edge{0, 1, 3.0});
    CHECK(d.edge(1) == Edge{1, 0, 3.0});

    auto dg = parse_edge_list("a b 3\nb c 2");
    CHECK(directed_view(dg) == dg);

    auto tri = parse_edge_list("a b 1\nb c 2\nc a 3", o);
    auto tv = directed_view(tri);
    CHECK(tv.num_edges() == 6);
    CHECK(tv.total_weight() == 2 * tri.total_weight());

    auto loop = parse_edge_list("a a 2\na b 1", o);
    CHECK(directed_view(loop).num_edges() == 3);
}

TEST_CASE("collapse_to_undirected") {
    ParseOptions o;
    o.directed = false;
    auto g = parse_edge_list("a b 3\nb c 1", o);
    std::vector<Edge> both{{0, 1, 3}, {1, 0, 3}};
    auto bb = collapse_to_undirected(both, g);
    CHECK(bb.edge_count() == 1);
    CHECK(bb.contains(0));
    std::vector<Edge> reverse_only{{1, 0, 3}};
    CHECK(collapse_to_undirected(reverse_only, g).contains(0));
    CHECK(collapse_to_undirected({}, g).edge_count() == 0);
    std::vector<Edge> missing{{0, 2, 1}};
    CHECK_THROWS_AS(collapse_to_undirected(missing, g), DomainError);
    CHECK_THROWS_AS(collapse_to_undirected(both, parse_edge_list("a b 3")), DomainError);
}

TEST_CASE("neighborhoods sort by weight then destination") {
    auto g = parse_edge_list("a c 1\na b 5\na d 1\ne e 2");
    auto nbs = neighborhoods(g);
    auto a = nbs[0];
    CHECK(a.degree == 3);
    CHECK(a.strength == 7.0);
    REQUIRE(a.edges.size() == 3);
    CHECK(g.label(g.edge(a.edges[0]).dst) == "b");
    CHECK(g.label(g.edge(a.edges[1]).dst) == "c");
    CHECK(g.label(g.edge(a.edges[2]).dst) == "d");
    auto b = nbs[2];
    CHECK(b.degree == 0);
    CHECK(b.strength == 0.0);
    auto e = nbs[4];
    CHECK(e.degree == 1);
    CHECK(e.strength == 2.0);
    ParseOptions o;
    o.directed = false;
    CHECK_THROWS_AS(Neighborhoods(parse_edge_list("a b 1", o)), DomainError);
}

TEST_CASE("round trip through the text format is idempotent") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        const bool directed = t % 2;
        auto g = random_graph(rng, directed, 12, 30);
        std::ostringstream out;
        write_edge_list(out, g);
        ParseOptions o;
        o.directed = directed;
        auto h = parse_edge_list(out.str(), o);
        CHECK(h.num_nodes() == g.num_nodes());
        CHECK(std::vector<Edge>(h.edges().begin(), h.edges().end()) ==
              std::vector<Edge>(g.edges().begin(), g.edges().end()));
        std::ostringstream again;
        write_edge_list(again, h);
        CHECK(again.str() == out.str());
    }
}

TEST_CASE("format_weight") {
    CHECK(format_weight(3.0) == "3");
    CHECK(format_weight(1e12) == "1000000000000");
    CHECK(format_weight(0.1) == "0.1");
}

TEST_CASE("property: neighborhood totals match the directed view") {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 100; ++t) {
        auto g = random_graph(rng, t % 2, 8, 20);
        auto d = directed_view(g);
        auto nbs = neighborhoods(d);
        double s = 0;
        std::size_t k = 0;
        for (NodeId v = 0; v < d.num_nodes(); ++v) {
            s += nbs[v].strength;
            k += nbs[v].degree;
            if (g.weight_kind() == WeightKind::Integer) CHECK(nbs[v].strength >= double(nbs[v].degree));
        }
        CHECK(s == d.total_weight());
        CHECK(k == d.num_edges());
        auto totals = node_totals(g);
        for (NodeId v = 0; v < d.num_nodes(); ++v) {
            CHECK(totals.degree[v] == nbs[v].degree);
            CHECK(totals.strength[v] == nbs[v].strength);
        }
    }
}

TEST_CASE("property: collapsing every orientation restores the undirected graph") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
        auto g = random_graph(rng, false, 7, 15);
        auto d = directed_view(g);
        auto bb = collapse_to_undirected(d.edges(), g);
        CHECK(bb == Backbone::full(g));
        CHECK(backbone_subgraph(g, bb) == g);
    }
}

TEST_CASE("backbone bookkeeping") {
    auto g = parse_edge_list("a b 5\na c 1\na d 2");
    std::vector<EdgeId> ids{0, 2};
    auto bb = Backbone::from_edges(g, ids);
    CHECK(bb.edge_count() == 2);
    CHECK(bb.weight_sum() == 7.0);
    CHECK(bb.edge_ids() == ids);
    auto t = node_totals(g, bb);
    CHECK(t.degree[0] == 2);
    CHECK(t.strength[0] == 7.0);
    CHECK(Backbone::empty(g).edge_count() == 0);
    CHECK(Backbone::full(g).weight_sum() == 8.0);
    CHECK_THROWS_AS(bb.check_parent(parse_edge_list("a b 1")), DomainError);
    CHECK_THROWS_AS(Backbone::from_flags(g, {1, 0}), DomainError);
    auto sub = backbone_subgraph(g, bb);
    CHECK(sub.num_nodes() == 4);
    CHECK(sub.num_edges() == 2);
}

TEST_CASE("edges_by_weight_desc orders ties by edge index") {
    auto g = parse_edge_list("c d 2\na b 2\nb c 7\na c 1");
    auto order = edges_by_weight_desc(g);
    std::vector<double> w;
    for (auto e : order) w.push_back(g.edge(e).weight);
    CHECK(w == std::vector<double>{7, 2, 2, 1});
    CHECK(order[1] < order[2]);
}

}
