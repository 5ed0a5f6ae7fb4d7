#include "mdlbb/kernels.hpp"
#include "mdlbb/percolation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

using namespace mdlbb;

namespace {

struct Arrays {
    std::vector<double> phi, x, T, t, u;
    std::vector<std::int32_t> dst, rev;
};

Arrays random_arrays(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0), pos(1e-3, 2.0);
    Arrays a;
    const std::size_t nodes = std::max<std::size_t>(1, n / 3);
    std::uniform_int_distribution<std::int32_t> nd(0, std::int32_t(nodes - 1));
    std::uniform_int_distribution<std::int32_t> ed(0, std::int32_t(std::max<std::size_t>(1, n) - 1));
    for (std::size_t e = 0; e < n; ++e) {
        a.phi.push_back(unit(rng));
        a.x.push_back(pos(rng));
        a.t.push_back(unit(rng));
        a.u.push_back(unit(rng));
        a.dst.push_back(nd(rng));
        a.rev.push_back(ed(rng));
    }
    for (std::size_t v = 0; v < nodes; ++v) a.T.push_back(5.0 + 3.0 * unit(rng));
    return a;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar kernels follow their formulas") {
    std::mt19937_64 rng(61);
    const auto& k = kernels::scalar();
    for (std::size_t n : {1, 2, 7, 64, 1001}) {
        auto a = random_arrays(rng, n);
        std::vector<double> z(n), un(n);
        const auto r = k.nb_step(n, a.phi.data(), a.x.data(), a.T.data(), a.dst.data(), a.rev.data(), 0.75, z.data());
        double lo = INFINITY, hi = -INFINITY, zmax = -INFINITY;
        for (std::size_t e = 0; e < n; ++e) {
            const double y = a.phi[e] * (a.T[std::size_t(a.dst[e])] - a.x[std::size_t(a.rev[e])]);
            CHECK(z[e] == doctest::Approx(y + 0.75 * a.x[e]).epsilon(1e-15));
            lo = std::min(lo, y / a.x[e]);
            hi = std::max(hi, y / a.x[e]);
            zmax = std::max(zmax, z[e]);
        }
        CHECK(r.lo == doctest::Approx(lo).epsilon(1e-14));
        CHECK(r.hi == doctest::Approx(hi).epsilon(1e-14));
        CHECK(r.zmax == zmax);
        const double d = k.mp_update(n, a.phi.data(), a.t.data(), a.u.data(), un.data());
        double dmax = 0;
        for (std::size_t e = 0; e < n; ++e) {
            CHECK(un[e] == doctest::Approx(1.0 - a.phi[e] * (1.0 - a.t[e])).epsilon(1e-15));
            dmax = std::max(dmax, std::abs(un[e] - a.u[e]));
        }
        CHECK(d == dmax);
    }
}

TEST_CASE("vector kernels are bitwise identical to scalar") {
    const auto* v = kernels::avx2();
    if (!v) {
        MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
        return;
    }
    const auto& s = kernels::scalar();
    std::mt19937_64 rng(62);
    for (std::size_t n = 0; n <= 70; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            const std::size_t len = n < 70 ? n : 10007;
            auto a = random_arrays(rng, len);
            std::vector<double> zs(len), zv(len), us(len), uv(len);
            const double shift = rep * 0.37;
            const auto rs = s.nb_step(len, a.phi.data(), a.x.data(), a.T.data(), a.dst.data(), a.rev.data(), shift, zs.data());
            const auto rv = v->nb_step(len, a.phi.data(), a.x.data(), a.T.data(), a.dst.data(), a.rev.data(), shift, zv.data());
            CHECK(std::memcmp(zs.data(), zv.data(), len * sizeof(double)) == 0);
            if (len > 0) {
                CHECK(same_bits(rs.lo, rv.lo));
                CHECK(same_bits(rs.hi, rv.hi));
                CHECK(same_bits(rs.zmax, rv.zmax));
            }
            const double ds = s.mp_update(len, a.phi.data(), a.t.data(), a.u.data(), us.data());
            const double dv = v->mp_update(len, a.phi.data(), a.t.data(), a.u.data(), uv.data());
            CHECK(std::memcmp(us.data(), uv.data(), len * sizeof(double)) == 0);
            CHECK(same_bits(ds, dv));
        }
    }
}

TEST_CASE("solvers give identical results under either kernel set") {
    std::mt19937_64 rng(63);
    std::uniform_int_distribution<NodeId> nd(0, 499);
    std::uniform_int_distribution<int> wd(1, 9);
    std::vector<Edge> edges;
    while (edges.size() < 1500) {
        NodeId a = nd(rng), b = nd(rng);
        if (a != b) edges.push_back({a, b, double(wd(rng))});
    }
    WeightedGraph g(500, edges, false);
    auto run = [&] {
        std::vector<double> out;
        for (double p : {0.05, 0.2, 0.6}) {
            out.push_back(nb_leading_eigenvalue(g, p, 1e-12));
            auto r = message_passing_cluster(g, p);
            out.push_back(r.S);
            out.push_back(double(r.state.iterations));
        }
        out.push_back(*critical_probability(g));
        return out;
    };
    kernels::force_scalar(true);
    CHECK(std::string(kernels::active().name) == "scalar");
    const auto a = run();
    kernels::force_scalar(false);
    const auto b = run();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_bits(a[i], b[i]));
}

}
