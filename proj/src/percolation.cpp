#include "mdlbb/percolation.hpp"

#include "mdlbb/error.hpp"
#include "mdlbb/kernels.hpp"
#include "union_find.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace mdlbb {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("probability must lie in [0, 1]");
}

std::vector<double> transmissions(const HalfEdges& h, double p) {
    std::vector<double> phi(h.size());
    for (std::size_t e = 0; e < phi.size(); ++e) phi[e] = contact_transmission(h.weight[e], p);
    return phi;
}

} // namespace

double contact_transmission(double w, double p) {
    check_probability(p);
    if (!(w > 0.0)) throw DomainError("contact weight must be positive");
    if (p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    if (w == 1.0) return p;
    return -std::expm1(w * std::log1p(-p));
}

HalfEdges half_edges(const WeightedGraph& g) {
    if (g.directed()) throw DomainError("percolation needs an undirected graph");
    const std::size_t n = g.num_nodes();
    const auto edges = g.edges();
    HalfEdges h;
    h.num_nodes = n;
    h.offsets.assign(n + 1, 0);
    for (const auto& e : edges) {
        if (e.src == e.dst) continue;
        ++h.offsets[e.src + 1];
        ++h.offsets[e.dst + 1];
    }
    std::partial_sum(h.offsets.begin(), h.offsets.end(), h.offsets.begin());
    const std::size_t m = h.offsets.back();
    if (m > std::size_t(std::numeric_limits<std::int32_t>::max()) || n > std::size_t(std::numeric_limits<std::int32_t>::max()))
        throw DomainError("graph too large for the percolation solver");
    h.src.resize(m);
    h.dst.resize(m);
    h.rev.resize(m);
    h.weight.resize(m);
    auto pos = h.offsets;
    for (const auto& e : edges) {
        if (e.src == e.dst) continue;
        const auto a = pos[e.src]++, b = pos[e.dst]++;
        h.src[a] = std::int32_t(e.src);
        h.dst[a] = std::int32_t(e.dst);
        h.src[b] = std::int32_t(e.dst);
        h.dst[b] = std::int32_t(e.src);
        h.rev[a] = std::int32_t(b);
        h.rev[b] = std::int32_t(a);
        h.weight[a] = h.weight[b] = e.weight;
    }
    return h;
}

std::vector<std::uint8_t> two_core(const WeightedGraph& g) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& e : g.edges()) {
        if (e.src == e.dst) continue;
        adj[e.src].push_back(e.dst);
        adj[e.dst].push_back(e.src);
    }
    std::vector<std::size_t> deg(n);
    std::vector<std::uint8_t> alive(n, 1);
    std::vector<NodeId> queue;
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = adj[v].size();
        if (deg[v] < 2) {
            alive[v] = 0;
            queue.push_back(NodeId(v));
        }
    }
    while (!queue.empty()) {
        const auto v = queue.back();
        queue.pop_back();
        for (auto u : adj[v])
            if (alive[u] && --deg[u] < 2) {
                alive[u] = 0;
                queue.push_back(u);
            }
    }
    return alive;
}

namespace {

MessageState run_messages(const HalfEdges& h, const std::vector<double>& phi, std::vector<double> u,
                          const MessagePassingOptions& opts) {
    const auto& k = kernels::active();
    const std::size_t m = h.size();
    std::vector<double> t(m), next(m), suffix;
    MessageState st;
    st.u = std::move(u);
    if (m == 0) {
        st.converged = true;
        return st;
    }
    while (st.iterations < opts.max_iters) {
        // t[e] = product of u over the out-half-edges of dst(e) other than rev(e).
        for (std::size_t v = 0; v < h.num_nodes; ++v) {
            const auto a = h.offsets[v], b = h.offsets[v + 1];
            if (a == b) continue;
            suffix.assign(b - a + 1, 1.0);
            for (auto i = b; i-- > a;) suffix[i - a] = suffix[i - a + 1] * st.u[i];
            double prefix = 1.0;
            for (auto i = a; i < b; ++i) {
                t[std::size_t(h.rev[i])] = prefix * suffix[i - a + 1];
                prefix *= st.u[i];
            }
        }
        st.max_delta = k.mp_update(m, phi.data(), t.data(), st.u.data(), next.data());
        st.u.swap(next);
        ++st.iterations;
        if (st.max_delta < opts.tolerance) {
            st.converged = true;
            break;
        }
    }
    return st;
}

std::vector<double> random_messages(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> u(m);
    for (auto& x : u) x = unit(rng);
    return u;
}

double cluster_size(const HalfEdges& h, const std::vector<double>& u, std::vector<double>* per_node) {
    if (per_node) per_node->assign(h.num_nodes, 0.0);
    if (h.num_nodes == 0) return 0.0;
    double total = 0.0;
    for (std::size_t v = 0; v < h.num_nodes; ++v) {
        double prod = 1.0;
        for (auto i = h.offsets[v]; i < h.offsets[v + 1]; ++i) prod *= u[i];
        const double s = 1.0 - prod;
        if (per_node) (*per_node)[v] = s;
        total += s;
    }
    return total / double(h.num_nodes);
}

} // namespace

ClusterResult message_passing_cluster(const HalfEdges& h, double p, const MessagePassingOptions& opts,
                                      const MessageState* warm) {
    check_probability(p);
    if (!(opts.tolerance > 0.0)) throw DomainError("tolerance must be positive");
    const auto phi = transmissions(h, p);
    std::vector<double> u0;
    if (opts.init == MessageInit::Warm && warm && !warm->u.empty()) {
        if (warm->u.size() != h.size()) throw DomainError("warm-start state does not match the graph");
        u0 = warm->u;
    } else {
        u0 = random_messages(h.size(), opts.seed);
    }
    ClusterResult r;
    r.state = run_messages(h, phi, std::move(u0), opts);
    r.S = cluster_size(h, r.state.u, &r.S_node);
    if (opts.restarts > 0) {
        std::mt19937_64 seeder(opts.seed);
        seeder.discard(1);
        double lo = r.S, hi = r.S;
        for (std::size_t i = 0; i < opts.restarts; ++i) {
            auto st = run_messages(h, phi, random_messages(h.size(), seeder()), opts);
            const double s = cluster_size(h, st.u, nullptr);
            r.restart_S.push_back(s);
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        r.multistable = hi - lo > kMultistabilityGap;
    }
    return r;
}

ClusterResult message_passing_cluster(const WeightedGraph& g, double p, const MessagePassingOptions& opts,
                                      const MessageState* warm) {
    return message_passing_cluster(half_edges(g), p, opts, warm);
}

NonBacktrackingOperator::NonBacktrackingOperator(const WeightedGraph& g) {
    if (g.directed()) throw DomainError("percolation needs an undirected graph");
    const auto core = two_core(g);
    detail::UnionFind uf(g.num_nodes());
    for (const auto& e : g.edges())
        if (e.src != e.dst && core[e.src] && core[e.dst]) uf.unite(e.src, e.dst);

    std::vector<std::size_t> comp_of(g.num_nodes(), std::size_t(-1));
    std::vector<std::size_t> local(g.num_nodes(), 0);
    std::vector<std::size_t> comp_size;
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        if (!core[v]) continue;
        const auto root = uf.find(v);
        if (comp_of[root] == std::size_t(-1)) {
            comp_of[root] = comp_size.size();
            comp_size.push_back(0);
        }
        local[v] = comp_size[comp_of[root]]++;
    }
    std::vector<std::vector<Edge>> comp_edges(comp_size.size());
    for (const auto& e : g.edges())
        if (e.src != e.dst && core[e.src] && core[e.dst])
            comp_edges[comp_of[uf.find(e.src)]].push_back({NodeId(local[e.src]), NodeId(local[e.dst]), e.weight});
    for (std::size_t c = 0; c < comp_size.size(); ++c) {
        WeightedGraph sub(comp_size[c], std::move(comp_edges[c]), false, g.weight_kind());
        components_.push_back({half_edges(sub), {}});
    }
}

std::size_t NonBacktrackingOperator::core_half_edges() const noexcept {
    std::size_t n = 0;
    for (const auto& c : components_) n += c.h.size();
    return n;
}

double NonBacktrackingOperator::leading_eigenvalue(double p, double tolerance, std::size_t max_iters) {
    check_probability(p);
    if (!(tolerance > 0.0)) throw DomainError("tolerance must be positive");
    const auto t0 = Clock::now();
    ++evaluations_;
    double best = 0.0;
    if (p > 0.0) {
        const auto& k = kernels::active();
        for (auto& c : components_) {
            const auto& h = c.h;
            const std::size_t m = h.size();
            const auto phi = transmissions(h, p);
            if (c.x.size() != m) c.x.assign(m, 1.0);
            std::vector<double> T(h.num_nodes), z(m);
            double shift = 1.0, lo = 0.0, hi = 0.0;
            bool done = false;
            for (std::size_t it = 0; it < max_iters; ++it) {
                ++iterations_;
                for (std::size_t v = 0; v < h.num_nodes; ++v) {
                    double s = 0.0;
                    for (auto i = h.offsets[v]; i < h.offsets[v + 1]; ++i) s += c.x[i];
                    T[v] = s;
                }
                const auto r = k.nb_step(m, phi.data(), c.x.data(), T.data(), h.dst.data(), h.rev.data(), shift,
                                         z.data());
                lo = r.lo;
                hi = r.hi;
                if (hi - lo <= tolerance * std::max(1.0, hi)) {
                    done = true;
                    break;
                }
                shift = hi;
                const double scale = 1.0 / r.zmax;
                for (std::size_t e = 0; e < m; ++e) c.x[e] = z[e] * scale;
            }
            if (!done) {
                seconds_ += seconds_since(t0);
                c.x.clear();
                throw ConvergenceError("non-backtracking power iteration did not converge", hi - lo);
            }
            best = std::max(best, 0.5 * (lo + hi));
        }
    }
    seconds_ += seconds_since(t0);
    return best;
}

double nb_leading_eigenvalue(const WeightedGraph& g, double p, double tolerance) {
    NonBacktrackingOperator op(g);
    return op.leading_eigenvalue(p, tolerance);
}

std::optional<double> critical_probability(NonBacktrackingOperator& op, const CriticalOptions& opts) {
    if (!(opts.tolerance > 0.0)) throw DomainError("tolerance must be positive");
    if (op.empty_core()) return std::nullopt;
    const double top = op.leading_eigenvalue(1.0, opts.eigen_tolerance);
    if (std::abs(top - 1.0) < opts.tolerance) return 1.0;
    if (top < 1.0) return std::nullopt;
    double lo = 0.0, hi = 1.0, mid = 0.5;
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double lam = op.leading_eigenvalue(mid, opts.eigen_tolerance);
        if (std::abs(lam - 1.0) < opts.tolerance) break;
        (lam < 1.0 ? lo : hi) = mid;
        if (!(hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi)) break;
    }
    return mid;
}

std::optional<double> critical_probability(const WeightedGraph& g, const CriticalOptions& opts) {
    NonBacktrackingOperator op(g);
    return critical_probability(op, opts);
}

std::vector<double> parse_pgrid(const std::string& spec) {
    auto bad = [&] { return DomainError("invalid p grid '" + spec + "'"); };
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != s.size()) throw bad();
        return v;
    };
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
    std::vector<double> grid;
    if (parts.size() == 1) {
        grid.push_back(number(parts[0]));
    } else if (parts.size() == 4 && (parts[0] == "log" || parts[0] == "lin")) {
        const double a = number(parts[1]), b = number(parts[2]);
        const double nd = number(parts[3]);
        if (nd < 1 || nd != std::floor(nd) || nd > 1e7) throw bad();
        const auto n = std::size_t(nd);
        if (parts[0] == "log" && !(a > 0.0 && b > 0.0)) throw bad();
        for (std::size_t i = 0; i < n; ++i) {
            const double f = n == 1 ? 0.0 : double(i) / double(n - 1);
            double v = parts[0] == "lin" ? a + (b - a) * f : std::exp(std::log(a) + (std::log(b) - std::log(a)) * f);
            if (i + 1 == n && n > 1) v = b;
            grid.push_back(v);
        }
    } else {
        throw bad();
    }
    for (double p : grid)
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p grid values must lie in [0, 1]");
    return grid;
}

PercolationCurve percolation_curve(const WeightedGraph& g, const std::string& name, const std::vector<double>& grid,
                                   const StudyOptions& opts) {
    PercolationCurve c;
    c.name = name;
    c.edges = g.num_edges();
    const auto h = half_edges(g);
    auto mp = opts.mp;
    if (opts.warm_start) mp.init = MessageInit::Warm;
    MessageState prev;
    const auto t0 = Clock::now();
    for (double p : grid) {
        auto r = message_passing_cluster(h, p, mp, opts.warm_start ? &prev : nullptr);
        c.S.push_back(r.S);
        c.iterations.push_back(r.state.iterations);
        c.converged.push_back(r.state.converged);
        c.multistable.push_back(r.multistable);
        if (opts.warm_start) prev = std::move(r.state);
    }
    c.mp_seconds = seconds_since(t0);
    NonBacktrackingOperator op(g);
    c.p_crit = critical_probability(op, opts.critical);
    c.eigen_evaluations = op.evaluations();
    c.eigen_seconds = op.seconds();
    return c;
}

PercolationReport backbone_percolation_study(const WeightedGraph& g, const std::vector<NamedBackbone>& backbones,
                                             const std::vector<double>& grid, const StudyOptions& opts) {
    PercolationReport rep;
    rep.grid = grid;
    rep.full = percolation_curve(g, "full", grid, opts);
    for (const auto& nb : backbones) {
        nb.backbone.check_parent(g);
        auto curve = percolation_curve(backbone_subgraph(g, nb.backbone), nb.name, grid, opts);
        BackboneComparison cmp;
        cmp.name = nb.name;
        double err = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) err += std::abs(curve.S[i] - rep.full.S[i]);
        cmp.mean_abs_S_error = grid.empty() ? 0.0 : err / double(grid.size());
        if (curve.p_crit && rep.full.p_crit)
            cmp.p_crit_error = std::abs(*curve.p_crit - *rep.full.p_crit);
        else if (!curve.p_crit && !rep.full.p_crit)
            cmp.p_crit_error = 0.0;
        const double base = rep.full.seconds_per_eigen_evaluation();
        cmp.runtime_ratio = base > 0.0 ? curve.seconds_per_eigen_evaluation() / base : 0.0;
        rep.comparisons.push_back(cmp);
        rep.backbones.push_back(std::move(curve));
    }
    return rep;
}

} // namespace mdlbb
