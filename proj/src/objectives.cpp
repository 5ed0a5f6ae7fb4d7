#include "mdlbb/objectives.hpp"

#include "mdlbb/combinatorics.hpp"
#include "mdlbb/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mdlbb {

namespace {

constexpr double kLn2 = std::numbers::ln2;

double lg2(double x) { return std::log2(x); }

bool whole(double x) { return std::floor(x) == x; }

// Shared precondition check for the integer-weight partition models.
void check_integer_partition(std::int64_t E, std::int64_t W, std::int64_t E_b, std::int64_t W_b) {
    auto fail = [&](const char* why) {
        throw DomainError(std::string("invalid partition (E=") + std::to_string(E) + ", W=" + std::to_string(W) +
                          ", E_b=" + std::to_string(E_b) + ", W_b=" + std::to_string(W_b) + "): " + why);
    };
    if (E < 0 || E_b < 0 || E_b > E) fail("need 0 <= E_b <= E");
    if (W < E) fail("need W >= E");
    if (E_b == 0 && W_b != 0) fail("empty backbone must have zero weight");
    if (E_b == E && W_b != W) fail("full backbone must carry all weight");
    if (E_b >= 1 && (W_b < E_b || W_b > W - (E - E_b))) fail("need E_b <= W_b <= W - (E - E_b)");
}

void check_real_partition(std::int64_t E, double W, std::int64_t E_b, double W_b) {
    auto fail = [&](const char* why) { throw DomainError(std::string("invalid partition: ") + why); };
    if (E < 0 || E_b < 0 || E_b > E) fail("need 0 <= E_b <= E");
    if (!(W >= 0.0) || !(W_b >= 0.0) || W_b > W) fail("need 0 <= W_b <= W");
    if (E_b == 0 && W_b != 0.0) fail("empty backbone must have zero weight");
    if (E_b == E && W_b != W) fail("full backbone must carry all weight");
    if (E_b > 0 && E_b < E && !(W_b > 0.0 && W_b < W)) fail("both sides need positive weight");
}

std::int64_t as_count(double w) {
    if (!whole(w)) throw DomainError("integer-weight objective given a non-integer weight sum");
    return static_cast<std::int64_t>(w);
}

// log2 Gamma(x + d) / Gamma(x) for x >= 1 and integer d >= 0.
double log2_gamma_ratio(double x, double d) {
    if (d == 0.0) return 0.0;
    if (d <= 16.0) {
        double s = 0.0;
        for (int i = 0; i < static_cast<int>(d); ++i) s += std::log(x + i);
        return s / kLn2;
    }
    if (x <= 16.0) return (std::lgamma(x + d) - std::lgamma(x)) / kLn2;
    const double n0 = x - 1.0;
    const double n1 = x + d - 1.0;
    double ln = (n0 + 0.5) * std::log1p(d / n0) + d * std::log(n1) - d + stirling_remainder(n1) -
                stirling_remainder(n0);
    return ln / kLn2;
}

} // namespace

void ObjectiveSpec::validate() const {
    if (family == Family::Microcanonical && weight_model)
        throw DomainError("microcanonical objectives take no weight model");
    if (family == Family::Canonical && !weight_model)
        throw DomainError("canonical objectives need a weight model");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
}

std::string ObjectiveSpec::family_name() const {
    if (family == Family::Microcanonical) return "micro";
    switch (weight_model.value_or(WeightModel::Geometric)) {
    case WeightModel::Geometric: return "canonical-geometric";
    case WeightModel::Poisson: return "canonical-poisson";
    case WeightModel::Exponential: return "canonical-exponential";
    }
    return "canonical";
}

std::string ObjectiveSpec::name() const {
    return std::string(scope == Scope::Global ? "global/" : "local/") + family_name();
}

ObjectiveSpec parse_objective(std::string_view family, Scope scope, double lambda) {
    ObjectiveSpec spec;
    if (family == "micro" || family == "microcanonical") spec = ObjectiveSpec::micro(scope);
    else if (family == "canonical-geometric") spec = ObjectiveSpec::canonical(scope, WeightModel::Geometric);
    else if (family == "canonical-poisson") spec = ObjectiveSpec::canonical(scope, WeightModel::Poisson, lambda);
    else if (family == "canonical-exponential")
        spec = ObjectiveSpec::canonical(scope, WeightModel::Exponential, lambda);
    else throw DomainError("unknown objective '" + std::string(family) + "'");
    spec.validate();
    return spec;
}

DlValue dl_global_micro(std::int64_t E, std::int64_t W, std::int64_t E_b, std::int64_t W_b) {
    check_integer_partition(E, W, E_b, W_b);
    const std::int64_t E_r = E - E_b;
    const std::int64_t W_r = W - W_b;
    double bits = lg2(double(E + 1)) + lg2(double(W - E + 1)) + log2_binomial(E, E_b) +
                  log2_binomial(W_b - 1, E_b - 1) + log2_binomial(W_r - 1, E_r - 1);
    return {bits};
}

DlValue dl_neigh_micro(std::int64_t k, std::int64_t s, std::int64_t k_b, std::int64_t s_b) {
    return dl_global_micro(k, s, k_b, s_b);
}

double strength_prior_bits(std::int64_t N, std::int64_t E, std::int64_t W) {
    if (N <= 0) return 0.0;
    return log2_binomial(N + W - E - 1, W - E);
}

DlValue dl_local_micro(const WeightedGraph& g, const Backbone& bb) {
    if (!g.directed()) throw DomainError("dl_local_micro expects a directed view");
    auto all = node_totals(g);
    auto sel = node_totals(g, bb);
    double bits = strength_prior_bits(std::int64_t(g.num_nodes()), std::int64_t(g.num_edges()),
                                      as_count(g.total_weight()));
    for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        bits += dl_neigh_micro(std::int64_t(all.degree[v]), as_count(all.strength[v]), std::int64_t(sel.degree[v]),
                               as_count(sel.strength[v]))
                    .bits;
    }
    return {bits};
}

DlValue dl_global_canonical(std::int64_t E, double W, std::int64_t E_b, double W_b, const ObjectiveSpec& spec,
                            double log2_weight_factorials) {
    spec.validate();
    if (spec.family != Family::Canonical) throw DomainError("dl_global_canonical needs a canonical objective");
    const auto model = *spec.weight_model;
    const std::int64_t E_r = E - E_b;
    double bits = lg2(double(E + 1));

    if (model == WeightModel::Exponential) {
        check_real_partition(E, W, E_b, W_b);
        const double lam = spec.lambda;
        const double W_r = W - W_b;
        bits += log2_binomial(E, E_b) - 2.0 * lg2(lam) + double(E_b + 1) * lg2(W_b + lam) - log2_factorial(E_b) +
                double(E_r + 1) * lg2(W_r + lam) - log2_factorial(E_r);
        return {bits};
    }

    const std::int64_t Wi = as_count(W);
    const std::int64_t Wbi = as_count(W_b);
    check_integer_partition(E, Wi, E_b, Wbi);
    const std::int64_t W_r = Wi - Wbi;
    if (model == WeightModel::Geometric) {
        bits += lg2(double(Wbi + 1)) + lg2(double(W_r + 1)) + log2_binomial(E, E_b) + log2_binomial(Wbi, E_b) +
                log2_binomial(W_r, E_r);
    } else {
        const double lam = spec.lambda;
        bits += log2_binomial(E, E_b) - 2.0 * lg2(lam) + double(Wbi + 1) * lg2(double(E_b) + lam) -
                log2_factorial(Wbi) + double(W_r + 1) * lg2(double(E_r) + lam) - log2_factorial(W_r) +
                log2_weight_factorials;
    }
    return {bits};
}

DlValue dl_neigh_canonical(std::int64_t k, double s, std::int64_t k_b, double s_b, const ObjectiveSpec& spec,
                           double log2_weight_factorials) {
    return dl_global_canonical(k, s, k_b, s_b, spec, log2_weight_factorials);
}

double delta_dl_weight_increment(std::int64_t E, double W, std::int64_t E_b, double W_b, const ObjectiveSpec& spec) {
    spec.validate();
    if (E_b < 1) throw DomainError("weight increment needs a non-empty backbone");
    const double E_r = double(E - E_b);
    const double W_r = W - W_b;
    const double Eb = double(E_b);

    if (spec.weight_model == WeightModel::Exponential) {
        check_real_partition(E, W, E_b, W_b);
        check_real_partition(E, W, E_b, W_b + 1.0);
        const double lam = spec.lambda;
        return (Eb + 1.0) * std::log2((W_b + 1.0 + lam) / (W_b + lam)) +
               (E_r + 1.0) * std::log2((W_r - 1.0 + lam) / (W_r + lam));
    }

    const auto Wi = as_count(W);
    const auto Wbi = as_count(W_b);
    check_integer_partition(E, Wi, E_b, Wbi);
    check_integer_partition(E, Wi, E_b, Wbi + 1);
    if (spec.family == Family::Microcanonical) {
        return std::log2((W_b / (W_b - Eb + 1.0)) * ((W_r - E_r) / (W_r - 1.0)));
    }
    if (spec.weight_model == WeightModel::Geometric) {
        return std::log2(((W_r - E_r) / (W_b - Eb + 1.0)) * ((W_b + 2.0) / (W_r + 1.0)));
    }
    const double lam = spec.lambda;
    return std::log2(((Eb + lam) / (W_b + 1.0)) * (W_r / (E_r + lam)));
}

PartitionObjective::PartitionObjective(const ObjectiveSpec& spec, std::int64_t edges, double weight,
                                       double log2_weight_factorials)
    : spec_(spec), edges_(edges), weight_(weight), log_fact_(log2_weight_factorials) {
    spec_.validate();
    if (spec_.integer_weights() && !whole(weight_))
        throw DomainError("integer-weight objective given a non-integer total weight");
}

DlValue PartitionObjective::operator()(std::int64_t backbone_edges, double backbone_weight) const {
    if (spec_.family == Family::Microcanonical)
        return dl_global_micro(edges_, std::int64_t(weight_), backbone_edges, std::int64_t(backbone_weight));
    return dl_global_canonical(edges_, weight_, backbone_edges, backbone_weight, spec_, log_fact_);
}

double PartitionObjective::add_edge_delta(std::int64_t backbone_edges, double backbone_weight, double w) const {
    const double E = double(edges_);
    const double Eb = double(backbone_edges);
    const double Er = E - Eb;
    const double Wb = backbone_weight;
    const double Wr = weight_ - backbone_weight;
    if (backbone_edges < 0 || backbone_edges >= edges_) throw DomainError("no edge left to add");

    double delta = std::log2(Er / (Eb + 1.0));
    if (spec_.family == Family::Microcanonical) {
        // log2 C(W_b - 1, E_b - 1) -> log2 C(W_b + w - 1, E_b)
        if (backbone_edges > 0)
            delta += log2_gamma_ratio(Wb, w) - std::log2(Eb) - log2_gamma_ratio(Wb - Eb + 1.0, w - 1.0);
        // log2 C(W_r - 1, E_r - 1) -> log2 C(W_r - w - 1, E_r - 2)
        if (Er > 1.0)
            delta += -log2_gamma_ratio(Wr - w, w) + std::log2(Er - 1.0) +
                     log2_gamma_ratio(Wr - w - Er + 2.0, w - 1.0);
        return delta;
    }

    const double lam = spec_.lambda;
    switch (*spec_.weight_model) {
    case WeightModel::Geometric:
        delta += std::log2((Wb + w + 1.0) / (Wb + 1.0)) + std::log2((Wr - w + 1.0) / (Wr + 1.0));
        delta += log2_gamma_ratio(Wb + 1.0, w) - std::log2(Eb + 1.0) - log2_gamma_ratio(Wb - Eb + 1.0, w - 1.0);
        delta += -log2_gamma_ratio(Wr - w + 1.0, w) + std::log2(Er) + log2_gamma_ratio(Wr - w - Er + 2.0, w - 1.0);
        return delta;
    case WeightModel::Poisson:
        delta += (Wb + w + 1.0) * std::log2(Eb + 1.0 + lam) - (Wb + 1.0) * std::log2(Eb + lam) -
                 log2_gamma_ratio(Wb + 1.0, w);
        delta += (Wr - w + 1.0) * std::log2(Er - 1.0 + lam) - (Wr + 1.0) * std::log2(Er + lam) +
                 log2_gamma_ratio(Wr - w + 1.0, w);
        return delta;
    case WeightModel::Exponential:
        delta += (Eb + 2.0) * std::log2(Wb + w + lam) - (Eb + 1.0) * std::log2(Wb + lam) - std::log2(Eb + 1.0);
        delta += Er * std::log2(Wr - w + lam) - (Er + 1.0) * std::log2(Wr + lam) + std::log2(Er);
        return delta;
    }
    return delta;
}

double log2_weight_factorials(const WeightedGraph& g) {
    double s = 0.0;
    for (const auto& e : g.edges()) s += log2_factorial(as_count(e.weight));
    return s;
}

namespace {

DlValue evaluate_local(const WeightedGraph& dg, const Backbone& arcs, const ObjectiveSpec& spec) {
    if (spec.family == Family::Microcanonical) return dl_local_micro(dg, arcs);
    const bool poisson = spec.weight_model == WeightModel::Poisson;
    auto all = node_totals(dg);
    auto sel = node_totals(dg, arcs);
    std::vector<double> log_fact(dg.num_nodes(), 0.0);
    if (poisson)
        for (const auto& e : dg.edges()) log_fact[e.src] += log2_factorial(as_count(e.weight));
    double bits = 0.0;
    for (std::size_t v = 0; v < dg.num_nodes(); ++v) {
        bits += dl_neigh_canonical(std::int64_t(all.degree[v]), all.strength[v], std::int64_t(sel.degree[v]),
                                   sel.strength[v], spec, log_fact[v])
                    .bits;
    }
    return {bits};
}

} // namespace

DlValue evaluate_objective(const WeightedGraph& g, const Backbone& bb, const ObjectiveSpec& spec) {
    spec.validate();
    bb.check_parent(g);
    if (spec.integer_weights() && g.weight_kind() != WeightKind::Integer)
        throw DomainError("objective " + spec.family_name() + " needs integer weights");
    if (spec.scope == Scope::Global) {
        PartitionObjective obj(spec, std::int64_t(g.num_edges()), g.total_weight(),
                               spec.weight_model == WeightModel::Poisson ? log2_weight_factorials(g) : 0.0);
        return obj(std::int64_t(bb.edge_count()), bb.weight_sum());
    }
    if (g.directed()) return evaluate_local(g, bb, spec);
    auto dg = directed_view(g);
    std::vector<std::uint8_t> flags(dg.num_edges(), 0);
    auto arcs = dg.edges();
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        auto e = g.find_edge(arcs[a].src, arcs[a].dst);
        flags[a] = bb.contains(*e) ? 1 : 0;
    }
    return evaluate_local(dg, Backbone::from_flags(dg, std::move(flags)), spec);
}

DlValue empty_backbone_dl(const WeightedGraph& g, const ObjectiveSpec& spec) {
    return evaluate_objective(g, Backbone::empty(g), spec);
}

} // namespace mdlbb
