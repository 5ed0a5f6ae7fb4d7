#pragma once

#include "mdlbb/graph.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace mdlbb {

enum class Scope { Global, Local };
enum class Family { Microcanonical, Canonical };
enum class WeightModel { Geometric, Poisson, Exponential };

/// Which description length to optimize.
struct ObjectiveSpec {
    Scope scope = Scope::Global;
    Family family = Family::Microcanonical;
    std::optional<WeightModel> weight_model; // canonical only
    double lambda = 1.0;                     // rate of the Poisson/exponential parameter prior

    static ObjectiveSpec micro(Scope scope) { return {scope, Family::Microcanonical, std::nullopt, 1.0}; }
    static ObjectiveSpec canonical(Scope scope, WeightModel model, double lambda = 1.0) {
        return {scope, Family::Canonical, model, lambda};
    }

    /// Throws DomainError on an inconsistent combination.
    void validate() const;
    bool integer_weights() const { return weight_model != WeightModel::Exponential; }
    /// "micro", "canonical-geometric", "canonical-poisson", "canonical-exponential".
    std::string family_name() const;
    /// family_name() prefixed with the scope, e.g. "global/micro".
    std::string name() const;
    ObjectiveSpec with_scope(Scope s) const {
        auto out = *this;
        out.scope = s;
        return out;
    }
};

/// Parses family_name() strings; lambda is applied to Poisson/exponential.
ObjectiveSpec parse_objective(std::string_view family, Scope scope, double lambda = 1.0);

/// Description length in bits.
struct DlValue {
    double bits = 0.0;
    friend auto operator<=>(const DlValue&, const DlValue&) = default;
};

// Microcanonical, whole graph: E edges of total weight W, of which E_b edges
// with weight W_b form the backbone.
DlValue dl_global_micro(std::int64_t E, std::int64_t W, std::int64_t E_b, std::int64_t W_b);
// Same model over one out-neighborhood of degree k and strength s.
DlValue dl_neigh_micro(std::int64_t k, std::int64_t s, std::int64_t k_b, std::int64_t s_b);
/// Strength prior plus the sum of neighborhood terms over a directed graph.
DlValue dl_local_micro(const WeightedGraph& g, const Backbone& bb);
/// log2 C(N+W-E-1, W-E): uniform prior over strength sequences.
double strength_prior_bits(std::int64_t N, std::int64_t E, std::int64_t W);

/*
 * Canonical (parameter-integrated) description lengths. W and W_b are real
 * sums for the exponential model. For Poisson, log2_weight_factorials must be
 * sum_e log2(w_e!) over the edges being described; it does not depend on
 * the partition.
 */
DlValue dl_global_canonical(std::int64_t E, double W, std::int64_t E_b, double W_b, const ObjectiveSpec& spec,
                            double log2_weight_factorials = 0.0);
DlValue dl_neigh_canonical(std::int64_t k, double s, std::int64_t k_b, double s_b, const ObjectiveSpec& spec,
                           double log2_weight_factorials = 0.0);

/// L(W_b + 1) - L(W_b) at fixed E_b, closed form per family.
double delta_dl_weight_increment(std::int64_t E, double W, std::int64_t E_b, double W_b, const ObjectiveSpec& spec);

/*
 * Objective restricted to one edge population (whole graph or one
 * neighborhood) as a function of the backbone counts only.
 */
class PartitionObjective {
public:
    PartitionObjective(const ObjectiveSpec& spec, std::int64_t edges, double weight,
                       double log2_weight_factorials = 0.0);

    DlValue operator()(std::int64_t backbone_edges, double backbone_weight) const;
    /// L(E_b + 1, W_b + w) - L(E_b, W_b), assembled from per-term ratios.
    double add_edge_delta(std::int64_t backbone_edges, double backbone_weight, double w) const;

    std::int64_t edges() const noexcept { return edges_; }
    double weight() const noexcept { return weight_; }

private:
    ObjectiveSpec spec_;
    std::int64_t edges_;
    double weight_;
    double log_fact_;
};

/// sum_e log2(w_e!) over the graph's edges.
double log2_weight_factorials(const WeightedGraph& g);

/*
 * Objective evaluated on a backbone of g. Global scope uses g's own edge list
 * (undirected edges counted once). Local scope uses the directed view; an
 * undirected member edge contributes both orientations. Local canonical
 * totals carry no strength prior.
 */
DlValue evaluate_objective(const WeightedGraph& g, const Backbone& bb, const ObjectiveSpec& spec);

/// Objective of the empty backbone for the given scope.
DlValue empty_backbone_dl(const WeightedGraph& g, const ObjectiveSpec& spec);

} // namespace mdlbb
