#pragma once

#include "mdlbb/graph.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mdlbb {

/// 1 - (1 - p)^w.
double contact_transmission(double w, double p);

/*
 * Both orientations of every non-loop edge of an undirected graph, grouped
 * by source node: the out-half-edges of v are [offsets[v], offsets[v+1]).
 */
struct HalfEdges {
    std::size_t num_nodes = 0;
    std::vector<std::size_t> offsets;
    std::vector<std::int32_t> src;
    std::vector<std::int32_t> dst;
    std::vector<std::int32_t> rev;
    std::vector<double> weight;

    std::size_t size() const noexcept { return dst.size(); }
};

/// Throws DomainError for directed input.
HalfEdges half_edges(const WeightedGraph& g);

/// Nodes remaining after repeatedly deleting nodes of degree < 2 (self-loops ignored).
std::vector<std::uint8_t> two_core(const WeightedGraph& g);

struct MessageState {
    std::vector<double> u; // per half-edge: probability the source is not reached through it
    std::size_t iterations = 0;
    double max_delta = 0.0;
    bool converged = false;
};

enum class MessageInit { Random, Warm };

struct MessagePassingOptions {
    double tolerance = 1e-10;
    std::size_t max_iters = 100000;
    MessageInit init = MessageInit::Random;
    std::uint64_t seed = 0;
    /// Extra random starts used only to detect several stable fixed points.
    std::size_t restarts = 0;
};

/// S values of random restarts further apart than this flag multistability.
inline constexpr double kMultistabilityGap = 1e-6;

struct ClusterResult {
    double S = 0.0;
    std::vector<double> S_node;
    MessageState state;
    bool multistable = false;
    std::vector<double> restart_S;
};

/*
 * Synchronous sweeps of u_{i->j} = 1 - phi_ij + phi_ij prod_{k in N(j)\i} u_{j->k}
 * until the largest change falls below the tolerance. Warm init starts from
 * `warm` (its size must match the half-edge count).
 */
ClusterResult message_passing_cluster(const HalfEdges& h, double p, const MessagePassingOptions& opts = {},
                                      const MessageState* warm = nullptr);
ClusterResult message_passing_cluster(const WeightedGraph& g, double p, const MessagePassingOptions& opts = {},
                                      const MessageState* warm = nullptr);

/*
 * Spectral radius of the weighted non-backtracking operator, evaluated on the
 * 2-core component by component. Prepared once, evaluated at many p.
 */
class NonBacktrackingOperator {
public:
    explicit NonBacktrackingOperator(const WeightedGraph& g);

    /// Throws ConvergenceError after max_iters iterations.
    double leading_eigenvalue(double p, double tolerance = 1e-8, std::size_t max_iters = 200000);

    bool empty_core() const noexcept { return components_.empty(); }
    std::size_t core_half_edges() const noexcept;
    std::size_t evaluations() const noexcept { return evaluations_; }
    std::size_t iterations() const noexcept { return iterations_; }
    double seconds() const noexcept { return seconds_; }

private:
    struct Component {
        HalfEdges h;
        std::vector<double> x; // last iterate, reused as the next start
    };
    std::vector<Component> components_;
    std::size_t evaluations_ = 0;
    std::size_t iterations_ = 0;
    double seconds_ = 0.0;
};

double nb_leading_eigenvalue(const WeightedGraph& g, double p, double tolerance = 1e-8);

struct CriticalOptions {
    double tolerance = 1e-7;        // |lambda - 1| at the returned p
    double eigen_tolerance = 1e-10; // relative bracket width of each eigenvalue
};

/// p with lambda(p) = 1 by bisection; nullopt when lambda(1) < 1 (including an empty 2-core).
std::optional<double> critical_probability(NonBacktrackingOperator& op, const CriticalOptions& opts = {});
std::optional<double> critical_probability(const WeightedGraph& g, const CriticalOptions& opts = {});

/// "log:a:b:n" (geometric) or "lin:a:b:n"; a single value is a one-point grid.
std::vector<double> parse_pgrid(const std::string& spec);

struct PercolationCurve {
    std::string name;
    std::size_t edges = 0;
    std::vector<double> S;
    std::vector<std::size_t> iterations;
    std::vector<std::uint8_t> converged;
    std::vector<std::uint8_t> multistable;
    std::optional<double> p_crit;
    std::size_t eigen_evaluations = 0;
    double eigen_seconds = 0.0;
    double mp_seconds = 0.0;

    double seconds_per_eigen_evaluation() const {
        return eigen_evaluations ? eigen_seconds / double(eigen_evaluations) : 0.0;
    }
};

struct BackboneComparison {
    std::string name;
    double mean_abs_S_error = 0.0;
    std::optional<double> p_crit_error;
    double runtime_ratio = 0.0; // per eigenvalue evaluation, backbone over full graph
};

struct PercolationReport {
    std::vector<double> grid;
    PercolationCurve full;
    std::vector<PercolationCurve> backbones;
    std::vector<BackboneComparison> comparisons;
};

struct StudyOptions {
    MessagePassingOptions mp;
    bool warm_start = false;
    CriticalOptions critical;
};

struct NamedBackbone {
    std::string name;
    Backbone backbone;
};

PercolationCurve percolation_curve(const WeightedGraph& g, const std::string& name, const std::vector<double>& grid,
                                   const StudyOptions& opts = {});

PercolationReport backbone_percolation_study(const WeightedGraph& g, const std::vector<NamedBackbone>& backbones,
                                             const std::vector<double>& grid, const StudyOptions& opts = {});

} // namespace mdlbb
