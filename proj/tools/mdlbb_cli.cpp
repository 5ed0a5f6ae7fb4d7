// mdlbb: backbone extraction, comparison, synthesis and percolation studies.

#include "mdlbb/baselines.hpp"
#include "mdlbb/error.hpp"
#include "mdlbb/kernels.hpp"
#include "mdlbb/metrics.hpp"
#include "mdlbb/percolation.hpp"
#include "mdlbb/report.hpp"
#include "mdlbb/solver.hpp"
#include "mdlbb/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

using namespace mdlbb;

namespace {

// Thrown for flag combinations CLI11 cannot check on its own.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GraphFlags {
    bool undirected = false;
    bool real_weights = false;
    bool round_weights = false;

    void add(CLI::App* app) {
        app->add_flag("--undirected,!--directed", undirected, "Treat the edge list as undirected");
        app->add_flag("--real-weights", real_weights, "Accept non-integer weights");
        app->add_flag("--round-weights", round_weights, "Round weights to the nearest integer");
    }

    ParseOptions options(bool force_real = false) const {
        if (real_weights && round_weights) throw UsageError("--real-weights and --round-weights are exclusive");
        ParseOptions o;
        o.directed = !undirected;
        o.weight_kind = (real_weights || force_real) && !round_weights ? WeightKind::Real : WeightKind::Integer;
        o.round_weights = round_weights;
        return o;
    }
};

void emit(const Json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed for " + path);
}

// Maps the edges of a backbone file onto the parent graph by label.
Backbone load_backbone(const WeightedGraph& g, const std::string& path) {
    ParseOptions o;
    o.directed = g.directed();
    o.weight_kind = WeightKind::Real;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::vector<EdgeId> ids;
    // An empty backbone file is legal here.
    if (text.find_first_not_of(" \t\r\n") != std::string::npos) {
        bool any_edge = false;
        std::istringstream lines(text);
        for (std::string line; std::getline(lines, line);)
            if (!line.empty() && line[0] != '#' && line.find_first_not_of(" \t\r") != std::string::npos) any_edge = true;
        if (any_edge) {
            const auto b = parse_edge_list(text, o);
            std::map<std::string, NodeId> id;
            for (NodeId v = 0; v < g.num_nodes(); ++v) id.emplace(g.label(v), v);
            for (const auto& e : b.edges()) {
                auto s = id.find(b.label(e.src)), d = id.find(b.label(e.dst));
                std::optional<EdgeId> found;
                if (s != id.end() && d != id.end()) found = g.find_edge(s->second, d->second);
                if (!found)
                    throw DomainError(path + ": edge " + b.label(e.src) + " -> " + b.label(e.dst) +
                                      " is not in the graph");
                ids.push_back(*found);
            }
        }
    }
    return Backbone::from_edges(g, ids);
}

struct BackboneCmd {
    std::string input, method = "mdl-global", objective = "micro", output;
    double lambda = 1.0, alpha = 0.05, threshold = 0.5;
    std::size_t e_target = 0, sample_cap = 10000;
    bool have_e_target = false;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    GraphFlags graph;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("backbone", "Extract a backbone from a weighted edge list");
        c->add_option("input", input, "Edge list (src dst weight)")->required()->check(CLI::ExistingFile);
        c->add_option("--method", method, "Backboning method")
            ->check(CLI::IsMember({"mdl-global", "mdl-local", "disparity-alpha", "disparity-tope", "hss",
                                   "percolation"}));
        c->add_option("--objective", objective, "MDL objective family")
            ->check(CLI::IsMember({"micro", "canonical-geometric", "canonical-poisson", "canonical-exponential"}));
        c->add_option("--lambda", lambda, "Prior rate for Poisson/exponential objectives")
            ->check(CLI::PositiveNumber);
        c->add_option("--alpha", alpha, "Disparity significance level")->check(CLI::Range(0.0, 1.0));
        c->add_option("--e-target", e_target, "Edge count for disparity-tope")->each([this](const std::string&) {
            have_e_target = true;
        });
        c->add_option("--threshold", threshold, "Salience threshold")->check(CLI::Range(0.0, 1.0));
        c->add_option("--sample-cap", sample_cap, "Salience root sample size")->check(CLI::PositiveNumber);
        c->add_option("--seed", seed, "Random seed");
        c->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
        c->add_option("--output,-o", output, "Output prefix: writes PREFIX.tsv and PREFIX.json");
        graph.add(c);
        c->callback([this] { run(); });
    }

    void run() {
        if (method == "disparity-alpha" && !(alpha > 0.0 && alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
        if (method == "disparity-tope" && !have_e_target) throw UsageError("disparity-tope needs --e-target");
        const bool mdl = method.rfind("mdl-", 0) == 0;
        const bool exponential = mdl && objective == "canonical-exponential";
        const auto g = read_edge_list(input, graph.options(exponential));
        Json params = Json::object();
        Backbone bb;
        Json record;
        if (mdl) {
            const auto spec = parse_objective(objective, method == "mdl-global" ? Scope::Global : Scope::Local, lambda);
            params["objective"] = objective;
            if (spec.weight_model == WeightModel::Poisson || spec.weight_model == WeightModel::Exponential)
                params["lambda"] = lambda;
            params["threads"] = threads;
            auto r = solve(g, spec, {false, threads});
            record = backbone_json(g, r, method, params);
            bb = std::move(r.backbone);
        } else {
            if (method == "disparity-alpha") {
                params["alpha"] = alpha;
                bb = disparity_filter(g, alpha);
            } else if (method == "disparity-tope") {
                params["e_target"] = e_target;
                bb = disparity_filter_top_e(g, e_target);
            } else if (method == "hss") {
                params["threshold"] = threshold;
                params["sample_cap"] = sample_cap;
                params["seed"] = seed;
                bb = high_salience_skeleton(g, threshold, {sample_cap, seed, threads});
            } else {
                bb = percolation_backbone(g);
            }
            record = backbone_json(g, bb, method, params);
        }
        if (!output.empty()) {
            write_edge_list(output + ".tsv", backbone_subgraph(g, bb));
            record["backbone"] = output + ".tsv";
            emit(record, output + ".json");
        } else {
            emit(record, "");
        }
    }
};

struct CompareCmd {
    std::string input, output;
    std::vector<std::string> backbones;
    std::size_t sample_cap = 10000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    GraphFlags graph;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("compare", "Evaluate backbone edge lists against their graph");
        c->add_option("input", input, "Original edge list")->required()->check(CLI::ExistingFile);
        c->add_option("backbones", backbones, "Backbone edge lists")->required()->check(CLI::ExistingFile);
        c->add_option("--sample-cap", sample_cap, "Reachability node sample size")->check(CLI::PositiveNumber);
        c->add_option("--seed", seed, "Seed for the reachability sample");
        c->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1u, 1024u));
        c->add_option("--output,-o", output, "JSON output path (default stdout)");
        graph.add(c);
        c->callback([this] { run(); });
    }

    void run() {
        const auto g = read_edge_list(input, graph.options());
        std::vector<Backbone> bbs;
        for (const auto& path : backbones) bbs.push_back(load_backbone(g, path));
        Json j;
        j["graph"] = input;
        j["sample_cap"] = sample_cap;
        j["seed"] = seed;
        j["rows"] = Json::array();
        for (std::size_t i = 0; i < bbs.size(); ++i) {
            Json row;
            row["backbone"] = backbones[i];
            row["metrics"] = metrics_json(summarize(g, bbs[i], {sample_cap, seed, threads}));
            j["rows"].push_back(std::move(row));
        }
        if (bbs.size() >= 2) {
            Json m = Json::array();
            for (const auto& a : bbs) {
                Json row = Json::array();
                for (const auto& b : bbs) row.push_back(jaccard_similarity(a, b));
                m.push_back(std::move(row));
            }
            j["jaccard"] = std::move(m);
        }
        emit(j, output);
    }
};

struct SynthCmd {
    std::string output = "instance", scope = "global";
    std::size_t N = 0, k = 0;
    double gamma = 1.0, hstr = 1.0, hneig = 1.0;
    std::int64_t W = 0;
    std::uint64_t seed = 0;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("synth", "Generate synthetic instances");
        c->require_subcommand(1);
        auto common = [this](CLI::App* s) {
            s->add_option("--N", N, "Node count")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 31));
            s->add_option("--k", k, "Out-degree")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 31));
            s->add_option("--seed", seed, "Random seed");
            s->add_option("--output,-o", output, "Output prefix");
        };
        auto* planted = c->add_subcommand("planted", "Planted canonical backbone");
        common(planted);
        planted->add_option("--gamma", gamma, "theta1 / theta0")->required()->check(CLI::Range(0.0, 1.0));
        planted->add_option("--scope", scope, "Planting scope")->check(CLI::IsMember({"global", "local"}));
        planted->callback([this] { run_planted(); });

        auto* dm = c->add_subcommand("dm", "Dirichlet-multinomial weights on a regular graph");
        common(dm);
        dm->add_option("--W", W, "Total weight")->required()->check(CLI::PositiveNumber);
        dm->add_option("--hstr", hstr, "Strength concentration")->required()->check(CLI::PositiveNumber);
        dm->add_option("--hneig", hneig, "Neighborhood concentration")->required()->check(CLI::PositiveNumber);
        dm->callback([this] { run_dm(); });

        auto* regular = c->add_subcommand("regular", "Unit-weight k-out regular graph");
        common(regular);
        regular->callback([this] { run_regular(); });
    }

    void check_ranges() const {
        if (k > N) throw UsageError("--k must not exceed --N");
    }

    void run_planted() {
        check_ranges();
        if (!(gamma > 0.0)) throw UsageError("--gamma must lie in (0, 1]");
        write_instance(output, planted_instance({N, k, gamma, scope == "global" ? Scope::Global : Scope::Local, seed}));
    }

    void run_dm() {
        check_ranges();
        if (W < std::int64_t(N * k)) throw UsageError("--W must be at least N k");
        write_instance(output, dirichlet_multinomial_weights({N, k, W, hstr, hneig, seed}));
    }

    void run_regular() {
        check_ranges();
        write_instance(output, random_regular_directed(N, k, seed), N, k, seed);
    }
};

struct PercolationCmd {
    std::string input, output, pgrid = "log:1e-4:1:41";
    std::vector<std::string> backbones;
    bool warm = false, timings = false, directed = false, real_weights = false, round_weights = false;
    std::uint64_t seed = 0;
    std::size_t restarts = 0, max_iters = 100000;
    double tolerance = 1e-10, crit_tolerance = 1e-7;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("percolation", "Message-passing percolation study of a graph and its backbones");
        c->add_option("input", input, "Undirected contact edge list")->required()->check(CLI::ExistingFile);
        c->add_option("--backbones", backbones, "Backbone edge lists")->check(CLI::ExistingFile);
        c->add_option("--pgrid", pgrid, "log:a:b:n, lin:a:b:n, or a single p");
        c->add_flag("--warm-start", warm, "Start each grid point from the previous fixed point");
        c->add_flag("--timings", timings, "Include wall times in the report");
        c->add_flag("--directed", directed, "Declare the input directed (rejected)");
        c->add_flag("--real-weights", real_weights, "Accept non-integer weights");
        c->add_flag("--round-weights", round_weights, "Round weights to the nearest integer");
        c->add_option("--seed", seed, "Seed for random message initialization");
        c->add_option("--restarts", restarts, "Extra random starts for the multistability check");
        c->add_option("--tolerance", tolerance, "Message-passing tolerance")->check(CLI::PositiveNumber);
        c->add_option("--max-iters", max_iters, "Message-passing sweep cap")->check(CLI::PositiveNumber);
        c->add_option("--critical-tolerance", crit_tolerance, "Target |lambda - 1|")->check(CLI::PositiveNumber);
        c->add_option("--output,-o", output, "JSON output path (default stdout)");
        c->callback([this] { run(); });
    }

    void run() {
        std::vector<double> grid;
        try {
            grid = parse_pgrid(pgrid);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        if (directed) throw DomainError("percolation needs an undirected graph");
        ParseOptions o;
        o.directed = false;
        o.weight_kind = real_weights && !round_weights ? WeightKind::Real : WeightKind::Integer;
        o.round_weights = round_weights;
        const auto g = read_edge_list(input, o);
        std::vector<NamedBackbone> bbs;
        for (const auto& path : backbones) bbs.push_back({path, load_backbone(g, path)});
        StudyOptions so;
        so.mp.tolerance = tolerance;
        so.mp.max_iters = max_iters;
        so.mp.seed = seed;
        so.mp.restarts = restarts;
        so.warm_start = warm;
        so.critical.tolerance = crit_tolerance;
        const auto rep = backbone_percolation_study(g, bbs, grid, so);
        Json j;
        j["graph"] = input;
        j["seed"] = seed;
        j["warm_start"] = warm;
        j["report"] = percolation_json(rep, timings);
        emit(j, output);
    }
};

struct BenchCmd {
    std::vector<std::size_t> sizes{1000, 10000, 100000};
    std::size_t k = 10, repeats = 1;
    double per_node = 100.0, hstr = 0.1, hneig = 0.1;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string kernel = "auto", output;

    void add(CLI::App& app) {
        auto* c = app.add_subcommand("bench", "Time both MDL solvers on Dirichlet-multinomial instances");
        c->add_option("--N", sizes, "Node counts")->check(CLI::PositiveNumber);
        c->add_option("--k", k, "Out-degree")->check(CLI::PositiveNumber);
        c->add_option("--weight-per-node", per_node, "W / N")->check(CLI::PositiveNumber);
        c->add_option("--hstr", hstr, "Strength concentration")->check(CLI::PositiveNumber);
        c->add_option("--hneig", hneig, "Neighborhood concentration")->check(CLI::PositiveNumber);
        c->add_option("--repeats", repeats, "Timed runs per size (minimum kept)")->check(CLI::PositiveNumber);
        c->add_option("--seed", seed, "Instance seed");
        c->add_option("--threads", threads, "Worker threads for the local solver")->check(CLI::Range(1u, 1024u));
        c->add_option("--kernel", kernel, "Percolation kernel variant")
            ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
        c->add_option("--output,-o", output, "JSON output path (default stdout)");
        c->callback([this] { run(); });
    }

    static double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
        const double n = double(x.size());
        const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
        const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
        double sxy = 0.0, sxx = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sxy += (x[i] - mx) * (y[i] - my);
            sxx += (x[i] - mx) * (x[i] - mx);
        }
        return sxx > 0 ? sxy / sxx : 0.0;
    }

    void run() {
        if (kernel == "avx2" && !kernels::avx2()) throw UsageError("avx2 kernels are not available on this machine");
        kernels::force_scalar(kernel == "scalar");
        Json j;
        j["k"] = k;
        j["weight_per_node"] = per_node;
        j["seed"] = seed;
        j["kernel"] = kernels::active().name;
        j["runs"] = Json::array();
        std::vector<double> lx, lg, ll;
        for (auto N : sizes) {
            if (k > N) throw UsageError("--k must not exceed every --N");
            const auto inst = dirichlet_multinomial_weights({N, k, std::int64_t(per_node * double(N)), hstr, hneig, seed});
            double best[2] = {1e300, 1e300};
            std::size_t kept[2] = {0, 0};
            for (std::size_t r = 0; r < repeats; ++r) {
                for (int s = 0; s < 2; ++s) {
                    const auto t0 = std::chrono::steady_clock::now();
                    auto res = solve(inst.graph, ObjectiveSpec::micro(s ? Scope::Local : Scope::Global), {false, threads});
                    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
                    best[s] = std::min(best[s], dt);
                    kept[s] = res.backbone.edge_count();
                }
            }
            lx.push_back(std::log(double(N)));
            lg.push_back(std::log(best[0]));
            ll.push_back(std::log(best[1]));
            j["runs"].push_back({{"N", N},
                                 {"E", inst.graph.num_edges()},
                                 {"global_seconds", best[0]},
                                 {"global_edges", kept[0]},
                                 {"local_seconds", best[1]},
                                 {"local_edges", kept[1]}});
        }
        if (sizes.size() >= 2) {
            j["global_slope"] = fit_slope(lx, lg);
            j["local_slope"] = fit_slope(lx, ll);
        }
        emit(j, output);
    }
};

bool synth_requested(CLI::App& app) { return app.got_subcommand("synth"); }

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minimum-description-length backbones of weighted networks"};
    app.require_subcommand(1);
    BackboneCmd backbone;
    CompareCmd compare;
    SynthCmd synth;
    PercolationCmd percolation;
    BenchCmd bench;
    backbone.add(app);
    compare.add(app);
    synth.add(app);
    percolation.add(app);
    bench.add(app);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        // Generator parameter problems are usage errors; everything else is a data error.
        std::cerr << "error: " << e.what() << '\n';
        return synth_requested(app) ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
