#include "cli.hpp"

#include <cstdlib>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "troppca/error.hpp"
#include "troppca/fermat_weber.hpp"
#include "troppca/io.hpp"
#include "troppca/newick.hpp"
#include "troppca/pca_mcmc.hpp"
#include "troppca/polytope.hpp"
#include "troppca/render.hpp"
#include "troppca/sensitivity.hpp"
#include "troppca/tree_sim.hpp"

namespace troppca::cli {
namespace {

using Json = nlohmann::ordered_json;

struct Io {
    std::ostream& out;
    std::ostream& err;

    void emit(const std::string& path, const std::string& content) const {
        if (path.empty() || path == "-") {
            out << content;
        } else {
            write_text_file(path, content);
        }
    }
};

Json vec_json(std::span<const double> v) {
    auto a = Json::array();
    for (double x : v) a.push_back(x + 0.0);
    return a;
}

// Mismatched leaf sets are a property of the input file, reported as a
// parse failure.
TreeDataset load_dataset(const std::string& path, bool repair) {
    const std::string text = read_text_file(path);
    try {
        return load_tree_dataset(text, repair);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what(), e.offset(), e.line());
    } catch (const InvalidInput& e) {
        throw ParseError(path + ": " + e.what(), 0);
    } catch (const NumericError& e) {
        throw NumericError(path + ": " + e.what());
    }
}

std::vector<TropicalPoint> points_of(const std::vector<Ultrametric>& us) {
    std::vector<TropicalPoint> out;
    for (const auto& u : us) out.push_back(u.point());
    return out;
}

std::vector<int> read_groups(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.is_object()) return j.at("groups").get<std::vector<int>>();
        return j.get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": expected a manifest with a \"groups\" array: " + e.what(), 0);
    }
}

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("TROPPCA_SEED")) {
        try {
            std::size_t used = 0;
            const std::string s(env);
            const auto v = std::stoull(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        throw InvalidInput("TROPPCA_SEED is not an unsigned integer");
    }
    return 0;
}

struct McmcFlags {
    McmcConfig cfg;
    CLI::Option* seed_opt = nullptr;
    std::string input, output, init;
    bool repair = false;

    void add(CLI::App* app) {
        app->add_option("--input,-i", input, "Newick file of equidistant trees")->required();
        app->add_option("--output,-o", output, "Output path ('-' for stdout)")->capture_default_str();
        app->add_option("--vertices,-s", cfg.vertices, "Vertex count s")->capture_default_str()->check(CLI::Range(2, 1000));
        app->add_option("--iterations", cfg.iterations, "MCMC iterations per chain")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--cooling-interval", cfg.cooling_interval, "Iterations between k decrements")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        app->add_option("--chains", cfg.chains, "Independent chains; the best is kept")
            ->capture_default_str()
            ->check(CLI::PositiveNumber);
        seed_opt = app->add_option("--seed", cfg.seed, "Seed (fallback: TROPPCA_SEED, then 0)");
        app->add_option("--threads", cfg.threads, "Worker threads for chains")->capture_default_str()->check(CLI::PositiveNumber);
        app->add_flag("--force-equidistant", repair, "Extend pendant edges of non-equidistant trees");
        app->add_option("--init", init, "Newick file with the starting vertex trees");
    }
};

struct Loaded {
    TreeDataset data;
    McmcConfig cfg;
};

Loaded prepare_fit(McmcFlags& f, const Io& io) {
    Loaded l{load_dataset(f.input, f.repair), f.cfg};
    l.cfg.seed = resolve_seed(f.seed_opt, f.cfg.seed);
    if (l.data.repaired > 0) {
        io.err << "warning: " << l.data.repaired << " tree(s) made equidistant by extending pendant edges\n";
    }
    if (!f.init.empty()) {
        TreeDataset start = load_dataset(f.init, f.repair);
        if (start.labels != l.data.labels) throw ParseError(f.init + ": leaf labels differ from the input trees", 0);
        l.cfg.init = InitMode::user_supplied;
        l.cfg.initial = std::move(start.ultrametrics);
        l.cfg.vertices = static_cast<int>(l.cfg.initial.size());
    }
    return l;
}

int cmd_fit(McmcFlags& f, const std::string& groups_path, const Io& io) {
    Loaded l = prepare_fit(f, io);
    FitReport report;
    report.config = &l.cfg;
    report.labels = l.data.labels;
    report.repaired = l.data.repaired;
    report.force_equidistant = f.repair;
    if (!groups_path.empty()) {
        report.groups = read_groups(groups_path);
        if (report.groups.size() != l.data.ultrametrics.size()) {
            throw ParseError(groups_path + ": group count does not match the number of trees", 0);
        }
    }
    const MultiChainFit result = fit(l.data.ultrametrics, l.cfg, l.data.labels);
    report.fit = &result;
    io.emit(f.output, fit_to_json(report));
    return kOk;
}

// Representative of a torus class whose largest entry is the mean largest
// entry of the sample, so a sample of identical trees maps back onto them.
TropicalPoint rescale_like(const TropicalPoint& x, const std::vector<TropicalPoint>& sample) {
    double target = 0.0;
    for (const auto& p : sample) target += *std::max_element(p.coords().begin(), p.coords().end());
    target /= static_cast<double>(sample.size());
    const double shift = target - *std::max_element(x.coords().begin(), x.coords().end());
    return trop_scale(shift, x);
}

struct FwOutcome {
    TropicalPoint point;
    std::string newick;
    double objective;
    bool in_hull;
};

FwOutcome fw_of(const TreeDataset& data) {
    const auto points = points_of(data.ultrametrics);
    const FermatWeberResult r = fermat_weber(points);
    const TropicalPoint pulled = rescale_like(pull_into_hull(points, r.point), points);
    const int m = static_cast<int>(data.labels.size());
    if (!is_ultrametric(pulled, m, 1e-7)) throw NumericError("Fermat-Weber point is not ultrametric");
    const RootedTree tree = tree_from_ultrametric(Ultrametric::trusted(pulled, m), data.labels);
    return {pulled, serialize_newick(tree), fw_objective(points, pulled), contains(TropicalPolytope(points), pulled)};
}

int cmd_fw(const std::string& input, const std::string& output, bool repair, const Io& io) {
    const TreeDataset data = load_dataset(input, repair);
    const FwOutcome fw = fw_of(data);
    Json j;
    j["m"] = data.labels.size();
    j["n"] = data.ultrametrics.size();
    j["labels"] = data.labels;
    j["newick"] = fw.newick;
    j["point"] = vec_json(fw.point.coords());
    j["objective"] = fw.objective + 0.0;
    j["in_hull"] = fw.in_hull;
    io.emit(output, j.dump(2) + "\n");
    return kOk;
}

int cmd_check(McmcFlags& f, const Io& io) {
    Loaded l = prepare_fit(f, io);
    const FwOutcome fw = fw_of(l.data);
    const MultiChainFit result = fit(l.data.ultrametrics, l.cfg, l.data.labels);
    std::vector<TropicalPoint> verts = points_of(result.best.vertices);
    const TropicalPolytope pca(verts);
    Json j;
    j["note"] = "empirical evidence only: one sample, one heuristic fit";
    j["fw_newick"] = fw.newick;
    j["fw_point"] = vec_json(fw.point.coords());
    j["fw_objective"] = fw.objective + 0.0;
    j["contained"] = contains(pca, fw.point);
    j["residual"] = residual(pca, fw.point) + 0.0;
    auto& nwk = j["pca_vertices"] = Json::array();
    for (const auto& t : result.best.vertex_trees) nwk.push_back(serialize_newick(t));
    j["pca_pi"] = result.best.stats.pi + 0.0;
    j["pca_r_squared"] = result.best.stats.r_squared + 0.0;
    j["seed"] = l.cfg.seed;
    io.emit(f.output, j.dump(2) + "\n");
    return kOk;
}

struct SimFlags {
    SimConfig cfg;
    std::string mode = "caterpillar";
    std::string mix_mode = "coalescent";
    int mix_n = 0;
    std::string output = "-";
    std::string manifest;
    CLI::Option* seed_opt = nullptr;
};

int cmd_simulate(SimFlags& f, const Io& io) {
    f.cfg.mode = parse_mode(f.mode);
    f.cfg.seed = resolve_seed(f.seed_opt, f.cfg.seed);
    f.cfg.validate();
    std::vector<RootedTree> trees;
    std::vector<int> groups;
    if (f.mix_n > 0) {
        SimConfig second{f.cfg.m, f.mix_n, parse_mode(f.mix_mode), f.cfg.seed};
        Rng rng(f.cfg.seed);
        LabeledDataset mix = mixture_experiment(f.cfg, second, rng);
        trees = std::move(mix.trees);
        groups = std::move(mix.groups);
    } else {
        trees = simulate(f.cfg);
    }
    io.emit(f.output, trees_to_newick(trees));
    std::string manifest = f.manifest;
    if (manifest.empty() && f.output != "-" && !f.output.empty()) manifest = f.output + ".manifest.json";
    if (!manifest.empty()) io.emit(manifest, simulation_manifest(f.cfg, trees.front().taxa(), groups));
    return kOk;
}

struct FitInput {
    PolytopeFile poly;
    std::vector<Ultrametric> vertices;
};

FitInput load_fit_vertices(const std::string& path, const TreeDataset& data) {
    FitInput in{polytope_from_json(read_text_file(path)), {}};
    if (!in.poly.labels.empty() && in.poly.labels != data.labels) {
        throw ParseError(path + ": leaf labels differ from the input trees", 0);
    }
    if (in.poly.leaves != static_cast<int>(data.labels.size())) {
        throw ParseError(path + ": leaf count differs from the input trees", 0);
    }
    for (const auto& v : in.poly.vertices) {
        try {
            in.vertices.emplace_back(v, in.poly.leaves);
        } catch (const InvalidInput& e) {
            throw ParseError(path + ": vertex is not an ultrametric: " + e.what(), 0);
        }
    }
    return in;
}

int cmd_project(const std::string& input, const std::string& fit_path, const std::string& output, bool repair,
                const Io& io) {
    const TreeDataset data = load_dataset(input, repair);
    const FitInput fin = load_fit_vertices(fit_path, data);
    const TropicalPolytope polytope(fin.poly.vertices);
    Json j;
    j["m"] = data.labels.size();
    auto& rows = j["points"] = Json::array();
    for (const auto& u : data.ultrametrics) {
        const Projection p = project(polytope, u.point());
        Json row;
        row["projection"] = vec_json(p.point.coords());
        row["lambdas"] = vec_json(p.lambdas);
        row["residual"] = trop_dist(u.point(), p.point) + 0.0;
        row["in_polytope"] = contains(polytope, u.point());
        row["topology"] = topology_newick(topology_of(p.point, fin.poly.leaves), data.labels);
        rows.push_back(std::move(row));
    }
    io.emit(output, j.dump(2) + "\n");
    return kOk;
}

int cmd_stats(const std::string& input, const std::string& fit_path, const std::string& output, bool repair,
              const Io& io) {
    const TreeDataset data = load_dataset(input, repair);
    const FitInput fin = load_fit_vertices(fit_path, data);
    const FitStatistics st = statistics(fin.vertices, data.ultrametrics);
    Json j;
    j["n"] = data.ultrametrics.size();
    j["pi"] = st.pi + 0.0;
    j["s_reg"] = st.s_reg + 0.0;
    j["r_squared"] = st.r_squared + 0.0;
    j["residuals"] = vec_json(st.residuals);
    io.emit(output, j.dump(2) + "\n");
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const Io io{out, err};
    CLI::App app{"Tropical principal component analysis of equidistant trees"};
    app.name("troppca");
    app.set_config("--config", "", "TOML file with option defaults (flags take precedence)");
    app.require_subcommand(1);

    McmcFlags fit_flags;
    std::string groups_path;
    auto* fit_cmd = app.add_subcommand("fit", "Fit an (s-1)-th order tropical PCA by MCMC");
    fit_flags.output = "-";
    fit_flags.add(fit_cmd);
    fit_cmd->add_option("--groups", groups_path, "Manifest JSON with per-tree group labels");

    McmcFlags check_flags;
    check_flags.output = "-";
    auto* check_cmd = app.add_subcommand("check-conjecture", "Is the Fermat-Weber point inside the fitted PCA?");
    check_flags.add(check_cmd);

    std::string render_in, render_out = "-", color_mode = "topology";
    RenderSpec spec;
    auto* render_cmd = app.add_subcommand("render", "SVG scatter of a 3-vertex fit");
    render_cmd->add_option("--input,-i", render_in, "Fit JSON")->required();
    render_cmd->add_option("--output,-o", render_out, "SVG path ('-' for stdout)")->capture_default_str();
    render_cmd->add_option("--mode", color_mode, "topology | group | percentile")->capture_default_str();
    render_cmd->add_option("--percentile", spec.percentile, "Rare-topology share drawn black")->capture_default_str();
    render_cmd->add_option("--width", spec.width, "Canvas width")->capture_default_str();
    render_cmd->add_option("--height", spec.height, "Canvas height")->capture_default_str();

    std::string fw_in, fw_out = "-";
    bool fw_repair = false;
    auto* fw_cmd = app.add_subcommand("fw", "Tropical Fermat-Weber point of a tree sample");
    fw_cmd->add_option("--input,-i", fw_in, "Newick file")->required();
    fw_cmd->add_option("--output,-o", fw_out, "Output path")->capture_default_str();
    fw_cmd->add_flag("--force-equidistant", fw_repair, "Extend pendant edges of non-equidistant trees");

    SimFlags sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate random equidistant trees");
    sim_cmd->add_option("--m", sim.cfg.m, "Leaf count")->capture_default_str();
    sim_cmd->add_option("--n", sim.cfg.n, "Tree count")->capture_default_str();
    sim_cmd->add_option("--mode", sim.mode, "caterpillar | coalescent")->capture_default_str();
    sim.seed_opt = sim_cmd->add_option("--seed", sim.cfg.seed, "Seed (fallback: TROPPCA_SEED, then 0)");
    sim_cmd->add_option("--output,-o", sim.output, "Newick path ('-' for stdout)")->capture_default_str();
    sim_cmd->add_option("--manifest", sim.manifest, "Manifest path (default: <output>.manifest.json)");
    sim_cmd->add_option("--mix-n", sim.mix_n, "Size of a second group; enables a two-group mixture");
    sim_cmd->add_option("--mix-mode", sim.mix_mode, "Mode of the second group")->capture_default_str();

    SensitivityGrid grid;
    std::string sens_mode = "caterpillar", sens_out = "-";
    auto* sens_cmd = app.add_subcommand("sensitivity", "R^2 over a grid of simulation sizes and iteration budgets");
    sens_cmd->add_option("--mode", sens_mode, "caterpillar | coalescent")->capture_default_str();
    sens_cmd->add_option("--m-list", grid.leaves, "Leaf counts")->delimiter(',')->capture_default_str();
    sens_cmd->add_option("--n-list", grid.sizes, "Sample sizes")->delimiter(',')->capture_default_str();
    sens_cmd->add_option("--iterations-list", grid.iterations, "Iteration budgets")->delimiter(',')->capture_default_str();
    sens_cmd->add_option("--chains", grid.chains, "Chains per cell")->capture_default_str()->check(CLI::PositiveNumber);
    sens_cmd->add_option("--vertices,-s", grid.vertices, "Vertex count s")->capture_default_str();
    sens_cmd->add_option("--cooling-interval", grid.cooling_interval, "Iterations between k decrements")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    auto* sens_seed = sens_cmd->add_option("--seed", grid.seed, "Seed (fallback: TROPPCA_SEED, then 0)");
    sens_cmd->add_option("--threads", grid.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    sens_cmd->add_option("--output,-o", sens_out, "CSV path")->capture_default_str();

    std::string proj_in, proj_fit, proj_out = "-";
    bool proj_repair = false;
    auto* proj_cmd = app.add_subcommand("project", "Project trees onto a fitted polytope");
    proj_cmd->add_option("--input,-i", proj_in, "Newick file")->required();
    proj_cmd->add_option("--fit", proj_fit, "Fit or polytope JSON")->required();
    proj_cmd->add_option("--output,-o", proj_out, "Output path")->capture_default_str();
    proj_cmd->add_flag("--force-equidistant", proj_repair, "Extend pendant edges of non-equidistant trees");

    std::string stats_in, stats_fit, stats_out = "-";
    bool stats_repair = false;
    auto* stats_cmd = app.add_subcommand("stats", "Pi, S_reg and R^2 of trees against a fitted polytope");
    stats_cmd->add_option("--input,-i", stats_in, "Newick file")->required();
    stats_cmd->add_option("--fit", stats_fit, "Fit or polytope JSON")->required();
    stats_cmd->add_option("--output,-o", stats_out, "Output path")->capture_default_str();
    stats_cmd->add_flag("--force-equidistant", stats_repair, "Extend pendant edges of non-equidistant trees");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*fit_cmd) return cmd_fit(fit_flags, groups_path, io);
        if (*check_cmd) return cmd_check(check_flags, io);
        if (*render_cmd) {
            spec.mode = parse_color_mode(color_mode);
            spec.validate();
            io.emit(render_out, render_svg(read_fit_json(read_text_file(render_in)), spec));
            return kOk;
        }
        if (*fw_cmd) return cmd_fw(fw_in, fw_out, fw_repair, io);
        if (*sim_cmd) return cmd_simulate(sim, io);
        if (*sens_cmd) {
            grid.mode = parse_mode(sens_mode);
            grid.seed = resolve_seed(sens_seed, grid.seed);
            io.emit(sens_out, sensitivity_csv(run_sensitivity(grid)));
            return kOk;
        }
        if (*proj_cmd) return cmd_project(proj_in, proj_fit, proj_out, proj_repair, io);
        if (*stats_cmd) return cmd_stats(stats_in, stats_fit, stats_out, stats_repair, io);
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kUsage;
}

}  // namespace troppca::cli
