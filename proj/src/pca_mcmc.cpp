#include "troppca/pca_mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <optional>
#include <span>
#include <thread>

#include <json.hpp>

#include "troppca/error.hpp"
#include "troppca/fermat_weber.hpp"

namespace troppca {

void McmcConfig::validate() const {
    if (vertices < 2) throw InvalidInput("vertex count must be at least 2");
    if (iterations < 1) throw InvalidInput("iterations must be at least 1");
    if (cooling_interval < 1) throw InvalidInput("cooling interval must be at least 1");
    if (chains < 1) throw InvalidInput("chains must be at least 1");
    if (init == InitMode::user_supplied && initial.size() != static_cast<std::size_t>(vertices)) {
        throw InvalidInput("user-supplied start needs exactly " + std::to_string(vertices) + " vertices");
    }
}

namespace {

std::vector<TropicalPoint> points_of(const std::vector<Ultrametric>& us) {
    std::vector<TropicalPoint> out;
    out.reserve(us.size());
    for (const auto& u : us) out.push_back(u.point());
    return out;
}

int common_leaves(const std::vector<Ultrametric>& sample) {
    if (sample.empty()) throw InvalidInput("empty sample");
    const int m = sample.front().leaves();
    for (const auto& u : sample) {
        if (u.leaves() != m) throw InvalidInput("sample trees have different leaf counts");
    }
    return m;
}

bool has_collapse(const std::vector<Ultrametric>& vs) {
    for (std::size_t a = 0; a < vs.size(); ++a) {
        for (std::size_t b = a + 1; b < vs.size(); ++b) {
            if (torus_equal(vs[a].point(), vs[b].point())) return true;
        }
    }
    return false;
}

}  // namespace

double objective(const TropicalPolytope& polytope, const std::vector<TropicalPoint>& sample) {
    double total = 0.0;
    for (const auto& p : sample) total += residual(polytope, p);
    return total;
}

double objective(const std::vector<Ultrametric>& vertices, const std::vector<Ultrametric>& sample) {
    if (vertices.empty()) throw InvalidInput("objective needs at least one vertex");
    const int m = vertices.front().leaves();
    for (const auto& v : vertices) {
        if (v.leaves() != m) throw InvalidInput("vertices have different leaf counts");
    }
    for (const auto& u : sample) {
        if (u.leaves() != m) throw InvalidInput("sample and vertices have different leaf counts");
    }
    return objective(TropicalPolytope(points_of(vertices)), points_of(sample));
}

RootedTree propose_tree(const RootedTree& tree, int k, Rng& rng) {
    RootedTree out = tree;
    const int m = tree.leaf_count();
    if (k < 0 || k > m) throw InvalidInput("permutation size k must lie in [0, m]");

    if (k >= 2) {
        std::vector<int> leaves;
        for (int id = 0; id < static_cast<int>(tree.nodes().size()); ++id) {
            if (tree.is_leaf(id)) leaves.push_back(id);
        }
        const auto picked = rng.sample_without_replacement(leaves.size(), static_cast<std::size_t>(k));
        std::vector<int> taxa;
        for (std::size_t p : picked) taxa.push_back(tree.node(leaves[p]).taxon);
        rng.shuffle(taxa);
        for (std::size_t q = 0; q < picked.size(); ++q) out.set_taxon(leaves[picked[q]], taxa[q]);
    }

    const auto internal = tree.internal_edges();
    if (internal.empty()) return out;
    const int b1 = internal[static_cast<std::size_t>(rng.below(internal.size()))];
    const double li = out.node(b1).length;
    const int eps = rng.sign();
    const double c = rng.uniform() * li / m;

    // Moving the lower end of b1 by delta shifts every edge below it by -delta.
    const auto& kids = out.node(b1).children;
    double delta = 0.0;
    if (eps > 0) {
        double room = out.node(kids.front()).length;
        for (int ch : kids) room = std::min(room, out.node(ch).length);
        delta = std::min(c, room);
    } else {
        delta = -c;
    }
    if (delta == 0.0) return out;
    out.set_length(b1, std::max(0.0, li + delta));
    const std::vector<int> children = kids;
    for (int ch : children) out.set_length(ch, std::max(0.0, out.node(ch).length - delta));
    return out;
}

std::vector<RootedTree> propose(const std::vector<RootedTree>& trees, int k, Rng& rng) {
    std::vector<RootedTree> out;
    out.reserve(trees.size());
    for (const auto& t : trees) out.push_back(propose_tree(t, k, rng));
    return out;
}

bool metropolis_accept(double current_objective, double proposal_objective, Rng& rng) {
    if (current_objective < 0.0 || proposal_objective < 0.0) throw InvalidInput("objectives must be nonnegative");
    if (proposal_objective == 0.0 || proposal_objective <= current_objective) return true;
    const double p = current_objective / proposal_objective;
    return rng.uniform() < p;
}

FitStatistics statistics(const std::vector<Ultrametric>& vertices, const std::vector<Ultrametric>& sample) {
    common_leaves(sample);
    FitStatistics st;
    const TropicalPolytope polytope(points_of(vertices));
    for (const auto& u : sample) {
        Projection p = project(polytope, u.point());
        const double r = trop_dist(u.point(), p.point);
        st.residuals.push_back(r);
        st.pi += r;
        st.projections.push_back(std::move(p.point));
        st.lambdas.push_back(std::move(p.lambdas));
    }
    const FermatWeberResult fw = fermat_weber(st.projections, /*lexicographic=*/false);
    st.center = pull_into_hull(st.projections, fw.point);
    st.s_reg = fw_objective(st.projections, st.center);
    const double total = st.pi + st.s_reg;
    st.r_squared = total <= 1e-12 ? 1.0 : std::clamp(st.s_reg / total, 0.0, 1.0);
    return st;
}

PcaFit run_chain(const std::vector<Ultrametric>& sample, const McmcConfig& config, int chain,
                 const std::vector<std::string>& labels) {
    config.validate();
    const int m = common_leaves(sample);
    const auto s = static_cast<std::size_t>(config.vertices);
    if (config.init == InitMode::sample_random && sample.size() < s) {
        throw InvalidInput("sample has " + std::to_string(sample.size()) + " trees, fewer than the " +
                           std::to_string(s) + " vertices requested");
    }

    PcaFit fit;
    fit.chain = chain;
    fit.chain_seed = config.seed ^ static_cast<std::uint64_t>(chain);
    Rng rng(fit.chain_seed);

    std::vector<Ultrametric> current;
    if (config.init == InitMode::user_supplied) {
        for (const auto& u : config.initial) {
            if (u.leaves() != m) throw InvalidInput("initial vertices and sample have different leaf counts");
        }
        current = config.initial;
        if (has_collapse(current)) throw InvalidInput("initial vertices are not pairwise distinct");
    } else {
        // Uniform order over the sample; keep the first s torus-distinct trees.
        for (std::size_t idx : rng.sample_without_replacement(sample.size(), sample.size())) {
            bool fresh = true;
            for (const auto& c : current) fresh = fresh && !torus_equal(c.point(), sample[idx].point());
            if (fresh) current.push_back(sample[idx]);
            if (current.size() == s) break;
        }
        if (current.size() < s) {
            throw InvalidInput("sample has fewer than " + std::to_string(s) + " distinct trees");
        }
    }
    std::vector<RootedTree> trees;
    for (const auto& u : current) trees.push_back(tree_from_ultrametric(u, labels));

    const auto points = points_of(sample);
    double current_obj = objective(TropicalPolytope(points_of(current)), points);
    std::vector<Ultrametric> best = current;
    std::vector<RootedTree> best_trees = trees;
    double best_obj = current_obj;

    int k = m;
    fit.trace.reserve(static_cast<std::size_t>(config.iterations));
    for (int i = 1; i <= config.iterations; ++i) {
        auto proposal = propose(trees, k, rng);
        std::vector<Ultrametric> us;
        us.reserve(proposal.size());
        for (const auto& t : proposal) us.push_back(cophenetic(t));
        if (has_collapse(us)) {
            ++fit.collapsed;
        } else {
            const double obj = objective(TropicalPolytope(points_of(us)), points);
            if (obj < best_obj) {
                best_obj = obj;
                best = us;
                best_trees = proposal;
            }
            if (metropolis_accept(current_obj, obj, rng)) {
                trees = std::move(proposal);
                current_obj = obj;
                ++fit.accepted;
            }
        }
        fit.trace.push_back(best_obj);
        if (i % config.cooling_interval == 0 && k > 0) --k;
    }

    fit.stats = statistics(best, sample);
    fit.vertices = std::move(best);
    fit.vertex_trees = std::move(best_trees);
    return fit;
}

MultiChainFit fit(const std::vector<Ultrametric>& sample, const McmcConfig& config,
                  const std::vector<std::string>& labels) {
    config.validate();
    const auto chains = static_cast<std::size_t>(config.chains);
    std::vector<std::optional<PcaFit>> results(chains);
    std::vector<std::exception_ptr> errors(chains);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t c = next++; c < chains; c = next++) {
            try {
                results[c] = run_chain(sample, config, static_cast<int>(c), labels);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, chains);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    MultiChainFit out;
    std::size_t best = 0;
    for (std::size_t c = 0; c < chains; ++c) {
        out.chains.push_back(std::move(*results[c]));
        const auto& a = out.chains[c].stats;
        const auto& b = out.chains[best].stats;
        if (a.r_squared > b.r_squared || (a.r_squared == b.r_squared && a.pi < b.pi)) best = c;
    }
    out.best = out.chains[best];
    return out;
}

namespace {

nlohmann::ordered_json vec_json(std::span<const double> v) {
    auto a = nlohmann::ordered_json::array();
    for (double x : v) a.push_back(x + 0.0);
    return a;
}

}  // namespace

std::string fit_to_json(const FitReport& report) {
    if (!report.config || !report.fit) throw InvalidInput("fit_to_json: incomplete report");
    const McmcConfig& cfg = *report.config;
    const PcaFit& f = report.fit->best;
    using J = nlohmann::ordered_json;
    J j;
    j["format"] = "troppca-fit";
    j["version"] = 1;
    j["config"] = {{"vertices", cfg.vertices},
                   {"iterations", cfg.iterations},
                   {"cooling_interval", cfg.cooling_interval},
                   {"seed", cfg.seed},
                   {"chains", cfg.chains},
                   {"init", cfg.init == InitMode::user_supplied ? "user-supplied" : "sample-random"}};
    j["m"] = f.vertices.front().leaves();
    j["n"] = f.stats.projections.size();
    j["labels"] = report.labels;
    auto& nwk = j["vertices"] = J::array();
    for (const auto& t : f.vertex_trees) nwk.push_back(serialize_newick(t));
    auto& vv = j["vertex_vectors"] = J::array();
    for (const auto& v : f.vertices) vv.push_back(vec_json(v.point().coords()));
    auto& proj = j["projections"] = J::array();
    for (const auto& p : f.stats.projections) proj.push_back(vec_json(p.coords()));
    auto& lam = j["lambdas"] = J::array();
    for (const auto& l : f.stats.lambdas) lam.push_back(vec_json(l));
    j["residuals"] = vec_json(f.stats.residuals);
    j["center"] = vec_json(f.stats.center.coords());
    j["pi"] = f.stats.pi + 0.0;
    j["s_reg"] = f.stats.s_reg + 0.0;
    j["r_squared"] = f.stats.r_squared + 0.0;
    j["trace"] = vec_json(f.trace);
    j["best_chain"] = f.chain;
    j["accepted"] = f.accepted;
    j["collapsed"] = f.collapsed;
    auto& summary = j["chains"] = J::array();
    for (const auto& c : report.fit->chains) {
        summary.push_back({{"chain", c.chain},
                           {"seed", c.chain_seed},
                           {"pi", c.stats.pi + 0.0},
                           {"r_squared", c.stats.r_squared + 0.0}});
    }
    if (!report.groups.empty()) j["groups"] = report.groups;
    j["equidistance_repair"] = {{"enabled", report.force_equidistant}, {"trees_repaired", report.repaired}};
    return j.dump(2) + "\n";
}

}  // namespace troppca
