#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "troppca/newick.hpp"
#include "troppca/polytope.hpp"
#include "troppca/random.hpp"
#include "troppca/ultrametric.hpp"

namespace troppca {

enum class InitMode { sample_random, user_supplied };

struct McmcConfig {
    int vertices = 3;            // s
    int iterations = 1000;
    int cooling_interval = 100;  // C
    std::uint64_t seed = 0;
    int chains = 1;
    unsigned threads = 1;        // worker bound for multi-chain runs
    InitMode init = InitMode::sample_random;
    std::vector<Ultrametric> initial;  // used when init == user_supplied

    /// Throws InvalidInput on s < 2, iterations < 1, C < 1, chains < 1 or a
    /// user-supplied start of the wrong size.
    void validate() const;
};

struct FitStatistics {
    std::vector<TropicalPoint> projections;
    std::vector<std::vector<double>> lambdas;
    std::vector<double> residuals;
    TropicalPoint center{0.0, 0.0};  // pulled-in Fermat-Weber point of the projections
    double pi = 0.0;
    double s_reg = 0.0;
    double r_squared = 0.0;
};

struct PcaFit {
    std::vector<Ultrametric> vertices;
    std::vector<RootedTree> vertex_trees;
    FitStatistics stats;
    std::vector<double> trace;  // best objective after each iteration
    std::size_t accepted = 0;
    std::size_t collapsed = 0;  // proposals auto-rejected for torus-equal vertices
    int chain = 0;
    std::uint64_t chain_seed = 0;
};

struct MultiChainFit {
    PcaFit best;
    std::vector<PcaFit> chains;  // in chain order
};

/// Sum of projection residuals of `sample` onto tconv(vertices).
double objective(const std::vector<Ultrametric>& vertices, const std::vector<Ultrametric>& sample);
double objective(const TropicalPolytope& polytope, const std::vector<TropicalPoint>& sample);

/// One proposal step for a single tree: permute the taxa on k distinct
/// leaves, then move the length of a random internal edge by +-c with
/// c ~ Unif[0, l/m], compensating on the edges directly below it so every
/// root-to-leaf path keeps its length. Star trees only get the permutation.
RootedTree propose_tree(const RootedTree& tree, int k, Rng& rng);

/// propose_tree applied independently to each tree.
std::vector<RootedTree> propose(const std::vector<RootedTree>& trees, int k, Rng& rng);

/// Accept with probability min(1, current / proposal). A zero proposal is
/// always accepted.
bool metropolis_accept(double current_objective, double proposal_objective, Rng& rng);

/// Projections, Pi, S_reg and R^2 of a sample against a vertex set.
FitStatistics statistics(const std::vector<Ultrametric>& vertices, const std::vector<Ultrametric>& sample);

/// One chain of the annealed Metropolis search with seed `config.seed ^ chain`.
/// `labels` name the leaves of vertex trees ("1".."m" when empty).
PcaFit run_chain(const std::vector<Ultrametric>& sample, const McmcConfig& config, int chain,
                 const std::vector<std::string>& labels = {});

/// Runs config.chains chains on up to config.threads workers and keeps the
/// chain with the highest R^2 (ties: lower Pi, then lower chain index).
MultiChainFit fit(const std::vector<Ultrametric>& sample, const McmcConfig& config,
                  const std::vector<std::string>& labels = {});

struct FitReport {
    const McmcConfig* config = nullptr;
    const MultiChainFit* fit = nullptr;
    std::vector<std::string> labels;
    std::vector<int> groups;      // optional per-sample group labels
    std::size_t repaired = 0;     // trees changed by --force-equidistant
    bool force_equidistant = false;
};

/// Deterministic JSON document for a fit (thread count is not echoed).
std::string fit_to_json(const FitReport& report);

}  // namespace troppca
