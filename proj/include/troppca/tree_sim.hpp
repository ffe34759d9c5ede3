#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "troppca/newick.hpp"
#include "troppca/random.hpp"
#include "troppca/ultrametric.hpp"

namespace troppca {

enum class TopologyMode { fixed_caterpillar, random_coalescent };

std::string_view mode_name(TopologyMode mode);
/// Accepts "caterpillar", "fixed-caterpillar", "coalescent", "random-coalescent".
TopologyMode parse_mode(std::string_view text);

struct SimConfig {
    int m = 4;
    int n = 25;
    TopologyMode mode = TopologyMode::fixed_caterpillar;
    std::uint64_t seed = 0;

    /// Throws InvalidInput unless m >= 3 and n >= 1.
    void validate() const;
};

// Parameter grid of the sensitivity study.
inline constexpr int kTableLeaves[] = {4, 5, 6, 7, 8, 9};
inline constexpr int kTableSizes[] = {5, 25, 50, 100, 1000};

/// Caterpillar (((1,2),3),...,m) of height 1. The m-2 interior edges are
/// drawn from the root down, each Unif[0, 1 - sum of earlier ones]; every
/// pendant edge makes up the rest of its leaf's unit path.
RootedTree random_caterpillar_tree(int m, Rng& rng);
std::vector<RootedTree> random_caterpillar(int m, int n, Rng& rng);

/// The clade family of the caterpillar above.
TreeTopology caterpillar_topology(int m);

/// Kingman coalescent on leaves "1".."m": with j lineages wait Exp(j(j-1)/2),
/// merge two uniformly chosen lineages; finally scale to height 1.
RootedTree random_coalescent_tree(int m, Rng& rng);
std::vector<RootedTree> random_coalescent(int m, int n, Rng& rng);

/// Trees for a config, drawn from Rng(config.seed).
std::vector<RootedTree> simulate(const SimConfig& config);

struct LabeledDataset {
    std::vector<RootedTree> trees;
    std::vector<int> groups;  // 0 for the first config, 1 for the second
};

/// Concatenation of one sample per config, both drawn from `rng` in order.
/// Throws InvalidInput when the leaf counts differ.
LabeledDataset mixture_experiment(const SimConfig& first, const SimConfig& second, Rng& rng);

/// One canonical Newick statement per line.
std::string trees_to_newick(const std::vector<RootedTree>& trees);

/// Sidecar JSON: mode, seed, m, n, labels and optional groups.
std::string simulation_manifest(const SimConfig& config, const std::vector<std::string>& labels,
                                const std::vector<int>& groups = {});

}  // namespace troppca
