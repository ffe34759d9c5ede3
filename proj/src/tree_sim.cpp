#include "troppca/tree_sim.hpp"

#include <json.hpp>

#include "troppca/error.hpp"

namespace troppca {

std::string_view mode_name(TopologyMode mode) {
    return mode == TopologyMode::fixed_caterpillar ? "caterpillar" : "coalescent";
}

TopologyMode parse_mode(std::string_view text) {
    if (text == "caterpillar" || text == "fixed-caterpillar") return TopologyMode::fixed_caterpillar;
    if (text == "coalescent" || text == "random-coalescent") return TopologyMode::random_coalescent;
    throw InvalidInput("unknown topology mode '" + std::string(text) + "' (expected caterpillar or coalescent)");
}

void SimConfig::validate() const {
    if (m < 3) throw InvalidInput("simulation needs at least 3 leaves");
    if (n < 1) throw InvalidInput("simulation needs at least 1 tree");
}

namespace {

std::vector<std::string> numeric_labels(int m) {
    std::vector<std::string> labels;
    for (int i = 1; i <= m; ++i) labels.push_back(std::to_string(i));
    return labels;
}

int add_node(std::vector<TreeNode>& nodes, int parent, double length, int taxon = -1) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{parent, {}, length, taxon});
    if (parent >= 0) nodes[parent].children.push_back(id);
    return id;
}

}  // namespace

RootedTree random_caterpillar_tree(int m, Rng& rng) {
    if (m < 3) throw InvalidInput("caterpillar needs at least 3 leaves");
    std::vector<TreeNode> nodes;
    int node = add_node(nodes, -1, 0.0);
    double height = 1.0;  // height of `node`
    add_node(nodes, node, height, m - 1);
    for (int j = 1; j <= m - 2; ++j) {
        const double len = rng.uniform() * height;
        height -= len;
        node = add_node(nodes, node, len);
        if (j < m - 2) add_node(nodes, node, height, m - 1 - j);
    }
    add_node(nodes, node, height, 0);
    add_node(nodes, node, height, 1);
    return RootedTree(std::move(nodes), 0, numeric_labels(m));
}

std::vector<RootedTree> random_caterpillar(int m, int n, Rng& rng) {
    std::vector<RootedTree> out;
    for (int i = 0; i < n; ++i) out.push_back(random_caterpillar_tree(m, rng));
    return out;
}

TreeTopology caterpillar_topology(int m) {
    std::vector<std::vector<int>> clades;
    for (int top = 2; top <= m; ++top) {
        std::vector<int> c;
        for (int i = 1; i <= top; ++i) c.push_back(i);
        clades.push_back(std::move(c));
    }
    return make_topology(m, std::move(clades));
}

RootedTree random_coalescent_tree(int m, Rng& rng) {
    if (m < 2) throw InvalidInput("coalescent needs at least 2 leaves");
    std::vector<TreeNode> nodes;
    std::vector<double> heights;
    std::vector<int> lineages;
    for (int i = 0; i < m; ++i) {
        lineages.push_back(add_node(nodes, -1, 0.0, i));
        heights.push_back(0.0);
    }
    double t = 0.0;
    while (lineages.size() > 1) {
        const auto j = static_cast<double>(lineages.size());
        t += rng.exponential(j * (j - 1.0) / 2.0);
        const auto a = static_cast<std::size_t>(rng.below(lineages.size()));
        auto b = static_cast<std::size_t>(rng.below(lineages.size() - 1));
        if (b >= a) ++b;
        const int parent = add_node(nodes, -1, 0.0);
        heights.push_back(t);
        for (std::size_t pick : {a, b}) {
            const int child = lineages[pick];
            nodes[child].parent = parent;
            nodes[child].length = t - heights[child];
            nodes[parent].children.push_back(child);
        }
        lineages.erase(lineages.begin() + static_cast<std::ptrdiff_t>(std::max(a, b)));
        lineages.erase(lineages.begin() + static_cast<std::ptrdiff_t>(std::min(a, b)));
        lineages.push_back(parent);
    }
    for (auto& nd : nodes) nd.length /= t;
    return RootedTree(std::move(nodes), lineages.front(), numeric_labels(m));
}

std::vector<RootedTree> random_coalescent(int m, int n, Rng& rng) {
    std::vector<RootedTree> out;
    for (int i = 0; i < n; ++i) out.push_back(random_coalescent_tree(m, rng));
    return out;
}

std::vector<RootedTree> simulate(const SimConfig& config) {
    config.validate();
    Rng rng(config.seed);
    return config.mode == TopologyMode::fixed_caterpillar ? random_caterpillar(config.m, config.n, rng)
                                                          : random_coalescent(config.m, config.n, rng);
}

LabeledDataset mixture_experiment(const SimConfig& first, const SimConfig& second, Rng& rng) {
    first.validate();
    second.validate();
    if (first.m != second.m) throw InvalidInput("mixture groups have different leaf counts");
    LabeledDataset out;
    int group = 0;
    for (const SimConfig* c : {&first, &second}) {
        auto trees = c->mode == TopologyMode::fixed_caterpillar ? random_caterpillar(c->m, c->n, rng)
                                                                : random_coalescent(c->m, c->n, rng);
        for (auto& t : trees) {
            out.trees.push_back(std::move(t));
            out.groups.push_back(group);
        }
        ++group;
    }
    return out;
}

std::string trees_to_newick(const std::vector<RootedTree>& trees) {
    std::string out;
    for (const auto& t : trees) {
        out += serialize_newick(t);
        out += '\n';
    }
    return out;
}

std::string simulation_manifest(const SimConfig& config, const std::vector<std::string>& labels,
                                const std::vector<int>& groups) {
    nlohmann::ordered_json j;
    j["mode"] = mode_name(config.mode);
    j["seed"] = config.seed;
    j["m"] = config.m;
    j["n"] = groups.empty() ? config.n : static_cast<int>(groups.size());
    j["labels"] = labels;
    if (!groups.empty()) j["groups"] = groups;
    return j.dump(2) + "\n";
}

}  // namespace troppca
