#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "troppca/ultrametric.hpp"

namespace troppca {

struct TreeNode {
    int parent = -1;
    std::vector<int> children;
    double length = 0.0;  // edge to parent; ignored for the root
    int taxon = -1;       // index into RootedTree::taxa() for leaves, -1 otherwise
};

/// Rooted phylogenetic tree with branch lengths and labelled leaves.
///
/// Leaf names live in a taxon table sorted canonically (numerically when
/// every name is an integer, lexicographically otherwise); taxon t is leaf
/// t+1 in the 1-based pair indexing of ultrametrics. Trees over the same
/// name set therefore share one table.
class RootedTree {
public:
    /// Validates: single root, acyclic, every leaf carries a distinct taxon,
    /// nonnegative finite lengths.
    RootedTree(std::vector<TreeNode> nodes, int root, std::vector<std::string> taxa);

    const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
    const TreeNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
    int root() const noexcept { return root_; }
    const std::vector<std::string>& taxa() const noexcept { return taxa_; }
    int leaf_count() const noexcept { return static_cast<int>(taxa_.size()); }

    bool is_leaf(int id) const { return node(id).children.empty(); }

    /// Node ids in preorder (root first).
    std::vector<int> preorder() const;

    /// Root-to-node path length per node.
    std::vector<double> depths() const;

    /// Maximum root-to-leaf path length.
    double height() const;

    /// All root-to-leaf sums agree within rel_tol * height.
    bool is_equidistant(double rel_tol = 1e-6) const;

    /// Edges joining two internal nodes (identified by their lower node).
    std::vector<int> internal_edges() const;

    // Mutators used by MCMC proposals; they keep the structural invariants.
    void set_length(int id, double length);
    void set_taxon(int leaf_id, int taxon);

private:
    std::vector<TreeNode> nodes_;
    int root_;
    std::vector<std::string> taxa_;
};

/// Parses one Newick statement terminated by ';'. Branch lengths default to
/// 0, internal labels are dropped, [comments] and whitespace are skipped,
/// 'quoted labels' are supported. Throws ParseError with the byte offset.
RootedTree parse_newick(std::string_view text);

/// Parses every ';'-terminated statement in `text`. All failures are
/// collected and reported together, one per line, in a single ParseError.
std::vector<RootedTree> parse_newick_collection(std::string_view text);

/// Canonical Newick: children ordered by smallest descendant leaf, lengths
/// with 12 significant digits, root length omitted unless the root is a leaf.
std::string serialize_newick(const RootedTree& tree);

/// Pairwise leaf path lengths as an ultrametric. Computed as twice the
/// height of the lowest common ancestor so that leaves sharing an ancestor
/// get bit-identical distances. Throws NumericError if the tree is not
/// equidistant within rel_tol, InvalidInput for fewer than 3 leaves.
Ultrametric cophenetic(const RootedTree& tree, double rel_tol = 1e-6);

/// Equidistant tree realizing `u`: internal node heights are half the merge
/// distances. If u has a negative entry it is first shifted so its minimum
/// becomes 0 (torus-equal result). `labels` defaults to "1".."m".
RootedTree tree_from_ultrametric(const Ultrametric& u, std::vector<std::string> labels = {});

/// Extends pendant edges so every leaf sits at the maximum depth.
RootedTree force_equidistant(const RootedTree& tree);

/// Trees from one Newick source converted to ultrametrics over a shared
/// taxon table.
struct TreeDataset {
    std::vector<std::string> labels;
    std::vector<RootedTree> trees;
    std::vector<Ultrametric> ultrametrics;
    std::size_t repaired = 0;  // trees changed by force_equidistant
};

/// Throws ParseError for syntax errors, InvalidInput for mismatched leaf
/// sets, NumericError for non-equidistant trees unless `repair` is set.
TreeDataset load_tree_dataset(std::string_view text, bool repair = false);

}  // namespace troppca
