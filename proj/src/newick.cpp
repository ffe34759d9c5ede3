#include "troppca/newick.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "troppca/error.hpp"
#include "troppca/io.hpp"

namespace troppca {

RootedTree::RootedTree(std::vector<TreeNode> nodes, int root, std::vector<std::string> taxa)
    : nodes_(std::move(nodes)), root_(root), taxa_(std::move(taxa)) {
    const int n = static_cast<int>(nodes_.size());
    if (root_ < 0 || root_ >= n) throw InvalidInput("tree root out of range");
    if (nodes_[root_].parent != -1) throw InvalidInput("tree root has a parent");

    std::vector<char> seen(nodes_.size(), 0);
    std::vector<char> taxon_used(taxa_.size(), 0);
    std::vector<int> stack{root_};
    int visited = 0;
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        if (seen[id]) throw InvalidInput("tree contains a cycle");
        seen[id] = 1;
        ++visited;
        const TreeNode& nd = nodes_[id];
        if (id != root_ && (!std::isfinite(nd.length) || nd.length < 0.0)) {
            throw InvalidInput("branch lengths must be finite and nonnegative");
        }
        if (nd.children.empty()) {
            if (nd.taxon < 0 || nd.taxon >= static_cast<int>(taxa_.size())) {
                throw InvalidInput("leaf without a valid taxon");
            }
            if (taxon_used[nd.taxon]) throw InvalidInput("duplicate leaf label '" + taxa_[nd.taxon] + "'");
            taxon_used[nd.taxon] = 1;
        } else if (nd.taxon != -1) {
            throw InvalidInput("internal node carries a taxon");
        }
        for (int c : nd.children) {
            if (c < 0 || c >= n || nodes_[c].parent != id) throw InvalidInput("inconsistent parent links");
            stack.push_back(c);
        }
    }
    if (visited != n) throw InvalidInput("tree has nodes unreachable from the root");
    if (std::find(taxon_used.begin(), taxon_used.end(), 0) != taxon_used.end()) {
        throw InvalidInput("taxon table lists a name with no leaf");
    }
}

std::vector<int> RootedTree::preorder() const {
    std::vector<int> order;
    order.reserve(nodes_.size());
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int id = stack.back();
        stack.pop_back();
        order.push_back(id);
        const auto& ch = nodes_[id].children;
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(*it);
    }
    return order;
}

std::vector<double> RootedTree::depths() const {
    std::vector<double> depth(nodes_.size(), 0.0);
    for (int id : preorder()) {
        if (id != root_) depth[id] = depth[nodes_[id].parent] + nodes_[id].length;
    }
    return depth;
}

double RootedTree::height() const {
    const auto depth = depths();
    double h = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].children.empty()) h = std::max(h, depth[i]);
    }
    return h;
}

bool RootedTree::is_equidistant(double rel_tol) const {
    const auto depth = depths();
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].children.empty()) continue;
        lo = std::min(lo, depth[i]);
        hi = std::max(hi, depth[i]);
    }
    return hi - lo <= rel_tol * hi;
}

std::vector<int> RootedTree::internal_edges() const {
    std::vector<int> out;
    for (int id : preorder()) {
        if (id != root_ && !nodes_[id].children.empty()) out.push_back(id);
    }
    return out;
}

void RootedTree::set_length(int id, double length) {
    if (!std::isfinite(length) || length < 0.0) throw InvalidInput("branch length must be nonnegative");
    nodes_.at(static_cast<std::size_t>(id)).length = length;
}

void RootedTree::set_taxon(int leaf_id, int taxon) {
    TreeNode& nd = nodes_.at(static_cast<std::size_t>(leaf_id));
    if (!nd.children.empty()) throw InvalidInput("set_taxon on an internal node");
    if (taxon < 0 || taxon >= leaf_count()) throw InvalidInput("taxon out of range");
    nd.taxon = taxon;
}

namespace {

bool is_integer_name(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Canonical taxon order: numeric if all names are integers, else lexicographic.
std::vector<std::string> canonical_order(std::vector<std::string> names) {
    const bool numeric = std::all_of(names.begin(), names.end(), is_integer_name);
    if (numeric) {
        std::sort(names.begin(), names.end(), [](const std::string& a, const std::string& b) {
            const auto strip = [](const std::string& s) {
                const auto p = s.find_first_not_of('0');
                return p == std::string::npos ? std::string("0") : s.substr(p);
            };
            const std::string x = strip(a);
            const std::string y = strip(b);
            if (x.size() != y.size()) return x.size() < y.size();
            if (x != y) return x < y;
            return a < b;
        });
    } else {
        std::sort(names.begin(), names.end());
    }
    return names;
}

constexpr std::string_view kSpecial = "()[]':;,";

class NewickParser {
public:
    explicit NewickParser(std::string_view text) : text_(text) {}

    RootedTree parse() {
        skip_blank();
        if (pos_ >= text_.size()) fail("empty input");
        if (peek() == ';') fail("empty tree");
        const int root = parse_subtree(-1);
        skip_blank();
        if (pos_ >= text_.size()) fail("missing ';' at end of tree");
        if (peek() != ';') fail(std::string("expected ';' but found '") + peek() + "'");
        ++pos_;
        skip_blank();
        if (pos_ < text_.size()) fail("unexpected text after ';'");
        return build(root);
    }

private:
    struct RawNode {
        int parent = -1;
        std::vector<int> children;
        double length = 0.0;
        std::string name;
        std::size_t name_offset = 0;
    };

    [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
    [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
        throw ParseError(what + " at offset " + std::to_string(at), at);
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_blank() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else if (c == '[') {
                const std::size_t start = pos_;
                const auto close = text_.find(']', pos_);
                if (close == std::string_view::npos) fail_at("unterminated comment", start);
                pos_ = close + 1;
            } else {
                break;
            }
        }
    }

    int parse_subtree(int parent) {
        skip_blank();
        const int id = static_cast<int>(raw_.size());
        raw_.push_back(RawNode{parent, {}, 0.0, {}, 0});
        if (peek() == '(') {
            ++pos_;
            while (true) {
                const int child = parse_subtree(id);
                raw_[id].children.push_back(child);
                skip_blank();
                if (peek() == ',') {
                    ++pos_;
                    continue;
                }
                if (peek() == ')') {
                    ++pos_;
                    break;
                }
                if (pos_ >= text_.size()) fail("unbalanced parentheses: input ended");
                fail(std::string("expected ',' or ')' but found '") + peek() + "'");
            }
            skip_blank();
            parse_label();  // internal labels are ignored
        } else {
            skip_blank();
            const std::size_t at = pos_;
            std::string name = parse_label();
            if (name.empty()) {
                if (pos_ >= text_.size()) fail("unexpected end of input, expected a leaf");
                fail(std::string("expected a leaf label but found '") + peek() + "'");
            }
            raw_[id].name = std::move(name);
            raw_[id].name_offset = at;
        }
        skip_blank();
        if (peek() == ':') {
            ++pos_;
            skip_blank();
            raw_[id].length = parse_length();
        }
        return id;
    }

    std::string parse_label() {
        std::string out;
        if (peek() == '\'') {
            const std::size_t start = pos_++;
            while (true) {
                if (pos_ >= text_.size()) fail_at("unterminated quoted label", start);
                const char c = text_[pos_++];
                if (c == '\'') {
                    if (peek() == '\'') {
                        out.push_back('\'');
                        ++pos_;
                        continue;
                    }
                    break;
                }
                out.push_back(c);
            }
            if (out.empty()) fail_at("empty quoted label", start);
            return out;
        }
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || kSpecial.find(c) != std::string_view::npos) break;
            out.push_back(c);
            ++pos_;
        }
        return out;
    }

    double parse_length() {
        const std::size_t start = pos_;
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+' || c == 'e' ||
                c == 'E') {
                ++pos_;
            } else {
                break;
            }
        }
        if (pos_ == start) fail("expected a branch length after ':'");
        const double v = parse_double(text_.substr(start, pos_ - start), start);
        if (v < 0.0) fail_at("negative branch length", start);
        return v;
    }

    RootedTree build(int root) {
        std::vector<std::string> names;
        std::map<std::string, std::size_t> first_seen;
        for (const auto& r : raw_) {
            if (!r.children.empty()) continue;
            if (!first_seen.emplace(r.name, r.name_offset).second) {
                fail_at("duplicate leaf label '" + r.name + "'", r.name_offset);
            }
            names.push_back(r.name);
        }
        auto taxa = canonical_order(names);
        std::map<std::string, int> taxon_of;
        for (std::size_t i = 0; i < taxa.size(); ++i) taxon_of[taxa[i]] = static_cast<int>(i);
        std::vector<TreeNode> nodes(raw_.size());
        for (std::size_t i = 0; i < raw_.size(); ++i) {
            nodes[i].parent = raw_[i].parent;
            nodes[i].children = raw_[i].children;
            nodes[i].length = raw_[i].length;
            nodes[i].taxon = raw_[i].children.empty() ? taxon_of.at(raw_[i].name) : -1;
        }
        return RootedTree(std::move(nodes), root, std::move(taxa));
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::vector<RawNode> raw_;
};

}  // namespace

RootedTree parse_newick(std::string_view text) { return NewickParser(text).parse(); }

std::vector<RootedTree> parse_newick_collection(std::string_view text) {
    std::vector<RootedTree> trees;
    std::ostringstream errors;
    std::size_t failures = 0;
    std::size_t first_offset = 0;
    std::size_t first_line = 0;

    std::size_t start = 0;
    std::size_t line = 1;
    std::size_t start_line = 1;
    bool in_quote = false;
    bool in_comment = false;
    bool has_content = false;

    auto flush = [&](std::size_t end) {
        const std::string_view stmt = text.substr(start, end - start);
        try {
            trees.push_back(parse_newick(stmt));
        } catch (const ParseError& e) {
            if (failures++ == 0) {
                first_offset = start + e.offset();
                first_line = start_line;
            }
            errors << "line " << start_line << ": " << e.what() << '\n';
        } catch (const InvalidInput& e) {
            if (failures++ == 0) {
                first_offset = start;
                first_line = start_line;
            }
            errors << "line " << start_line << ": " << e.what() << '\n';
        }
        start = end;
        has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!has_content && !std::isspace(static_cast<unsigned char>(c))) {
            has_content = true;
            start_line = line;
        }
        if (c == '\n') ++line;
        if (in_quote) {
            if (c == '\'') in_quote = false;
        } else if (in_comment) {
            if (c == ']') in_comment = false;
        } else if (c == '\'') {
            in_quote = true;
        } else if (c == '[') {
            in_comment = true;
        } else if (c == ';') {
            flush(i + 1);
        }
    }
    if (has_content) flush(text.size());

    if (failures > 0) {
        throw ParseError(std::to_string(failures) + " tree(s) failed to parse:\n" + errors.str(), first_offset,
                         first_line);
    }
    return trees;
}

namespace {

bool needs_quotes(const std::string& s) {
    if (s.empty()) return true;
    return std::any_of(s.begin(), s.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || kSpecial.find(c) != std::string_view::npos;
    });
}

std::string quote_label(const std::string& s) {
    if (!needs_quotes(s)) return s;
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "''";
        else out.push_back(c);
    }
    out += "'";
    return out;
}

}  // namespace

std::string serialize_newick(const RootedTree& tree) {
    const auto& nodes = tree.nodes();
    std::vector<int> min_taxon(nodes.size(), std::numeric_limits<int>::max());
    const auto order = tree.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int id = *it;
        if (nodes[id].children.empty()) {
            min_taxon[id] = nodes[id].taxon;
        } else {
            for (int c : nodes[id].children) min_taxon[id] = std::min(min_taxon[id], min_taxon[c]);
        }
    }
    std::string out;
    auto emit = [&](auto&& self, int id) -> void {
        const TreeNode& nd = nodes[id];
        if (nd.children.empty()) {
            out += quote_label(tree.taxa()[nd.taxon]);
        } else {
            std::vector<int> ch = nd.children;
            std::sort(ch.begin(), ch.end(), [&](int a, int b) { return min_taxon[a] < min_taxon[b]; });
            out.push_back('(');
            for (std::size_t i = 0; i < ch.size(); ++i) {
                if (i) out.push_back(',');
                self(self, ch[i]);
            }
            out.push_back(')');
        }
        if (id != tree.root() || nd.children.empty()) {
            out.push_back(':');
            out += format_double(nd.length, 12);
        }
    };
    emit(emit, tree.root());
    out.push_back(';');
    return out;
}

Ultrametric cophenetic(const RootedTree& tree, double rel_tol) {
    const int m = tree.leaf_count();
    if (m < 3) throw InvalidInput("cophenetic vectors need at least 3 leaves");
    if (!tree.is_equidistant(rel_tol)) throw NumericError("tree is not equidistant");

    const auto& nodes = tree.nodes();
    const auto depth = tree.depths();
    const double h = tree.height();
    const LeafPairIndex index(m);
    std::vector<double> coords(index.dim(), 0.0);

    // Leaves below each node, filled in postorder; every pair split across two
    // different children of a node has that node as its LCA.
    std::vector<std::vector<int>> below(nodes.size());
    const auto order = tree.preorder();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int id = *it;
        if (nodes[id].children.empty()) {
            below[id] = {nodes[id].taxon + 1};
            continue;
        }
        const double d = 2.0 * (h - depth[id]);
        auto& acc = below[id];
        for (int c : nodes[id].children) {
            for (int a : acc) {
                for (int b : below[c]) coords[index.pair_to_flat(a, b)] = d;
            }
            acc.insert(acc.end(), below[c].begin(), below[c].end());
            below[c].clear();
        }
    }
    return Ultrametric::trusted(TropicalPoint(std::move(coords)), m);
}

RootedTree tree_from_ultrametric(const Ultrametric& u, std::vector<std::string> labels) {
    const int m = u.leaves();
    if (labels.empty()) {
        for (int i = 1; i <= m; ++i) labels.push_back(std::to_string(i));
    }
    if (static_cast<int>(labels.size()) != m) throw InvalidInput("label count does not match leaf count");
    {
        auto sorted = labels;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw InvalidInput("duplicate leaf labels");
        }
    }
    if (!is_ultrametric(u.point(), m)) throw InvalidInput("tree_from_ultrametric: input is not an ultrametric");

    std::vector<double> d(u.point().coords().begin(), u.point().coords().end());
    const double lowest = *std::min_element(d.begin(), d.end());
    if (lowest < 0.0) {
        for (double& x : d) x -= lowest;
    }

    const LeafPairIndex index(m);
    std::vector<std::size_t> order(d.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

    struct Cluster {
        int node;
        double height;
    };
    std::vector<TreeNode> nodes(static_cast<std::size_t>(m));
    std::vector<Cluster> clusters;
    std::vector<int> cluster_of(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        clusters.push_back({i, 0.0});
        cluster_of[i] = i;
    }

    std::size_t pos = 0;
    while (pos < order.size()) {
        std::size_t end = pos + 1;
        while (end < order.size() && d[order[end]] - d[order[end - 1]] <= kTolerance) ++end;

        std::vector<int> parent(clusters.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (std::size_t q = pos; q < end; ++q) {
            const auto [i, j] = index.flat_to_pair(order[q]);
            const int a = find(cluster_of[i - 1]);
            const int b = find(cluster_of[j - 1]);
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
        std::vector<double> level(clusters.size(), 0.0);
        for (std::size_t q = pos; q < end; ++q) {
            const auto [i, j] = index.flat_to_pair(order[q]);
            const int r = find(cluster_of[i - 1]);
            level[r] = std::max(level[r], d[order[q]] / 2.0);
        }

        std::vector<std::vector<int>> members(clusters.size());
        for (int c = 0; c < static_cast<int>(clusters.size()); ++c) members[find(c)].push_back(c);
        std::vector<Cluster> next;
        std::vector<int> renumber(clusters.size(), -1);
        for (int r = 0; r < static_cast<int>(clusters.size()); ++r) {
            const auto& group = members[r];
            if (group.empty()) continue;
            renumber[r] = static_cast<int>(next.size());
            if (group.size() == 1) {
                next.push_back(clusters[group.front()]);
                continue;
            }
            const int id = static_cast<int>(nodes.size());
            nodes.push_back(TreeNode{});
            for (int c : group) {
                const int child = clusters[c].node;
                nodes[id].children.push_back(child);
                nodes[child].parent = id;
                nodes[child].length = std::max(0.0, level[r] - clusters[c].height);
            }
            next.push_back({id, level[r]});
        }
        for (int leaf = 0; leaf < m; ++leaf) cluster_of[leaf] = renumber[find(cluster_of[leaf])];
        clusters = std::move(next);
        pos = end;
    }
    if (clusters.size() != 1) throw InvalidInput("ultrametric did not merge into a single tree");
    const int root = clusters.front().node;

    // Map taxon ids onto the canonical order of the given labels.
    auto taxa = canonical_order(labels);
    std::map<std::string, int> taxon_of;
    for (std::size_t i = 0; i < taxa.size(); ++i) taxon_of[taxa[i]] = static_cast<int>(i);
    for (int i = 0; i < m; ++i) nodes[i].taxon = taxon_of.at(labels[i]);
    return RootedTree(std::move(nodes), root, std::move(taxa));
}

RootedTree force_equidistant(const RootedTree& tree) {
    auto nodes = tree.nodes();
    const auto depth = tree.depths();
    const double h = tree.height();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].children.empty() && static_cast<int>(i) != tree.root()) {
            nodes[i].length += h - depth[i];
        }
    }
    return RootedTree(std::move(nodes), tree.root(), tree.taxa());
}

TreeDataset load_tree_dataset(std::string_view text, bool repair) {
    TreeDataset out;
    auto trees = parse_newick_collection(text);
    if (trees.empty()) throw InvalidInput("no trees in input");
    out.labels = trees.front().taxa();
    for (std::size_t i = 0; i < trees.size(); ++i) {
        if (trees[i].taxa() != out.labels) {
            throw InvalidInput("tree " + std::to_string(i + 1) + " has a different leaf set than tree 1");
        }
        if (!trees[i].is_equidistant()) {
            if (!repair) {
                throw NumericError("tree " + std::to_string(i + 1) +
                                   " is not equidistant (use --force-equidistant to repair)");
            }
            trees[i] = force_equidistant(trees[i]);
            ++out.repaired;
        }
        out.ultrametrics.push_back(cophenetic(trees[i]));
    }
    out.trees = std::move(trees);
    return out;
}

}  // namespace troppca
