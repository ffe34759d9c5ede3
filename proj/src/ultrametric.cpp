#include "troppca/ultrametric.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "troppca/error.hpp"
#include "troppca/io.hpp"

namespace troppca {

LeafPairIndex::LeafPairIndex(int leaves) : m_(leaves) {
    if (leaves < 2) throw InvalidInput("leaf pair index needs at least 2 leaves");
    pairs_.reserve(static_cast<std::size_t>(leaves) * (leaves - 1) / 2);
    for (int i = 1; i <= leaves; ++i) {
        for (int j = i + 1; j <= leaves; ++j) pairs_.emplace_back(i, j);
    }
}

std::size_t LeafPairIndex::pair_to_flat(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 1 || j > m_ || i == j) {
        throw InvalidInput("leaf pair (" + std::to_string(i) + "," + std::to_string(j) +
                           ") out of range for m=" + std::to_string(m_));
    }
    const auto ii = static_cast<std::size_t>(i);
    const auto mm = static_cast<std::size_t>(m_);
    return (ii - 1) * (2 * mm - ii) / 2 + static_cast<std::size_t>(j - i - 1);
}

std::pair<int, int> LeafPairIndex::flat_to_pair(std::size_t k) const {
    if (k >= pairs_.size()) throw InvalidInput("flat pair index out of range");
    return pairs_[k];
}

int LeafPairIndex::leaves_for_dim(std::size_t dim) {
    for (int m = 2;; ++m) {
        const std::size_t e = static_cast<std::size_t>(m) * (m - 1) / 2;
        if (e == dim) return m;
        if (e > dim) break;
    }
    throw InvalidInput("dimension " + std::to_string(dim) + " is not m(m-1)/2 for any m");
}

namespace {

void require_dim(const TropicalPoint& point, int leaves) {
    if (leaves < 3) throw InvalidInput("ultrametrics need at least 3 leaves");
    const std::size_t e = static_cast<std::size_t>(leaves) * (leaves - 1) / 2;
    if (point.dim() != e) {
        throw InvalidInput("point has dimension " + std::to_string(point.dim()) + " but m=" +
                           std::to_string(leaves) + " needs " + std::to_string(e));
    }
}

}  // namespace

UltrametricCheck is_ultrametric(const TropicalPoint& point, int leaves, double tol) {
    require_dim(point, leaves);
    const LeafPairIndex index(leaves);
    UltrametricCheck result;
    for (int i = 1; i <= leaves; ++i) {
        for (int j = i + 1; j <= leaves; ++j) {
            const double dij = point[index.pair_to_flat(i, j)];
            for (int k = j + 1; k <= leaves; ++k) {
                std::array<double, 3> d{dij, point[index.pair_to_flat(i, k)],
                                        point[index.pair_to_flat(j, k)]};
                std::sort(d.begin(), d.end());
                if (d[2] - d[1] > tol) {
                    result.ok = false;
                    result.violations.push_back({i, j, k});
                }
            }
        }
    }
    return result;
}

Ultrametric::Ultrametric(TropicalPoint point, int leaves, bool)
    : point_(std::move(point)), m_(leaves) {}

Ultrametric::Ultrametric(TropicalPoint point, int leaves) : Ultrametric(std::move(point), leaves, true) {
    const auto check = is_ultrametric(point_, m_);
    if (!check) {
        const Triple& t = check.violations.front();
        throw InvalidInput("not an ultrametric: three-point condition fails on (" +
                           std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
                           std::to_string(t[2]) + ")");
    }
}

Ultrametric Ultrametric::trusted(TropicalPoint point, int leaves) {
    require_dim(point, leaves);
    return Ultrametric(std::move(point), leaves, true);
}

double Ultrametric::distance(int i, int j) const {
    return point_[LeafPairIndex(m_).pair_to_flat(i, j)];
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

TreeTopology topology_of(const TropicalPoint& point, int leaves, double tol) {
    const auto check = is_ultrametric(point, leaves, tol);
    if (!check) throw InvalidInput("topology_of: input is not an ultrametric");

    const LeafPairIndex index(leaves);
    std::vector<std::size_t> order(point.dim());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return point[a] < point[b]; });

    DisjointSets sets(leaves);
    std::set<std::vector<int>> clades;
    std::size_t pos = 0;
    while (pos < order.size()) {
        std::size_t end = pos + 1;
        while (end < order.size() && point[order[end]] - point[order[end - 1]] <= tol) ++end;
        for (std::size_t q = pos; q < end; ++q) {
            const auto [i, j] = index.flat_to_pair(order[q]);
            sets.unite(i - 1, j - 1);
        }
        std::vector<std::vector<int>> blocks(static_cast<std::size_t>(leaves));
        for (int leaf = 0; leaf < leaves; ++leaf) blocks[sets.find(leaf)].push_back(leaf + 1);
        for (auto& b : blocks) {
            if (b.size() > 1) clades.insert(std::move(b));
        }
        pos = end;
    }
    return make_topology(leaves, {clades.begin(), clades.end()});
}

TreeTopology topology_of(const Ultrametric& u, double tol) {
    return topology_of(u.point(), u.leaves(), tol);
}

TreeTopology make_topology(int leaves, std::vector<std::vector<int>> clades) {
    for (int leaf = 1; leaf <= leaves; ++leaf) clades.push_back({leaf});
    std::vector<int> all(static_cast<std::size_t>(leaves));
    std::iota(all.begin(), all.end(), 1);
    clades.push_back(all);
    for (auto& c : clades) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        if (c.empty() || c.front() < 1 || c.back() > leaves) {
            throw InvalidInput("clade mentions a leaf outside 1.." + std::to_string(leaves));
        }
    }
    std::sort(clades.begin(), clades.end());
    clades.erase(std::unique(clades.begin(), clades.end()), clades.end());
    for (std::size_t a = 0; a < clades.size(); ++a) {
        for (std::size_t b = a + 1; b < clades.size(); ++b) {
            const auto& x = clades[a];
            const auto& y = clades[b];
            std::vector<int> both;
            std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
            if (!both.empty() && both.size() != x.size() && both.size() != y.size()) {
                throw InvalidInput("clade family is not laminar");
            }
        }
    }
    return TreeTopology{leaves, std::move(clades)};
}

bool topologies_equal(const TreeTopology& a, const TreeTopology& b) {
    if (a.leaves != b.leaves) throw InvalidInput("topologies have different leaf sets");
    return a.clades == b.clades;
}

namespace {

void write_clade(std::ostream& out, const TreeTopology& t, const std::vector<int>& clade,
                 const std::vector<std::string>& labels) {
    if (clade.size() == 1) {
        const int leaf = clade.front();
        if (static_cast<std::size_t>(leaf) <= labels.size()) {
            out << labels[static_cast<std::size_t>(leaf) - 1];
        } else {
            out << leaf;
        }
        return;
    }
    // Children are the maximal proper subclades; the sorted family lists them
    // in smallest-leaf order after filtering.
    std::vector<const std::vector<int>*> children;
    for (const auto& c : t.clades) {
        if (c.size() >= clade.size() || !std::includes(clade.begin(), clade.end(), c.begin(), c.end())) {
            continue;
        }
        bool maximal = true;
        for (const auto& d : t.clades) {
            if (d.size() > c.size() && d.size() < clade.size() &&
                std::includes(d.begin(), d.end(), c.begin(), c.end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) children.push_back(&c);
    }
    std::sort(children.begin(), children.end(),
              [](const auto* a, const auto* b) { return a->front() < b->front(); });
    out << '(';
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) out << ',';
        write_clade(out, t, *children[i], labels);
    }
    out << ')';
}

}  // namespace

std::string topology_newick(const TreeTopology& t, const std::vector<std::string>& labels) {
    std::ostringstream out;
    const auto root = std::find_if(t.clades.begin(), t.clades.end(), [&](const auto& c) {
        return static_cast<int>(c.size()) == t.leaves;
    });
    if (root == t.clades.end()) throw InvalidInput("topology has no root clade");
    write_clade(out, t, *root, labels);
    out << ';';
    return out.str();
}

void write_ultrametric_csv(std::ostream& out, const std::vector<Ultrametric>& rows) {
    if (rows.empty()) throw InvalidInput("no ultrametrics to write");
    const int m = rows.front().leaves();
    const LeafPairIndex index(m);
    out << "m";
    for (std::size_t k = 0; k < index.dim(); ++k) {
        const auto [i, j] = index.flat_to_pair(k);
        out << ',' << i << '-' << j;
    }
    out << '\n';
    for (const auto& u : rows) {
        if (u.leaves() != m) throw InvalidInput("mixed leaf counts in CSV export");
        out << m;
        for (double x : u.point().coords()) out << ',' << format_double(x);
        out << '\n';
    }
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto ws = " \t\r";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

}  // namespace

std::vector<Ultrametric> read_ultrametric_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t offset = 0;
    std::size_t raw_size = 0;
    auto next_line = [&]() -> bool {
        offset += line_no ? raw_size + 1 : 0;
        if (!std::getline(in, line)) return false;
        ++line_no;
        raw_size = line.size();
        line = trim(line);
        return true;
    };
    if (!next_line()) throw ParseError("empty CSV input", 0, 0);
    const auto header = split_commas(line);
    if (header.empty() || trim(header[0]) != "m") {
        throw ParseError("CSV header must start with 'm'", offset, line_no);
    }
    const int m = LeafPairIndex::leaves_for_dim(header.size() - 1);
    const LeafPairIndex index(m);
    for (std::size_t k = 0; k + 1 < header.size(); ++k) {
        const auto [i, j] = index.flat_to_pair(k);
        if (trim(header[k + 1]) != std::to_string(i) + "-" + std::to_string(j)) {
            throw ParseError("CSV header column " + std::to_string(k + 2) + " should be " +
                                 std::to_string(i) + "-" + std::to_string(j),
                             offset, line_no);
        }
    }
    std::vector<Ultrametric> rows;
    while (next_line()) {
        if (line.empty()) continue;
        const auto fields = split_commas(line);
        if (fields.size() != header.size()) {
            throw ParseError("CSV line " + std::to_string(line_no) + " has " +
                                 std::to_string(fields.size()) + " fields, expected " +
                                 std::to_string(header.size()),
                             offset, line_no);
        }
        if (trim(fields[0]) != std::to_string(m)) {
            throw ParseError("CSV line " + std::to_string(line_no) + " has wrong leaf count", offset,
                             line_no);
        }
        std::vector<double> coords;
        try {
            for (std::size_t k = 1; k < fields.size(); ++k) coords.push_back(parse_double(trim(fields[k]), offset));
            rows.emplace_back(TropicalPoint(std::move(coords)), m);
        } catch (const ParseError& e) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": " + e.what(), offset, line_no);
        } catch (const InvalidInput& e) {
            throw ParseError("CSV line " + std::to_string(line_no) + ": " + e.what(), offset, line_no);
        }
    }
    return rows;
}

}  // namespace troppca
