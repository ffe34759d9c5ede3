#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "troppca/tropical.hpp"
#include "troppca/ultrametric.hpp"

namespace troppca {

/// Tropical convex hull of an ordered vertex list.
///
/// Vertices that are torus-equal to an earlier vertex are dropped at
/// construction; dropped() reports their input positions so callers can warn.
class TropicalPolytope {
public:
    explicit TropicalPolytope(std::vector<TropicalPoint> vertices, double tol = kTolerance);

    const std::vector<TropicalPoint>& vertices() const noexcept { return vertices_; }
    const TropicalPoint& vertex(std::size_t k) const { return vertices_.at(k); }
    std::size_t size() const noexcept { return vertices_.size(); }
    std::size_t dim() const noexcept { return vertices_.front().dim(); }
    const std::vector<std::size_t>& dropped() const noexcept { return dropped_; }

private:
    std::vector<TropicalPoint> vertices_;
    std::vector<std::size_t> dropped_;
};

struct Projection {
    TropicalPoint point;
    std::vector<double> lambdas;  // lambda_k = min(D - D^(k)), one per vertex
};

/// Tropical projection ⊕_k lambda_k ⊙ D^(k) onto the polytope.
Projection project(const TropicalPolytope& polytope, const TropicalPoint& point);

/// trop_dist(point, project(polytope, point)).
double residual(const TropicalPolytope& polytope, const TropicalPoint& point);

/// Per-coordinate sets S_j of vertex indices (0-based) attaining the max of
/// D^(i) - x.
struct TypeVector {
    std::vector<std::vector<std::size_t>> sets;

    bool covers_all() const;
    friend bool operator==(const TypeVector&, const TypeVector&) = default;
};

TypeVector type_of(const TropicalPolytope& polytope, const TropicalPoint& x, double tol = kTolerance);

/// True iff every S_j of x's type is nonempty.
bool contains(const TropicalPolytope& polytope, const TropicalPoint& x, double tol = kTolerance);

/// Equal types. Throws InvalidInput when either point lies outside.
bool same_cell(const TropicalPolytope& polytope, const TropicalPoint& x, const TropicalPoint& y,
               double tol = kTolerance);

struct OriginWitness {
    bool contained = false;        // agreed verdict
    bool by_lemma = false;         // every pair is a maximal coordinate of some vertex
    bool by_type = false;          // contains(P, 0)
    std::vector<int> cover;        // per flat pair: a covering vertex (0-based) or -1
    std::optional<std::size_t> uncovered;  // first flat pair with no cover
};

/// Whether the star tree (all-zeros point) lies in tconv(vertices), decided
/// both by the root-path criterion and by the type test.
OriginWitness origin_in_hull(const std::vector<Ultrametric>& vertices);

/// `{ "m": int, "vertices": [[...],...], "labels": [...] }`
std::string polytope_to_json(const TropicalPolytope& polytope, int leaves, const std::vector<std::string>& labels);

struct PolytopeFile {
    int leaves = 0;
    std::vector<std::string> labels;
    std::vector<TropicalPoint> vertices;
};

/// Accepts the polytope export and the `vertex_vectors` field of fit files.
PolytopeFile polytope_from_json(const std::string& text);

}  // namespace troppca
