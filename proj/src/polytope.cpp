#include "troppca/polytope.hpp"

#include <json.hpp>

#include "troppca/error.hpp"
#include "troppca/simd/kernels.hpp"

namespace troppca {

TropicalPolytope::TropicalPolytope(std::vector<TropicalPoint> vertices, double tol) {
    if (vertices.empty()) throw InvalidInput("a tropical polytope needs at least one vertex");
    const std::size_t e = vertices.front().dim();
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        if (vertices[k].dim() != e) throw InvalidInput("polytope vertices differ in dimension");
        bool duplicate = false;
        for (const auto& kept : vertices_) {
            if (torus_equal(kept, vertices[k], tol)) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) {
            dropped_.push_back(k);
        } else {
            vertices_.push_back(std::move(vertices[k]));
        }
    }
}

namespace {

void require_dim(const TropicalPolytope& p, const TropicalPoint& x) {
    if (p.dim() != x.dim()) {
        throw InvalidInput("point dimension " + std::to_string(x.dim()) + " does not match polytope dimension " +
                           std::to_string(p.dim()));
    }
}

}  // namespace

Projection project(const TropicalPolytope& polytope, const TropicalPoint& point) {
    require_dim(polytope, point);
    const auto& kernels = simd::active();
    const std::size_t e = point.dim();
    std::vector<double> lambdas(polytope.size());
    std::vector<double> out(e);
    for (std::size_t k = 0; k < polytope.size(); ++k) {
        const auto& v = polytope.vertex(k);
        lambdas[k] = kernels.min_diff(point.data(), v.data(), e);
        if (k == 0) {
            for (std::size_t j = 0; j < e; ++j) out[j] = (v[j] + lambdas[0]) + 0.0;
        } else {
            kernels.shifted_max(out.data(), v.data(), lambdas[k], e);
        }
    }
    return Projection{TropicalPoint(std::move(out)), std::move(lambdas)};
}

double residual(const TropicalPolytope& polytope, const TropicalPoint& point) {
    const Projection p = project(polytope, point);
    return trop_dist(point, p.point);
}

bool TypeVector::covers_all() const {
    for (const auto& s : sets) {
        if (s.empty()) return false;
    }
    return true;
}

TypeVector type_of(const TropicalPolytope& polytope, const TropicalPoint& x, double tol) {
    require_dim(polytope, x);
    const std::size_t e = x.dim();
    TypeVector t;
    t.sets.resize(e);
    for (std::size_t i = 0; i < polytope.size(); ++i) {
        const auto& v = polytope.vertex(i);
        const double top = simd::max_diff(v.coords(), x.coords());
        for (std::size_t j = 0; j < e; ++j) {
            if ((v[j] - x[j]) >= top - tol) t.sets[j].push_back(i);
        }
    }
    return t;
}

bool contains(const TropicalPolytope& polytope, const TropicalPoint& x, double tol) {
    return type_of(polytope, x, tol).covers_all();
}

bool same_cell(const TropicalPolytope& polytope, const TropicalPoint& x, const TropicalPoint& y, double tol) {
    const TypeVector tx = type_of(polytope, x, tol);
    const TypeVector ty = type_of(polytope, y, tol);
    if (!tx.covers_all() || !ty.covers_all()) throw InvalidInput("same_cell: point outside the polytope");
    return tx == ty;
}

OriginWitness origin_in_hull(const std::vector<Ultrametric>& vertices) {
    if (vertices.empty()) throw InvalidInput("origin_in_hull: no vertices");
    const int m = vertices.front().leaves();
    std::vector<TropicalPoint> points;
    for (const auto& u : vertices) {
        if (u.leaves() != m) throw InvalidInput("origin_in_hull: vertices have different leaf counts");
        points.push_back(u.point());
    }
    const std::size_t e = points.front().dim();

    OriginWitness w;
    w.cover.assign(e, -1);
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto c = points[k].coords();
        double top = c[0];
        for (double x : c) top = x > top ? x : top;
        for (std::size_t p = 0; p < e; ++p) {
            if (w.cover[p] < 0 && c[p] >= top - kTolerance) w.cover[p] = static_cast<int>(k);
        }
    }
    w.by_lemma = true;
    for (std::size_t p = 0; p < e; ++p) {
        if (w.cover[p] < 0) {
            w.by_lemma = false;
            if (!w.uncovered) w.uncovered = p;
        }
    }
    const TropicalPolytope polytope(points);
    w.by_type = contains(polytope, TropicalPoint::zeros(e));
    w.contained = w.by_lemma && w.by_type;
    return w;
}

std::string polytope_to_json(const TropicalPolytope& polytope, int leaves, const std::vector<std::string>& labels) {
    nlohmann::ordered_json j;
    j["m"] = leaves;
    auto& verts = j["vertices"] = nlohmann::ordered_json::array();
    for (const auto& v : polytope.vertices()) {
        std::vector<double> c(v.coords().begin(), v.coords().end());
        for (double& x : c) x += 0.0;
        verts.push_back(c);
    }
    j["labels"] = labels;
    return j.dump(2) + "\n";
}

PolytopeFile polytope_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    PolytopeFile out;
    try {
        out.leaves = j.at("m").get<int>();
        const auto& verts = j.contains("vertex_vectors") ? j.at("vertex_vectors") : j.at("vertices");
        for (const auto& v : verts) out.vertices.emplace_back(v.get<std::vector<double>>());
        if (j.contains("labels")) out.labels = j.at("labels").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("unexpected polytope JSON layout: ") + e.what(), 0);
    }
    if (out.vertices.empty()) throw ParseError("polytope JSON has no vertices", 0);
    return out;
}

}  // namespace troppca
