#include "troppca/tropical.hpp"

#include <cmath>
#include <string>

#include "troppca/error.hpp"
#include "troppca/simd/kernels.hpp"

namespace troppca {

TropicalPoint::TropicalPoint(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.size() < 2) {
        throw InvalidInput("tropical point needs at least 2 coordinates, got " +
                           std::to_string(coords_.size()));
    }
    for (double c : coords_) {
        if (!std::isfinite(c)) throw InvalidInput("tropical point coordinates must be finite");
    }
}

TropicalPoint::TropicalPoint(std::initializer_list<double> coords)
    : TropicalPoint(std::vector<double>(coords)) {}

TropicalPoint TropicalPoint::zeros(std::size_t dim) {
    return TropicalPoint(std::vector<double>(dim, 0.0));
}

TropicalPoint TropicalPoint::normalized() const { return normalize(*this); }

double trop_add(double a, double b) noexcept { return a < b ? b : a; }

TropicalPoint trop_scale(double a, const TropicalPoint& v) {
    std::vector<double> out(v.coords().begin(), v.coords().end());
    for (double& x : out) x += a;
    return TropicalPoint(std::move(out));
}

namespace {

void require_same_dim(const TropicalPoint& v, const TropicalPoint& w) {
    if (v.dim() != w.dim()) {
        throw InvalidInput("dimension mismatch: " + std::to_string(v.dim()) + " vs " +
                           std::to_string(w.dim()));
    }
}

}  // namespace

TropicalPoint trop_vec_add(double a, const TropicalPoint& v, double b, const TropicalPoint& w) {
    require_same_dim(v, w);
    std::vector<double> out(v.dim());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = v[i] + a;
    simd::shifted_max(out, w.coords(), b);
    return TropicalPoint(std::move(out));
}

TropicalPoint normalize(const TropicalPoint& v) {
    std::vector<double> out(v.coords().begin(), v.coords().end());
    const double first = out[0];
    for (double& x : out) x = (x - first) + 0.0;
    return TropicalPoint(std::move(out));
}

double trop_dist(std::span<const double> v, std::span<const double> w) {
    if (v.size() != w.size()) {
        throw InvalidInput("dimension mismatch: " + std::to_string(v.size()) + " vs " +
                           std::to_string(w.size()));
    }
    return simd::diff_range(v, w);
}

double trop_dist(const TropicalPoint& v, const TropicalPoint& w) {
    return trop_dist(v.coords(), w.coords());
}

bool torus_equal(const TropicalPoint& v, const TropicalPoint& w, double tol) {
    return trop_dist(v, w) <= tol;
}

}  // namespace troppca
