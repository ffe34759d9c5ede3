#pragma once

#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace troppca {

// Absolute tolerance for every equality test on coordinates.
inline constexpr double kTolerance = 1e-9;

// Additive identity of the max-plus semiring. Only ever passed to trop_add.
inline constexpr double kTropicalZero = -std::numeric_limits<double>::infinity();

/// A point of the tropical projective torus R^e / R1.
///
/// Coordinates are stored raw; two points are equal when their difference is
/// a constant vector. Use normalized() for the canonical representative with
/// first coordinate zero.
class TropicalPoint {
public:
    /// Throws InvalidInput when fewer than two coordinates are given or any
    /// coordinate is not finite.
    explicit TropicalPoint(std::vector<double> coords);
    TropicalPoint(std::initializer_list<double> coords);

    static TropicalPoint zeros(std::size_t dim);

    std::size_t dim() const noexcept { return coords_.size(); }
    double operator[](std::size_t i) const { return coords_[i]; }
    std::span<const double> coords() const noexcept { return coords_; }
    const double* data() const noexcept { return coords_.data(); }

    TropicalPoint normalized() const;

    friend bool operator==(const TropicalPoint&, const TropicalPoint&) = default;

private:
    std::vector<double> coords_;
};

/// max(a, b); kTropicalZero is the identity.
double trop_add(double a, double b) noexcept;

/// a ⊙ v: shifts every coordinate by a.
TropicalPoint trop_scale(double a, const TropicalPoint& v);

/// a ⊙ v ⊕ b ⊙ w: coordinatewise max of the shifted vectors.
TropicalPoint trop_vec_add(double a, const TropicalPoint& v, double b, const TropicalPoint& w);

/// Representative with first coordinate 0.
TropicalPoint normalize(const TropicalPoint& v);

/// Generalized Hilbert projective metric, max_i(v_i - w_i) - min_i(v_i - w_i).
double trop_dist(const TropicalPoint& v, const TropicalPoint& w);
double trop_dist(std::span<const double> v, std::span<const double> w);

/// Equality in the torus within `tol`.
bool torus_equal(const TropicalPoint& v, const TropicalPoint& w, double tol = kTolerance);

}  // namespace troppca
