#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "hrf/error.hpp"
#include "hrf/field.hpp"

namespace hrf {

// Determinant-one 2x2 matrix [[a, b], [c, d]] over K.
class Sl2 {
public:
    Sl2() = default;
    // Throws DomainError unless |ad - bc - 1| <= 1e-12 and all entries are finite.
    Sl2(cplx a, cplx b, cplx c, cplx d);

    // Rescales an invertible matrix by a square root of its determinant.
    static Sl2 normalized(cplx a, cplx b, cplx c, cplx d);
    static Sl2 identity() { return {}; }
    // diag(e^{A/2}, e^{-A/2})
    static Sl2 eta(double A);
    static Sl2 unchecked(cplx a, cplx b, cplx c, cplx d);

    cplx a() const { return a_; }
    cplx b() const { return b_; }
    cplx c() const { return c_; }
    cplx d() const { return d_; }

    cplx det() const { return a_ * d_ - b_ * c_; }
    cplx trace() const { return a_ + d_; }
    Sl2 inverse() const { return unchecked(d_, -b_, -c_, a_); }
    Sl2 adjoint() const { return unchecked(std::conj(a_), std::conj(c_), std::conj(b_), std::conj(d_)); }
    bool is_real(double tol = 1e-13) const;
    // Norm-preserving on K^2.
    bool is_unitary(double tol = 1e-12) const;
    double frobenius_sq() const;

    Pair operator*(const Pair& p) const { return {a_ * p[0] + b_ * p[1], c_ * p[0] + d_ * p[1]}; }
    friend Sl2 operator*(const Sl2& x, const Sl2& y);

private:
    cplx a_{1.0}, b_{0.0}, c_{0.0}, d_{1.0};
};

struct CartanFactors {
    Sl2 tau;
    double A = 0.0;
    Sl2 sigma;
};

// A point of P^1(K), stored as a unit vector whose larger-modulus coordinate is real positive.
class ProjectivePoint {
public:
    ProjectivePoint() = default;
    // Throws DomainError for (0, 0) or non-finite input, FieldMismatchError for complex data over R.
    ProjectivePoint(Field field, cplx x, cplx y);
    ProjectivePoint(Field field, const Pair& p) : ProjectivePoint(field, p[0], p[1]) {}

    static ProjectivePoint affine(Field field, cplx z) { return {field, z, 1.0}; }
    static ProjectivePoint infinity(Field field) { return {field, 1.0, 0.0}; }
    // Inverse stereographic chart: (0,0,1) is infinity, (0,0,-1) is 0.
    static ProjectivePoint from_sphere(Field field, const Vec3& v);

    Field field() const { return field_; }
    cplx x() const { return x_; }
    cplx y() const { return y_; }
    Pair pair() const { return {x_, y_}; }

    bool is_infinity(double tol = 0.0) const { return std::abs(y_) <= tol; }
    // X / Y; throws DomainError at infinity.
    cplx affine_value() const;
    Vec3 to_sphere() const;

    bool approx_equal(const ProjectivePoint& other, double tol = 1e-12) const;

private:
    Field field_ = Field::Complex;
    cplx x_{0.0}, y_{1.0};
};

enum class Model { HalfSpace, Ball, Coset };

struct HalfSpaceCoords {
    cplx z;
    double t;
};

// Hyperbolic space H_K in one of three models. Real-field ball points live in the plane y = 0
// and real-field half-space points have real z.
class HyperbolicPoint {
public:
    static HyperbolicPoint half_space(Field field, cplx z, double t);
    static HyperbolicPoint ball(Field field, const Vec3& xi);
    static HyperbolicPoint coset(Field field, const Sl2& g);
    // The base point j = (0, 1).
    static HyperbolicPoint base(Field field) { return half_space(field, 0.0, 1.0); }

    Field field() const { return field_; }
    Model model() const;

    HalfSpaceCoords as_half_space() const;
    Vec3 as_ball() const;
    // The upper-triangular representative gamma_{z,t}.
    Sl2 as_coset() const;

private:
    HyperbolicPoint(Field field, std::variant<HalfSpaceCoords, Vec3, Sl2> v) : field_(field), value_(std::move(v)) {}

    Field field_;
    std::variant<HalfSpaceCoords, Vec3, Sl2> value_;
};

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q);
// |X1 Y2 - X2 Y1| / (||P|| ||Q||) on raw vectors.
double chordal_distance(const Pair& p, const Pair& q);

CartanFactors cartan_decompose(const Sl2& g);

// gamma_{z,t} = [[sqrt t, z / sqrt t], [0, 1 / sqrt t]]
Sl2 halfspace_representative(const HyperbolicPoint& p);
Sl2 halfspace_representative(cplx z, double t);

// The positive Hermitian representative, a pure translation from the ball origin to p.
// Its differential at the origin is a positive multiple of the identity.
Sl2 transvection_representative(const HyperbolicPoint& p);

double hyperbolic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q);
double ball_distance(const Vec3& xi, const Vec3& eta);
double halfspace_distance(cplx z, double t, cplx w, double s);

HyperbolicPoint convert(const HyperbolicPoint& p, Model target);

HalfSpaceCoords ball_to_half_space(const Vec3& xi);
Vec3 half_space_to_ball(cplx z, double t);

HyperbolicPoint mobius_apply(const Sl2& g, const HyperbolicPoint& p);
ProjectivePoint mobius_apply(const Sl2& g, const ProjectivePoint& p);
// Action on the ball model, returned in ball coordinates.
Vec3 mobius_apply_ball(const Sl2& g, const Vec3& xi);
// Image on S^2 of the point [p] of P^1(C).
inline Vec3 sphere_point(const Pair& p) {
    const cplx xy = p[0] * std::conj(p[1]);
    const double n = std::norm(p[0]) + std::norm(p[1]);
    return Vec3(2 * xy.real(), 2 * xy.imag(), std::norm(p[0]) - std::norm(p[1])) / n;
}

// Action on the boundary sphere S^2.
Vec3 mobius_apply_sphere(const Sl2& g, const Vec3& zeta);

// Point at hyperbolic distance |v| from the ball origin in direction v.
Vec3 ball_exp_origin(const Vec3& v);

// Boundary limit of the vertical ray through z, and of ball radii.
ProjectivePoint boundary_point(Field field, cplx z);

double poisson_kernel(cplx w, cplx z, double t, Field field);

class QuadratureRule;

// H{g}(p) = integral of g(gamma . alpha) against omega_K, with gamma = gamma_{z,t}.
double harmonic_extension(const std::function<double(const ProjectivePoint&)>& g, const HyperbolicPoint& p,
                          const QuadratureRule& rule);

}  // namespace hrf
