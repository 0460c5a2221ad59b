#include "hrf/geometry.hpp"

#include <string>

namespace hrf {

void require_same_field(Field a, Field b, std::string_view what) {
    if (a != b) throw FieldMismatchError(std::string(what) + ": field mismatch");
}

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx realify(cplx z, Field field, std::string_view what) {
    if (field == Field::Complex) return z;
    if (!is_real_scalar(z, 1e-12)) throw FieldMismatchError(std::string(what) + ": complex value over R");
    return {z.real(), 0.0};
}

}  // namespace

Sl2::Sl2(cplx a, cplx b, cplx c, cplx d) : a_(a), b_(b), c_(c), d_(d) {
    if (!finite(a) || !finite(b) || !finite(c) || !finite(d)) throw DomainError("Sl2: non-finite entry");
    const double scale = std::max(1.0, frobenius_sq());
    if (std::abs(det() - 1.0) > 1e-12 * scale) throw DomainError("Sl2: determinant is not one");
}

Sl2 Sl2::unchecked(cplx a, cplx b, cplx c, cplx d) {
    Sl2 g;
    g.a_ = a;
    g.b_ = b;
    g.c_ = c;
    g.d_ = d;
    return g;
}

Sl2 Sl2::normalized(cplx a, cplx b, cplx c, cplx d) {
    const cplx det = a * d - b * c;
    if (std::abs(det) == 0.0 || !finite(det)) throw DomainError("Sl2: singular matrix");
    const cplx s = std::sqrt(det);
    return {a / s, b / s, c / s, d / s};
}

Sl2 Sl2::eta(double A) { return unchecked(std::exp(A / 2), 0.0, 0.0, std::exp(-A / 2)); }

bool Sl2::is_real(double tol) const {
    return is_real_scalar(a_, tol) && is_real_scalar(b_, tol) && is_real_scalar(c_, tol) && is_real_scalar(d_, tol);
}

bool Sl2::is_unitary(double tol) const {
    // g^* g = I
    const double p = std::norm(a_) + std::norm(c_);
    const double r = std::norm(b_) + std::norm(d_);
    const cplx q = std::conj(a_) * b_ + std::conj(c_) * d_;
    return std::abs(p - 1) <= tol && std::abs(r - 1) <= tol && std::abs(q) <= tol;
}

double Sl2::frobenius_sq() const { return std::norm(a_) + std::norm(b_) + std::norm(c_) + std::norm(d_); }

Sl2 operator*(const Sl2& x, const Sl2& y) {
    return Sl2::unchecked(x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
                          x.c_ * y.b_ + x.d_ * y.d_);
}

ProjectivePoint::ProjectivePoint(Field field, cplx x, cplx y) : field_(field) {
    if (!finite(x) || !finite(y)) throw DomainError("ProjectivePoint: non-finite coordinates");
    x = realify(x, field, "ProjectivePoint");
    y = realify(y, field, "ProjectivePoint");
    const double n = std::hypot(std::abs(x), std::abs(y));
    if (n == 0.0) throw DomainError("ProjectivePoint: zero vector");
    const cplx lead = std::abs(x) >= std::abs(y) ? x : y;
    const cplx phase = std::conj(lead) / std::abs(lead);
    x_ = x * phase / n;
    y_ = y * phase / n;
    if (field == Field::Real) {
        x_ = x_.real();
        y_ = y_.real();
    }
}

ProjectivePoint ProjectivePoint::from_sphere(Field field, const Vec3& v) {
    const double len = v.norm();
    if (!(len > 0.0) || !std::isfinite(len)) throw DomainError("ProjectivePoint: bad sphere point");
    const double a = v.x() / len, b = v.y() / len, c = v.z() / len;
    if (field == Field::Real && std::abs(b) > 1e-12) throw FieldMismatchError("ProjectivePoint: off the real circle");
    const double bb = field == Field::Real ? 0.0 : b;
    if (c <= 0) return {field, cplx(a, bb), 1.0 - c};
    return {field, 1.0 + c, cplx(a, -bb)};
}

cplx ProjectivePoint::affine_value() const {
    if (y_ == 0.0) throw DomainError("ProjectivePoint: affine value at infinity");
    return x_ / y_;
}

Vec3 ProjectivePoint::to_sphere() const {
    const cplx xy = x_ * std::conj(y_);
    const double n = std::norm(x_) + std::norm(y_);
    return Vec3(2 * xy.real(), 2 * xy.imag(), std::norm(x_) - std::norm(y_)) / n;
}

bool ProjectivePoint::approx_equal(const ProjectivePoint& other, double tol) const {
    return field_ == other.field_ && chordal_distance(*this, other) <= tol;
}

HyperbolicPoint HyperbolicPoint::half_space(Field field, cplx z, double t) {
    if (!finite(z) || !std::isfinite(t)) throw DomainError("HyperbolicPoint: non-finite coordinates");
    if (!(t > 1e-300)) throw DomainError("HyperbolicPoint: t must be positive");
    return {field, HalfSpaceCoords{realify(z, field, "HyperbolicPoint"), t}};
}

HyperbolicPoint HyperbolicPoint::ball(Field field, const Vec3& xi) {
    if (!xi.allFinite()) throw DomainError("HyperbolicPoint: non-finite coordinates");
    if (!(xi.squaredNorm() < 1.0)) throw DomainError("HyperbolicPoint: ball point must have norm < 1");
    Vec3 v = xi;
    if (field == Field::Real) {
        if (std::abs(v.y()) > 1e-12) throw FieldMismatchError("HyperbolicPoint: real ball points have y = 0");
        v.y() = 0.0;
    }
    return {field, v};
}

HyperbolicPoint HyperbolicPoint::coset(Field field, const Sl2& g) {
    if (field == Field::Real && !g.is_real(1e-12)) throw FieldMismatchError("HyperbolicPoint: complex matrix over R");
    return {field, g};
}

Model HyperbolicPoint::model() const {
    switch (value_.index()) {
        case 0: return Model::HalfSpace;
        case 1: return Model::Ball;
        default: return Model::Coset;
    }
}

HalfSpaceCoords HyperbolicPoint::as_half_space() const {
    if (auto* h = std::get_if<HalfSpaceCoords>(&value_)) return *h;
    if (auto* b = std::get_if<Vec3>(&value_)) {
        auto h = ball_to_half_space(*b);
        if (field_ == Field::Real) h.z = h.z.real();
        return h;
    }
    const Sl2& g = std::get<Sl2>(value_);
    const double den = std::norm(g.d()) + std::norm(g.c());
    cplx z = (g.b() * std::conj(g.d()) + g.a() * std::conj(g.c())) / den;
    if (field_ == Field::Real) z = z.real();
    return {z, 1.0 / den};
}

Vec3 HyperbolicPoint::as_ball() const {
    if (auto* b = std::get_if<Vec3>(&value_)) return *b;
    const auto h = as_half_space();
    return half_space_to_ball(h.z, h.t);
}

Sl2 HyperbolicPoint::as_coset() const {
    const auto h = as_half_space();
    return halfspace_representative(h.z, h.t);
}

double chordal_distance(const Pair& p, const Pair& q) {
    return std::abs(p[0] * q[1] - p[1] * q[0]) / (norm(p) * norm(q));
}

double chordal_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    require_same_field(p.field(), q.field(), "chordal_distance");
    return std::min(1.0, std::abs(p.x() * q.y() - p.y() * q.x()));
}

CartanFactors cartan_decompose(const Sl2& g) {
    if (!finite(g.a()) || !finite(g.b()) || !finite(g.c()) || !finite(g.d()))
        throw DomainError("cartan_decompose: non-finite entries");
    // Eigen-decomposition of g^* g = [[p, q], [conj q, r]].
    const double p = std::norm(g.a()) + std::norm(g.c());
    const double r = std::norm(g.b()) + std::norm(g.d());
    const cplx q = std::conj(g.a()) * g.b() + std::conj(g.c()) * g.d();
    const double gap = std::hypot(p - r, 2 * std::abs(q));
    const double lambda = (p + r + gap) / 2;

    cplx v1, v2;
    if (std::abs(q) == 0.0 && p >= r) {
        v1 = 1.0;
        v2 = 0.0;
    } else if (std::abs(q) == 0.0) {
        v1 = 0.0;
        v2 = 1.0;
    } else if (p >= r) {
        v1 = (p - r + gap) / 2;
        v2 = std::conj(q);
    } else {
        v1 = q;
        v2 = (r - p + gap) / 2;
    }
    const double vn = std::hypot(std::abs(v1), std::abs(v2));
    v1 /= vn;
    v2 /= vn;
    const Sl2 V = Sl2::unchecked(v1, -std::conj(v2), v2, std::conj(v1));

    const double smax = std::sqrt(lambda);
    const Pair u1 = g * Pair{v1, v2};
    const Pair u2 = g * Pair{-std::conj(v2), std::conj(v1)};
    const Sl2 U = Sl2::unchecked(u1[0] / smax, u2[0] * smax, u1[1] / smax, u2[1] * smax);

    CartanFactors out;
    out.tau = U;
    out.A = std::max(0.0, std::log1p((p + r - 2 + gap) / 2));
    out.sigma = V.adjoint();
    return out;
}

Sl2 halfspace_representative(cplx z, double t) {
    if (!(t > 1e-300) || !std::isfinite(t)) throw DomainError("halfspace_representative: t must be positive");
    const double s = std::sqrt(t);
    return Sl2::unchecked(s, z / s, 0.0, 1.0 / s);
}

Sl2 halfspace_representative(const HyperbolicPoint& p) { return p.as_coset(); }

Sl2 transvection_representative(const HyperbolicPoint& p) {
    const Sl2 g = p.as_coset();
    const Sl2 m = g * g.adjoint();
    const double s = std::sqrt(m.trace().real() + 2);
    return Sl2::unchecked((m.a() + 1.0) / s, m.b() / s, m.c() / s, (m.d() + 1.0) / s);
}

double halfspace_distance(cplx z, double t, cplx w, double s) {
    const double delta = std::norm(z - w) + (t - s) * (t - s);
    return 2 * std::asinh(std::sqrt(delta / (4 * s * t)));
}

double ball_distance(const Vec3& xi, const Vec3& eta) {
    const double den = (1 - xi.squaredNorm()) * (1 - eta.squaredNorm());
    return 2 * std::asinh((xi - eta).norm() / std::sqrt(den));
}

double hyperbolic_distance(const HyperbolicPoint& p, const HyperbolicPoint& q) {
    require_same_field(p.field(), q.field(), "hyperbolic_distance");
    if (p.model() == Model::Ball && q.model() == Model::Ball) return ball_distance(p.as_ball(), q.as_ball());
    const auto a = p.as_half_space();
    const auto b = q.as_half_space();
    return halfspace_distance(a.z, a.t, b.z, b.t);
}

HalfSpaceCoords ball_to_half_space(const Vec3& xi) {
    const double e = xi.squaredNorm() - 2 * xi.z() + 1;
    return {cplx(2 * xi.x(), 2 * xi.y()) / e, (1 - xi.squaredNorm()) / e};
}

Vec3 half_space_to_ball(cplx z, double t) {
    const double zz = std::norm(z);
    const double den = zz + (t + 1) * (t + 1);
    return Vec3(2 * z.real(), 2 * z.imag(), zz + t * t - 1) / den;
}

HyperbolicPoint convert(const HyperbolicPoint& p, Model target) {
    switch (target) {
        case Model::HalfSpace: {
            const auto h = p.as_half_space();
            return HyperbolicPoint::half_space(p.field(), h.z, h.t);
        }
        case Model::Ball: return HyperbolicPoint::ball(p.field(), p.as_ball());
        case Model::Coset: return HyperbolicPoint::coset(p.field(), p.as_coset());
    }
    return p;
}

namespace {

HalfSpaceCoords act(const Sl2& g, cplx z, double t) {
    const cplx czd = g.c() * z + g.d();
    const double den = std::norm(czd) + std::norm(g.c()) * t * t;
    return {((g.a() * z + g.b()) * std::conj(czd) + g.a() * std::conj(g.c()) * t * t) / den, t / den};
}

}  // namespace

HyperbolicPoint mobius_apply(const Sl2& g, const HyperbolicPoint& p) {
    if (p.field() == Field::Real && !g.is_real(1e-12)) throw FieldMismatchError("mobius_apply: complex matrix over R");
    switch (p.model()) {
        case Model::Coset: return HyperbolicPoint::coset(p.field(), g * p.as_coset());
        case Model::Ball: return HyperbolicPoint::ball(p.field(), mobius_apply_ball(g, p.as_ball()));
        case Model::HalfSpace: {
            const auto h = p.as_half_space();
            const auto r = act(g, h.z, h.t);
            return HyperbolicPoint::half_space(p.field(), r.z, r.t);
        }
    }
    return p;
}

ProjectivePoint mobius_apply(const Sl2& g, const ProjectivePoint& p) { return {p.field(), g * p.pair()}; }

Vec3 mobius_apply_ball(const Sl2& g, const Vec3& xi) {
    const auto h = ball_to_half_space(xi);
    const auto r = act(g, h.z, h.t);
    return half_space_to_ball(r.z, r.t);
}

Vec3 mobius_apply_sphere(const Sl2& g, const Vec3& zeta) {
    return mobius_apply(g, ProjectivePoint::from_sphere(Field::Complex, zeta)).to_sphere();
}

Vec3 ball_exp_origin(const Vec3& v) {
    const double s = v.norm();
    if (s == 0.0) return Vec3::Zero();
    return std::tanh(s / 2) * v / s;
}

ProjectivePoint boundary_point(Field field, cplx z) { return ProjectivePoint::affine(field, z); }

double poisson_kernel(cplx w, cplx z, double t, Field field) {
    if (!(t > 0)) throw DomainError("poisson_kernel: t must be positive");
    const double k = t / (t * t + std::norm(w - z));
    return field == Field::Real ? k : k * k;
}

}  // namespace hrf
