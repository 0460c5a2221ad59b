#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hrf/analysis.hpp"

namespace hrf::testing {

inline cplx random_cplx(std::mt19937_64& rng, Field field, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    return field == Field::Real ? cplx(g(rng)) : cplx(g(rng), g(rng));
}

inline Sl2 random_unitary(std::mt19937_64& rng, Field field) {
    if (field == Field::Real) {
        const double th = std::uniform_real_distribution<double>(0, 2 * std::numbers::pi)(rng);
        return Sl2(std::cos(th), -std::sin(th), std::sin(th), std::cos(th));
    }
    std::normal_distribution<double> g;
    cplx a(g(rng), g(rng)), b(g(rng), g(rng));
    const double n = std::sqrt(std::norm(a) + std::norm(b));
    a /= n;
    b /= n;
    return Sl2(a, -std::conj(b), b, std::conj(a));
}

inline Vec3 random_ball_point(std::mt19937_64& rng, Field field, double max_distance) {
    std::normal_distribution<double> g;
    Vec3 v(g(rng), field == Field::Complex ? g(rng) : 0.0, g(rng));
    v.normalize();
    const double rho = std::uniform_real_distribution<double>(0, max_distance)(rng);
    return std::tanh(rho / 2) * v;
}

// A point at hyperbolic distance <= max_distance from j, represented by a non-unitary-reduced matrix.
inline Sl2 random_sl2(std::mt19937_64& rng, Field field, double max_distance) {
    const auto p = HyperbolicPoint::ball(field, random_ball_point(rng, field, max_distance));
    return transvection_representative(p) * random_unitary(rng, field);
}

inline HomogeneousLift random_lift(std::mt19937_64& rng, Field field, int degree) {
    std::vector<cplx> f0(degree + 1), f1(degree + 1);
    for (auto& c : f0) c = random_cplx(rng, field);
    for (auto& c : f1) c = random_cplx(rng, field);
    return HomogeneousLift(field, f0, f1);
}

inline HomogeneousLift poly_map(Field field, std::vector<cplx> numerator) {
    return HomogeneousLift::from_rational(field, numerator, {1.0});
}

// One-dimensional oracle for the integral of log ||eta_A P|| against omega_K.
inline double linear_oracle(double A, Field field) {
    using boost::math::quadrature::gauss_kronrod;
    if (field == Field::Complex) {
        // |X|^2 = u is uniform on [0, 1]; the integrand bends at u ~ e^{-2A}, so [c, 1] is taken in log u.
        auto f = [&](double u) { return 0.5 * std::log(std::exp(A) * u + std::exp(-A) * (1 - u)); };
        const double c = std::exp(-2 * A);
        const double head = gauss_kronrod<double, 61>::integrate(f, 0.0, c, 15, 1e-14);
        auto g = [&](double s) { return f(std::exp(s)) * std::exp(s); };
        return head + gauss_kronrod<double, 61>::integrate(g, -2 * A, 0.0, 15, 1e-14);
    }
    auto f = [&](double th) {
        const double s = std::sin(th), c = std::cos(th);
        return 0.5 * std::log(std::exp(A) * s * s + std::exp(-A) * c * c) / std::numbers::pi;
    };
    return gauss_kronrod<double, 61>::integrate(f, -std::numbers::pi / 2, std::numbers::pi / 2, 15, 1e-14);
}

// Hyperbolic Laplacian by fourth-order central differences in half-space coordinates:
// t^2 (sum of second derivatives) - (n - 2) t d/dt with n = 3 over C and n = 2 over R.
inline double fd_laplacian(const std::function<double(cplx, double)>& f, cplx z, double t, Field field,
                           double h = 2e-3) {
    auto d2 = [&](auto&& g) {
        const double hs = h * t;
        return (-g(2 * hs) + 16 * g(hs) - 30 * g(0.0) + 16 * g(-hs) - g(-2 * hs)) / (12 * hs * hs);
    };
    auto d1 = [&](auto&& g) {
        const double hs = h * t;
        return (-g(2 * hs) + 8 * g(hs) - 8 * g(-hs) + g(-2 * hs)) / (12 * hs);
    };
    const double fxx = d2([&](double s) { return f(z + s, t); });
    const double ftt = d2([&](double s) { return f(z, t + s); });
    double lap = t * t * (fxx + ftt);
    if (field == Field::Complex) {
        const double fyy = d2([&](double s) { return f(z + cplx(0, s), t); });
        lap += t * t * fyy - t * d1([&](double s) { return f(z, t + s); });
    }
    return lap;
}

// Directional derivatives of a function on H^3 in the frame carried by gamma.
inline Vec3 fd_gradient(const std::function<double(const Sl2&)>& f, const Sl2& gamma, double h = 1e-4) {
    Vec3 g;
    for (int i = 0; i < 3; ++i) {
        auto at = [&](double s) {
            return f(gamma * transvection_representative(
                                 HyperbolicPoint::ball(Field::Complex, ball_exp_origin(s * Vec3::Unit(i)))));
        };
        g[i] = (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
    }
    return g;
}

// Ball-model Laplacian for the metric 4|dx|^2 / (1 - |x|^2)^2 (curvature -1).
inline double fd_ball_laplacian(const std::function<double(const Vec3&)>& f, const Vec3& x, double h = 1e-3) {
    double lap = 0, radial = 0;
    for (int i = 0; i < 3; ++i) {
        const Vec3 e = h * Vec3::Unit(i);
        const double p1 = f(x + e), m1 = f(x - e), p2 = f(x + 2 * e), m2 = f(x - 2 * e), c = f(x);
        lap += (-p2 + 16 * p1 - 30 * c + 16 * m1 - m2) / (12 * h * h);
        radial += x[i] * (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h);
    }
    const double s = 1 - x.squaredNorm();
    return s * s / 4 * lap + s / 2 * radial;
}

}  // namespace hrf::testing
