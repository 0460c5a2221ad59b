#include "doctest.h"
#include "support.hpp"

using namespace hrf;
using namespace hrf::testing;

namespace {

// R of (X^d, Y^d) at j over C: (1/2) integral of log(u^d + (1 - u)^d), u uniform.
double power_map_oracle(int d) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double u) { return 0.5 * std::log(std::pow(u, d) + std::pow(1 - u, d)); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

}  // namespace

TEST_CASE("closed form for linear lifts") {
    for (Field field : {Field::Real, Field::Complex})
        for (double A : {0.0, 0.3, 2.0, 9.0})
            CHECK(r_closed_form_linear(A, field) == doctest::Approx(linear_oracle(A, field)).epsilon(1e-12).scale(1));
}

TEST_CASE("R of a Moebius lift is the linear closed form") {
    std::mt19937_64 rng(1);
    const auto rule = build_rule(Field::Complex, 16);
    for (int k = 0; k < 5; ++k) {
        const Sl2 g = random_sl2(rng, Field::Complex, 3.0);
        const auto G = HomogeneousLift::linear(Field::Complex, g);
        const double A = cartan_decompose(g).A;
        CHECK(r_value(G, Sl2::identity(), rule) == doctest::Approx(r_closed_form_linear(A, Field::Complex)).epsilon(1e-10));
    }
}

TEST_CASE("R of the power map at the base point") {
    const auto rule = build_rule(Field::Complex, 16);
    for (int d : {2, 3, 5}) {
        std::vector<cplx> num(d + 1, 0.0);
        num[0] = 1.0;
        CHECK(r_value(poly_map(Field::Complex, num), Sl2::identity(), rule) ==
              doctest::Approx(power_map_oracle(d)).epsilon(1e-11));
    }
}

TEST_CASE("equivariance under conjugation") {
    std::mt19937_64 rng(2);
    for (Field field : {Field::Real, Field::Complex}) {
        const auto rule = build_rule(field, 16);
        // Well-separated roots keep the integrand within reach of the fixed rule.
        const auto F = HomogeneousLift::from_rational(field, {1, 0, -1}, {1, 0.5});
        for (int k = 0; k < 5; ++k) {
            const Sl2 g = random_sl2(rng, field, 1.0);
            const double direct = r_value(F, g, rule);
            // Equivariance is exact; the fixed rule resolves the moved integrand to about 1e-7.
            CHECK(std::abs(r_value(conjugate(F, g), Sl2::identity(), rule) - direct) < 1e-6);
            // Only the coset g K matters.
            CHECK(r_value(F, g * random_unitary(rng, field), rule) == doctest::Approx(direct).epsilon(1e-8));
        }
    }
}

TEST_CASE("iterated lift values match expanded iterates") {
    std::mt19937_64 rng(3);
    const auto rule = build_rule(Field::Complex, 16);
    const auto F = poly_map(Field::Complex, {1, 0, -0.3});
    const auto L = IteratedLift(F, 3);
    const auto E = iterate(F, 3);
    for (int k = 0; k < 3; ++k) {
        const Sl2 g = random_sl2(rng, Field::Complex, 1.0);
        CHECK(r_value(L, g, rule) == doctest::Approx(r_value(E, g, rule)).epsilon(1e-9));
    }
}

TEST_CASE("growth sandwich holds at random points") {
    std::mt19937_64 rng(4);
    const auto rule = build_rule(Field::Complex, 16);
    for (int k = 0; k < 5; ++k) {
        const auto F = random_lift(rng, Field::Complex, 2);
        const auto c = growth_constants(F);
        CHECK(c.C1 <= c.C2);
        for (int j = 0; j < 5; ++j) {
            const auto p = HyperbolicPoint::ball(Field::Complex, random_ball_point(rng, Field::Complex, 4.0));
            const auto b = growth_bounds_check(F, p, rule, c);
            CHECK(b.lower <= b.value);
            CHECK(b.value <= b.upper);
        }
    }
}

TEST_CASE("Laplacian formula matches finite differences of R") {
    std::mt19937_64 rng(5);
    for (Field field : {Field::Real, Field::Complex}) {
        const auto rule = build_rule(field, 16);
        const auto F = random_lift(rng, field, 2);
        auto f = [&](cplx z, double t) { return r_value(F, HyperbolicPoint::half_space(field, z, t), rule); };
        for (auto [z, t] : {std::pair<cplx, double>{0.2, 1.0}, {-0.4, 0.6}}) {
            const auto p = HyperbolicPoint::half_space(field, z, t);
            CHECK(laplacian_formula(F, p, rule) == doctest::Approx(fd_laplacian(f, z, t, field)).epsilon(1e-5));
        }
    }
}

TEST_CASE("Laplacian is at least d - 1 over C") {
    std::mt19937_64 rng(6);
    const auto rule = build_rule(Field::Complex, 16);
    for (int k = 0; k < 10; ++k) {
        const auto F = random_lift(rng, Field::Complex, 3);
        const auto p = HyperbolicPoint::ball(Field::Complex, random_ball_point(rng, Field::Complex, 2.0));
        CHECK(laplacian_formula(F, p, rule) >= 2.0 - 1e-9);
    }
}

TEST_CASE("gradient matches finite differences of R") {
    std::mt19937_64 rng(7);
    const auto rule = build_rule(Field::Complex, 32);
    const auto F = random_lift(rng, Field::Complex, 2);
    for (int k = 0; k < 3; ++k) {
        const Sl2 g = random_sl2(rng, Field::Complex, 1.0);
        const Vec3 fd = fd_gradient([&](const Sl2& s) { return r_value(F, s, rule); }, g);
        CHECK((gradient_at(F, g, rule) - fd).norm() < 1e-5 * std::max(1.0, fd.norm()));
    }
}

TEST_CASE("omega_f has mass d + 1 and its mean drives the gradient") {
    const auto rule = build_rule(Field::Complex, 32);
    const auto F = poly_map(Field::Complex, {1, 0, 0});
    // z^2 is symmetric about j, so the gradient vanishes there.
    CHECK(gradient_at(F, Sl2::identity(), rule).norm() < 1e-10);
    const auto cloud = omega_f_cloud(RationalMap(F), Sl2::eta(0.4), rule);
    CHECK(cloud.total_mass() == doctest::Approx(3.0).epsilon(1e-10));
    const Vec3 mean = omega_mean(F, Sl2::eta(0.4), rule);
    CHECK((kGradientScale * mean - gradient_at(F, Sl2::eta(0.4), rule)).norm() < 1e-12);
}

TEST_CASE("evaluate_rf reports consistent fields") {
    const auto rule = build_rule(Field::Complex, 16);
    const auto F = poly_map(Field::Complex, {1, 0, -1});
    const auto p = HyperbolicPoint::half_space(Field::Complex, cplx(0.1, 0.2), 1.3);
    const auto ev = evaluate_rf(F, p, rule);
    CHECK(ev.value == doctest::Approx(r_value(F, p, rule)));
    CHECK(ev.laplacian == doctest::Approx(laplacian_formula(F, p, rule)));
    REQUIRE(ev.gradient.has_value());
    CHECK(std::isfinite(ev.gradient->norm()));
    CHECK(leading_coefficient_weight(poly_map(Field::Complex, {1, 0, 0}), 0.0, 1.0) == doctest::Approx(1.0));
}
