#include "doctest.h"
#include "support.hpp"

using namespace hrf;
using namespace hrf::testing;

namespace {

double power_map_oracle() {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [](double u) { return 0.5 * std::log(u * u + (1 - u) * (1 - u)); };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14);
}

}  // namespace

TEST_CASE("z^2 is minimized at the base point") {
    const auto rule = build_rule(Field::Complex, 16);
    MinimizeOptions opt;
    opt.random_starts = 2;
    const auto r = minimize_rf(poly_map(Field::Complex, {1, 0, 0}), rule, opt);
    CHECK(r.converged);
    CHECK(r.minimizer.as_ball().norm() < 1e-5);
    CHECK(r.m_K == doctest::Approx(power_map_oracle()).epsilon(1e-10));
    CHECK(r.hessian_conditioning < 10);
}

TEST_CASE("min-invariant is conjugation invariant") {
    std::mt19937_64 rng(1);
    const auto rule = build_rule(Field::Complex, 16);
    const auto F = poly_map(Field::Complex, {1, 0, -1});
    const Sl2 g = random_sl2(rng, Field::Complex, 1.0);
    MinimizeOptions opt;
    opt.random_starts = 1;
    const auto a = minimize_rf(F, rule, opt);
    const auto b = minimize_rf(conjugate(F, g), rule, opt);
    CHECK(b.m_K == doctest::Approx(a.m_K).epsilon(1e-7));
    // The minimizer moves by gamma^{-1}.
    CHECK(ball_distance(mobius_apply_ball(g, b.minimizer.as_ball()), a.minimizer.as_ball()) < 1e-4);
}

TEST_CASE("real maps minimize within the real slice") {
    const auto rule = build_rule(Field::Real, 16);
    MinimizeOptions opt;
    opt.random_starts = 1;
    const auto r = minimize_rf(poly_map(Field::Real, {1, 0, -2}), rule, opt);
    CHECK(r.converged);
    CHECK(r.minimizer.as_ball().y() == 0.0);
    CHECK_THROWS_AS(minimize_rf(poly_map(Field::Real, {1, 0}), rule, opt), DomainError);
}

TEST_CASE("radial function") {
    CHECK(radial_I(Vec3::Zero()) == doctest::Approx(0.0).scale(1));
    CHECK(radial_I_of_distance(1e-3) == doctest::Approx(1e-6 / 6).epsilon(1e-6));
    const double A = 2.0;
    CHECK(radial_I_of_distance(A) == doctest::Approx(0.5 * (A / std::tanh(A) - 1)).epsilon(1e-14));
    const Vec3 xi(0.3, -0.2, 0.1);
    CHECK(radial_I(xi) == doctest::Approx(radial_I_of_distance(ball_distance(Vec3::Zero(), xi))).epsilon(1e-12));
    CHECK_THROWS_AS(radial_I(Vec3(1, 0, 0)), DomainError);
}

TEST_CASE("a priori radius and iteration budget") {
    CHECK(a_priori_radius(0.5, -1.0, 3.0) == doctest::Approx(2 * (0.5 + 1.0 + 3.0) / 2));
    CHECK(iteration_budget(2) == 16);
    CHECK(iteration_budget(3) == 10);
    CHECK(iteration_budget(10) == 5);
}

TEST_CASE("Gamma_F at the origin is kappa1") {
    const auto rule = build_rule(Field::Complex, 16);
    GreenData green(poly_map(Field::Complex, {1, 0, 0}));
    CHECK(gamma_limit(green, Vec3::Zero(), rule) == doctest::Approx(green.kappa1(rule)).epsilon(1e-12));
}

TEST_CASE("projective capacity of z^2") {
    const auto rule = build_rule(Field::Complex, 16);
    const auto c = projective_capacity(poly_map(Field::Complex, {1, 0, 0}), rule);
    CHECK(c.pcap_sphere == doctest::Approx(std::exp(-0.5)));
    CHECK(c.r_of_lift == doctest::Approx(power_map_oracle()).epsilon(1e-10));
    CHECK(c.pcap_preimage == doctest::Approx(std::exp(-0.5 - power_map_oracle() / 2)).epsilon(1e-10));
}

TEST_CASE("degree one cosh distance matches the half-space metric") {
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        const cplx a = random_cplx(rng, Field::Complex), b = random_cplx(rng, Field::Complex);
        const cplx z = random_cplx(rng, Field::Complex);
        const double t = std::exp(random_cplx(rng, Field::Real).real());
        const double oracle = std::cosh(halfspace_distance(z, t, a * z + b, std::abs(a) * t));
        CHECK(degree1_cosh_distance(a, b, z, t) == doctest::Approx(oracle).epsilon(1e-10));
    }
}

TEST_CASE("degree one analysis") {
    const auto rule = build_rule(Field::Complex, 16);
    auto analyse = [&](std::vector<cplx> num) {
        return degree1_analysis(RationalMap(HomogeneousLift::from_rational(Field::Complex, num, {1.0})), rule);
    };
    // A scaling by 2 translates its axis by log 2, so m is R of eta_{log 2}.
    const auto s = analyse({2, 0});
    CHECK(s.kind == Degree1Kind::Scaling);
    CHECK(s.m_K == doctest::Approx(linear_oracle(std::log(2.0), Field::Complex)).epsilon(1e-10));
    CHECK(s.m_K_numeric == doctest::Approx(s.m_K).epsilon(1e-8));
    CHECK(s.m_K == doctest::Approx(0.0776227).epsilon(1e-6));
    const auto t = analyse({1, 1});
    CHECK(t.kind == Degree1Kind::Translation);
    CHECK(t.m_K == 0.0);
    CHECK(std::abs(t.m_K_numeric) < 1e-6);
    const auto id = analyse({1, 0});
    CHECK(id.kind == Degree1Kind::Identity);
    CHECK(std::abs(id.m_K_numeric) < 1e-12);
}

TEST_CASE("asymptotics of z^2 settle on kappa1") {
    AsymptoticsOptions opt;
    opt.n_max = 3;
    opt.track_minimizers = false;
    opt.tree_depth = 10;
    opt.grid = {Vec3::Zero(), Vec3(0.3, 0, 0)};
    const auto r = asymptotics(poly_map(Field::Complex, {1, 0, 0}), opt);
    CHECK(r.n_values.size() == 3);
    CHECK(r.kappa1 == doctest::Approx(0.5 * std::log(2.0) - 0.5).epsilon(1e-10));
    CHECK(std::abs(r.C_F_empirical - r.kappa1) < 0.05);
    CHECK(r.bary_mu_f.norm() < 1e-3);
    for (std::size_t k = 1; k < r.max_grid_error.size(); ++k) CHECK(r.max_grid_error[k] < r.max_grid_error[k - 1]);
    CHECK(r.level_bound_holds);
    CHECK(r.sandwich_holds);
}
