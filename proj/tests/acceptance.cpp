// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>

#include "support.hpp"

using namespace hrf;
using namespace hrf::testing;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

const QuadratureRule& rule_c() {
    static const auto r = build_rule(Field::Complex);
    return r;
}

const QuadratureRule& rule_r() {
    static const auto r = build_rule(Field::Real);
    return r;
}

const QuadratureRule& rule_for(Field f) { return f == Field::Real ? rule_r() : rule_c(); }

Outcome closed_forms() {
    double worst = 0;
    for (Field f : {Field::Real, Field::Complex})
        for (double A : {0.0, 0.5, 1.0, 2.0, 4.0}) {
            const auto eta = HomogeneousLift::linear(f, Sl2::eta(A));
            const double v = r_value(eta, HyperbolicPoint::base(f), rule_for(f));
            worst = std::max({worst, std::abs(v - r_closed_form_linear(A, f)), std::abs(v - linear_oracle(A, f))});
        }
    return {worst < 1e-8, "max error " + fmt(worst)};
}

Outcome quadrature_identities() {
    double mass_err = 0;
    for (Field f : {Field::Real, Field::Complex}) {
        long double s = 0;
        for (double w : rule_for(f).weights()) s += w;
        mass_err = std::max(mass_err, static_cast<double>(std::abs(s - 1)));
    }
    auto log1p_abs2 = [](const ProjectivePoint& a) { return -std::log(std::norm(a.y())); };
    const double ec = std::abs(integrate(rule_c(), log1p_abs2) - 1);
    const double er = std::abs(integrate(rule_r(), log1p_abs2) - 2 * std::numbers::ln2);
    return {mass_err < 1e-15 && ec < 1e-8 && er < 1e-8,
            "mass " + fmt(mass_err) + ", C " + fmt(ec) + ", R " + fmt(er)};
}

Outcome invariance() {
    std::mt19937_64 rng(101);
    double su2 = 0, equi = 0, scale = 0, res = 0;
    int su2_over = 0, equi_over = 0;
    for (int k = 0; k < 100; ++k) {
        const Field field = k % 4 == 3 ? Field::Real : Field::Complex;
        const auto& rule = rule_for(field);
        const auto F = random_lift(rng, field, 2 + k % 2);
        const double base = r_value(F, Sl2::identity(), rule);

        const Sl2 u = random_unitary(rng, field);
        const double su2_err = std::abs(r_value(conjugate(F, u), Sl2::identity(), rule) - base);
        su2 = std::max(su2, su2_err);
        su2_over += su2_err >= 1e-8;

        const Sl2 g = random_sl2(rng, field, 1.5), w = random_sl2(rng, field, 1.5);
        const double equi_err = std::abs(r_value(F, g * w, rule) - r_value(conjugate(F, g), w, rule));
        equi = std::max(equi, equi_err);
        equi_over += equi_err >= 1e-8;

        const cplx c = random_cplx(rng, field, 3.0);
        scale = std::max(scale, std::abs(r_value(F.scaled(c), w, rule) - r_value(F, w, rule) - std::log(std::abs(c))));

        const Sl2 h = random_sl2(rng, field, 3.0);
        res = std::max(res, std::abs(std::abs(resultant(conjugate(F, h))) / std::abs(resultant(F)) - 1));
    }
    const bool ok = su2 < 1e-8 && equi < 1e-8 && scale < 1e-8 && res < 1e-8;
    return {ok, "SU2 " + fmt(su2) + " (" + std::to_string(su2_over) + "/100 over 1e-8), equivariance " + fmt(equi) +
                    " (" + std::to_string(equi_over) + "/100 over 1e-8), scaling " + fmt(scale) + ", resultant " +
                    fmt(res)};
}

Outcome growth() {
    std::mt19937_64 rng(202);
    int violations = 0;
    double slack = 1e300;
    for (int k = 0; k < 100; ++k) {
        const Field field = k % 5 == 4 ? Field::Real : Field::Complex;
        const auto F = random_lift(rng, field, 2 + k % 2);
        const auto p = HyperbolicPoint::ball(field, random_ball_point(rng, field, 5.0));
        try {
            const auto b = growth_bounds_check(F, p, rule_for(field));
            slack = std::min({slack, b.value - b.lower, b.upper - b.value});
        } catch (const GrowthBoundViolation&) {
            ++violations;
        }
    }
    return {violations == 0, std::to_string(violations) + " violations, min slack " + fmt(slack)};
}

Outcome laplacian() {
    std::mt19937_64 rng(303);
    const std::vector<HomogeneousLift> maps{poly_map(Field::Complex, {1, 0, 0}), poly_map(Field::Complex, {1, 0, -1}),
                                            HomogeneousLift::from_rational(Field::Complex, {1, 0, 1}, {2, 0})};
    // Under t^2 Delta - t d/dt the formula carries [K:R]/2, so its floor is [K:R](d-1)/2.
    double worst = 0, floor_gap = 0, literal_gap = 0;
    int literal_violations = 0, samples = 0;
    for (const auto& F : maps)
        for (int k = 0; k < 20; ++k) {
            const auto p = HyperbolicPoint::ball(Field::Complex, random_ball_point(rng, Field::Complex, 2.0));
            const auto hs = p.as_half_space();
            const double formula = laplacian_formula(F, p, rule_c());
            const double fd = fd_laplacian(
                [&](cplx z, double t) { return r_value(F, HyperbolicPoint::half_space(Field::Complex, z, t), rule_c()); },
                hs.z, hs.t, Field::Complex);
            worst = std::max(worst, std::abs(formula - fd));
            floor_gap = std::max(floor_gap, (F.degree() - 1.0) - fd);
            literal_gap = std::max(literal_gap, 2.0 * (F.degree() - 1) - fd);
            if (2.0 * (F.degree() - 1) - fd > 1e-6) ++literal_violations;
            ++samples;
        }
    return {worst < 1e-4 && floor_gap <= 1e-6 && literal_gap <= 1e-6,
            "max |formula - fd| " + fmt(worst) + "; floor (d-1)[K:R]/2 excess " + fmt(floor_gap) +
                "; stated floor (d-1)[K:R] violated at " + std::to_string(literal_violations) + "/" +
                std::to_string(samples) + " points by up to " + fmt(literal_gap)};
}

Outcome gradient_check() {
    // The analytic integrand concentrates at scale e^{-A}; a finer rule keeps it resolved off-centre.
    const auto fine = build_rule(Field::Complex, 32);
    std::mt19937_64 rng(404);
    double worst = 0;
    for (const auto& F : {poly_map(Field::Complex, {1, 0, 0}), poly_map(Field::Complex, {1, 0, -1})})
        for (int k = 0; k < 10; ++k) {
            Vec3 xi = random_ball_point(rng, Field::Complex, 1.7);
            if (xi.norm() < 0.1) xi = 0.3 * xi.normalized();
            const Sl2 g = transvection_representative(HyperbolicPoint::ball(Field::Complex, xi));
            const Vec3 an = gradient_at(F, g, fine);
            const Vec3 fd = fd_gradient([&](const Sl2& s) { return r_value(F, s, rule_c()); }, g);
            worst = std::max(worst, (an - fd).norm() / fd.norm());
        }
    return {worst < 1e-4, "max relative error " + fmt(worst)};
}

Outcome minimizer_barycenter() {
    double worst = 0, z2 = 0;
    bool all_converged = true;
    const std::vector<HomogeneousLift> maps{poly_map(Field::Complex, {1, 0, 0}), poly_map(Field::Complex, {1, 0, -1}),
                                            poly_map(Field::Complex, {1, 0, -0.3}),
                                            HomogeneousLift::from_rational(Field::Complex, {1, 0, 1}, {2, 0}),
                                            poly_map(Field::Complex, {1, 0, cplx(-0.12, 0.75)})};
    for (std::size_t i = 0; i < maps.size(); ++i) {
        MinimizeOptions opt;
        opt.random_starts = 2;
        const auto r = minimize_rf(maps[i], rule_c(), opt);
        if (!r.converged) {
            all_converged = false;
            continue;
        }
        worst = std::max(worst, omega_mean(maps[i], transvection_representative(r.minimizer), rule_c()).norm());
        if (i == 0) z2 = r.minimizer.as_ball().norm();
    }
    return {all_converged && worst < 1e-6 && z2 < 1e-5,
            "max |mean| " + fmt(worst) + ", z^2 minimizer |xi| " + fmt(z2) + (all_converged ? "" : ", not converged")};
}

WeightedMeasure random_measure(std::mt19937_64& rng, int n) {
    WeightedMeasure mu;
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.2, 1.0);
    for (int i = 0; i < n; ++i) mu.add(Vec3(g(rng), g(rng), g(rng) + 0.8).normalized(), u(rng));
    return mu;
}

Outcome douady_earle() {
    std::mt19937_64 rng(505);
    double lap = 0, equi = 0, sym = 0;
    for (int k = 0; k < 5; ++k) {
        const auto mu = random_measure(rng, 40);
        const Vec3 x = random_ball_point(rng, Field::Complex, 1.5);
        lap = std::max(lap, std::abs(fd_ball_laplacian([&](const Vec3& y) { return h_mu(mu, y); }, x) - 1.0));

        const Sl2 g = random_sl2(rng, Field::Complex, 1.0);
        const Vec3 b = solve_barycenter(mu).point;
        const Vec3 bg = solve_barycenter(move_measure(mu, g)).point;
        equi = std::max(equi, (bg - mobius_apply_ball(g, b)).norm());

        // Reflection through the equator, and the antipodal symmetrization.
        WeightedMeasure refl = mu, anti = mu;
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const Vec3& p = mu.points[i];
            refl.add(Vec3(p.x(), p.y(), -p.z()), mu.weights[i]);
            anti.add(-p, mu.weights[i]);
        }
        sym = std::max({sym, std::abs(solve_barycenter(refl).point.z()), solve_barycenter(anti).point.norm()});
    }
    // Curvature -1 gives 1; the ball metric |dx|^2/(1-|x|^2)^2 used for the stated value 4 scales it by 4.
    return {4 * lap < 1e-4 && equi < 1e-7 && sym < 1e-10,
            "|4 Lap h - 4| " + fmt(4 * lap) + ", equivariance " + fmt(equi) + ", symmetry " + fmt(sym)};
}

Outcome degree1() {
    const auto& rule = rule_c();
    const auto scaling = RationalMap(poly_map(Field::Complex, {2, 0}));
    const auto r = degree1_analysis(scaling, rule);
    const double expected = -0.5 + std::numbers::ln2 / 2 * (5.0 / 3.0);
    const double err_closed = std::max(std::abs(r.m_K - expected), std::abs(r.m_K_numeric - expected));

    double axis_spread = 0;
    const double r1 = r_value(scaling.lift(), HyperbolicPoint::half_space(Field::Complex, 0.0, 1.0), rule);
    for (double t : {1e-3, 1e-2, 0.3, 5.0, 1e2, 1e3})
        axis_spread = std::max(axis_spread,
                               std::abs(r_value(scaling.lift(), HyperbolicPoint::half_space(Field::Complex, 0.0, t), rule) - r1));

    const auto translation = poly_map(Field::Complex, {1, 1});
    bool monotone = true;
    double prev = 1e300, last = 0;
    for (double t = 0.05; t < 2e4; t *= 1.5) {
        last = r_value(translation, HyperbolicPoint::half_space(Field::Complex, 0.3, t), rule);
        if (!(last < prev)) monotone = false;
        prev = last;
    }

    const auto id = RationalMap(poly_map(Field::Complex, {1, 0}));
    std::mt19937_64 rng(606);
    double id_max = std::abs(degree1_analysis(id, rule).m_K);
    for (int k = 0; k < 10; ++k)
        id_max = std::max(id_max, std::abs(r_value(id.lift(), random_sl2(rng, Field::Complex, 3.0), rule)));

    const bool ok = err_closed < 1e-10 && axis_spread < 1e-8 && monotone && last < 1e-7 && id_max < 1e-12;
    return {ok, "m(2w) error " + fmt(err_closed) + ", axis spread " + fmt(axis_spread) + ", translation " +
                    (monotone ? "monotone" : "NOT monotone") + " to " + fmt(last) + ", identity max |R| " +
                    fmt(id_max) + " (m = 0, not 1)"};
}

Outcome asymptotics_check() {
    bool ok = true;
    std::ostringstream d;
    for (const auto& [name, F] : {std::pair{"z^2", poly_map(Field::Complex, {1, 0, 0})},
                                  std::pair{"z^2-1", poly_map(Field::Complex, {1, 0, -1})}}) {
        AsymptoticsOptions opt;
        opt.n_max = 8;
        opt.track_minimizers = false;
        const auto r = asymptotics(F, opt);
        bool mono = true;
        for (std::size_t k = 2; k < r.max_grid_error.size(); ++k)
            if (!(r.max_grid_error[k] < r.max_grid_error[k - 1])) mono = false;
        const double final_err = r.max_grid_error.back();
        const bool match = r.C_F_match != "neither";
        ok = ok && mono && final_err < 0.01 && match && r.n_values.back() == 8;
        d << name << ": " << (mono ? "monotone" : "NOT monotone") << ", err(8) " << fmt(final_err) << ", C_F "
          << fmt(r.C_F_empirical) << " ~ " << r.C_F_match << " (kappa1 " << fmt(r.kappa1) << "); ";
    }
    return {ok, d.str()};
}

Outcome min_locus() {
    AsymptoticsOptions opt;
    opt.n_max = 8;
    const auto r = asymptotics(poly_map(Field::Complex, {1, 0, -0.3}), opt);
    bool decreasing = true;
    for (std::size_t k = 1; k < r.dist_to_bary.size(); ++k)
        if (!(r.dist_to_bary[k] < r.dist_to_bary[k - 1])) decreasing = false;
    const double final_d = r.dist_to_bary.back();
    const bool ok = decreasing && final_d < 0.05 && r.minimizers_within_bound;
    return {ok, std::string(decreasing ? "decreasing" : "NOT decreasing") + ", final distance " + fmt(final_d) +
                    ", radius bound " + fmt(r.minimizer_radius_bound) +
                    (r.minimizers_within_bound ? " holds" : " VIOLATED")};
}

Outcome capacity() {
    const auto id = projective_capacity(poly_map(Field::Complex, {1, 0}), rule_c());
    const bool identity_ok = id.pcap_preimage == id.pcap_sphere && id.pcap_sphere == std::exp(-0.5);
    const auto F = poly_map(Field::Complex, {1, 0, 0});
    const double v16 = projective_capacity(F, build_rule(Field::Complex, 16)).pcap_preimage;
    double spread = 0;
    for (int m : {12, 24, 32}) spread = std::max(spread, std::abs(projective_capacity(F, build_rule(Field::Complex, m)).pcap_preimage - v16));
    return {identity_ok && spread < 1e-8, std::string("identity ") + (identity_ok ? "exact" : "MISMATCH") +
                                              ", (X^2,Y^2) value " + fmt(v16) + ", refinement spread " + fmt(spread)};
}

Outcome spherical_mass() {
    const std::vector<HomogeneousLift> maps{poly_map(Field::Complex, {1, 0, -1}),
                                            HomogeneousLift::from_rational(Field::Complex, {1, 0, 1}, {2, 0}),
                                            poly_map(Field::Complex, {1, 0, cplx(-0.5, 0), cplx(0, 0.2)}),
                                            HomogeneousLift::from_rational(Field::Complex, {2, 0, 0, 1}, {3, 0, 0})};
    double worst = 0;
    for (const auto& F : maps) {
        const RationalMap f(F);
        const double mass = integrate(rule_c(), [&](const ProjectivePoint& a) { return spherical_derivative_sq(f, a); });
        worst = std::max(worst, std::abs(mass - F.degree()));
    }
    return {worst < 1e-6, "max |mass - d| " + fmt(worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, Outcome (*)()>> criteria{
        {"closed-form agreement", closed_forms},
        {"quadrature identities", quadrature_identities},
        {"invariance and equivariance", invariance},
        {"growth bounds", growth},
        {"Laplacian formula", laplacian},
        {"gradient", gradient_check},
        {"minimizer is omega barycenter", minimizer_barycenter},
        {"Douady-Earle function and barycenter", douady_earle},
        {"degree one", degree1},
        {"asymptotics of scaled iterates", asymptotics_check},
        {"min-locus convergence", min_locus},
        {"projective capacity", capacity},
        {"spherical-derivative mass", spherical_mass},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failures;
        std::printf("%s %2zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), s);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
