#include "hrf/analysis.hpp"

#include <algorithm>
#include <numbers>
#include <random>
#include <type_traits>

#include <Eigen/Dense>

namespace hrf {

namespace {

struct LocalModel {
    double value;
    Vec3 gradient;
    Eigen::Matrix3d hessian;
};

template <LiftLike L>
class Objective {
public:
    Objective(const L& F, const QuadratureRule& rule) : F_(F), rule_(rule), field_(F.field()) {
        axes_ = field_ == Field::Complex ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 2};
    }

    Field field() const { return field_; }
    const std::vector<int>& axes() const { return axes_; }

    double value(const Sl2& g) const { return r_value(F_, g, rule_); }

    // Representative of the point reached from gamma . j along normal coordinates x.
    Sl2 moved(const Sl2& gamma, const Vec3& x) const {
        return gamma * transvection_representative(HyperbolicPoint::ball(field_, ball_exp_origin(x)));
    }

    Vec3 unit(int axis) const { return Vec3::Unit(axis); }

    LocalModel model(const Sl2& gamma, double value) const {
        LocalModel m{value, Vec3::Zero(), Eigen::Matrix3d::Identity()};
        if (std::is_same_v<L, HomogeneousLift> && field_ == Field::Complex) {
            // Analytic gradient (iterates concentrate the gradient measure below quadrature resolution); Hessian from central differences of the gradient.
            const double h = 1e-4;
            m.gradient = gradient_at(F_, gamma, rule_);
            for (int j : axes_) {
                const Vec3 gp = gradient_at(F_, moved(gamma, h * unit(j)), rule_);
                const Vec3 gm = gradient_at(F_, moved(gamma, -h * unit(j)), rule_);
                m.hessian.col(j) = (gp - gm) / (2 * h);
            }
        } else {
            // Iterates carry quadrature noise that a small step would amplify.
            const double h = std::is_same_v<L, HomogeneousLift> ? 1e-3 : 1e-2;
            std::array<double, 3> plus{}, minus{};
            for (int i : axes_) {
                plus[i] = this->value(moved(gamma, h * unit(i)));
                minus[i] = this->value(moved(gamma, -h * unit(i)));
                const double p2 = this->value(moved(gamma, 2 * h * unit(i)));
                const double m2 = this->value(moved(gamma, -2 * h * unit(i)));
                m.gradient[i] = (8 * (plus[i] - minus[i]) - (p2 - m2)) / (12 * h);
                m.hessian(i, i) = (plus[i] - 2 * value + minus[i]) / (h * h);
            }
            for (std::size_t a = 0; a < axes_.size(); ++a)
                for (std::size_t b = a + 1; b < axes_.size(); ++b) {
                    const int i = axes_[a], j = axes_[b];
                    const Vec3 ei = h * unit(i), ej = h * unit(j);
                    const double v = (this->value(moved(gamma, ei + ej)) - this->value(moved(gamma, ei - ej)) -
                                      this->value(moved(gamma, -ei + ej)) + this->value(moved(gamma, -ei - ej))) /
                                     (4 * h * h);
                    m.hessian(i, j) = m.hessian(j, i) = v;
                }
        }
        m.hessian = (m.hessian + m.hessian.transpose()).eval() / 2;
        return m;
    }

private:
    const L& F_;
    const QuadratureRule& rule_;
    Field field_;
    std::vector<int> axes_;
};

double conditioning(const Eigen::Matrix3d& h, const std::vector<int>& axes) {
    Eigen::MatrixXd sub(axes.size(), axes.size());
    for (std::size_t a = 0; a < axes.size(); ++a)
        for (std::size_t b = 0; b < axes.size(); ++b) sub(a, b) = h(axes[a], axes[b]);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    if (!(lo > 0)) return 1e16;
    return std::min(1e16, hi / lo);
}

struct LocalRun {
    Vec3 point;
    double value;
    double gradient_norm;
    double conditioning;
    int iterations;
    bool converged;
};

template <LiftLike L>
LocalRun newton_descent(const Objective<L>& obj, const Vec3& start, const MinimizeOptions& options) {
    const Field field = obj.field();
    Vec3 xi = start;
    Sl2 gamma = transvection_representative(HyperbolicPoint::ball(field, xi));
    double value = obj.value(gamma);
    LocalRun run{xi, value, 0.0, 1.0, 0, false};
    for (int it = 0; it < options.max_iterations; ++it) {
        const LocalModel m = obj.model(gamma, value);
        run.gradient_norm = m.gradient.norm();
        run.conditioning = conditioning(m.hessian, obj.axes());
        run.iterations = it;
        if (run.gradient_norm < options.tolerance) {
            run.converged = true;
            break;
        }
        Vec3 step = -m.gradient;
        const Eigen::LLT<Eigen::Matrix3d> llt(m.hessian);
        if (llt.info() == Eigen::Success) {
            const Vec3 newton = llt.solve(-m.gradient);
            if (newton.allFinite() && newton.dot(m.gradient) < 0) step = newton;
        }
        if (field == Field::Real) step.y() = 0;
        if (step.norm() > 1.0) step /= step.norm();
        bool accepted = false;
        for (int k = 0; k < 40; ++k) {
            const Sl2 trial = obj.moved(gamma, step);
            const double v = obj.value(trial);
            if (v <= value + 1e-4 * step.dot(m.gradient)) {
                xi = HyperbolicPoint::coset(field, trial).as_ball();
                if (field == Field::Real) xi.y() = 0;
                gamma = transvection_representative(HyperbolicPoint::ball(field, xi));
                value = v;
                accepted = true;
                break;
            }
            step /= 2;
        }
        if (!accepted) break;
        run.iterations = it + 1;
    }
    run.point = xi;
    run.value = value;
    return run;
}

Vec3 random_direction(std::mt19937_64& rng, Field field) {
    std::normal_distribution<double> g;
    Vec3 v(g(rng), field == Field::Complex ? g(rng) : 0.0, g(rng));
    return v / v.norm();
}

template <LiftLike L>
MinimizeResult minimize_impl(const L& F, const QuadratureRule& rule, const MinimizeOptions& options, double log_res) {
    if (F.degree() < 2) throw DomainError("minimize_rf: degree 1 maps are handled by degree1_analysis");
    require_same_field(F.field(), rule.field(), "minimize_rf");
    const Objective<L> obj(F, rule);
    const Field field = F.field();

    std::vector<Vec3> starts{options.warm_start.value_or(Vec3::Zero())};
    if (options.random_starts > 0) {
        const double r_base = r_value(F, Sl2::identity(), rule);
        const auto c = growth_constants(F);
        const double radius = std::min(a_priori_radius(r_base, c.log_C1, F.degree()), options.max_start_radius);
        std::mt19937_64 rng(options.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < options.random_starts; ++k) starts.push_back(ball_exp_origin(radius * u(rng) * random_direction(rng, field)));
    }
    std::optional<LocalRun> best;
    int iterations = 0;
    for (const auto& s : starts) {
        const LocalRun run = newton_descent(obj, s, options);
        iterations += run.iterations;
        const bool better = !best || (run.converged && !best->converged) ||
                            (run.converged == best->converged && run.value < best->value);
        if (better) best = run;
    }
    const double degree = static_cast<double>(F.degree());
    return {HyperbolicPoint::ball(field, best->point),
            best->value,
            best->value - log_res / (2 * degree),
            best->gradient_norm,
            best->conditioning,
            static_cast<int>(starts.size()) - 1,
            iterations,
            best->converged};
}

}  // namespace

double log_abs_resultant(const IteratedLift& F) {
    const double r = log_abs_resultant(F.base());
    const double d = F.base().degree();
    double acc = r;
    for (int k = 2; k <= F.iterations(); ++k) acc = std::pow(d, k - 1) * r + d * d * acc;
    return acc;
}

MinimizeResult minimize_rf(const HomogeneousLift& F, const QuadratureRule& rule, const MinimizeOptions& options) {
    return minimize_impl(F, rule, options, log_abs_resultant(F));
}

MinimizeResult minimize_rf(const IteratedLift& F, const QuadratureRule& rule, const MinimizeOptions& options) {
    return minimize_impl(F, rule, options, log_abs_resultant(F));
}

double a_priori_radius(double r_at_base, double log_C1, double degree) {
    return 2 * (r_at_base - log_C1 + degree) / (degree - 1);
}

double radial_I_of_distance(double A) { return r_closed_form_linear(A, Field::Complex); }

double radial_I(const Vec3& xi) {
    const double r = xi.norm();
    if (!(r < 1)) throw DomainError("radial_I: point must lie in the open ball");
    return radial_I_of_distance(2 * std::atanh(r));
}

double gamma_limit(const GreenData& green, const Vec3& xi, const QuadratureRule& rule) {
    const auto p = HyperbolicPoint::ball(Field::Complex, xi);
    return harmonic_extension([&](const ProjectivePoint& a) { return green.green(a); }, p, rule) + radial_I(xi);
}

CapacityReport projective_capacity(const HomogeneousLift& F, const QuadratureRule& rule) {
    if (F.field() != Field::Complex) throw FieldMismatchError("projective_capacity: complex field only");
    const double r = r_value(F, Sl2::identity(), rule);
    const double sphere = std::exp(-0.5);
    return {sphere * std::exp(-r / F.degree()), sphere, r};
}

double degree1_cosh_distance(cplx a, cplx b, cplx z, double t) {
    if (!(t > 0)) throw DomainError("degree1_cosh_distance: t must be positive");
    const double ma = std::abs(a);
    const double shift = std::abs(a * z + b - z) / t;
    return 1 + (shift * shift + (ma - 1) * (ma - 1)) / (2 * ma);
}

Degree1Report degree1_analysis(const RationalMap& f, const QuadratureRule& rule) {
    if (f.degree() != 1) throw DomainError("degree1_analysis: degree must be 1");
    require_same_field(f.field(), rule.field(), "degree1_analysis");
    const Field field = f.field();
    const auto form = degree1_normal_form(f);
    const auto& F = f.lift();
    const double res_term = log_abs_resultant(F) / 2;

    Degree1Report out{form.kind, form.lambda, 0.0, 0.0, "", form.fixed_points, std::nullopt};
    auto frame_from = [&](const Pair& p, const Pair& q) {
        // Moebius map sending infinity to [p] and 0 to [q].
        return Sl2::normalized(p[0], q[0], p[1], q[1]);
    };
    switch (form.kind) {
        case Degree1Kind::Identity: {
            out.min_locus = "all of hyperbolic space";
            out.sample_point = HyperbolicPoint::base(field);
            out.m_K_numeric = r_value(F, *out.sample_point, rule) - res_term;
            break;
        }
        case Degree1Kind::Translation: {
            out.min_locus = "boundary fixed point (infimum not attained)";
            const Pair p = form.fixed_points.front().pair();
            const Pair q = field == Field::Real ? Pair{-p[1], p[0]} : Pair{-std::conj(p[1]), std::conj(p[0])};
            const Sl2 h = frame_from(p, q);
            const auto far = mobius_apply(h, HyperbolicPoint::half_space(field, 0.0, 1e4));
            out.m_K_numeric = r_value(F, far, rule) - res_term;
            break;
        }
        case Degree1Kind::Scaling: {
            out.m_K = r_closed_form_linear(std::log(std::abs(form.lambda)), field);
            if (form.fixed_points.size() == 2) {
                out.min_locus = "geodesic joining the two fixed points";
                const Sl2 h = frame_from(form.fixed_points[0].pair(), form.fixed_points[1].pair());
                out.sample_point = mobius_apply(h, HyperbolicPoint::base(field));
            } else {
                // Real elliptic map: a rotation about one interior point.
                out.min_locus = "single interior fixed point";
                const cplx a = F.f0()[1], b = F.f0()[0], c = F.f1()[1], d = F.f1()[0];
                const cplx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
                cplx z = ((a - d) + disc) / (2.0 * c);
                if (z.imag() < 0) z = ((a - d) - disc) / (2.0 * c);
                out.sample_point = HyperbolicPoint::half_space(field, z.real(), std::abs(z.imag()));
            }
            out.m_K_numeric = r_value(F, *out.sample_point, rule) - res_term;
            break;
        }
    }
    return out;
}

int iteration_budget(int degree) {
    if (degree < 2) throw DomainError("iteration_budget: degree must be at least 2");
    return static_cast<int>(std::floor(std::log(kTreePointCap) / std::log(static_cast<double>(degree)) + 1e-12));
}

std::vector<Vec3> default_asymptotics_grid() {
    std::vector<Vec3> grid{Vec3::Zero()};
    for (int axis = 0; axis < 3; ++axis)
        for (double s : {0.5, -0.5}) grid.push_back(s * Vec3::Unit(axis));
    const int n = 13;
    const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
    for (int k = 0; k < n; ++k) {
        const double z = 1 - 2 * (k + 0.5) / n;
        const double r = std::sqrt(1 - z * z);
        grid.push_back(0.35 * Vec3(r * std::cos(golden * k), r * std::sin(golden * k), z));
    }
    return grid;
}

AsymptoticsReport asymptotics(const HomogeneousLift& F, const AsymptoticsOptions& options) {
    if (F.field() != Field::Complex) throw FieldMismatchError("asymptotics: complex field only");
    const int d = F.degree();
    if (d < 2) throw DomainError("asymptotics: degree must be at least 2");
    if (options.n_max < 1) throw DomainError("asymptotics: n_max must be at least 1");
    const auto rule = build_rule(Field::Complex, options.quadrature_order);

    AsymptoticsReport rep{};
    rep.n_budget = iteration_budget(d);
    const int n_max = std::min(options.n_max, rep.n_budget);
    rep.truncated = options.n_max > rep.n_budget;
    rep.grid = options.grid.empty() ? default_asymptotics_grid() : options.grid;

    GreenData green(F);
    rep.kappa1 = green.kappa1(rule);
    for (const auto& xi : rep.grid) rep.gamma_values.push_back(gamma_limit(green, xi, rule));

    const auto constants = growth_constants(F);
    rep.minimizer_radius_bound = 2.0 / (d - 1) * (constants.log_C2 - constants.log_C1);
    rep.minimizers_within_bound = true;

    const int depth = std::min(options.tree_depth, static_cast<int>(std::floor(std::log(kTreePointCap) / std::log(double(d)) + 1e-12)));
    EntropySampling sampling;
    sampling.depth = depth;
    sampling.seed = options.seed;
    const auto mu_f = max_entropy_measure(RationalMap(F), sampling);
    const auto bary = solve_barycenter(mu_f);
    rep.bary_mu_f = bary.point;
    rep.bary_residual = bary.residual;

    std::optional<Vec3> warm;
    for (int n = 1; n <= n_max; ++n) {
        const IteratedLift Fn(F, n);
        const double scale = std::pow(double(d), -n);
        std::vector<double> row;
        double worst = 0;
        for (std::size_t i = 0; i < rep.grid.size(); ++i) {
            const double v = scale * r_value(Fn, HyperbolicPoint::ball(Field::Complex, rep.grid[i]), rule);
            row.push_back(v);
            worst = std::max(worst, std::abs(v - rep.gamma_values[i]));
        }
        rep.n_values.push_back(n);
        rep.scaled_values.push_back(row);
        rep.max_grid_error.push_back(worst);

        if (!options.track_minimizers) continue;
        MinimizeOptions mopt;
        mopt.tolerance = options.minimize_tolerance;
        mopt.warm_start = warm;
        mopt.random_starts = n == 1 ? 2 : 0;
        mopt.seed = options.seed + n;
        const auto m = minimize_rf(Fn, rule, mopt);
        const Vec3 loc = m.minimizer.as_ball();
        warm = loc;
        rep.min_locus_trajectory.push_back(loc);
        rep.min_locus_values.push_back(m.value * scale);
        rep.dist_to_bary.push_back(ball_distance(loc, rep.bary_mu_f));
        if (ball_distance(loc, Vec3::Zero()) > rep.minimizer_radius_bound + 1e-9) rep.minimizers_within_bound = false;
    }

    std::vector<double> offsets;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) offsets.push_back(rep.scaled_values.back()[i] - h_mu(mu_f, rep.grid[i]));
    std::nth_element(offsets.begin(), offsets.begin() + offsets.size() / 2, offsets.end());
    rep.C_F_empirical = offsets[offsets.size() / 2];
    const double e0 = std::abs(rep.C_F_empirical - rep.kappa1), e1 = std::abs(rep.C_F_empirical - (rep.kappa1 - 1));
    rep.C_F_match = e0 < 0.005 && e0 <= e1 ? "kappa1" : (e1 < 0.005 ? "kappa1-1" : "neither");

    // Sublevel set {R_{F^n} <= R_{F^n}(j)} against the growth-bound radius, and the scaled-value sandwich.
    const IteratedLift Fn(F, n_max);
    const double dn = std::pow(double(d), n_max);
    const double alpha = r_value(Fn, Sl2::identity(), rule);
    const double level_radius = 2 * (alpha - (dn - 1) / (d - 1) * constants.log_C1 + dn) / (dn - 1);
    rep.level_bound_holds = true;
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < options.level_samples; ++k) {
        const double rho = std::min(8.0, 1.5 * level_radius) * u(rng);
        const Vec3 xi = ball_exp_origin(rho * random_direction(rng, Field::Complex));
        if (r_value(Fn, HyperbolicPoint::ball(Field::Complex, xi), rule) <= alpha && rho > level_radius)
            rep.level_bound_holds = false;
    }
    rep.sandwich_holds = true;
    for (std::size_t i = 0; i < rep.grid.size(); ++i) {
        const auto p = HyperbolicPoint::ball(Field::Complex, rep.grid[i]);
        const Sl2 g = p.as_coset();
        double raw = 0;
        for (std::size_t k = 0; k < rule.size(); ++k) raw += rule.weights()[k] * Fn.apply_scaled(g * rule.nodes()[k].pair()).log_factor;
        const double A = ball_distance(rep.grid[i], Vec3::Zero());
        if (std::abs(rep.scaled_values.back()[i] - raw / dn) > A / (2 * dn) + 1e-12) rep.sandwich_holds = false;
    }
    return rep;
}

}  // namespace hrf
