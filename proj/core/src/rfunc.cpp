#include "hrf/rfunc.hpp"

#include <algorithm>
#include <numbers>
#include <sstream>

#include <boost/math/tools/minima.hpp>

namespace hrf {

namespace {

template <LiftLike L>
double r_value_impl(const L& F, const Sl2& gamma, const QuadratureRule& rule) {
    require_same_field(F.field(), rule.field(), "r_value");
    const auto ad = adapt_rule(rule, gamma);
    const Sl2 inv = ad.rep.inverse();
    double acc = 0.0;
    for (std::size_t i = 0; i < ad.points.size(); ++i)
        acc += ad.weights[i] * apply_conjugated(F, ad.rep, inv, ad.points[i]).log_factor;
    return acc;
}

template <LiftLike L>
double laplacian_impl(const L& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    require_same_field(F.field(), rule.field(), "laplacian_formula");
    require_same_field(F.field(), p.field(), "laplacian_formula");
    const auto ad = adapt_rule(rule, p.as_coset());
    const Sl2 inv = ad.rep.inverse();
    double acc = 0.0;
    for (std::size_t i = 0; i < ad.points.size(); ++i) {
        const Pair& P = ad.points[i];
        const Pair u = apply_conjugated(F, ad.rep, inv, P).direction;
        acc += ad.weights[i] * std::norm(u[0] * P[1] - u[1] * P[0]);
    }
    return field_dim(F.field()) / 2.0 * (static_cast<double>(F.degree()) - 1 + 4 * acc);
}

template <LiftLike L>
Vec3 omega_mean_impl(const L& F, const Sl2& gamma, const QuadratureRule& rule) {
    if (F.field() != Field::Complex || rule.field() != Field::Complex)
        throw FieldMismatchError("omega_mean: complex field only");
    // Integrate in the adapted frame, then rotate into the frame of gamma.
    const auto ad = adapt_rule(rule, gamma);
    const Sl2 inv = ad.rep.inverse();
    const Sl2 rotate = gamma.inverse() * ad.rep;
    const auto& w = ad.weights;
    Vec3 acc = Vec3::Zero();
    for (std::size_t i = 0; i < ad.points.size(); ++i) {
        const Pair& P = ad.points[i];
        const Pair Q = ad.rep * P;
        const Pair u = F.apply_scaled(Q).direction;
        const Pair v = inv * u;
        const double nq = norm_sq(Q), nv = norm_sq(v);
        const double density = F.spherical_derivative_sq(Q) / (nq * nq * nv * nv);
        acc += w[i] * (sphere_point(rotate * v) + density * sphere_point(rotate * P));
    }
    return acc;
}

double log_norm_at(const auto& F, double s, double theta) {
    const Pair p{std::cos(s), std::sin(s) * std::polar(1.0, theta)};
    return F.apply_scaled(p).log_factor;
}

// Nelder-Mead on a 2-D objective.
std::pair<Eigen::Vector2d, double> nelder_mead(const std::function<double(const Eigen::Vector2d&)>& f,
                                                Eigen::Vector2d start, double step) {
    std::array<Eigen::Vector2d, 3> x{start, start + Eigen::Vector2d(step, 0), start + Eigen::Vector2d(0, step)};
    std::array<double, 3> fx{f(x[0]), f(x[1]), f(x[2])};
    for (int it = 0; it < 2000; ++it) {
        std::array<int, 3> idx{0, 1, 2};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fx[a] < fx[b]; });
        const int lo = idx[0], mid = idx[1], hi = idx[2];
        if (std::abs(fx[hi] - fx[lo]) < 1e-15 && (x[hi] - x[lo]).norm() < 1e-10) break;
        const Eigen::Vector2d c = (x[lo] + x[mid]) / 2;
        const Eigen::Vector2d xr = c + (c - x[hi]);
        const double fr = f(xr);
        if (fr < fx[lo]) {
            const Eigen::Vector2d xe = c + 2 * (c - x[hi]);
            const double fe = f(xe);
            if (fe < fr) {
                x[hi] = xe;
                fx[hi] = fe;
            } else {
                x[hi] = xr;
                fx[hi] = fr;
            }
        } else if (fr < fx[mid]) {
            x[hi] = xr;
            fx[hi] = fr;
        } else {
            const Eigen::Vector2d xc = fr < fx[hi] ? c + 0.5 * (xr - c) : c + 0.5 * (x[hi] - c);
            const double fc = f(xc);
            if (fc < std::min(fr, fx[hi])) {
                x[hi] = xc;
                fx[hi] = fc;
            } else {
                for (int k : {mid, hi}) {
                    x[k] = x[lo] + 0.5 * (x[k] - x[lo]);
                    fx[k] = f(x[k]);
                }
            }
        }
    }
    const int best = static_cast<int>(std::min_element(fx.begin(), fx.end()) - fx.begin());
    return {x[best], fx[best]};
}

template <LiftLike L>
GrowthConstants growth_constants_impl(const L& F) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    if (F.field() == Field::Real) {
        const int n = 720;
        std::vector<double> vals(n);
        for (int k = 0; k < n; ++k) vals[k] = log_norm_at(F, std::numbers::pi * k / n, 0.0);
        for (double sign : {1.0, -1.0}) {
            std::vector<int> order(n);
            for (int k = 0; k < n; ++k) order[k] = k;
            std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                              [&](int a, int b) { return sign * vals[a] < sign * vals[b]; });
            for (int j = 0; j < 3; ++j) {
                const double s0 = std::numbers::pi * order[j] / n, h = std::numbers::pi / n;
                const auto r = boost::math::tools::brent_find_minima(
                    [&](double s) { return sign * log_norm_at(F, s, 0.0); }, s0 - h, s0 + h, 52);
                if (sign > 0) lo = std::min(lo, r.second);
                else hi = std::max(hi, -r.second);
            }
        }
    } else {
        const int ns = 48, nt = 96;
        struct Sample {
            double value, s, t;
        };
        std::vector<Sample> grid;
        grid.reserve(ns * nt + 2);
        for (int i = 0; i <= ns; ++i) {
            const double s = std::numbers::pi / 2 * i / ns;
            const int count = (i == 0 || i == ns) ? 1 : nt;
            for (int k = 0; k < count; ++k) {
                const double t = 2 * std::numbers::pi * k / nt;
                grid.push_back({log_norm_at(F, s, t), s, t});
            }
        }
        for (double sign : {1.0, -1.0}) {
            std::partial_sort(grid.begin(), grid.begin() + 4, grid.end(),
                              [&](const Sample& a, const Sample& b) { return sign * a.value < sign * b.value; });
            for (int j = 0; j < 4; ++j) {
                const auto r = nelder_mead(
                    [&](const Eigen::Vector2d& v) { return sign * log_norm_at(F, v[0], v[1]); },
                    Eigen::Vector2d(grid[j].s, grid[j].t), 0.02);
                const double value = sign * r.second;
                if (sign > 0) lo = std::min({lo, value, grid[j].value});
                else hi = std::max({hi, value, grid[j].value});
            }
        }
    }
    return {std::exp(lo), std::exp(hi), lo, hi};
}

}  // namespace

GrowthBoundViolation::GrowthBoundViolation(const GrowthBounds& b)
    : Error([&] {
          std::ostringstream msg;
          msg.precision(17);
          msg << "growth bound violated: lower " << b.lower << ", value " << b.value << ", upper " << b.upper;
          return msg.str();
      }()),
      bounds(b) {}

double r_value(const HomogeneousLift& F, const Sl2& gamma, const QuadratureRule& rule) {
    return r_value_impl(F, gamma, rule);
}

double r_value(const IteratedLift& F, const Sl2& gamma, const QuadratureRule& rule) {
    return r_value_impl(F, gamma, rule);
}

double r_value(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    require_same_field(F.field(), p.field(), "r_value");
    return r_value_impl(F, p.as_coset(), rule);
}

double r_value(const IteratedLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    require_same_field(F.field(), p.field(), "r_value");
    return r_value_impl(F, p.as_coset(), rule);
}

double r_closed_form_linear(double A, Field field) {
    if (!(A >= 0)) throw DomainError("r_closed_form_linear: A must be nonnegative");
    if (field == Field::Real) return A / 2 + std::log1p(std::exp(-A)) - std::numbers::ln2;
    if (A < 1e-3) return A * A / 6 - A * A * A * A / 90;
    return -0.5 + (A / 2) / std::tanh(A);
}

GrowthConstants growth_constants(const HomogeneousLift& F) { return growth_constants_impl(F); }
GrowthConstants growth_constants(const IteratedLift& F) { return growth_constants_impl(F); }

GrowthBounds growth_bounds_check(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule,
                                 const GrowthConstants& c) {
    const double rho = hyperbolic_distance(p, HyperbolicPoint::base(p.field()));
    const double d = F.degree();
    const GrowthBounds b{(d - 1) / 2 * rho + c.log_C1 - d, r_value(F, p, rule), (d + 1) / 2 * rho + c.log_C2};
    if (!(b.lower <= b.value && b.value <= b.upper)) throw GrowthBoundViolation(b);
    return b;
}

GrowthBounds growth_bounds_check(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    return growth_bounds_check(F, p, rule, growth_constants(F));
}

double laplacian_formula(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    return laplacian_impl(F, p, rule);
}

double laplacian_formula(const IteratedLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    return laplacian_impl(F, p, rule);
}

Vec3 omega_mean(const HomogeneousLift& F, const Sl2& gamma, const QuadratureRule& rule) {
    return omega_mean_impl(F, gamma, rule);
}

Vec3 omega_mean(const IteratedLift& F, const Sl2& gamma, const QuadratureRule& rule) {
    return omega_mean_impl(F, gamma, rule);
}

Vec3 gradient_at(const HomogeneousLift& F, const Sl2& gamma, const QuadratureRule& rule) {
    return kGradientScale * omega_mean_impl(F, gamma, rule);
}

Vec3 gradient_at(const IteratedLift& F, const Sl2& gamma, const QuadratureRule& rule) {
    return kGradientScale * omega_mean_impl(F, gamma, rule);
}

Vec3 gradient(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    if (p.field() != Field::Complex) throw FieldMismatchError("gradient: complex field only");
    return gradient_at(F, transvection_representative(p), rule);
}

RfEvaluation evaluate_rf(const HomogeneousLift& F, const HyperbolicPoint& p, const QuadratureRule& rule) {
    RfEvaluation out{r_value(F, p, rule), p, std::nullopt, laplacian_formula(F, p, rule), F.log_scale()};
    if (F.field() == Field::Complex) out.gradient = gradient(F, p, rule);
    return out;
}

double leading_coefficient_weight(const HomogeneousLift& F, cplx z, double t) {
    const int d = F.degree();
    const cplx a = F.f0()[d] * std::exp(F.log_scale()), b = F.f1()[d] * std::exp(F.log_scale());
    return std::norm(a - z * b) + t * t * std::norm(b);
}

}  // namespace hrf
