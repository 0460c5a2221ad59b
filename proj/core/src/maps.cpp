#include "hrf/maps.hpp"

#include <algorithm>
#include <cstdint>
#include <numbers>
#include <string>

#include <Eigen/Dense>

namespace hrf {

namespace {

using Poly = std::vector<cplx>;

cplx ipow(cplx base, int e) {
    cplx out = 1.0;
    while (e > 0) {
        if (e & 1) out *= base;
        base *= base;
        e >>= 1;
    }
    return out;
}

double max_modulus(const Poly& a, const Poly& b) {
    double m = 0;
    for (auto c : a) m = std::max(m, std::abs(c));
    for (auto c : b) m = std::max(m, std::abs(c));
    return m;
}

// Sum c_i X^i Y^{d-i} on the chart where the larger coordinate is factored out:
// returns the value divided by lead^d, where lead is that coordinate.
cplx chart_value(const Poly& c, cplx r, bool x_leads) {
    const int d = static_cast<int>(c.size()) - 1;
    cplx acc;
    if (x_leads) {
        acc = c[0];
        for (int i = 1; i <= d; ++i) acc = acc * r + c[i];
    } else {
        acc = c[d];
        for (int i = d - 1; i >= 0; --i) acc = acc * r + c[i];
    }
    return acc;
}

Poly multiply(const Poly& p, const Poly& q) {
    Poly out(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
    }
    return out;
}

// Powers L^0 .. L^n of a homogeneous form, each indexed by the exponent of X.
std::vector<Poly> powers(const Poly& form, int n) {
    std::vector<Poly> out{Poly{1.0}};
    for (int k = 1; k <= n; ++k) out.push_back(multiply(out.back(), form));
    return out;
}

// sum_i c_i P^i Q^{d-i}
Poly substitute(const Poly& c, const std::vector<Poly>& p_pow, const std::vector<Poly>& q_pow) {
    const int d = static_cast<int>(c.size()) - 1;
    Poly out;
    for (int i = 0; i <= d; ++i) {
        if (c[i] == 0.0) continue;
        const Poly term = multiply(p_pow[i], q_pow[d - i]);
        if (out.size() < term.size()) out.resize(term.size(), 0.0);
        for (std::size_t k = 0; k < term.size(); ++k) out[k] += c[i] * term[k];
    }
    out.resize(d * (p_pow[1].size() - 1) + 1, 0.0);
    return out;
}

Eigen::MatrixXcd sylvester(const Poly& a, const Poly& b) {
    const int d = static_cast<int>(a.size()) - 1;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i <= d; ++i) {
            s(k, k + i) = a[d - i];
            s(d + k, k + i) = b[d - i];
        }
    }
    return s;
}

double euclidean_norm(const Poly& a) {
    double s = 0;
    for (auto c : a) s += std::norm(c);
    return std::sqrt(s);
}

struct LogDet {
    double log_abs;
    cplx phase;
};

// Sylvester determinant of a / |a| and b / |b| in log form; its modulus is at most 1 (Hadamard).
LogDet normalized_sylvester(const Poly& a, const Poly& b) {
    const double na = euclidean_norm(a), nb = euclidean_norm(b);
    if (na == 0.0 || nb == 0.0) return {-INFINITY, 1.0};
    Poly sa = a, sb = b;
    for (auto& c : sa) c /= na;
    for (auto& c : sb) c /= nb;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(sylvester(sa, sb));
    LogDet out{0.0, static_cast<double>(lu.permutationP().determinant())};
    for (Eigen::Index i = 0; i < lu.matrixLU().rows(); ++i) {
        const cplx u = lu.matrixLU()(i, i);
        if (u == 0.0) return {-INFINITY, 1.0};
        out.log_abs += std::log(std::abs(u));
        out.phase *= u / std::abs(u);
    }
    return out;
}

const double kLogDegenerateRatio = std::log(1e-12);
// Expanded iterates legitimately reach tiny normalized determinants, so only an exact zero is rejected here.

void check_degenerate(const Poly& a, const Poly& b) {
    if (max_modulus(a, b) == 0.0) throw DegenerateLiftError("HomogeneousLift: zero lift");
    if (!(normalized_sylvester(a, b).log_abs > kLogDegenerateRatio))
        throw DegenerateLiftError("HomogeneousLift: resultant vanishes (common factor)");
}

}  // namespace

HomogeneousLift HomogeneousLift::unchecked(Field field, std::vector<cplx> f0, std::vector<cplx> f1, double log_scale) {
    HomogeneousLift F;
    F.field_ = field;
    F.f0_ = std::move(f0);
    F.f1_ = std::move(f1);
    F.log_scale_ = log_scale;
    return F;
}

HomogeneousLift HomogeneousLift::linear(Field field, const Sl2& g) {
    HomogeneousLift F(field, {g.b(), g.a()}, {g.d(), g.c()}, 0.0);
    return F;
}

HomogeneousLift::HomogeneousLift(Field field, std::vector<cplx> f0, std::vector<cplx> f1, double log_scale)
    : field_(field), f0_(std::move(f0)), f1_(std::move(f1)), log_scale_(log_scale) {
    if (f0_.size() != f1_.size() || f0_.size() < 2) throw DomainError("HomogeneousLift: need two forms of equal degree >= 1");
    if (!std::isfinite(log_scale_)) throw DomainError("HomogeneousLift: non-finite scale");
    for (auto* poly : {&f0_, &f1_}) {
        for (auto& c : *poly) {
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("HomogeneousLift: non-finite coefficient");
            if (field_ == Field::Real) {
                if (!is_real_scalar(c, 1e-12)) throw FieldMismatchError("HomogeneousLift: complex coefficient over R");
                c = c.real();
            }
        }
    }
    check_degenerate(f0_, f1_);
}

HomogeneousLift HomogeneousLift::from_rational(Field field, const std::vector<cplx>& numerator,
                                               const std::vector<cplx>& denominator) {
    const std::size_t len = std::max(numerator.size(), denominator.size());
    if (len < 2) throw DomainError("HomogeneousLift: map must have degree >= 1");
    std::vector<cplx> a(len, 0.0), b(len, 0.0);
    // Input lists run from the highest power down.
    for (std::size_t k = 0; k < numerator.size(); ++k) a[numerator.size() - 1 - k] = numerator[k];
    for (std::size_t k = 0; k < denominator.size(); ++k) b[denominator.size() - 1 - k] = denominator[k];
    return {field, std::move(a), std::move(b)};
}

Pair HomogeneousLift::evaluate_stored(const Pair& p) const {
    const int d = degree();
    const bool x_leads = std::abs(p[0]) >= std::abs(p[1]);
    const cplx lead = x_leads ? p[0] : p[1];
    if (lead == 0.0) return {0.0, 0.0};
    const cplx r = x_leads ? p[1] / p[0] : p[0] / p[1];
    const cplx ld = ipow(lead, d);
    return {ld * chart_value(f0_, r, x_leads), ld * chart_value(f1_, r, x_leads)};
}

Pair HomogeneousLift::evaluate(const Pair& p) const {
    const Pair v = evaluate_stored(p);
    const double s = std::exp(log_scale_);
    const Pair out{v[0] * s, v[1] * s};
    if (!std::isfinite(norm(out))) throw DomainError("evaluate: overflow, use scaled evaluation");
    return out;
}

ScaledPair HomogeneousLift::apply_scaled(const Pair& p) const {
    const int d = degree();
    const bool x_leads = std::abs(p[0]) >= std::abs(p[1]);
    const cplx lead = x_leads ? p[0] : p[1];
    const double m = std::abs(lead);
    if (m == 0.0) throw DomainError("apply_scaled: zero vector");
    const cplx r = x_leads ? p[1] / p[0] : p[0] / p[1];
    const cplx phase = ipow(lead / m, d);
    const cplx u = chart_value(f0_, r, x_leads), v = chart_value(f1_, r, x_leads);
    const double n = std::hypot(std::abs(u), std::abs(v));
    return {d * std::log(m) + log_scale_ + std::log(n), {phase * u / n, phase * v / n}};
}

cplx HomogeneousLift::jacobian_det(const Pair& p) const {
    const int d = degree();
    std::vector<cplx> xp(d + 1, 1.0), yp(d + 1, 1.0);
    for (int k = 1; k <= d; ++k) {
        xp[k] = xp[k - 1] * p[0];
        yp[k] = yp[k - 1] * p[1];
    }
    cplx f0x = 0, f0y = 0, f1x = 0, f1y = 0;
    for (int i = 0; i <= d; ++i) {
        if (i > 0) {
            f0x += double(i) * f0_[i] * xp[i - 1] * yp[d - i];
            f1x += double(i) * f1_[i] * xp[i - 1] * yp[d - i];
        }
        if (i < d) {
            f0y += double(d - i) * f0_[i] * xp[i] * yp[d - i - 1];
            f1y += double(d - i) * f1_[i] * xp[i] * yp[d - i - 1];
        }
    }
    return f0x * f1y - f0y * f1x;
}

double HomogeneousLift::spherical_derivative_sq(const Pair& p) const {
    const double n2 = norm_sq(p);
    const Pair u{p[0] / std::sqrt(n2), p[1] / std::sqrt(n2)};
    const double fu = norm_sq(evaluate_stored(u));
    const double s = std::abs(jacobian_det(u)) / (degree() * fu);
    return s * s;
}

HomogeneousLift HomogeneousLift::scaled(cplx c) const {
    if (c == 0.0) throw DomainError("scaled: zero factor");
    const cplx phase = c / std::abs(c);
    if (field_ == Field::Real && !is_real_scalar(c)) throw FieldMismatchError("scaled: complex factor over R");
    std::vector<cplx> a = f0_, b = f1_;
    for (auto& x : a) x *= phase;
    for (auto& x : b) x *= phase;
    return unchecked(field_, std::move(a), std::move(b), log_scale_ + std::log(std::abs(c)));
}

HomogeneousLift HomogeneousLift::renormalized() const {
    const double m = max_modulus(f0_, f1_);
    std::vector<cplx> a = f0_, b = f1_;
    for (auto& x : a) x /= m;
    for (auto& x : b) x /= m;
    return unchecked(field_, std::move(a), std::move(b), log_scale_ + std::log(m));
}

IteratedLift::IteratedLift(HomogeneousLift base, int n) : base_(std::move(base)), n_(n) {
    if (n < 1) throw DomainError("IteratedLift: n must be >= 1");
    degree_ = std::pow(static_cast<double>(base_.degree()), n);
}

namespace {

// Stored base coefficients at a unit vector, homogeneous Horner in x with powers of y.
Pair evaluate_unit(const std::vector<cplx>& c0, const std::vector<cplx>& c1, const Pair& u) {
    const int d = static_cast<int>(c0.size()) - 1;
    cplx a = c0[d], b = c1[d], ypow = 1.0;
    for (int i = d - 1; i >= 0; --i) {
        ypow *= u[1];
        a = a * u[0] + c0[i] * ypow;
        b = b * u[0] + c1[i] * ypow;
    }
    return {a, b};
}

constexpr int kFastDegree = 64;

}  // namespace

ScaledPair IteratedLift::apply_scaled(const Pair& p) const {
    const int deg = base_.degree();
    const double d = deg;
    const double m = norm(p);
    if (m == 0.0) throw DomainError("apply_scaled: zero vector");
    Pair u{p[0] / m, p[1] / m};
    if (deg > kFastDegree) {
        double log_norm = std::log(m);
        for (int k = 0; k < n_; ++k) {
            const auto s = base_.apply_scaled(u);
            log_norm = d * log_norm + s.log_factor;
            u = s.direction;
        }
        return {log_norm, u};
    }
    // prod_k |F(u_k)|^{d^{n-1-k}} kept as mantissa * 2^exponent, so one log per call.
    double mantissa = 1.0;
    std::int64_t exponent = 0;
    for (int k = 0; k < n_; ++k) {
        const Pair v = evaluate_unit(base_.f0(), base_.f1(), u);
        const double nv = norm(v);
        if (nv == 0.0) throw DegenerateLiftError("apply_scaled: lift vanishes on the orbit");
        u = {v[0] / nv, v[1] / nv};
        int e = 0;
        mantissa = std::frexp(std::pow(mantissa, deg) * nv, &e);
        exponent = exponent * deg + e;
    }
    const double dn = degree_;
    const double geometric = deg == 1 ? n_ : (dn - 1) / (d - 1);
    const double log_norm = dn * std::log(m) + std::log(mantissa) + double(exponent) * std::numbers::ln2 +
                            geometric * base_.log_scale();
    return {log_norm, u};
}

double IteratedLift::spherical_derivative_sq(const Pair& p) const {
    double acc = 1.0;
    Pair u = p;
    for (int k = 0; k < n_; ++k) {
        acc *= base_.spherical_derivative_sq(u);
        const double nu = norm(u);
        u = evaluate_unit(base_.f0(), base_.f1(), {u[0] / nu, u[1] / nu});
    }
    return acc;
}

ProjectivePoint RationalMap::operator()(const ProjectivePoint& p) const {
    return {field(), lift_.apply_scaled(p.pair()).direction};
}

Pair evaluate(const HomogeneousLift& F, const Pair& p) { return F.evaluate(p); }

HomogeneousLift conjugate(const HomogeneousLift& F, const Sl2& gamma) {
    if (F.field() == Field::Real && !gamma.is_real(1e-12)) throw FieldMismatchError("conjugate: complex matrix over R");
    const int d = F.degree();
    const auto l1 = powers({gamma.b(), gamma.a()}, d);
    const auto l2 = powers({gamma.d(), gamma.c()}, d);
    const Poly g0 = substitute(F.f0(), l1, l2);
    const Poly g1 = substitute(F.f1(), l1, l2);
    const Sl2 inv = gamma.inverse();
    Poly h0(d + 1), h1(d + 1);
    for (int i = 0; i <= d; ++i) {
        h0[i] = inv.a() * g0[i] + inv.b() * g1[i];
        h1[i] = inv.c() * g0[i] + inv.d() * g1[i];
        if (F.field() == Field::Real) {
            h0[i] = h0[i].real();
            h1[i] = h1[i].real();
        }
    }
    return HomogeneousLift::unchecked(F.field(), std::move(h0), std::move(h1), F.log_scale()).renormalized();
}

HomogeneousLift compose(const HomogeneousLift& F, const HomogeneousLift& G) {
    require_same_field(F.field(), G.field(), "compose");
    const long long degree = static_cast<long long>(F.degree()) * G.degree();
    if (degree > kMaxExpandedDegree) throw BudgetError("compose: degree exceeds expansion budget", 0);
    const HomogeneousLift g = G.renormalized();
    const auto p0 = powers(g.f0(), F.degree());
    const auto p1 = powers(g.f1(), F.degree());
    Poly h0 = substitute(F.f0(), p0, p1);
    Poly h1 = substitute(F.f1(), p0, p1);
    h0.resize(degree + 1, 0.0);
    h1.resize(degree + 1, 0.0);
    return HomogeneousLift::unchecked(F.field(), std::move(h0), std::move(h1),
                                      F.log_scale() + F.degree() * g.log_scale())
        .renormalized();
}

HomogeneousLift iterate(const HomogeneousLift& F, int n) {
    if (n < 1) throw DomainError("iterate: n must be >= 1");
    HomogeneousLift out = F;
    long long degree = F.degree();
    for (int k = 2; k <= n; ++k) {
        if (degree * F.degree() > kMaxExpandedDegree)
            throw BudgetError("iterate: coefficient budget exceeded after n = " + std::to_string(k - 1), k - 1);
        out = compose(F, out);
        degree *= F.degree();
    }
    return out;
}

cplx resultant(const HomogeneousLift& F) {
    const int d = F.degree();
    const auto det = normalized_sylvester(F.f0(), F.f1());
    if (!std::isfinite(det.log_abs)) throw DegenerateLiftError("resultant: forms share a common factor");
    const double log_scale = d * (std::log(euclidean_norm(F.f0())) + std::log(euclidean_norm(F.f1()))) + 2.0 * d * F.log_scale();
    const cplx out = det.phase * std::exp(det.log_abs + log_scale);
    return F.field() == Field::Real ? cplx(out.real(), 0.0) : out;
}

double log_abs_resultant(const HomogeneousLift& F) {
    const int d = F.degree();
    const double det = normalized_sylvester(F.f0(), F.f1()).log_abs;
    if (!std::isfinite(det)) throw DegenerateLiftError("resultant: forms share a common factor");
    return det + d * (std::log(euclidean_norm(F.f0())) + std::log(euclidean_norm(F.f1()))) +
           2.0 * d * F.log_scale();
}

double spherical_derivative_sq(const RationalMap& f, const ProjectivePoint& alpha) {
    if (f.field() != Field::Complex) throw FieldMismatchError("spherical_derivative_sq: complex field only");
    return f.lift().spherical_derivative_sq(alpha.pair());
}

PreimageSet preimages(const RationalMap& f, const ProjectivePoint& target) {
    if (f.field() != Field::Complex) throw FieldMismatchError("preimages: complex field only");
    const auto& F = f.lift();
    const int d = F.degree();
    const cplx t0 = target.x(), t1 = target.y();
    Poly h(d + 1);
    double hmax = 0;
    for (int i = 0; i <= d; ++i) {
        h[i] = t1 * F.f0()[i] - t0 * F.f1()[i];
        hmax = std::max(hmax, std::abs(h[i]));
    }
    PreimageSet out;
    int top = d;
    while (top > 0 && std::abs(h[top]) <= 1e-14 * hmax) {
        out.points.push_back(ProjectivePoint::infinity(Field::Complex));
        --top;
    }
    if (top > 0) {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(top, top);
        for (int i = 1; i < top; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < top; ++i) companion(i, top - 1) = -h[i] / h[top];
        const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
        for (int k = 0; k < top; ++k) {
            const cplx z = solver.eigenvalues()(k);
            // One Newton step in whichever chart keeps the variable bounded.
            Pair root;
            if (std::abs(z) <= 1.0) {
                cplx p = 0, dp = 0;
                for (int i = d; i >= 0; --i) {
                    dp = dp * z + p;
                    p = p * z + h[i];
                }
                const cplx zn = dp != 0.0 ? z - p / dp : z;
                root = {zn, 1.0};
            } else {
                const cplx w = 1.0 / z;
                cplx p = 0, dp = 0;
                for (int i = 0; i <= d; ++i) {
                    dp = dp * w + p;
                    p = p * w + h[i];
                }
                const cplx wn = dp != 0.0 ? w - p / dp : w;
                root = {1.0, wn};
            }
            out.points.emplace_back(Field::Complex, root);
        }
    }
    for (std::size_t i = 0; i < out.points.size(); ++i)
        for (std::size_t j = i + 1; j < out.points.size(); ++j)
            if (chordal_distance(out.points[i], out.points[j]) < 1e-6) out.near_multiple = true;
    return out;
}

Degree1Form degree1_normal_form(const RationalMap& f) {
    const auto& F = f.lift();
    if (F.degree() != 1) throw DomainError("degree1_normal_form: degree must be 1");
    cplx a = F.f0()[1], b = F.f0()[0], c = F.f1()[1], d = F.f1()[0];
    const cplx det = a * d - b * c;
    const cplx s = f.field() == Field::Real ? cplx(std::sqrt(std::abs(det)), 0.0) : std::sqrt(det);
    a /= s;
    b /= s;
    c /= s;
    d /= s;
    const cplx unit_det = a * d - b * c;
    const cplx tr = a + d;
    const cplx disc = tr * tr - 4.0 * unit_det;

    auto eigenvector = [&](cplx mu) {
        const Pair u{b, mu - a}, v{mu - d, c};
        return norm(u) >= norm(v) ? u : v;
    };

    Degree1Form out;
    const double scale = std::max(1.0, std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d)));
    if (std::abs(disc) < 1e-9 * scale * scale) {
        const cplx mu = tr / 2.0;
        if (std::abs(b) < 1e-9 * scale && std::abs(c) < 1e-9 * scale && std::abs(a - d) < 1e-9 * scale) {
            out.kind = Degree1Kind::Identity;
        } else {
            out.kind = Degree1Kind::Translation;
            out.fixed_points.emplace_back(f.field(), eigenvector(mu));
        }
        return out;
    }
    const cplx root = std::sqrt(disc);
    cplx mu1 = (tr + root) / 2.0, mu2 = (tr - root) / 2.0;
    if (std::abs(mu1) < std::abs(mu2)) std::swap(mu1, mu2);
    out.kind = Degree1Kind::Scaling;
    out.lambda = mu1 / mu2;
    const bool real_fixed = f.field() == Field::Complex || disc.real() > 0;
    if (real_fixed) {
        out.fixed_points.emplace_back(f.field(), eigenvector(mu1));
        out.fixed_points.emplace_back(f.field(), eigenvector(mu2));
    }
    return out;
}

}  // namespace hrf
