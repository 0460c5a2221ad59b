#include "hrf/quadrature.hpp"

#include <numbers>
#include <random>
#include <sstream>

namespace hrf {

namespace {

constexpr double kGrading = 0.15;
constexpr int kGradedLevels = 12;
constexpr int kMiddlePanels = 6;

std::vector<double> panel_breaks() {
    std::vector<double> b{0.0};
    for (int k = kGradedLevels; k >= 1; --k) b.push_back(std::pow(kGrading, k));
    for (int i = 1; i < kMiddlePanels; ++i) b.push_back(kGrading + (1 - 2 * kGrading) * i / kMiddlePanels);
    for (int k = 1; k <= kGradedLevels; ++k) b.push_back(1 - std::pow(kGrading, k));
    b.push_back(1.0);
    return b;
}

}  // namespace

QuadratureRule::QuadratureRule(Field field, int order, std::vector<ProjectivePoint> nodes, std::vector<double> weights)
    : field_(field), order_(order), nodes_(std::move(nodes)), weights_(std::move(weights)) {
    if (nodes_.size() != weights_.size()) throw DomainError("QuadratureRule: node/weight count mismatch");
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p0 = 1.0, p1 = z;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (z * p1 - p0) / (z * z - 1);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2 / ((1 - z * z) * dp * dp);
    }
}

std::pair<std::vector<double>, std::vector<double>> graded_unit_rule(int m) {
    std::vector<double> gx, gw;
    gauss_legendre(m, gx, gw);
    const auto b = panel_breaks();
    std::vector<double> x, w;
    for (std::size_t p = 0; p + 1 < b.size(); ++p) {
        const double mid = (b[p] + b[p + 1]) / 2, half = (b[p + 1] - b[p]) / 2;
        for (int i = 0; i < m; ++i) {
            x.push_back(mid + half * gx[i]);
            w.push_back(half * gw[i]);
        }
    }
    return {x, w};
}

QuadratureRule build_rule(Field field, int m) {
    if (m < 4) throw DomainError("build_rule: order must be at least 4");
    const auto [s, ws] = graded_unit_rule(m);
    std::vector<ProjectivePoint> nodes;
    std::vector<double> weights;

    if (field == Field::Real) {
        // alpha = tan(theta), theta in (-pi/2, pi/2); omega_R = d theta / pi.
        for (int sign : {-1, 1}) {
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double th = sign * s[i] * std::numbers::pi / 2;
                nodes.emplace_back(Field::Real, std::sin(th), std::cos(th));
                weights.push_back(ws[i] / 2);
            }
        }
    } else {
        // |X|^2 = u makes omega_C uniform in u; the phase is uniform on [0, 2 pi).
        const int phases = 12 * m;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double rx = std::sqrt(s[i]), ry = std::sqrt(1 - s[i]);
            for (int k = 0; k < phases; ++k) {
                const double phi = 2 * std::numbers::pi * (k + 0.5) / phases;
                nodes.emplace_back(Field::Complex, std::polar(rx, phi), ry);
                weights.push_back(ws[i] / phases);
            }
        }
    }
    long double total = 0;
    for (double w : weights) total += w;
    for (double& w : weights) w = static_cast<double>(w / total);
    return {field, m, std::move(nodes), std::move(weights)};
}

AdaptedRule adapt_rule(const QuadratureRule& rule, const Sl2& gamma) {
    const auto c = cartan_decompose(gamma);
    AdaptedRule out{c.tau * Sl2::eta(c.A), {}, {}};
    const double lo = std::exp(-c.A / 2), hi = std::exp(c.A / 2);
    const int power = field_dim(rule.field());
    const auto& nodes = rule.nodes();
    const auto& w = rule.weights();
    out.points.reserve(nodes.size());
    out.weights.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Pair v{lo * nodes[i].x(), hi * nodes[i].y()};
        const double n2 = norm_sq(v), n = std::sqrt(n2);
        out.points.push_back({v[0] / n, v[1] / n});
        out.weights.push_back(w[i] / std::pow(n2, power));
    }
    return out;
}

double integrate(const QuadratureRule& rule, const std::function<double(const ProjectivePoint&)>& phi) {
    double acc = 0.0;
    const auto& nodes = rule.nodes();
    const auto& w = rule.weights();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double v = phi(nodes[i]);
        if (!std::isfinite(v)) {
            std::ostringstream msg;
            msg << "integrate: non-finite integrand at node " << i << " = [" << nodes[i].x() << " : " << nodes[i].y()
                << "]";
            throw DomainError(msg.str());
        }
        acc += w[i] * v;
    }
    return acc;
}

McEstimate mc_oracle(Field field, const std::function<double(const ProjectivePoint&)>& phi, std::int64_t samples,
                     std::uint64_t seed) {
    if (samples < 1000) throw DomainError("mc_oracle: at least 1000 samples required");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    double sum = 0.0, sum_sq = 0.0;
    for (std::int64_t n = 0; n < samples; ++n) {
        cplx x, y;
        if (field == Field::Real) {
            x = gauss(rng);
            y = gauss(rng);
        } else {
            x = {gauss(rng), gauss(rng)};
            y = {gauss(rng), gauss(rng)};
        }
        const double v = phi(ProjectivePoint(field, x, y));
        sum += v;
        sum_sq += v * v;
    }
    const double mean = sum / samples;
    const double var = std::max(0.0, sum_sq / samples - mean * mean);
    return {mean, std::sqrt(var / (samples - 1))};
}

double harmonic_extension(const std::function<double(const ProjectivePoint&)>& g, const HyperbolicPoint& p,
                          const QuadratureRule& rule) {
    require_same_field(p.field(), rule.field(), "harmonic_extension");
    const auto ad = adapt_rule(rule, p.as_coset());
    double acc = 0.0;
    for (std::size_t i = 0; i < ad.points.size(); ++i) {
        const double v = g(ProjectivePoint(p.field(), ad.rep * ad.points[i]));
        if (!std::isfinite(v)) throw DomainError("harmonic_extension: non-finite boundary value");
        acc += ad.weights[i] * v;
    }
    return acc;
}

}  // namespace hrf
