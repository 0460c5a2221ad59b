#include "hrf/dynamics.hpp"

#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>

namespace hrf {

double WeightedMeasure::total_mass() const {
    double m = 0;
    for (double w : weights) m += w;
    return m;
}

Vec3 WeightedMeasure::moment() const {
    Vec3 acc = Vec3::Zero();
    for (std::size_t i = 0; i < points.size(); ++i) acc += weights[i] * points[i];
    return acc;
}

WeightedMeasure WeightedMeasure::normalized() const {
    const double m = total_mass();
    if (!(m > 0)) throw DomainError("WeightedMeasure: nonpositive total mass");
    WeightedMeasure out = *this;
    for (double& w : out.weights) w /= m;
    return out;
}

void write_measure_csv(const WeightedMeasure& mu, std::ostream& out) {
    out << "x,y,z,weight\n";
    out.precision(17);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto& p = mu.points[i];
        out << p.x() << ',' << p.y() << ',' << p.z() << ',' << mu.weights[i] << '\n';
    }
}

WeightedMeasure read_measure_csv(std::istream& in) {
    std::string line;
    int line_no = 0;
    if (!std::getline(in, line)) throw ParseError("measure csv: empty input");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y,z,weight") throw ParseError("measure csv line 1: expected header x,y,z,weight");
    WeightedMeasure mu;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::array<double, 4> v{};
        for (int k = 0; k < 4; ++k) {
            std::string cell;
            if (!std::getline(row, cell, ',')) throw ParseError("measure csv line " + std::to_string(line_no) + ": expected 4 columns");
            try {
                std::size_t used = 0;
                v[k] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ParseError("measure csv line " + std::to_string(line_no) + ": bad number '" + cell + "'");
            }
        }
        const Vec3 p(v[0], v[1], v[2]);
        if (!p.allFinite() || std::abs(p.norm() - 1) > 1e-6 || !(v[3] > 0) || !std::isfinite(v[3]))
            throw ParseError("measure csv line " + std::to_string(line_no) + ": point must be on S^2 with positive weight");
        mu.add(p.normalized(), v[3]);
    }
    if (mu.size() == 0) throw ParseError("measure csv: no points");
    return mu;
}

GreenData::GreenData(HomogeneousLift F, double tolerance, int max_iterations)
    : lift_(std::move(F)), tolerance_(tolerance), max_iterations_(max_iterations) {
    if (lift_.field() != Field::Complex) throw FieldMismatchError("GreenData: complex field only");
    if (lift_.degree() < 2) throw DomainError("GreenData: degree must be at least 2");
    const auto c = growth_constants(lift_);
    const double bound = std::max({std::abs(c.log_C1), std::abs(c.log_C2), 1e-300});
    const double d = lift_.degree();
    terms_ = 1;
    while (terms_ < max_iterations_ && bound * std::pow(d, -terms_) / (d - 1) >= tolerance_) ++terms_;
}

double GreenData::escape_rate(const Pair& p) const {
    const double m = norm(p);
    if (m == 0.0) throw DomainError("escape_rate: zero vector");
    const double d = lift_.degree();
    Pair u{p[0] / m, p[1] / m};
    double acc = 0.0, weight = 1.0 / d;
    for (int k = 0; k < terms_; ++k) {
        const auto s = lift_.apply_scaled(u);
        acc += weight * s.log_factor;
        weight /= d;
        u = s.direction;
    }
    return std::log(m) + acc;
}

double GreenData::green(const ProjectivePoint& alpha) const { return escape_rate(alpha.pair()); }

double GreenData::kappa1(const QuadratureRule& rule) {
    if (!kappa1_) kappa1_ = integrate(rule, [&](const ProjectivePoint& a) { return green(a); });
    return *kappa1_;
}

double escape_rate(const HomogeneousLift& F, const Pair& p) { return GreenData(F).escape_rate(p); }

double green_function(const HomogeneousLift& F, const ProjectivePoint& alpha) { return GreenData(F).green(alpha); }

namespace {

int distinct_count(const std::vector<ProjectivePoint>& pts) {
    std::vector<ProjectivePoint> seen;
    for (const auto& p : pts) {
        bool fresh = true;
        for (const auto& q : seen)
            if (chordal_distance(p, q) < 1e-7) fresh = false;
        if (fresh) seen.push_back(p);
    }
    return static_cast<int>(seen.size());
}

std::vector<ProjectivePoint> preimage_level(const RationalMap& f, const std::vector<ProjectivePoint>& level) {
    std::vector<ProjectivePoint> next;
    next.reserve(level.size() * f.degree());
    for (const auto& w : level) {
        auto pre = preimages(f, w);
        next.insert(next.end(), pre.points.begin(), pre.points.end());
    }
    return next;
}

}  // namespace

WeightedMeasure max_entropy_measure(const RationalMap& f, const EntropySampling& options) {
    if (f.field() != Field::Complex) throw FieldMismatchError("max_entropy_measure: complex field only");
    if (f.degree() < 2) throw DomainError("max_entropy_measure: degree must be at least 2");
    if (options.depth < 0) throw DomainError("max_entropy_measure: negative depth");
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss;

    // A point whose second preimage set collapses lies in the exceptional set.
    ProjectivePoint start = ProjectivePoint::affine(Field::Complex, options.start);
    for (int attempt = 0;; ++attempt) {
        const auto two = preimage_level(f, preimage_level(f, {start}));
        if (distinct_count(two) > 2) break;
        if (attempt == 20) throw ConvergenceError("max_entropy_measure: could not leave the exceptional set");
        start = ProjectivePoint::affine(Field::Complex, cplx(gauss(rng), gauss(rng)));
    }

    const double d = f.degree();
    const bool tree = options.mode == SamplingMode::Tree && std::pow(d, options.depth) <= kTreePointCap;
    WeightedMeasure mu;
    if (tree) {
        std::vector<ProjectivePoint> level{start};
        for (int k = 0; k < options.depth; ++k) level = preimage_level(f, level);
        const double w = 1.0 / static_cast<double>(level.size());
        for (const auto& p : level) mu.add(p.to_sphere(), w);
        return mu;
    }
    if (options.samples < 1) throw DomainError("max_entropy_measure: need at least one sample");
    std::uniform_int_distribution<int> pick(0, f.degree() - 1);
    ProjectivePoint w = start;
    const double weight = 1.0 / options.samples;
    for (int step = 0; step < options.burn_in + options.samples; ++step) {
        const auto pre = preimages(f, w);
        w = pre.points[pick(rng)];
        if (step >= options.burn_in) mu.add(w.to_sphere(), weight);
    }
    return mu;
}

WeightedMeasure omega_f_cloud(const RationalMap& f, const Sl2& g, const QuadratureRule& rule) {
    if (f.field() != Field::Complex || rule.field() != Field::Complex)
        throw FieldMismatchError("omega_f_cloud: complex field only");
    const auto& F = f.lift();
    const auto ad = adapt_rule(rule, g);
    const Sl2 inv = ad.rep.inverse();
    const Sl2 rotate = g.inverse() * ad.rep;
    WeightedMeasure mu;
    mu.points.reserve(2 * rule.size());
    mu.weights.reserve(2 * rule.size());
    const auto& w = ad.weights;
    for (std::size_t i = 0; i < ad.points.size(); ++i) {
        const Pair& P = ad.points[i];
        const Pair Q = ad.rep * P;
        const Pair v = inv * F.apply_scaled(Q).direction;
        const double nq = norm_sq(Q), nv = norm_sq(v);
        mu.add(sphere_point(rotate * v), w[i]);
        const double density = F.spherical_derivative_sq(Q) / (nq * nq * nv * nv);
        if (density > 0) mu.add(sphere_point(rotate * P), w[i] * density);
    }
    return mu;
}

}  // namespace hrf
