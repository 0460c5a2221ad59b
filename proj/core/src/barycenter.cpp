#include "hrf/barycenter.hpp"

#include <unordered_map>

#include <Eigen/Dense>

namespace hrf {

double h_mu(const WeightedMeasure& mu, const Vec3& xi) {
    const double r2 = xi.squaredNorm();
    if (!(r2 < 1)) throw DomainError("h_mu: point must lie in the open ball");
    const double mass = mu.total_mass();
    double acc = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) acc += mu.weights[i] * std::log((1 - r2) / (xi - mu.points[i]).squaredNorm());
    return -0.5 * acc / mass;
}

bool is_admissible(const WeightedMeasure& mu, double cluster_radius) {
    const double mass = mu.total_mass();
    if (!(mass > 0)) return false;
    struct CellHash {
        std::size_t operator()(const std::array<long long, 3>& c) const {
            return std::hash<long long>()(c[0] * 73856093LL ^ c[1] * 19349663LL ^ c[2] * 83492791LL);
        }
    };
    std::unordered_map<std::array<long long, 3>, std::vector<std::size_t>, CellHash> cells;
    auto cell_of = [&](const Vec3& p) {
        return std::array<long long, 3>{static_cast<long long>(std::floor(p.x() / cluster_radius)),
                                        static_cast<long long>(std::floor(p.y() / cluster_radius)),
                                        static_cast<long long>(std::floor(p.z() / cluster_radius))};
    };
    for (std::size_t i = 0; i < mu.size(); ++i) cells[cell_of(mu.points[i])].push_back(i);
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const auto c = cell_of(mu.points[i]);
        double cluster = 0;
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy)
                for (long long dz = -1; dz <= 1; ++dz) {
                    auto it = cells.find({c[0] + dx, c[1] + dy, c[2] + dz});
                    if (it == cells.end()) continue;
                    for (auto j : it->second)
                        if ((mu.points[j] - mu.points[i]).norm() <= cluster_radius) cluster += mu.weights[j];
                }
        if (cluster >= 0.5 * mass) return false;
    }
    return true;
}

WeightedMeasure move_measure(const WeightedMeasure& mu, const Sl2& g) {
    WeightedMeasure out;
    out.weights = mu.weights;
    out.points.reserve(mu.size());
    for (const auto& p : mu.points) out.points.push_back(mobius_apply_sphere(g, p));
    return out;
}

namespace {

struct Moments {
    Vec3 mean;
    Eigen::Matrix3d second;
};

Moments moved_moments(const WeightedMeasure& mu, const Sl2& to_origin) {
    Moments m{Vec3::Zero(), Eigen::Matrix3d::Zero()};
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const Vec3 z = mobius_apply_sphere(to_origin, mu.points[i]);
        m.mean += mu.weights[i] * z;
        m.second += mu.weights[i] * z * z.transpose();
    }
    return m;
}

}  // namespace

BarycenterResult solve_barycenter(const WeightedMeasure& input, const BarycenterOptions& options) {
    if (!is_admissible(input)) throw DomainError("solve_barycenter: measure is not admissible");
    const WeightedMeasure mu = input.normalized();
    Vec3 xi = Vec3::Zero();
    Sl2 gamma;
    Moments mom = moved_moments(mu, gamma.inverse());
    double residual = mom.mean.norm();
    int it = 0;
    for (; it < options.max_iterations && residual >= options.tolerance; ++it) {
        const Eigen::Matrix3d hess = 2 * (Eigen::Matrix3d::Identity() - mom.second);
        Vec3 step = hess.ldlt().solve(mom.mean);
        if (!step.allFinite()) step = mom.mean / 2;
        if (step.norm() > 0.5) step *= 0.5 / step.norm();
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving) {
            const Vec3 trial = mobius_apply_ball(gamma, step);
            const Sl2 g = transvection_representative(HyperbolicPoint::ball(Field::Complex, trial));
            const Moments m = moved_moments(mu, g.inverse());
            if (m.mean.norm() < residual) {
                xi = trial;
                gamma = g;
                mom = m;
                residual = m.mean.norm();
                accepted = true;
                break;
            }
            step /= 2;
        }
        if (!accepted) break;
    }
    if (residual >= options.tolerance)
        throw ConvergenceError("solve_barycenter: residual " + std::to_string(residual) + " after " +
                               std::to_string(it) + " iterations");
    return {xi, h_mu(mu, xi), residual, it};
}

}  // namespace hrf
