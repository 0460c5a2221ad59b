#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "hrf/maps.hpp"
#include "hrf/quadrature.hpp"
#include "hrf/rfunc.hpp"

namespace hrf {

// Finite weighted point cloud on S^2.
struct WeightedMeasure {
    std::vector<Vec3> points;
    std::vector<double> weights;

    void add(const Vec3& point, double weight) {
        points.push_back(point);
        weights.push_back(weight);
    }
    std::size_t size() const { return points.size(); }
    double total_mass() const;
    // Sum of w_i zeta_i.
    Vec3 moment() const;
    WeightedMeasure normalized() const;
};

void write_measure_csv(const WeightedMeasure& mu, std::ostream& out);
// Expects a header line "x,y,z,weight"; throws ParseError with the offending line number.
WeightedMeasure read_measure_csv(std::istream& in);

// Escape-rate evaluator for a fixed lift.
class GreenData {
public:
    explicit GreenData(HomogeneousLift F, double tolerance = 1e-13, int max_iterations = 400);

    const HomogeneousLift& lift() const { return lift_; }
    double tolerance() const { return tolerance_; }
    int max_iterations() const { return max_iterations_; }

    // H_F(P) = lim d^{-n} log ||F^n(P)||.
    double escape_rate(const Pair& p) const;
    // g_F([P]) = H_F(P) - log ||P||.
    double green(const ProjectivePoint& alpha) const;
    // Integral of g_F against omega_C; cached after the first call.
    double kappa1(const QuadratureRule& rule);
    std::optional<double> cached_kappa1() const { return kappa1_; }

private:
    HomogeneousLift lift_;
    double tolerance_;
    int max_iterations_;
    int terms_;
    std::optional<double> kappa1_;
};

double escape_rate(const HomogeneousLift& F, const Pair& p);
double green_function(const HomogeneousLift& F, const ProjectivePoint& alpha);

enum class SamplingMode { Tree, RandomOrbit };

struct EntropySampling {
    int depth = 10;
    SamplingMode mode = SamplingMode::Tree;
    std::uint64_t seed = 1;
    // Random-orbit sample count (also used when the tree would exceed the point cap).
    int samples = 4096;
    int burn_in = 50;
    cplx start{2.0, 0.5};
};

inline constexpr double kTreePointCap = 1e5;

// Backward-iteration approximation of the measure of maximal entropy, as S^2 points.
WeightedMeasure max_entropy_measure(const RationalMap& f, const EntropySampling& options = {});

// Pushforward part at transported nodes plus pullback part weighted by |(f^g)^#|^2; mass d + 1.
WeightedMeasure omega_f_cloud(const RationalMap& f, const Sl2& g, const QuadratureRule& rule);

}  // namespace hrf
