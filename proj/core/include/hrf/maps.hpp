#pragma once

#include <concepts>
#include <vector>

#include "hrf/geometry.hpp"

namespace hrf {

// A lift value F(P) = e^{log_factor} * direction, with ||direction|| = 1.
struct ScaledPair {
    double log_factor;
    Pair direction;
};

// F = (F0, F1) with F0 = sum a_i X^i Y^{d-i} and F1 = sum b_i X^i Y^{d-i}.
// The represented lift is e^{log_scale} times the stored coefficients, which lets iterates keep
// coefficients in double range.
class HomogeneousLift {
public:
    // Validates finiteness and a nonvanishing (scale-normalized) resultant.
    HomogeneousLift(Field field, std::vector<cplx> f0, std::vector<cplx> f1, double log_scale = 0.0);
    // Coefficients listed from degree d down to 0 in z = X / Y, as in the map spec format.
    static HomogeneousLift from_rational(Field field, const std::vector<cplx>& numerator,
                                         const std::vector<cplx>& denominator);
    // The lift g(X, Y) of a Moebius map.
    static HomogeneousLift linear(Field field, const Sl2& g);
    static HomogeneousLift unchecked(Field field, std::vector<cplx> f0, std::vector<cplx> f1, double log_scale);

    Field field() const { return field_; }
    int degree() const { return static_cast<int>(f0_.size()) - 1; }
    const std::vector<cplx>& f0() const { return f0_; }
    const std::vector<cplx>& f1() const { return f1_; }
    double log_scale() const { return log_scale_; }

    // Raw evaluation of the stored forms (no e^{log_scale}).
    Pair evaluate_stored(const Pair& p) const;
    // Throws DomainError if the scaled value overflows.
    Pair evaluate(const Pair& p) const;
    ScaledPair apply_scaled(const Pair& p) const;
    // det of the Jacobian of the stored forms.
    cplx jacobian_det(const Pair& p) const;
    // |f^#|^2 at [p], from the homogeneous Jacobian.
    double spherical_derivative_sq(const Pair& p) const;

    HomogeneousLift scaled(cplx c) const;
    // Divides by the largest coefficient modulus, moving it into log_scale.
    HomogeneousLift renormalized() const;

private:
    HomogeneousLift() = default;

    Field field_ = Field::Complex;
    std::vector<cplx> f0_, f1_;
    double log_scale_ = 0.0;
};

// F^{(n)} evaluated by n successive applications with per-step log tracking.
class IteratedLift {
public:
    IteratedLift(HomogeneousLift base, int n);

    Field field() const { return base_.field(); }
    double degree() const { return degree_; }
    int iterations() const { return n_; }
    const HomogeneousLift& base() const { return base_; }

    ScaledPair apply_scaled(const Pair& p) const;
    double spherical_derivative_sq(const Pair& p) const;

private:
    HomogeneousLift base_;
    int n_;
    double degree_;
};

template <class L>
concept LiftLike = requires(const L& lift, const Pair& p) {
    { lift.field() } -> std::same_as<Field>;
    { lift.degree() } -> std::convertible_to<double>;
    { lift.apply_scaled(p) } -> std::same_as<ScaledPair>;
    { lift.spherical_derivative_sq(p) } -> std::convertible_to<double>;
};

// gamma^{-1} F(gamma P) evaluated without expanding coefficients.
template <LiftLike L>
ScaledPair apply_conjugated(const L& lift, const Sl2& gamma, const Sl2& gamma_inv, const Pair& p) {
    auto s = lift.apply_scaled(gamma * p);
    const Pair v = gamma_inv * s.direction;
    const double n = norm(v);
    return {s.log_factor + std::log(n), {v[0] / n, v[1] / n}};
}

// A rational map viewed through one chosen lift.
class RationalMap {
public:
    explicit RationalMap(HomogeneousLift lift) : lift_(std::move(lift)) {}

    const HomogeneousLift& lift() const { return lift_; }
    Field field() const { return lift_.field(); }
    int degree() const { return lift_.degree(); }
    ProjectivePoint operator()(const ProjectivePoint& p) const;

private:
    HomogeneousLift lift_;
};

Pair evaluate(const HomogeneousLift& F, const Pair& p);

// gamma^{-1} o F o gamma as a lift, coefficients expanded.
HomogeneousLift conjugate(const HomogeneousLift& F, const Sl2& gamma);

// F o G
HomogeneousLift compose(const HomogeneousLift& F, const HomogeneousLift& G);
inline constexpr int kMaxExpandedDegree = 8192;
// Repeated composition with renormalization; throws BudgetError past kMaxExpandedDegree.
HomogeneousLift iterate(const HomogeneousLift& F, int n);

cplx resultant(const HomogeneousLift& F);
double log_abs_resultant(const HomogeneousLift& F);

double spherical_derivative_sq(const RationalMap& f, const ProjectivePoint& alpha);

struct PreimageSet {
    std::vector<ProjectivePoint> points;
    bool near_multiple = false;
};

PreimageSet preimages(const RationalMap& f, const ProjectivePoint& target);

enum class Degree1Kind { Identity, Translation, Scaling };

struct Degree1Form {
    Degree1Kind kind;
    // Multiplier with |lambda| >= 1 for Scaling; 1 otherwise.
    cplx lambda{1.0};
    // Distinct fixed points (one for Translation, two for Scaling).
    std::vector<ProjectivePoint> fixed_points;
};

Degree1Form degree1_normal_form(const RationalMap& f);

}  // namespace hrf
